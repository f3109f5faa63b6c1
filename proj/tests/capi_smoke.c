#include <math.h>
#include <stdio.h>

#include "sphk.h"

int main(void)
{
    sphk_kernel* k = NULL;
    sphk_pointset* ps = NULL;
    double v = 0.0;
    int failures = 0;

    if (sphk_kernel_create(2, 1.0, NULL, &k) != SPHK_OK) return 1;
    if (sphk_kernel_eval(k, 0.0, &v, NULL, NULL) != SPHK_OK || fabs(v - (1.0 - sqrt(2.0) / 4.0)) > 1e-15) ++failures;
    sphk_kernel_destroy(k);

    if (sphk_pointset_named("icosahedron", &ps) != SPHK_OK) return 1;
    sphk_identity id;
    if (sphk_tdesign_identity_check(ps, 3, 1e-12, &id) != SPHK_OK || id.gap > 1e-10) ++failures;
    sphk_pointset_destroy(ps);

    if (sphk_kernel_create(2, 0.3, NULL, &k) != SPHK_ERR_DOMAIN) ++failures;
    printf("C API smoke test: %s\n", failures ? "FAIL" : "PASS");
    return failures ? 1 : 0;
}
