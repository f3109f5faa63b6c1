#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sphk.h"

using json = nlohmann::ordered_json;

namespace {

constexpr int kExitNumerical = 1;
constexpr int kExitUsage = 2;

class CliError : public std::runtime_error {
public:
    CliError(int exit_code, const std::string& message) : std::runtime_error(message), exit_code_(exit_code) {}
    int exit_code() const { return exit_code_; }

private:
    int exit_code_;
};

void check(sphk_status st)
{
    if (st == SPHK_OK) return;
    const bool numerical = st == SPHK_ERR_NONCONVERGENCE || st == SPHK_ERR_RULE_TOO_COARSE ||
                           st == SPHK_ERR_POSITIVITY || st == SPHK_ERR_INTERNAL;
    throw CliError(numerical ? kExitNumerical : kExitUsage, sphk_last_error());
}

struct PointSetDeleter {
    void operator()(sphk_pointset* p) const { sphk_pointset_destroy(p); }
};
struct KernelDeleter {
    void operator()(sphk_kernel* p) const { sphk_kernel_destroy(p); }
};
struct ExpansionDeleter {
    void operator()(sphk_expansion* p) const { sphk_expansion_destroy(p); }
};
struct RuleDeleter {
    void operator()(sphk_rule* p) const { sphk_rule_destroy(p); }
};
using PointSetPtr = std::unique_ptr<sphk_pointset, PointSetDeleter>;
using KernelPtr = std::unique_ptr<sphk_kernel, KernelDeleter>;
using ExpansionPtr = std::unique_ptr<sphk_expansion, ExpansionDeleter>;
using RulePtr = std::unique_ptr<sphk_rule, RuleDeleter>;

struct Config {
    int d = 2;
    double beta = 1.0;
    uint64_t seed = 1;
    int res = 128;
    double tol = 0.0;
    std::string format = "text";
    std::string out;
    std::string in;
    std::string gen;
    double inner = NAN;
    std::vector<double> x;
    std::vector<double> y;
    bool oracle = false;
    int quadrature = 0;
    int n_t = 8;
    int t_max = 0;
    long K = 40;
};

const char* branch_label(sphk_branch b)
{
    switch (b) {
    case SPHK_BRANCH_INTEGER: return "integer";
    case SPHK_BRANCH_HALF_EXCEPTIONAL: return "half-exceptional";
    case SPHK_BRANCH_GENERAL: return "general";
    }
    return "unknown";
}

void require_beta(const Config& cfg)
{
    if (!(cfg.beta > 0.5)) throw CliError(kExitUsage, "beta must exceed 1/2");
}

void require_d(const Config& cfg)
{
    if (cfg.d < 2) throw CliError(kExitUsage, "d must be at least 2");
}

PointSetPtr load_points(const Config& cfg)
{
    sphk_pointset* ps = nullptr;
    if (!cfg.in.empty() && !cfg.gen.empty()) throw CliError(kExitUsage, "give either --in or --gen, not both");
    if (!cfg.in.empty()) {
        check(sphk_pointset_load(cfg.in.c_str(), &ps));
        return PointSetPtr(ps);
    }
    if (cfg.gen.empty()) throw CliError(kExitUsage, "a point set is required (--in <path> or --gen <generator>)");
    const auto colon = cfg.gen.find(':');
    if (colon == std::string::npos) throw CliError(kExitUsage, "--gen expects random:N, fibonacci:N or named:<name>");
    const std::string kind = cfg.gen.substr(0, colon);
    const std::string arg = cfg.gen.substr(colon + 1);
    auto count = [&]() -> size_t {
        size_t pos = 0;
        long n = 0;
        try {
            n = std::stol(arg, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != arg.size() || n < 1) throw CliError(kExitUsage, "point count must be a positive integer");
        return static_cast<size_t>(n);
    };
    if (kind == "random") {
        check(sphk_pointset_random(cfg.d, count(), cfg.seed, &ps));
    } else if (kind == "fibonacci") {
        if (cfg.d != 2) throw CliError(kExitUsage, "fibonacci points live on S^2 (use --d 2)");
        check(sphk_pointset_fibonacci(count(), &ps));
    } else if (kind == "named") {
        check(sphk_pointset_named(arg.c_str(), &ps));
    } else {
        throw CliError(kExitUsage, "unknown generator '" + kind + "'");
    }
    return PointSetPtr(ps);
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string text_value(const json& v)
{
    if (v.is_number_float()) return fmt(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    return v.dump();
}

void render_table(std::ostream& os, const json& rows)
{
    std::vector<std::string> cols;
    for (auto it = rows.front().begin(); it != rows.front().end(); ++it) cols.push_back(it.key());
    std::vector<std::vector<std::string>> cells;
    std::vector<size_t> width(cols.size());
    for (size_t c = 0; c < cols.size(); ++c) width[c] = cols[c].size();
    for (const json& row : rows) {
        std::vector<std::string> line;
        for (size_t c = 0; c < cols.size(); ++c) {
            line.push_back(text_value(row.at(cols[c])));
            width[c] = std::max(width[c], line.back().size());
        }
        cells.push_back(std::move(line));
    }
    auto emit = [&](const std::vector<std::string>& line) {
        for (size_t c = 0; c < line.size(); ++c) {
            os << "  ";
            os << std::string(width[c] - line[c].size(), ' ') << line[c];
        }
        os << '\n';
    };
    emit(cols);
    for (const auto& line : cells) emit(line);
}

void render_text(std::ostream& os, const json& doc)
{
    size_t key_width = 0;
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (!it.value().is_array()) key_width = std::max(key_width, it.key().size());
    for (auto it = doc.begin(); it != doc.end(); ++it) {
        const json& v = it.value();
        if (v.is_array()) {
            os << it.key() << ":\n";
            if (!v.empty() && v.front().is_object()) {
                render_table(os, v);
            } else {
                for (size_t i = 0; i < v.size(); ++i) os << "  [" << i << "] " << text_value(v[i]) << '\n';
            }
        } else {
            os << it.key() << std::string(key_width - it.key().size() + 2, ' ') << text_value(v) << '\n';
        }
    }
}

void emit(const Config& cfg, const json& doc)
{
    std::ostringstream os;
    if (cfg.format == "json") {
        os << doc.dump(2) << '\n';
    } else {
        render_text(os, doc);
    }
    if (cfg.out.empty()) {
        std::cout << os.str();
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw CliError(kExitUsage, "cannot write '" + cfg.out + "'");
    f << os.str();
}

void warn(const std::string& message) { std::cerr << "warning: " << message << '\n'; }

RulePtr make_rule(int res, int n_t)
{
    if (res < 2) throw CliError(kExitUsage, "--res must be at least 2");
    sphk_rule* r = nullptr;
    check(sphk_rule_create(res, 2 * res, n_t, &r));
    return RulePtr(r);
}

json pointset_info(const sphk_pointset* ps)
{
    json j;
    j["points"] = sphk_pointset_label(ps);
    j["n_points"] = sphk_pointset_size(ps);
    j["d"] = sphk_pointset_dim(ps);
    if (sphk_pointset_renormalized(ps) > 0) {
        j["renormalized_rows"] = sphk_pointset_renormalized(ps);
        warn(std::to_string(sphk_pointset_renormalized(ps)) + " input rows were renormalized to unit length");
    }
    return j;
}

void cmd_kernel(const Config& cfg)
{
    require_d(cfg);
    require_beta(cfg);
    double inner = cfg.inner;
    if (!cfg.x.empty() || !cfg.y.empty()) {
        if (!std::isnan(inner)) throw CliError(kExitUsage, "give either --inner or --x/--y, not both");
        const size_t dim = static_cast<size_t>(cfg.d) + 1;
        if (cfg.x.size() != dim || cfg.y.size() != dim)
            throw CliError(kExitUsage, "--x and --y need d+1 coordinates each");
        double xy = 0.0, xx = 0.0, yy = 0.0;
        for (size_t i = 0; i < dim; ++i) {
            xy += cfg.x[i] * cfg.y[i];
            xx += cfg.x[i] * cfg.x[i];
            yy += cfg.y[i] * cfg.y[i];
        }
        if (!(xx > 0.0) || !(yy > 0.0)) throw CliError(kExitUsage, "points must be nonzero");
        inner = std::clamp(xy / std::sqrt(xx * yy), -1.0, 1.0);
    }
    if (std::isnan(inner)) throw CliError(kExitUsage, "--inner or --x/--y is required");
    sphk_kernel* raw = nullptr;
    check(sphk_kernel_create(cfg.d, cfg.beta, nullptr, &raw));
    KernelPtr k(raw);
    double value = 0.0;
    sphk_branch branch = SPHK_BRANCH_GENERAL;
    long terms = 0;
    check(sphk_kernel_eval(k.get(), inner, &value, &branch, &terms));
    json j;
    j["d"] = cfg.d;
    j["beta"] = cfg.beta;
    j["inner"] = inner;
    j["value"] = value;
    j["branch"] = branch_label(branch);
    j["terms_used"] = terms;
    if (cfg.oracle) {
        const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-10;
        double oracle = 0.0, err = 0.0;
        check(sphk_kernel_def_quadrature(cfg.d, cfg.beta, inner, 32, tol, &oracle, &err));
        j["oracle_value"] = oracle;
        j["oracle_error_estimate"] = err;
        j["gap"] = std::fabs(value - oracle);
        j["relative_gap"] = std::fabs(value - oracle) / std::max(std::fabs(oracle), 1e-300);
    }
    emit(cfg, j);
}

void cmd_wce(const Config& cfg)
{
    require_beta(cfg);
    PointSetPtr ps = load_points(cfg);
    sphk_report rep{};
    check(sphk_wce_kernel(ps.get(), cfg.beta, nullptr, &rep));
    json j = pointset_info(ps.get());
    j["beta"] = cfg.beta;
    j["gram_mean"] = rep.gram_mean;
    j["kernel_mean"] = rep.kernel_mean;
    j["wce_squared"] = rep.wce_kernel * rep.wce_kernel;
    j["wce"] = rep.wce_kernel;
    if (cfg.quadrature > 0) {
        RulePtr rule = make_rule(cfg.quadrature, cfg.n_t);
        double wq = 0.0;
        check(sphk_wce_quadrature(ps.get(), cfg.beta, rule.get(), cfg.tol, &wq));
        j["wce_quadrature_squared"] = wq * wq;
        j["identity_gap"] = std::fabs(wq * wq - rep.wce_kernel * rep.wce_kernel);
    }
    emit(cfg, j);
}

void cmd_invariance(const Config& cfg)
{
    require_beta(cfg);
    PointSetPtr ps = load_points(cfg);
    if (cfg.beta < 1.0) warn("beta < 1: singular-aware rule engaged (t-panels split at every point abscissa, tanh-sinh nodes)");
    RulePtr rule = make_rule(cfg.res, cfg.n_t);
    sphk_identity id{};
    check(sphk_stolarsky_check(ps.get(), cfg.beta, rule.get(), cfg.tol, &id));
    json j = pointset_info(ps.get());
    j["beta"] = cfg.beta;
    j["method"] = id.exact_path ? "exact" : "quadrature";
    j["discrepancy_squared"] = id.lhs;
    j["gram_minus_mean"] = id.rhs;
    j["gap"] = id.gap;
    if (id.has_classical) {
        j["classical"] = "dist_avg + (1/C_d)*D^2 = V_1";
        j["classical_lhs"] = id.classical_lhs;
        j["classical_rhs"] = id.classical_rhs;
        j["classical_residual"] = std::fabs(id.classical_lhs - id.classical_rhs);
    }
    emit(cfg, j);
}

void cmd_design(const Config& cfg)
{
    if (cfg.t_max < 1) throw CliError(kExitUsage, "--tmax must be at least 1");
    PointSetPtr ps = load_points(cfg);
    const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-12;
    std::vector<double> r(cfg.t_max);
    int is_design = 0;
    check(sphk_design_residual(ps.get(), cfg.t_max, tol, r.data(), &is_design));
    json j = pointset_info(ps.get());
    j["t_max"] = cfg.t_max;
    j["tolerance"] = tol;
    int strength = 0;
    while (strength < cfg.t_max && r[strength] <= tol) ++strength;
    j["is_design"] = static_cast<bool>(is_design);
    j["design_strength"] = strength;
    json rows = json::array();
    for (int n = 0; n < cfg.t_max; ++n) rows.push_back({{"n", n + 1}, {"residual", r[n]}, {"vanishes", r[n] <= tol}});
    j["residuals"] = rows;
    emit(cfg, j);
}

void cmd_expand(const Config& cfg)
{
    require_d(cfg);
    require_beta(cfg);
    if (cfg.K < 0) throw CliError(kExitUsage, "--K must be nonnegative");
    sphk_expansion* raw = nullptr;
    check(sphk_expansion_create(cfg.d, cfg.beta, cfg.K, nullptr, 0, &raw));
    ExpansionPtr e(raw);
    const bool positive = sphk_expansion_all_positive(e.get()) != 0;
    if (!positive) warn("not every coefficient is positive");
    json j;
    j["d"] = cfg.d;
    j["beta"] = cfg.beta;
    j["s"] = sphk_expansion_s(e.get());
    j["K"] = cfg.K;
    j["all_positive"] = positive;
    if (cfg.K >= 40) {
        double spread = 0.0;
        check(sphk_expansion_spread(e.get(), &spread));
        j["decay_spread"] = spread;
    }
    json rows = json::array();
    for (long k = 0; k <= cfg.K; ++k) {
        double lambda = 0.0, regular = 0.0, distance = 0.0;
        check(sphk_expansion_get(e.get(), k, &lambda, &regular, &distance));
        rows.push_back({{"k", k}, {"lambda", lambda}, {"regular", regular}, {"distance", distance}});
    }
    j["coefficients"] = rows;
    emit(cfg, j);
}

void cmd_gen(const Config& cfg)
{
    PointSetPtr ps = load_points(cfg);
    const size_t n = sphk_pointset_size(ps.get());
    const int dim = sphk_pointset_dim(ps.get());
    const double* c = sphk_pointset_coords(ps.get());
    if (!cfg.out.empty() && cfg.format == "text") {
        check(sphk_pointset_save(ps.get(), cfg.out.c_str()));
        std::cout << "wrote " << n << " points on S^" << dim << " to " << cfg.out << '\n';
        return;
    }
    json j = pointset_info(ps.get());
    json pts = json::array();
    for (size_t i = 0; i < n; ++i) {
        json row = json::array();
        for (int k = 0; k <= dim; ++k) row.push_back(c[i * (dim + 1) + k]);
        pts.push_back(row);
    }
    if (cfg.format == "json") {
        j["coordinates"] = pts;
        emit(cfg, j);
        return;
    }
    std::cout << "dim " << dim << '\n';
    for (size_t i = 0; i < n; ++i) {
        for (int k = 0; k <= dim; ++k) std::cout << (k ? " " : "") << fmt(c[i * (dim + 1) + k]);
        std::cout << '\n';
    }
}

void cmd_mean(const Config& cfg)
{
    require_d(cfg);
    require_beta(cfg);
    sphk_kernel* raw = nullptr;
    check(sphk_kernel_create(cfg.d, cfg.beta, nullptr, &raw));
    KernelPtr k(raw);
    sphk_branch branch = SPHK_BRANCH_GENERAL;
    int M = 0, L = 0;
    double eps = 0.0, mean = 0.0, diag = 0.0, anti = 0.0;
    check(sphk_kernel_branch(k.get(), &branch, &M, &L, &eps));
    check(sphk_kernel_mean(k.get(), &mean));
    check(sphk_kernel_diag(k.get(), &diag));
    check(sphk_kernel_antipodal(k.get(), &anti));
    json j;
    j["d"] = cfg.d;
    j["beta"] = cfg.beta;
    j["branch"] = branch_label(branch);
    j["kernel_mean"] = mean;
    j["kernel_diag"] = diag;
    j["kernel_antipodal"] = anti;
    if (cfg.oracle) {
        const double tol = cfg.tol > 0.0 ? cfg.tol : 1e-12;
        double zm = 0.0;
        sphk_zonal_fn fn = [](double t, void* user) -> double {
            double v = 0.0;
            if (sphk_kernel_eval(static_cast<sphk_kernel*>(user), t, &v, nullptr, nullptr) != SPHK_OK) return NAN;
            return v;
        };
        check(sphk_zonal_mean(cfg.d, fn, k.get(), tol, &zm));
        j["quadrature_mean"] = zm;
        j["gap"] = std::fabs(zm - mean);
    }
    emit(cfg, j);
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Generalized spherical cap discrepancy kernels, worst-case errors and invariance checks"};
    app.require_subcommand(1);
    Config cfg;

    auto add_common = [&](CLI::App* sub, bool points, bool kernel) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "text"}))->capture_default_str();
        sub->add_option("--out", cfg.out, "Write output to this path instead of stdout");
        sub->add_option("--tol", cfg.tol, "Tolerance override (0 keeps the module default)")->capture_default_str();
        sub->add_option("--d", cfg.d, "Sphere dimension")->capture_default_str();
        if (kernel) sub->add_option("--beta", cfg.beta, "Smoothness parameter (> 1/2)")->capture_default_str();
        if (points) {
            sub->add_option("--in", cfg.in, "Point-set file (one point per line, optional '# dim d' header)");
            sub->add_option("--gen", cfg.gen, "Generated point set: random:N, fibonacci:N or named:<name>");
            sub->add_option("--seed", cfg.seed, "Seed for random point sets")->capture_default_str();
        }
    };

    auto* kernel = app.add_subcommand("kernel", "Evaluate the kernel at an inner product or a pair of points");
    add_common(kernel, false, true);
    kernel->add_option("--inner", cfg.inner, "Inner product x.y in [-1, 1]");
    kernel->add_option("--x", cfg.x, "First point (d+1 comma-separated coordinates)")->delimiter(',');
    kernel->add_option("--y", cfg.y, "Second point (d+1 comma-separated coordinates)")->delimiter(',');
    kernel->add_flag("--oracle", cfg.oracle, "Compare with quadrature of the defining integral");

    auto* wce = app.add_subcommand("wce", "Worst-case error report for a point set");
    add_common(wce, true, true);
    wce->add_option("--quadrature", cfg.quadrature, "Also integrate the squared cap discrepancy with this rule resolution (d = 2)");
    wce->add_option("--nt", cfg.n_t, "Nodes per t-panel")->capture_default_str();

    auto* inv = app.add_subcommand("invariance", "Check the invariance principle for a point set");
    add_common(inv, true, true);
    inv->add_option("--res", cfg.res, "Sphere rule resolution (Gauss nodes in cos theta; twice as many in phi)")->capture_default_str();
    inv->add_option("--nt", cfg.n_t, "Nodes per t-panel")->capture_default_str();

    auto* design = app.add_subcommand("design", "Spherical design residuals r_1 .. r_tmax");
    add_common(design, true, false);
    design->add_option("--tmax", cfg.t_max, "Highest degree tested")->required();

    auto* expand = app.add_subcommand("expand", "Gegenbauer expansion coefficients lambda_0 .. lambda_K");
    add_common(expand, false, true);
    expand->add_option("--K", cfg.K, "Highest coefficient index")->capture_default_str();

    auto* gen = app.add_subcommand("gen", "Generate or load a point set and print or save it");
    add_common(gen, true, false);

    auto* mean = app.add_subcommand("mean", "Mean value, diagonal and antipodal value of the kernel");
    add_common(mean, false, true);
    mean->add_flag("--oracle", cfg.oracle, "Compare with sphere quadrature of the zonal kernel");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (*kernel) cmd_kernel(cfg);
        else if (*wce) cmd_wce(cfg);
        else if (*inv) cmd_invariance(cfg);
        else if (*design) cmd_design(cfg);
        else if (*expand) cmd_expand(cfg);
        else if (*gen) cmd_gen(cfg);
        else if (*mean) cmd_mean(cfg);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return 0;
}
