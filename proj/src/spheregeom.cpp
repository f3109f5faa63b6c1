#include "spheregeom.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "errors.hpp"
#include "specfun.hpp"

namespace sphk {

PointSet::PointSet(int dim, std::vector<double> coords, std::string label)
    : dim_(dim), coords_(std::move(coords)), label_(std::move(label))
{
    if (dim_ < 1) fail(ErrorCode::Domain, "sphere dimension must be at least 1");
    const std::size_t stride = static_cast<std::size_t>(dim_) + 1;
    if (coords_.empty() || coords_.size() % stride != 0)
        fail(ErrorCode::DimensionMismatch, "coordinate count is not a positive multiple of d+1");
    for (std::size_t i = 0; i < coords_.size(); i += stride) {
        double norm2 = 0.0;
        for (std::size_t k = 0; k < stride; ++k) norm2 += coords_[i + k] * coords_[i + k];
        const double norm = std::sqrt(norm2);
        if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorCode::Domain, "point with zero or non-finite norm");
        if (std::fabs(norm - 1.0) > 1e-12) ++renormalized_;
        if (std::fabs(norm - 1.0) > 8.0 * std::numeric_limits<double>::epsilon())
            for (std::size_t k = 0; k < stride; ++k) coords_[i + k] /= norm;
    }
}

double PointSet::inner(std::size_t i, std::size_t j) const
{
    const double* a = point(i);
    const double* b = point(j);
    double s = 0.0;
    for (int k = 0; k <= dim_; ++k) s += a[k] * b[k];
    return std::clamp(s, -1.0, 1.0);
}

double omega_ratio(double d)
{
    return std::exp(std::lgamma(0.5 * (d + 1.0)) - std::lgamma(0.5 * d)) / std::sqrt(std::numbers::pi);
}

double c_d_const(int d)
{
    if (d < 2) fail(ErrorCode::Domain, "c_d_const requires d >= 2");
    return omega_ratio(d) / d;
}

SphereConstants sphere_constants(int d)
{
    return {d, c_d_const(d), omega_ratio(d)};
}

double v_lambda(int d, double lambda)
{
    if (!(d + lambda > 0.0)) fail(ErrorCode::Domain, "v_lambda requires d + lambda > 0");
    const double dd = d;
    return std::pow(2.0, dd - 1.0 + lambda) *
           std::exp(std::lgamma(0.5 * (dd + 1.0)) + std::lgamma(0.5 * (dd + lambda)) - std::lgamma(dd + 0.5 * lambda)) /
           std::sqrt(std::numbers::pi);
}

double v_log(int d, int L)
{
    const double dd = d;
    return 0.5 * v_lambda(d, 2.0 * L) * (digamma(L + 0.5 * dd) + 2.0 * std::numbers::ln2 - digamma(L + dd));
}

std::uint64_t SplitMix64::next()
{
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double SplitMix64::uniform()
{
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double SplitMix64::gaussian()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
}

PointSet random_uniform(int d, std::size_t n, std::uint64_t seed)
{
    if (n < 1) fail(ErrorCode::Domain, "random_uniform needs n >= 1");
    SplitMix64 rng(seed);
    std::vector<double> coords(n * (d + 1));
    for (std::size_t i = 0; i < n; ++i) {
        double norm2 = 0.0;
        do {
            norm2 = 0.0;
            for (int k = 0; k <= d; ++k) {
                const double g = rng.gaussian();
                coords[i * (d + 1) + k] = g;
                norm2 += g * g;
            }
        } while (norm2 < 1e-300);
        const double inv = 1.0 / std::sqrt(norm2);
        for (int k = 0; k <= d; ++k) coords[i * (d + 1) + k] *= inv;
    }
    return PointSet(d, std::move(coords), "random:" + std::to_string(n) + ":seed=" + std::to_string(seed));
}

PointSet fibonacci_sphere(std::size_t n)
{
    if (n < 1) fail(ErrorCode::Domain, "fibonacci_sphere needs n >= 1");
    const double golden_conj = 0.5 * (std::sqrt(5.0) - 1.0);
    std::vector<double> coords;
    coords.reserve(3 * n);
    for (std::size_t j = 0; j < n; ++j) {
        const double z = 1.0 - (2.0 * j + 1.0) / static_cast<double>(n);
        const double frac = std::fmod(static_cast<double>(j) * golden_conj, 1.0);
        const double phi = 2.0 * std::numbers::pi * frac;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        coords.push_back(r * std::cos(phi));
        coords.push_back(r * std::sin(phi));
        coords.push_back(z);
    }
    return PointSet(2, std::move(coords), "fibonacci:" + std::to_string(n));
}

PointSet named_design(const std::string& name)
{
    std::vector<double> c;
    const double phi = 0.5 * (1.0 + std::sqrt(5.0));
    if (name == "octahedron") {
        c = {1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1, 0, 0, 0, 1, 0, 0, -1};
    } else if (name == "cube") {
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) c.insert(c.end(), {double(sx), double(sy), double(sz)});
    } else if (name == "icosahedron") {
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                const double a = s1, b = s2 * phi;
                c.insert(c.end(), {0.0, a, b});
                c.insert(c.end(), {a, b, 0.0});
                c.insert(c.end(), {b, 0.0, a});
            }
    } else if (name == "dodecahedron") {
        for (int sx : {-1, 1})
            for (int sy : {-1, 1})
                for (int sz : {-1, 1}) c.insert(c.end(), {double(sx), double(sy), double(sz)});
        const double ip = 1.0 / phi;
        for (int s1 : {-1, 1})
            for (int s2 : {-1, 1}) {
                const double a = s1 * ip, b = s2 * phi;
                c.insert(c.end(), {0.0, a, b});
                c.insert(c.end(), {a, b, 0.0});
                c.insert(c.end(), {b, 0.0, a});
            }
    } else {
        fail(ErrorCode::UnknownName, "unknown design '" + name + "' (expected octahedron, cube, icosahedron or dodecahedron)");
    }
    for (std::size_t i = 0; i < c.size(); i += 3) {
        const double inv = 1.0 / std::sqrt(c[i] * c[i] + c[i + 1] * c[i + 1] + c[i + 2] * c[i + 2]);
        for (std::size_t k = i; k < i + 3; ++k) c[k] *= inv;
    }
    return PointSet(2, std::move(c), name);
}

PointSet load_pointset(const std::string& path)
{
    std::ifstream in(path);
    if (!in) fail(ErrorCode::Parse, "cannot open point-set file '" + path + "'");
    int dim = -1;
    std::vector<double> coords;
    std::string line;
    long lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream is(line);
        if (line.compare(first, 3, "dim") == 0) {
            std::string key;
            is >> key;
            if (!(is >> dim) || dim < 1)
                fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": malformed dim header");
            continue;
        }
        std::vector<double> row;
        std::string tok;
        while (is >> tok) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": cannot parse '" + tok + "'");
            }
        }
        if (dim < 0) {
            if (row.size() < 2) fail(ErrorCode::Parse, path + ":" + std::to_string(lineno) + ": too few columns");
            dim = static_cast<int>(row.size()) - 1;
        }
        if (row.size() != static_cast<std::size_t>(dim) + 1)
            fail(ErrorCode::DimensionMismatch, path + ":" + std::to_string(lineno) + ": expected " +
                                                   std::to_string(dim + 1) + " columns, found " + std::to_string(row.size()));
        coords.insert(coords.end(), row.begin(), row.end());
    }
    if (coords.empty()) fail(ErrorCode::Parse, path + ": no points found");
    return PointSet(dim, std::move(coords), path);
}

void save_pointset(const PointSet& ps, const std::string& path)
{
    std::ofstream out(path);
    if (!out) fail(ErrorCode::Io, "cannot write point-set file '" + path + "'");
    out << "# " << ps.label() << "\n";
    out << "dim " << ps.dim() << "\n";
    out.precision(17);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        const double* p = ps.point(i);
        for (int k = 0; k <= ps.dim(); ++k) out << (k ? " " : "") << p[k];
        out << "\n";
    }
    if (!out) fail(ErrorCode::Io, "failed writing '" + path + "'");
}

}  // namespace sphk
