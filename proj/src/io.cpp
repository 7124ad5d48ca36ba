#include "rfe/io.hpp"

#include "rfe/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace rfe {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw Error(Errc::ParseError, what); }

const Json& require(const Json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        parse_fail(std::string("missing key \"") + key + "\"");
    return j.at(key);
}

double get_real(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_number())
        parse_fail(std::string("\"") + key + "\" must be a number");
    return v.get<double>();
}

int get_int(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_number_integer())
        parse_fail(std::string("\"") + key + "\" must be an integer");
    return v.get<int>();
}

std::string get_string(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_string())
        parse_fail(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

Point get_point(const Json& j, const char* key)
{
    const Json& v = require(j, key);
    if (!v.is_array() || v.size() != 3 || !std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_number(); }))
        parse_fail(std::string("\"") + key + "\" must be an array of three numbers");
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

Json point_json(const Point& p) { return Json::array({p[0], p[1], p[2]}); }

std::map<MultiIndex, double> parse_terms(const Json& terms, int dimension)
{
    if (!terms.is_array())
        parse_fail("terms must be an array");
    std::map<MultiIndex, double> out;
    for (const Json& t : terms) {
        const Json& alpha = require(t, "alpha");
        if (!alpha.is_array() || static_cast<int>(alpha.size()) != dimension)
            parse_fail("alpha must be an array of length " + std::to_string(dimension));
        MultiIndex idx;
        for (const Json& e : alpha) {
            if (!e.is_number_integer() || e.get<int>() < 0)
                parse_fail("alpha entries must be nonnegative integers");
            idx.push_back(e.get<int>());
        }
        out[idx] += get_real(t, "coeff");
    }
    return out;
}

Json terms_json(const std::map<MultiIndex, double>& terms)
{
    Json arr = Json::array();
    for (const auto& [alpha, c] : terms)
        arr.push_back({{"alpha", alpha}, {"coeff", c}});
    return arr;
}

// keeps the typed errors of the numeric layer but reports JSON type mismatches as parse errors
template <class Fn>
auto guarded(Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (const nlohmann::json::exception& e) {
        parse_fail(e.what());
    }
}

} // namespace

Json load_json(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        parse_fail("cannot read " + path.string());
    try {
        return Json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        parse_fail(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error(Errc::InvalidArgument, "cannot write " + path.string());
    out << text;
    if (!out)
        throw Error(Errc::InvalidArgument, "write failed for " + path.string());
}

std::string format_real(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

SymbolPoly parse_symbol(const Json& j)
{
    return guarded([&] {
        const int n = get_int(j, "dimension");
        const int k = get_int(j, "order");
        return SymbolPoly(n, k, parse_terms(require(j, "terms"), n));
    });
}

Json to_json(const SymbolPoly& p)
{
    return {{"dimension", p.dimension()}, {"order", p.order()}, {"terms", terms_json(p.coefficients())}};
}

std::vector<BoundarySymbol> parse_boundary(const Json& j, int dimension)
{
    return guarded([&] {
        if (j.contains("dimension") && get_int(j, "dimension") != dimension)
            throw Error(Errc::DimensionMismatch, "boundary operators and symbol differ in dimension");
        const Json& ops = require(j, "operators");
        if (!ops.is_array())
            parse_fail("operators must be an array");
        std::vector<BoundarySymbol> out;
        for (const Json& op : ops) {
            if (op.contains("kind")) {
                const std::string kind = get_string(op, "kind");
                if (kind == "dirichlet")
                    out.push_back(BoundarySymbol::normal_power(0));
                else if (kind == "normal_derivative")
                    out.push_back(BoundarySymbol::normal_power(get_int(op, "j")));
                else
                    parse_fail("unknown boundary operator kind \"" + kind + "\"");
            } else {
                out.push_back(BoundarySymbol::from_polynomial(dimension, get_int(op, "order"),
                                                              parse_terms(require(op, "terms"), dimension)));
            }
        }
        return out;
    });
}

Json to_json(const EllipticityReport& r)
{
    Json counts = Json::array();
    for (const auto& c : r.upper_root_counts)
        counts.push_back({{"xi_prime", c.xi_prime}, {"upper", c.upper}, {"lower", c.lower}, {"near_real", c.near_real}});
    Json j = {{"md_elliptic", r.md_elliptic},
              {"worst_ratio", r.worst_ratio},
              {"zero_sample", nullptr},
              {"properly_elliptic", r.properly_elliptic},
              {"upper_root_counts", counts},
              {"lopatinskii_evaluated", r.lopatinskii_evaluated},
              {"sl_min_det", r.sl_min_det},
              {"sl_max_det", r.sl_max_det},
              {"notes", r.notes}};
    if (r.zero_sample)
        j["zero_sample"] = *r.zero_sample;
    if (!std::isfinite(r.worst_ratio))
        j["worst_ratio"] = "inf";
    return j;
}

Domain parse_domain(const Json& j)
{
    return guarded([&] {
        const std::string kind = get_string(j, "kind");
        const Point c = j.contains("center") ? get_point(j, "center") : Point::Zero();
        if (kind == "ball")
            return Domain::ball(c, get_real(j, "radius"));
        if (kind == "star") {
            const Json& coeffs = require(require(j, "radial"), "lm_coeffs");
            if (!coeffs.is_array())
                parse_fail("lm_coeffs must be an array");
            return Domain::star(c, coeffs.get<std::vector<double>>());
        }
        parse_fail("unknown domain kind \"" + kind + "\"");
    });
}

Json to_json(const Domain& d)
{
    if (d.kind() == DomainKind::Ball)
        return {{"kind", "ball"}, {"center", point_json(d.center())}, {"radius", d.radius()}};
    const auto c = d.radial_expansion().coeffs();
    return {{"kind", "star"},
            {"center", point_json(d.center())},
            {"radial", {{"lm_coeffs", std::vector<double>(c.begin(), c.end())}}}};
}

KernelParams parse_kernel(const Json& j)
{
    return guarded([&] {
        const std::string family = get_string(j, "family");
        if (family != "modified_helmholtz_3d")
            parse_fail("unsupported kernel family \"" + family + "\"");
        return KernelParams::modified_helmholtz(get_real(j, "a"));
    });
}

Json to_json(const KernelParams& k) { return {{"family", "modified_helmholtz_3d"}, {"a", k.a}}; }

SourceField parse_source(const Json& j, double a)
{
    return guarded([&]() -> SourceField {
        const std::string family = get_string(j, "family");
        SourceField f;
        if (family == "constant")
            f = SourceField::constant(get_real(j, "value"));
        else if (family == "exp_linear")
            f = SourceField::exp_linear(get_point(j, "direction"), a);
        else if (family == "gaussian")
            f = SourceField::gaussian(get_point(j, "center"), get_real(j, "width"));
        else if (family == "polynomial")
            f = SourceField::polynomial(parse_terms(j.contains("coeffs") ? j.at("coeffs") : require(j, "terms"), 3));
        else if (family == "sum") {
            const Json& terms = require(j, "terms");
            if (!terms.is_array() || terms.empty())
                parse_fail("sum needs a nonempty terms array");
            f = parse_source(terms[0], a);
            for (std::size_t i = 1; i < terms.size(); ++i)
                f = f + parse_source(terms[i], a);
        } else
            parse_fail("unknown source family \"" + family + "\"");
        if (j.contains("scale"))
            f = f * get_real(j, "scale");
        return f;
    });
}

SolverConfig parse_solver(const Json& j)
{
    return guarded([&] {
        SolverConfig s;
        const std::string method = get_string(j, "method");
        if (method == "spectral") {
            s.method = SolverMethod::Spectral;
            s.lmax = get_int(j, "Lmax");
            if (s.lmax < 0)
                throw Error(Errc::InvalidArgument, "Lmax must be nonnegative");
        } else if (method == "mfs") {
            s.method = SolverMethod::Mfs;
            if (j.contains("n_sources"))
                s.mfs.n_sources = get_int(j, "n_sources");
            if (j.contains("beta"))
                s.mfs.beta = get_real(j, "beta");
            if (j.contains("tol"))
                s.mfs.tol = get_real(j, "tol");
        } else
            parse_fail("unknown solver method \"" + method + "\"");
        if (j.contains("surface_order"))
            s.surface_order = get_int(j, "surface_order");
        return s;
    });
}

Json to_json(const SolverConfig& s)
{
    Json j;
    if (s.method == SolverMethod::Spectral)
        j = {{"method", "spectral"}, {"Lmax", s.lmax}};
    else
        j = {{"method", "mfs"}, {"n_sources", s.mfs.n_sources}, {"beta", s.mfs.beta}, {"tol", s.mfs.tol}};
    j["surface_order"] = s.surface_order;
    return j;
}

VerifyConfig parse_verify(const Json& j)
{
    return guarded([&] {
        VerifyConfig v;
        if (j.contains("n_points"))
            v.n_points = get_int(j, "n_points");
        if (j.contains("tol"))
            v.tol = get_real(j, "tol");
        if (j.contains("quad_order"))
            v.quad_order = get_int(j, "quad_order");
        if (j.contains("seed"))
            v.seed = static_cast<unsigned>(get_int(j, "seed"));
        if (j.contains("min_distance_fraction"))
            v.min_distance_fraction = get_real(j, "min_distance_fraction");
        if (v.n_points < 1 || v.quad_order < 1 || !(v.tol > 0.0))
            throw Error(Errc::InvalidArgument, "verify needs n_points >= 1, quad_order >= 1, tol > 0");
        return v;
    });
}

Json to_json(const VerifyConfig& v)
{
    return {{"n_points", v.n_points},
            {"tol", v.tol},
            {"quad_order", v.quad_order},
            {"seed", v.seed},
            {"min_distance_fraction", v.min_distance_fraction}};
}

RunConfig parse_run_config(const Json& j)
{
    return guarded([&] {
        RunConfig rc;
        const Json& problem = require(j, "problem");
        rc.kernel = parse_kernel(require(problem, "kernel"));
        rc.domain = parse_domain(require(problem, "domain"));
        rc.source_json = require(problem, "f");
        rc.source = parse_source(rc.source_json, rc.kernel.a);
        rc.solver = parse_solver(require(j, "solver"));
        if (j.contains("verify"))
            rc.verify = parse_verify(j.at("verify"));
        if (j.contains("output"))
            rc.output = get_string(j, "output");
        return rc;
    });
}

RunConfig load_run_config(const std::filesystem::path& path) { return parse_run_config(load_json(path)); }

std::string residual_csv(const ResidualReport& r)
{
    std::ostringstream out;
    out << "point_id,x,y,z,Rh,f,abs_err\n";
    for (std::size_t i = 0; i < r.points.size(); ++i) {
        const Point& p = r.points[i];
        const double err = i < r.residuals.size() ? std::abs(r.residuals[i]) : std::abs(r.values[i] - r.target[i]);
        out << i << ',' << format_real(p[0]) << ',' << format_real(p[1]) << ',' << format_real(p[2]) << ','
            << format_real(r.values[i]) << ',' << format_real(r.target[i]) << ',' << format_real(err) << '\n';
    }
    return out.str();
}

Json residual_summary(const ResidualReport& r)
{
    return {{"sup_error", r.sup_error}, {"l2_error", r.l2_error}, {"order", r.quad_order}, {"warnings", r.warnings}};
}

} // namespace rfe
