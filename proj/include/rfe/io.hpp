#pragma once

#include "rfe/exterior_solver.hpp"
#include "rfe/fields.hpp"
#include "rfe/forward_operator.hpp"
#include "rfe/geometry.hpp"
#include "rfe/kernels.hpp"
#include "rfe/symbol_calculus.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rfe {

using Json = nlohmann::json;

/// Reads and parses a JSON file; ParseError on I/O or syntax problems.
Json load_json(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

/// 17 significant digits, so values round-trip exactly.
std::string format_real(double v);

// Symbols: {"dimension": n, "order": k, "terms": [{"alpha": [..], "coeff": c}, ...]}
SymbolPoly parse_symbol(const Json& j);
Json to_json(const SymbolPoly& p);

// Boundary operators: {"dimension": n, "operators": [op, ...]} where op is
// {"kind": "dirichlet"}, {"kind": "normal_derivative", "j": 1}, or
// {"order": k, "terms": [{"alpha": [xi'_1, .., xi'_{n-1}, z], "coeff": c}]}.
std::vector<BoundarySymbol> parse_boundary(const Json& j, int dimension);

Json to_json(const EllipticityReport& r);

// {"kind":"ball","center":[..],"radius":r} | {"kind":"star","center":[..],"radial":{"lm_coeffs":[..]}}
Domain parse_domain(const Json& j);
Json to_json(const Domain& d);

// {"family":"modified_helmholtz_3d","a":1.0}
KernelParams parse_kernel(const Json& j);
Json to_json(const KernelParams& k);

// {"family":"constant","value":c} | {"family":"exp_linear","direction":[..]} |
// {"family":"gaussian","center":[..],"width":w} | {"family":"polynomial","coeffs":[{"alpha":[..],"coeff":c}]} |
// {"family":"sum","terms":[field, ...]}; any field may carry "scale". ExpLinear rates take |b| = a.
SourceField parse_source(const Json& j, double a);

enum class SolverMethod { Spectral, Mfs };

struct SolverConfig {
    SolverMethod method = SolverMethod::Spectral;
    int lmax = 16;
    MfsOptions mfs;
    /// Order of the surface rule that carries the layer density.
    int surface_order = 32;
};
// {"method":"spectral","Lmax":16} | {"method":"mfs","n_sources":400,"beta":0.4,"tol":1e-8}; optional "surface_order"
SolverConfig parse_solver(const Json& j);
Json to_json(const SolverConfig& s);

struct VerifyConfig {
    int n_points = 50;
    double tol = 1e-6;
    int quad_order = 32;
    unsigned seed = 0;
    /// Verification points keep this fraction of the domain radius from the boundary.
    double min_distance_fraction = 0.01;
};
VerifyConfig parse_verify(const Json& j);
Json to_json(const VerifyConfig& v);

struct RunConfig {
    KernelParams kernel;
    Domain domain = Domain::ball(Point::Zero(), 1.0);
    Json source_json;
    SourceField source;
    SolverConfig solver;
    VerifyConfig verify;
    std::string output;
};
// {"problem":{"kernel":..,"domain":..,"f":..},"solver":..,"verify":..,"output":"dir"}
RunConfig parse_run_config(const Json& j);
RunConfig load_run_config(const std::filesystem::path& path);

// point_id,x,y,z,Rh,f,abs_err
std::string residual_csv(const ResidualReport& r);
Json residual_summary(const ResidualReport& r);

} // namespace rfe
