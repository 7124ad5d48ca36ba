#pragma once

#include "rfe/exterior_solver.hpp"
#include "rfe/filter_assembly.hpp"
#include "rfe/forward_operator.hpp"
#include "rfe/io.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace rfe {

struct SolveResult {
    SurfaceQuadrature surface;
    ExteriorSolution solution;
    DistributionalFilter filter;
    std::vector<std::string> warnings;
};

/// Solve the exterior problem for f and assemble the filter. The spectral path needs a ball.
SolveResult run_solve(const RunConfig& config);

/// surface_density.csv, exterior_solution.json, manifest.json
void write_solve_artifacts(const std::filesystem::path& dir, const RunConfig& config, const SolveResult& result);
Json make_manifest(const RunConfig& config, const SolveResult& result);

/// Rebuilds the filter from the config and the layer density stored in `dir`. MissingArtifact when
/// files are absent; ParseError when they do not match the configured surface rule.
DistributionalFilter load_filter(const RunConfig& config, const std::filesystem::path& dir);

/// The verification points fixed by the config.
std::vector<Point> verification_points(const RunConfig& config);

ResidualReport run_verify(const RunConfig& config, const DistributionalFilter& h, int quad_order);

enum class SweepParameter { QuadOrder, MfsSources };

struct ConvergenceRow {
    int level = 0;
    int param = 0;
    double sup_residual = 0.0;
    double l2_residual = 0.0;
};

struct ConvergenceTable {
    SweepParameter parameter = SweepParameter::QuadOrder;
    std::vector<ConvergenceRow> rows;
    /// Strictly decreasing sup residual; empty for a single level.
    std::optional<bool> monotone;
};

/// Quadrature sweep: one solve, verification at each order. Source sweep: a fresh MFS solve per count
/// (tolerance check disabled) verified at the configured order.
ConvergenceTable run_convergence(const RunConfig& config, SweepParameter parameter, const std::vector<int>& levels);

std::string convergence_csv(const ConvergenceTable& t);
Json convergence_summary(const ConvergenceTable& t);

struct SymbolCheck {
    EllipticityReport report;
    double sl_floor = 0.0;
    bool passed = false;
};

SymbolCheck run_symbol_check(const Json& symbol, const Json& boundary, double sl_floor);
Json to_json(const SymbolCheck& c);

} // namespace rfe
