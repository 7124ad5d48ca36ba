#include "rfe/pipeline.hpp"

#include "rfe/error.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace fs = std::filesystem;

namespace rfe {

namespace {

constexpr const char* density_file = "surface_density.csv";
constexpr const char* solution_file = "exterior_solution.json";
constexpr const char* manifest_file = "manifest.json";

ExteriorSolution solve_exterior(const RunConfig& config, const SurfaceQuadrature& surf, const MfsOptions& mfs)
{
    const double a = config.kernel.a;
    const SourceField& f = config.source;
    if (config.solver.method == SolverMethod::Spectral) {
        if (config.domain.kind() != DomainKind::Ball)
            throw Error(Errc::UnsupportedDomain, "spectral requires ball");
        const Point c = config.domain.center();
        const int lmax = config.solver.lmax;
        // a finer projection rule keeps aliasing from degrees above lmax out of the coefficients
        const auto data = sphere_coefficients(c, config.domain.radius(), lmax,
                                              [&](const Point& p) { return f.value(p); }, 2 * lmax + 2);
        return solve_ball_spectral(a, config.domain.radius(), data, c);
    }
    NodeValues nv;
    nv.values.reserve(surf.size());
    for (const Point& p : surf.nodes)
        nv.values.push_back(f.value(p));
    return solve_mfs(surf, a, nv, mfs);
}

SolveResult solve_with(const RunConfig& config, const MfsOptions& mfs)
{
    const SurfaceQuadrature surf = surface_quadrature(config.domain, config.solver.surface_order);
    ExteriorSolution sol = solve_exterior(config, surf, mfs);
    // the MFS residual is already checked against its own tolerance
    const double trace_tol = config.solver.method == SolverMethod::Mfs ? std::numeric_limits<double>::infinity() : 1e-6;
    DistributionalFilter h = assemble_filter(config.source, sol, surf, config.kernel, trace_tol);
    std::vector<std::string> warnings = sol.warnings;
    return {surf, std::move(sol), std::move(h), std::move(warnings)};
}

std::vector<std::string> split_csv_line(const std::string& line)
{
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    return out;
}

double parse_double(const std::string& s)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw Error(Errc::ParseError, "malformed number \"" + s + "\"");
        return v;
    } catch (const std::logic_error&) {
        throw Error(Errc::ParseError, "malformed number \"" + s + "\"");
    }
}

} // namespace

SolveResult run_solve(const RunConfig& config) { return solve_with(config, config.solver.mfs); }

Json make_manifest(const RunConfig& config, const SolveResult& result)
{
    const auto& sigma = result.filter.surface_density;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    CompensatedSum total, mass;
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        lo = std::min(lo, sigma[i]);
        hi = std::max(hi, sigma[i]);
        total.add(sigma[i]);
        mass.add(sigma[i] * result.surface.weights[i]);
    }
    Json surface = {{"nodes", sigma.size()},
                    {"min", lo},
                    {"max", hi},
                    {"mean", sigma.empty() ? 0.0 : total.value() / sigma.size()},
                    {"total_mass", mass.value()},
                    {"file", density_file}};
    const double scale = std::max({1.0, std::abs(lo), std::abs(hi)});
    surface["constant"] = (hi - lo <= 1e-10 * scale) ? Json(0.5 * (lo + hi)) : Json(nullptr);

    Json volume = {{"description", "(-Lap + a^2) f inside the domain"},
                   {"a", config.kernel.a},
                   {"f", config.source_json},
                   {"identically_zero", config.source.annihilated_by_q(config.kernel.a)}};
    return {{"kernel", to_json(config.kernel)},
            {"domain", to_json(config.domain)},
            {"solver", to_json(config.solver)},
            {"surface_density", surface},
            {"volume_density", volume},
            {"exterior_solution", solution_file},
            {"warnings", result.warnings}};
}

void write_solve_artifacts(const fs::path& dir, const RunConfig& config, const SolveResult& result)
{
    fs::create_directories(dir);
    std::ostringstream csv;
    csv << "node_id,x,y,z,sigma\n";
    const auto& surf = result.surface;
    for (std::size_t i = 0; i < surf.size(); ++i) {
        const Point& p = surf.nodes[i];
        csv << i << ',' << format_real(p[0]) << ',' << format_real(p[1]) << ',' << format_real(p[2]) << ','
            << format_real(result.filter.surface_density[i]) << '\n';
    }
    write_text(dir / density_file, csv.str());

    const ExteriorSolution& sol = result.solution;
    Json js = {{"a", sol.a()}, {"warnings", sol.warnings}};
    if (sol.is_spectral()) {
        const auto& s = sol.spectral();
        const auto c = s.coeffs.coeffs();
        js["method"] = "spectral";
        js["radius"] = s.radius;
        js["center"] = {s.center[0], s.center[1], s.center[2]};
        js["Lmax"] = s.coeffs.lmax();
        js["coefficients"] = std::vector<double>(c.begin(), c.end());
    } else {
        const auto& m = sol.mfs();
        js["method"] = "mfs";
        js["conditioning"] = sol.conditioning;
        js["ill_conditioned"] = sol.ill_conditioned;
        js["holdout_sup_residual"] = sol.holdout_sup_residual;
        js["holdout_rms_residual"] = sol.holdout_rms_residual;
        js["fit_sup_residual"] = sol.fit_sup_residual;
        Json src = Json::array();
        for (const Point& p : m.sources)
            src.push_back({p[0], p[1], p[2]});
        js["sources"] = src;
        js["strengths"] = m.strengths;
    }
    write_text(dir / solution_file, js.dump(2) + "\n");
    write_text(dir / manifest_file, make_manifest(config, result).dump(2) + "\n");
}

DistributionalFilter load_filter(const RunConfig& config, const fs::path& dir)
{
    const fs::path csv_path = dir / density_file;
    if (!fs::exists(csv_path) || !fs::exists(dir / manifest_file))
        throw Error(Errc::MissingArtifact, "solve artifacts not found in " + dir.string());
    const SurfaceQuadrature surf = surface_quadrature(config.domain, config.solver.surface_order);

    std::ifstream in(csv_path);
    std::string line;
    if (!std::getline(in, line) || line != "node_id,x,y,z,sigma")
        throw Error(Errc::ParseError, "unexpected header in " + csv_path.string());
    std::vector<double> sigma;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != 5)
            throw Error(Errc::ParseError, "expected 5 columns in " + csv_path.string());
        const std::size_t id = sigma.size();
        if (id >= surf.size() || cells[0] != std::to_string(id))
            throw Error(Errc::ParseError, "surface density rows do not match the configured surface rule");
        const Point p(parse_double(cells[1]), parse_double(cells[2]), parse_double(cells[3]));
        if ((p - surf.nodes[id]).norm() > 1e-12 * (1.0 + surf.nodes[id].norm()))
            throw Error(Errc::ParseError, "surface node " + cells[0] + " differs from the configured surface rule");
        sigma.push_back(parse_double(cells[4]));
    }
    if (sigma.size() != surf.size())
        throw Error(Errc::ParseError, "surface density has " + std::to_string(sigma.size()) + " rows, expected " +
                                          std::to_string(surf.size()));
    return make_filter(config.kernel, config.source, surf, std::move(sigma));
}

std::vector<Point> verification_points(const RunConfig& config)
{
    const double min_d = config.verify.min_distance_fraction * config.domain.radius();
    return interior_points(config.domain, config.verify.n_points, min_d, config.verify.seed);
}

ResidualReport run_verify(const RunConfig& config, const DistributionalFilter& h, int quad_order)
{
    const auto pts = verification_points(config);
    return residual_report(config.kernel, h, config.source, pts, quad_order);
}

ConvergenceTable run_convergence(const RunConfig& config, SweepParameter parameter, const std::vector<int>& levels)
{
    if (levels.empty())
        throw Error(Errc::InvalidArgument, "convergence needs at least one level");
    ConvergenceTable table;
    table.parameter = parameter;
    std::optional<SolveResult> shared;
    if (parameter == SweepParameter::QuadOrder)
        shared = run_solve(config);
    else if (config.solver.method != SolverMethod::Mfs)
        throw Error(Errc::InvalidArgument, "a source-count sweep needs the mfs solver");

    for (std::size_t i = 0; i < levels.size(); ++i) {
        ResidualReport rep;
        if (parameter == SweepParameter::QuadOrder) {
            rep = run_verify(config, shared->filter, levels[i]);
        } else {
            MfsOptions opts = config.solver.mfs;
            opts.n_sources = levels[i];
            opts.tol = std::numeric_limits<double>::infinity();
            const SolveResult r = solve_with(config, opts);
            rep = run_verify(config, r.filter, config.verify.quad_order);
        }
        table.rows.push_back({static_cast<int>(i), levels[i], rep.sup_error, rep.l2_error});
    }
    if (table.rows.size() > 1) {
        bool dec = true;
        for (std::size_t i = 1; i < table.rows.size(); ++i)
            dec = dec && table.rows[i].sup_residual < table.rows[i - 1].sup_residual;
        table.monotone = dec;
    }
    return table;
}

std::string convergence_csv(const ConvergenceTable& t)
{
    std::ostringstream out;
    out << "level,param,sup_residual,l2_residual\n";
    for (const auto& r : t.rows)
        out << r.level << ',' << r.param << ',' << format_real(r.sup_residual) << ',' << format_real(r.l2_residual)
            << '\n';
    return out.str();
}

Json convergence_summary(const ConvergenceTable& t)
{
    Json j = {{"parameter", t.parameter == SweepParameter::QuadOrder ? "quad_order" : "n_sources"},
              {"levels", t.rows.size()}};
    j["monotone_decrease"] = t.monotone ? Json(*t.monotone) : Json(nullptr);
    return j;
}

SymbolCheck run_symbol_check(const Json& symbol, const Json& boundary, double sl_floor)
{
    const SymbolPoly q = parse_symbol(symbol);
    const auto ops = parse_boundary(boundary, q.dimension());
    SymbolCheck c;
    c.report = audit_symbol(q, ops);
    c.sl_floor = sl_floor;
    c.passed = c.report.md_elliptic && c.report.properly_elliptic && c.report.lopatinskii_evaluated &&
               c.report.sl_min_det >= sl_floor;
    return c;
}

Json to_json(const SymbolCheck& c)
{
    Json j = to_json(c.report);
    j["sl_floor"] = c.sl_floor;
    j["passed"] = c.passed;
    return j;
}

} // namespace rfe
