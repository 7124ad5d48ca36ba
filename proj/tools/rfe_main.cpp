#include "rfe/error.hpp"
#include "rfe/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace fs = std::filesystem;
using namespace rfe;

namespace {

// exit codes shared by all commands
constexpr int exit_ok = 0;
constexpr int exit_failed = 1;
constexpr int exit_input = 2;

fs::path summary_path(const fs::path& out)
{
    fs::path p = out;
    p.replace_extension(".summary.json");
    return p;
}

void ensure_parent(const fs::path& p)
{
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
}

int report_error(const Error& e, int code)
{
    std::cerr << "error: " << e.what() << '\n';
    return code;
}

bool is_input_error(Errc c) { return c == Errc::ParseError || c == Errc::MissingArtifact; }

int cmd_check_symbols(const std::string& symbols, const std::string& boundary, const std::string& out, double floor)
{
    SymbolCheck check;
    try {
        check = run_symbol_check(load_json(symbols), load_json(boundary), floor);
    } catch (const Error& e) {
        // anything wrong with the inputs themselves is a parse failure here
        return report_error(e, exit_input);
    }
    ensure_parent(out);
    write_text(out, to_json(check).dump(2) + "\n");
    if (!check.passed) {
        for (const auto& n : check.report.notes)
            std::cerr << n << '\n';
        return exit_failed;
    }
    return exit_ok;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir)
{
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const Error& e) {
        return report_error(e, exit_input);
    }
    try {
        const SolveResult result = run_solve(config);
        write_solve_artifacts(out_dir.empty() ? fs::path(config.output) : fs::path(out_dir), config, result);
        for (const auto& w : result.warnings)
            std::cerr << "warning: " << w << '\n';
    } catch (const Error& e) {
        return report_error(e, exit_failed);
    }
    return exit_ok;
}

int cmd_verify(const std::string& config_path, const std::string& artifacts, const std::string& out)
{
    RunConfig config;
    DistributionalFilter h;
    try {
        config = load_run_config(config_path);
        h = load_filter(config, artifacts);
    } catch (const Error& e) {
        return report_error(e, exit_input);
    }
    try {
        const ResidualReport rep = run_verify(config, h, config.verify.quad_order);
        ensure_parent(out);
        write_text(out, residual_csv(rep));
        Json summary = residual_summary(rep);
        summary["tol"] = config.verify.tol;
        summary["passed"] = rep.sup_error <= config.verify.tol;
        write_text(summary_path(out), summary.dump(2) + "\n");
        std::cout << "sup_error " << format_real(rep.sup_error) << " tol " << format_real(config.verify.tol) << '\n';
        return rep.sup_error <= config.verify.tol ? exit_ok : exit_failed;
    } catch (const Error& e) {
        return report_error(e, is_input_error(e.code()) ? exit_input : exit_failed);
    }
}

int cmd_convergence(const std::string& config_path, const std::vector<int>& levels, const std::string& param,
                    const std::string& out)
{
    RunConfig config;
    try {
        config = load_run_config(config_path);
    } catch (const Error& e) {
        return report_error(e, exit_input);
    }
    try {
        const SweepParameter sp = param == "n_sources" ? SweepParameter::MfsSources : SweepParameter::QuadOrder;
        const ConvergenceTable table = run_convergence(config, sp, levels);
        ensure_parent(out);
        write_text(out, convergence_csv(table));
        write_text(summary_path(out), convergence_summary(table).dump(2) + "\n");
    } catch (const Error& e) {
        return report_error(e, exit_failed);
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Optimal-filter solver for R_Omega h = f with modified Helmholtz covariance"};
    app.require_subcommand(1);
    int threads = 1;
    app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

    std::string symbols, boundary, out, config, artifacts, param = "quad_order";
    double sl_floor = 1e-8;
    std::vector<int> levels;

    auto* check = app.add_subcommand("check-symbols", "audit ellipticity of a symbol and boundary operators");
    check->add_option("--symbols", symbols, "symbol JSON")->required();
    check->add_option("--boundary", boundary, "boundary operator JSON")->required();
    check->add_option("--out", out, "report JSON")->required();
    check->add_option("--sl-floor", sl_floor, "smallest acceptable Shapiro-Lopatinskii determinant");

    auto* solve = app.add_subcommand("solve", "solve the exterior problem and write the filter");
    solve->add_option("--config", config, "run configuration")->required();
    solve->add_option("--out", out, "artifact directory (default: config output)");

    auto* verify = app.add_subcommand("verify", "apply R_Omega to stored artifacts and compare with f");
    verify->add_option("--config", config, "run configuration")->required();
    verify->add_option("--artifacts", artifacts, "artifact directory")->required();
    verify->add_option("--out", out, "residual CSV")->required();

    auto* conv = app.add_subcommand("convergence", "residuals over quadrature orders or MFS source counts");
    conv->add_option("--config", config, "run configuration")->required();
    conv->add_option("--levels", levels, "comma-separated levels")->required()->delimiter(',');
    conv->add_option("--param", param, "swept parameter")->check(CLI::IsMember({"quad_order", "n_sources"}));
    conv->add_option("--out", out, "convergence CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input;
    }
    set_default_threads(threads);

    try {
        if (*check)
            return cmd_check_symbols(symbols, boundary, out, sl_floor);
        if (*solve)
            return cmd_solve(config, out);
        if (*verify)
            return cmd_verify(config, artifacts, out);
        return cmd_convergence(config, levels, param, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_failed;
    }
}
