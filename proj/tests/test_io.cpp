#include "rfe/error.hpp"
#include "rfe/io.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

using namespace rfe;

namespace {

Errc code_of(const auto& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("reals round-trip through their text form")
{
    for (double v : {1.0 / 3.0, std::exp(-1.0), 1e-300, -2.5e17})
        CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("symbol parsing")
{
    const Json j = Json::parse(R"({"dimension":3,"order":2,"terms":[{"alpha":[2,0,0],"coeff":1},
        {"alpha":[0,2,0],"coeff":1},{"alpha":[0,0,2],"coeff":1},{"alpha":[0,0,0],"coeff":1}]})");
    const SymbolPoly p = parse_symbol(j);
    CHECK(p.dimension() == 3);
    CHECK(p.order() == 2);
    CHECK(parse_symbol(to_json(p)).coefficients() == p.coefficients());

    CHECK(code_of([] { parse_symbol(Json::parse(R"({"dimension":3})")); }) == Errc::ParseError);
    CHECK(code_of([] { parse_symbol(Json::parse(R"({"dimension":"x","order":2,"terms":[]})")); }) ==
          Errc::ParseError);
}

TEST_CASE("boundary operator parsing")
{
    const auto ops = parse_boundary(
        Json::parse(R"({"dimension":3,"operators":[{"kind":"dirichlet"},{"kind":"normal_derivative","j":1}]})"), 3);
    CHECK(ops.size() == 2);
    CHECK(code_of([] { parse_boundary(Json::parse(R"({"dimension":3,"operators":[{"kind":"robin"}]})"), 3); }) ==
          Errc::ParseError);
    CHECK(code_of([] { parse_boundary(Json::parse(R"({"dimension":2,"operators":[{"kind":"dirichlet"}]})"), 3); }) !=
          Errc::InvalidArgument);
}

TEST_CASE("domain and kernel parsing")
{
    const Domain b = parse_domain(Json::parse(R"({"kind":"ball","center":[1,0,0],"radius":2})"));
    CHECK(b.radius() == 2.0);
    CHECK(b.center() == Point(1, 0, 0));
    const Domain s = parse_domain(
        Json::parse(R"({"kind":"star","center":[0,0,0],"radial":{"lm_coeffs":[3.5449077018110318,0,0,0,0,0,0.1,0,0]}})"));
    const Domain s2 = parse_domain(to_json(s));
    for (const Point& dir : {Point(0, 0, 1), Point(1, 0, 0), Point(0.6, 0, 0.8)})
        CHECK(s2.surface_point(dir).position == s.surface_point(dir).position);
    CHECK(code_of([] { parse_domain(Json::parse(R"({"kind":"torus"})")); }) == Errc::ParseError);
    CHECK(code_of([] { parse_domain(Json::parse(R"({"kind":"ball","center":[0,0],"radius":1})")); }) ==
          Errc::ParseError);

    CHECK(parse_kernel(Json::parse(R"({"family":"modified_helmholtz_3d","a":0.5})")).a == 0.5);
    CHECK(code_of([] { parse_kernel(Json::parse(R"({"family":"laplace","a":1})")); }) == Errc::ParseError);
}

TEST_CASE("source parsing covers every family")
{
    const Point x(0.3, -0.2, 0.4);
    CHECK(parse_source(Json::parse(R"({"family":"constant","value":2})"), 1.0).value(x) == 2.0);
    CHECK(parse_source(Json::parse(R"({"family":"exp_linear","direction":[0,0,-2]})"), 1.0).value(x) ==
          doctest::Approx(std::exp(-0.4)));
    CHECK(parse_source(Json::parse(R"({"family":"gaussian","center":[0,0,0],"width":0.5})"), 1.0).value(x) ==
          doctest::Approx(std::exp(-0.29 / 0.25)));
    const SourceField poly = parse_source(
        Json::parse(R"({"family":"polynomial","coeffs":[{"alpha":[1,0,0],"coeff":2},{"alpha":[0,0,0],"coeff":1}]})"),
        1.0);
    CHECK(poly.value(x) == doctest::Approx(1.6));
    const SourceField sum = parse_source(
        Json::parse(R"({"family":"sum","terms":[{"family":"constant","value":1},
                      {"family":"constant","value":1,"scale":-3}]})"),
        1.0);
    CHECK(sum.value(x) == doctest::Approx(-2.0));
    CHECK(code_of([] { parse_source(Json::parse(R"({"family":"sine"})"), 1.0); }) == Errc::ParseError);
}

TEST_CASE("run configs")
{
    const Json j = Json::parse(R"({"problem":{"kernel":{"family":"modified_helmholtz_3d","a":1.0},
        "domain":{"kind":"ball","center":[0,0,0],"radius":1.0},"f":{"family":"constant","value":1.0}},
        "solver":{"method":"mfs","n_sources":300,"beta":0.5,"tol":1e-7},
        "verify":{"n_points":12,"quad_order":16},"output":"out/x"})");
    const RunConfig c = parse_run_config(j);
    CHECK(c.solver.method == SolverMethod::Mfs);
    CHECK(c.solver.mfs.n_sources == 300);
    CHECK(c.solver.mfs.beta == 0.5);
    CHECK(c.verify.n_points == 12);
    CHECK(c.verify.tol == 1e-6);
    CHECK(c.output == "out/x");
    const SolverConfig back = parse_solver(to_json(c.solver));
    CHECK(back.mfs.tol == 1e-7);

    CHECK(code_of([] { load_run_config("/nonexistent/config.json"); }) == Errc::ParseError);
    const auto path = std::filesystem::temp_directory_path() / "rfe_bad_config.json";
    std::ofstream(path) << "{ not json";
    CHECK(code_of([&] { load_run_config(path); }) == Errc::ParseError);
    std::filesystem::remove(path);
}

TEST_CASE("residual serialization")
{
    ResidualReport r;
    r.points = {Point(0, 0, 0), Point(0.5, 0, 0)};
    r.values = {1.0, 0.9};
    r.target = {1.0, 1.0};
    r.residuals = {0.0, -0.1};
    r.sup_error = 0.1;
    r.l2_error = 0.1 / std::sqrt(2.0);
    r.quad_order = 8;
    const std::string csv = residual_csv(r);
    CHECK(csv.rfind("point_id,x,y,z,Rh,f,abs_err\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    const Json s = residual_summary(r);
    CHECK(s["sup_error"].get<double>() == 0.1);
    CHECK(s["order"].get<int>() == 8);
}
