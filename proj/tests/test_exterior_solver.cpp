#include "rfe/error.hpp"
#include "rfe/exterior_solver.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfe;

namespace {

SphericalCoeffs constant_data(double c, int lmax = 0)
{
    ShExpansion e(lmax);
    e(0, 0) = c * 2.0 * std::sqrt(pi);
    return {e};
}

double fd_residual(const ExteriorSolution& sol, const Point& x, double a, double h = 1e-4)
{
    const double c = sol.value(x);
    double lap = -6.0 * c;
    for (int d = 0; d < 3; ++d) {
        Point e = Point::Zero();
        e[d] = h;
        lap += sol.value(x + e) + sol.value(x - e);
    }
    return -lap / (h * h) + a * a * c;
}

Domain star_domain()
{
    std::vector<double> c(9, 0.0);
    c[0] = 2.0 * std::sqrt(pi);
    c[sh_index(2, 0)] = 0.1;
    return Domain::star(Point::Zero(), c);
}

} // namespace

TEST_CASE("radial functions against closed forms")
{
    for (double z : {0.5, 1.0, 5.0, 20.0}) {
        const std::vector<double> k = bessel_k(6, z);
        CHECK(k[0] == doctest::Approx(std::exp(-z) / z).epsilon(1e-14));
        CHECK(k[1] == doctest::Approx(std::exp(-z) * (1.0 / z + 1.0 / (z * z))).epsilon(1e-14));
        // k_2 = e^{-z}(1/z + 3/z^2 + 3/z^3)
        CHECK(k[2] == doctest::Approx(std::exp(-z) * (1.0 / z + 3.0 / (z * z) + 3.0 / (z * z * z))).epsilon(1e-12));
        for (int l = 1; l < 6; ++l)
            CHECK(k[l + 1] == doctest::Approx(k[l - 1] + (2 * l + 1) / z * k[l]).epsilon(1e-10));

        const std::vector<double> r = bessel_k_ratios(6, 1.5 * z, z);
        const std::vector<double> kn = bessel_k(6, 1.5 * z);
        for (int l = 0; l <= 6; ++l)
            CHECK(r[l] == doctest::Approx(kn[l] / k[l]).epsilon(1e-12));

        const std::vector<double> ld = bessel_k_log_derivatives(6, z);
        const double h = 1e-6 * z;
        const std::vector<double> kp = bessel_k(6, z + h), km = bessel_k(6, z - h);
        for (int l = 0; l <= 6; ++l)
            CHECK(ld[l] == doctest::Approx((kp[l] - km[l]) / (2 * h) / k[l]).epsilon(1e-7));
    }
}

TEST_CASE("ratios stay finite where the plain recurrence would overflow")
{
    const std::vector<double> r = bessel_k_ratios(40, 800.0, 790.0);
    for (double v : r) {
        CHECK(std::isfinite(v));
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
    // l = 0 closed form
    CHECK(r[0] == doctest::Approx(std::exp(-10.0) * 790.0 / 800.0).epsilon(1e-12));
}

TEST_CASE("spectral solution for constant data on the unit ball")
{
    const ExteriorSolution sol = solve_ball_spectral(1.0, 1.0, constant_data(1.0));
    CHECK(eval_solution(sol, Point(2, 0, 0)) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-14));
    for (double r : {1.5, 3.0, 7.0})
        CHECK(eval_solution(sol, Point(0, 0, r)) == doctest::Approx(std::exp(-(r - 1.0)) / r).epsilon(1e-14));

    const SurfaceQuadrature surf = surface_quadrature(Domain::ball(Point::Zero(), 1.0), 8);
    for (double v : normal_derivative_trace(sol, surf))
        CHECK(v == doctest::Approx(-2.0).epsilon(1e-14));
    for (double v : boundary_values(sol, surf))
        CHECK(std::abs(v - 1.0) <= 1e-8);

    try {
        eval_solution(sol, Point(0.5, 0, 0));
        FAIL("expected PointInsideDomain");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::PointInsideDomain);
    }
}

TEST_CASE("zero data gives the zero solution")
{
    const ExteriorSolution sol = solve_ball_spectral(1.0, 1.0, SphericalCoeffs{ShExpansion(3)});
    CHECK(eval_solution(sol, Point(1.2, -0.5, 2.0)) == 0.0);
}

TEST_CASE("small a approaches the Newtonian exterior")
{
    const ExteriorSolution sol = solve_ball_spectral(1e-6, 1.0, constant_data(1.0));
    const SurfaceQuadrature surf = surface_quadrature(Domain::ball(Point::Zero(), 1.0), 6);
    for (double v : normal_derivative_trace(sol, surf))
        CHECK(v == doctest::Approx(-1.0).epsilon(1e-5));
}

TEST_CASE("dipole data solves the PDE")
{
    ShExpansion e(1);
    e(1, 0) = 1.0;
    const ExteriorSolution sol = solve_ball_spectral(1.0, 1.0, {e});
    for (const Point& dir : fibonacci_sphere(12)) {
        const Point x = 1.5 * dir;
        CHECK(std::abs(fd_residual(sol, x, 1.0)) <= 1e-4 * std::max(1e-3, std::abs(sol.value(x))) + 1e-6);
        // closed form (k_1(r)/k_1(1)) Y10
        const double r = 1.5;
        const double k1r = std::exp(-r) * (1 / r + 1 / (r * r)), k11 = 2.0 * std::exp(-1.0);
        CHECK(sol.value(x) == doctest::Approx(k1r / k11 * std::sqrt(3.0 / (4.0 * pi)) * dir.z()).epsilon(1e-12));
    }
}

TEST_CASE("PDE residual at random exterior points")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> g;
    ShExpansion e(4);
    for (double& c : e.coeffs())
        c = g(rng);
    const double a = 0.8;
    const ExteriorSolution sol = solve_ball_spectral(a, 1.2, {e}, Point(0.1, 0, 0));
    std::uniform_real_distribution<double> rr(1.6, 4.0);
    for (int t = 0; t < 20; ++t) {
        const Point dir = Point(g(rng), g(rng), g(rng)).normalized();
        const Point x = Point(0.1, 0, 0) + rr(rng) * dir;
        const double v = sol.value(x);
        CHECK(std::abs(fd_residual(sol, x, a)) <= 1e-4 * (std::abs(v) + a * a * std::abs(v)) + 1e-6);
    }
}

TEST_CASE("decay bounds")
{
    const double a = 1.0, R = 1.0;
    const ExteriorSolution sol = solve_ball_spectral(a, R, constant_data(1.0));
    for (const Point& dir : fibonacci_sphere(10)) {
        for (double r : {2.0, 5.0, 10.0})
            CHECK(std::abs(eval_solution(sol, r * dir)) <= 2.0 * std::exp(-a * (r - R)) / r);
        CHECK(std::abs(eval_solution(sol, 100.0 * dir)) <= 1e-3 * std::abs(eval_solution(sol, 2.0 * dir)));
        CHECK(std::abs(eval_solution(sol, 1e6 * dir)) <= 1e-3 * std::abs(eval_solution(sol, 2.0 * dir)));
    }
}

TEST_CASE("MFS on the unit ball agrees with the spectral solution")
{
    const Domain ball = Domain::ball(Point::Zero(), 1.0);
    const SurfaceQuadrature surf = surface_quadrature(ball, 24);
    const NodeValues ones{std::vector<double>(surf.size(), 1.0)};
    MfsOptions opt;
    opt.n_sources = 200;
    opt.beta = 0.3; // at 0.7 the held-out residual stalls near 2e-4
    const ExteriorSolution mfs = solve_mfs(surf, 1.0, ones, opt);
    CHECK(mfs.holdout_sup_residual <= 1e-8);
    CHECK_FALSE(mfs.ill_conditioned);
    CHECK(eval_solution(mfs, Point(2, 0, 0)) == doctest::Approx(std::exp(-1.0) / 2.0).epsilon(1e-6));

    const ExteriorSolution spec = solve_ball_spectral(1.0, 1.0, constant_data(1.0));
    const std::vector<double> t1 = normal_derivative_trace(mfs, surf);
    const std::vector<double> t2 = normal_derivative_trace(spec, surf);
    double worst = 0.0;
    for (std::size_t i = 0; i < t1.size(); ++i)
        worst = std::max(worst, std::abs(t1[i] - t2[i]));
    CHECK(worst <= 1e-6);
}

TEST_CASE("MFS on the star domain passes the held-out check")
{
    const SurfaceQuadrature surf = surface_quadrature(star_domain(), 32);
    const NodeValues ones{std::vector<double>(surf.size(), 1.0)};
    const ExteriorSolution sol = solve_mfs(surf, 1.0, ones);
    CHECK(sol.holdout_sup_residual <= 1e-6);
    CHECK(sol.conditioning > 1.0);
    for (const Point& dir : fibonacci_sphere(8)) {
        const Point x = 2.0 * dir;
        CHECK(std::abs(fd_residual(sol, x, 1.0)) <= 1e-4 * std::abs(sol.value(x)));
        CHECK(std::abs(eval_solution(sol, 100.0 * dir)) <= 1e-3 * std::abs(eval_solution(sol, x)));
    }
}

TEST_CASE("MFS degeneracies are reported")
{
    const SurfaceQuadrature surf = surface_quadrature(Domain::ball(Point::Zero(), 1.0), 24);
    const NodeValues ones{std::vector<double>(surf.size(), 1.0)};

    // sources collapsed toward the center make the collocation matrix numerically rank deficient
    MfsOptions crowded;
    crowded.beta = 0.1;
    crowded.tol = std::numeric_limits<double>::infinity();
    const ExteriorSolution sol = solve_mfs(surf, 1.0, ones, crowded);
    CHECK(sol.ill_conditioned);
    CHECK(sol.conditioning > crowded.ill_condition_threshold);
    CHECK_FALSE(sol.warnings.empty());

    // sources hugging the surface cannot resolve the data
    MfsOptions hugging;
    hugging.beta = 0.999;
    try {
        solve_mfs(surf, 1.0, ones, hugging);
        FAIL("expected ResidualTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::ResidualTooLarge);
    }

    MfsOptions bad;
    bad.beta = 1.0;
    CHECK_THROWS_AS(solve_mfs(surf, 1.0, ones, bad), Error);
    bad = {};
    bad.n_sources = static_cast<int>(surf.size()) + 1;
    CHECK_THROWS_AS(solve_mfs(surf, 1.0, ones, bad), Error);
    CHECK_THROWS_AS(solve_mfs(surf, 1.0, NodeValues{{1.0, 2.0}}), Error);
}

TEST_CASE("sphere coefficients of a band-limited function")
{
    const SphericalCoeffs c = sphere_coefficients(Point::Zero(), 1.0, 8, [](const Point& x) { return 1.0 + x.z(); });
    CHECK(c.coeffs(0, 0) == doctest::Approx(2.0 * std::sqrt(pi)).epsilon(1e-14));
    CHECK(c.coeffs(1, 0) == doctest::Approx(std::sqrt(4.0 * pi / 3.0)).epsilon(1e-14));
    CHECK(c.coeffs.lmax() <= 1);
}
