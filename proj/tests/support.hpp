#pragma once

#include "rfe/exterior_solver.hpp"
#include "rfe/filter_assembly.hpp"
#include "rfe/kernels.hpp"

#include <cmath>

namespace rfe::testing {

inline Domain unit_ball() { return Domain::ball(Point::Zero(), 1.0); }

inline Domain star_domain()
{
    std::vector<double> c(9, 0.0);
    c[0] = 2.0 * std::sqrt(pi);
    c[sh_index(2, 0)] = 0.1;
    return Domain::star(Point::Zero(), c);
}

/// f = 1 + x^2 + 0.5 y z
inline SourceField quadratic_field()
{
    return SourceField::polynomial({{{0, 0, 0}, 1.0}, {{2, 0, 0}, 1.0}, {{0, 1, 1}, 0.5}});
}

struct BallPipeline {
    KernelParams kernel;
    SurfaceQuadrature surface;
    ExteriorSolution solution;
    DistributionalFilter filter;
};

/// Spectral solve plus assembly on a ball.
inline BallPipeline ball_pipeline(const SourceField& f, double a = 1.0, int lmax = 16, int surface_order = 32,
                                  const Domain& ball = unit_ball())
{
    const KernelParams k = KernelParams::modified_helmholtz(a);
    SurfaceQuadrature surf = surface_quadrature(ball, surface_order);
    const double radius = ball.radius();
    const SphericalCoeffs data = sphere_coefficients(
        ball.center(), radius, lmax, [&](const Point& x) { return f.value(x); }, 2 * lmax + 2);
    ExteriorSolution sol = solve_ball_spectral(a, radius, data, ball.center());
    DistributionalFilter h = assemble_filter(f, sol, surf, k);
    return {k, std::move(surf), std::move(sol), std::move(h)};
}

} // namespace rfe::testing
