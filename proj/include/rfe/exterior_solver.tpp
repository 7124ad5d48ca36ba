#pragma once

namespace rfe {

template <class Fn>
SphericalCoeffs sphere_coefficients(const Point& center, double radius, int lmax, Fn&& fn, int min_order)
{
    const int order = std::max({lmax + 1, min_order, 4});
    const SurfaceQuadrature surf = surface_quadrature(Domain::ball(center, radius), order);
    std::vector<double> values(surf.size());
    for (std::size_t i = 0; i < surf.size(); ++i)
        values[i] = fn(surf.nodes[i]);
    // trailing degrees at round-off level are noise from the projection itself
    return {project_to_harmonics(surf, values, lmax).truncated(projection_noise_floor)};
}

} // namespace rfe
