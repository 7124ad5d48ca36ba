#pragma once

#include "rfe/fields.hpp"
#include "rfe/filter_assembly.hpp"
#include "rfe/geometry.hpp"
#include "rfe/kernels.hpp"

#include <functional>
#include <string>
#include <vector>

namespace rfe {

struct Diagnostics {
    std::vector<std::string> warnings;
};

using DensityFn = std::function<double(const Point&)>;

/// int_Omega R(x, y) density(y) dy for x in the closed domain.
///
/// Integrates in spherical coordinates centred at x, where the r^2 Jacobian cancels the 1/r
/// kernel: rays leave x in every direction, run to the boundary, and are sampled with Gauss
/// points in r. The polar axis points at the nearest boundary point; when x is close to the
/// boundary the polar variable is split into panels graded toward grazing directions.
/// `order` is the number of Gauss points per polar panel and per ray (2 * order azimuths).
double apply_volume(const KernelParams& k, const Domain& domain, const DensityFn& density, const Point& x, int order,
                    Diagnostics* diag = nullptr);

/// Single-layer potential int_boundary R(x, y) sigma(y) dS(y) with sigma given at `surf` nodes.
///
/// Far from the boundary the surface rule is used directly. Closer in, sigma is interpolated by
/// its harmonic expansion and integrated on a rule about the nearest boundary point, graded in
/// polar angle toward it.
double apply_surface(const KernelParams& k, const SurfaceQuadrature& surf, std::span<const double> density,
                     const Point& x, Diagnostics* diag = nullptr);

/// Precomputed layer density for repeated evaluation.
class SurfaceLayer {
public:
    SurfaceLayer(const SurfaceQuadrature& surf, std::vector<double> density);

    double potential(const KernelParams& k, const Point& x, int order, Diagnostics* diag = nullptr) const;
    /// Layer integral computed on the quadrature nodes alone.
    double direct(const KernelParams& k, const Point& x) const;

    /// Unrounded forms of the two above.
    CompensatedSum potential_sum(const KernelParams& k, const Point& x, int order, Diagnostics* diag = nullptr) const;
    CompensatedSum direct_sum(const KernelParams& k, const Point& x) const;

    const SurfaceQuadrature& surface() const { return surf_; }
    std::span<const double> density() const { return density_; }

private:
    SurfaceQuadrature surf_;
    std::vector<double> density_;
    ShExpansion interpolant_;
};

/// (R_Omega h)(x) = apply_volume(volume density) + apply_surface(layer density).
double apply_filter(const KernelParams& k, const DistributionalFilter& h, const Point& x, int order,
                    Diagnostics* diag = nullptr);

struct ResidualReport {
    std::vector<Point> points;
    std::vector<double> values; ///< R_Omega h
    std::vector<double> target; ///< f
    std::vector<double> residuals; ///< R_Omega h - f, formed before rounding R_Omega h
    double sup_error = 0.0;
    double l2_error = 0.0; ///< root mean square over the points
    int quad_order = 0;
    std::vector<std::string> warnings;
};

ResidualReport residual_report(const KernelParams& k, const DistributionalFilter& h, const SourceField& f,
                               std::span<const Point> points, int order, int threads = 0);

/// Quasi-random interior points at distance >= min_distance from the boundary; Sobol sequence
/// skipped ahead by `seed`.
std::vector<Point> interior_points(const Domain& domain, int count, double min_distance, unsigned seed);

/// sum_ij w_i w_j K_ij d_i d_j where each node is smeared into a Gaussian blob sized by its weight.
/// K_ij equals R(x_i, x_j) once the blobs are apart and stays finite on the diagonal, where it agrees
/// with the kernel integral over an equal-volume ball, a^{-2} (1 - e^{-a rho}(1 + a rho)) ~ rho^2 / 2,
/// to leading order. The matrix is positive definite for any node set.
double quadratic_form(const KernelParams& k, const VolumeQuadrature& vol, std::span<const double> density,
                      int threads = 0);

} // namespace rfe
