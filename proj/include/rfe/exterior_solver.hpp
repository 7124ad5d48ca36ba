#pragma once

#include "rfe/geometry.hpp"
#include "rfe/spherical_harmonics.hpp"

#include <string>
#include <variant>
#include <vector>

namespace rfe {

/// Dirichlet data as a harmonic expansion about the domain center.
struct SphericalCoeffs {
    ShExpansion coeffs;
};

/// Dirichlet data at the nodes of a surface quadrature.
struct NodeValues {
    std::vector<double> values;
};

using BoundaryData = std::variant<SphericalCoeffs, NodeValues>;

// Radial basis k_l with k_0(z) = e^{-z}/z, k_1(z) = e^{-z}(1/z + 1/z^2),
// k_{l+1} = k_{l-1} + (2l+1)/z k_l. The usual pi/2 factor is dropped; only ratios enter.

/// k_l(z) for l = 0..lmax by upward recurrence. Overflows for large l at tiny z.
std::vector<double> bessel_k(int lmax, double z);
/// k_l(z_num) / k_l(z_den) for l = 0..lmax, without forming k_l itself.
std::vector<double> bessel_k_ratios(int lmax, double z_num, double z_den);
/// k_l'(z) / k_l(z) for l = 0..lmax.
std::vector<double> bessel_k_log_derivatives(int lmax, double z);

class ExteriorSolution {
public:
    struct Spectral {
        double a;
        double radius;
        Point center;
        ShExpansion coeffs; ///< boundary coefficients c_lm at r = radius
    };
    struct Mfs {
        double a;
        std::vector<Point> sources;
        std::vector<double> strengths;
    };

    ExteriorSolution(Spectral rep, const Domain& domain);
    ExteriorSolution(Mfs rep, const Domain& domain);

    bool is_spectral() const { return std::holds_alternative<Spectral>(rep_); }
    const Spectral& spectral() const { return std::get<Spectral>(rep_); }
    const Mfs& mfs() const { return std::get<Mfs>(rep_); }
    const Domain& domain() const { return domain_; }
    double a() const;

    /// u(x) without the outside-domain guard; valid on the closed exterior.
    double value(const Point& x) const;
    Point gradient(const Point& x) const;

    // MFS diagnostics (zero for spectral solutions)
    double conditioning = 0.0;
    bool ill_conditioned = false;
    double holdout_sup_residual = 0.0;
    double holdout_rms_residual = 0.0;
    double fit_sup_residual = 0.0;
    std::vector<std::string> warnings;

private:
    std::variant<Spectral, Mfs> rep_;
    Domain domain_;
};

/// Separation of variables in the exterior of a ball.
ExteriorSolution solve_ball_spectral(double a, double radius, const SphericalCoeffs& data,
                                     const Point& center = Point::Zero());

struct MfsOptions {
    int n_sources = 400;
    double beta = 0.4;
    /// Sup residual on held-out nodes above this throws ResidualTooLarge; infinite disables.
    double tol = 1e-8;
    /// Every holdout_stride-th node is kept out of the fit for validation.
    int holdout_stride = 7;
    double ill_condition_threshold = 1e14;
};

/// Method of fundamental solutions with sources at c + beta (x_j - c) behind quasi-uniform
/// boundary points x_j, least squares on the quadrature nodes.
ExteriorSolution solve_mfs(const SurfaceQuadrature& surf, double a, const NodeValues& data,
                           const MfsOptions& options = {});

/// u(x) for x strictly outside the domain (gap > 1e-10).
double eval_solution(const ExteriorSolution& sol, const Point& x);

/// Outward normal derivative of u at the surface nodes.
std::vector<double> normal_derivative_trace(const ExteriorSolution& sol, const SurfaceQuadrature& surf);

/// u at the surface nodes (boundary trace of the computed solution).
std::vector<double> boundary_values(const ExteriorSolution& sol, const SurfaceQuadrature& surf);

/// Harmonic coefficients of a function sampled on a sphere, via a rule of order max(lmax + 1, min_order).
template <class Fn>
SphericalCoeffs sphere_coefficients(const Point& center, double radius, int lmax, Fn&& fn, int min_order = 0);

} // namespace rfe

#include "rfe/exterior_solver.tpp"
