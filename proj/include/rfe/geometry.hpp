#pragma once

#include "rfe/numerics.hpp"
#include "rfe/spherical_harmonics.hpp"

#include <memory>
#include <vector>

namespace rfe {

enum class DomainKind { Ball, StarShaped };

/// A bounded domain star-shaped about `center`: { c + r w : 0 <= r < rho(w) }.
/// Balls have constant rho; star domains carry rho as a real spherical-harmonic expansion.
class Domain {
public:
    static Domain ball(const Point& center, double radius);
    /// Coefficients are flat, index l(l+1)+m; their count must be a perfect square.
    static Domain star(const Point& center, std::vector<double> lm_coeffs);

    DomainKind kind() const { return kind_; }
    const Point& center() const { return center_; }
    /// Ball radius; for star domains the largest sampled radial value.
    double radius() const { return kind_ == DomainKind::Ball ? radius_ : max_radial_; }
    double min_radial() const { return kind_ == DomainKind::Ball ? radius_ : min_radial_; }
    double max_radial() const { return radius(); }
    const ShExpansion& radial_expansion() const { return radial_; }

    struct Radial {
        double rho;
        /// Surface gradient of rho on the unit sphere at the queried direction.
        Point grad;
    };
    Radial radial(double theta, double phi) const;
    Radial radial(const Point& unit_dir) const;

    struct SurfacePoint {
        Point position;
        Point normal;        ///< outward unit normal
        double area_density; ///< dS / d(solid angle)
    };
    SurfacePoint surface_point(const Point& unit_dir) const;
    SurfacePoint surface_point(double theta, double phi) const;

    bool contains(const Point& x) const;
    /// Signed radial gap |x - c| - rho(dir(x - c)): negative inside.
    double radial_gap(const Point& x) const;

    struct Closest {
        Point point;
        Point normal;
        Point direction; ///< unit direction from center to the closest point
        double distance;
    };
    /// Nearest boundary point to x.
    Closest closest_boundary_point(const Point& x) const;

    /// Distance from x (inside) along unit dir until the ray leaves the domain.
    /// Throws DomainNotVisible for star domains when the ray re-enters.
    double exit_distance(const Point& x, const Point& dir) const;

private:
    Domain() = default;

    DomainKind kind_ = DomainKind::Ball;
    Point center_ = Point::Zero();
    double radius_ = 1.0;
    ShExpansion radial_;
    double min_radial_ = 0.0;
    double max_radial_ = 0.0;
};

/// Polar and azimuthal angle of a nonzero vector.
std::pair<double, double> spherical_angles(const Point& v);

struct SurfaceQuadrature {
    std::shared_ptr<const Domain> domain;
    int order = 0;
    std::vector<Point> nodes;
    std::vector<double> weights; ///< surface measure
    std::vector<Point> normals;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> angular_weights; ///< solid-angle weights at the parameter nodes

    std::size_t size() const { return nodes.size(); }
};

struct VolumeQuadrature {
    std::shared_ptr<const Domain> domain;
    int order = 0;
    std::vector<Point> nodes;
    std::vector<double> weights;

    std::size_t size() const { return nodes.size(); }
};

/// Gauss-Legendre in cos(theta) times 2*order trapezoid points in phi.
SurfaceQuadrature surface_quadrature(const Domain& domain, int order);
/// Radial Gauss-Legendre on [0, rho(theta, phi)] times the angular rule.
VolumeQuadrature volume_quadrature(const Domain& domain, int order);

/// Solid-angle rule: Gauss in cos(theta) times trapezoid in phi, directions only.
struct AngularRule {
    std::vector<Point> directions;
    std::vector<double> theta;
    std::vector<double> phi;
    std::vector<double> weights;
};
AngularRule angular_rule(int order);

/// Solid-angle rule about `axis` with Gauss panels in cos(psi) between the given breakpoints
/// (any order, clipped to [-1, 1]) and `n_azimuth` trapezoid points. theta/phi hold the
/// standard-frame angles of each direction. Panels touching a value in `sqrt_breaks` use the
/// substitution t = t0 +- (t1 - t0) v^2, which absorbs a square-root endpoint behaviour there.
AngularRule axis_rule_cos(const Point& axis, std::vector<double> cos_breaks, int points_per_panel, int n_azimuth,
                          const std::vector<double>& sqrt_breaks = {});
/// Same with Gauss panels in psi itself (breakpoints in [0, pi]); suited to grading toward the axis.
AngularRule axis_rule_angle(const Point& axis, std::vector<double> psi_breaks, int points_per_panel, int n_azimuth);

/// Relative size below which trailing harmonic degrees of a projection are round-off.
inline constexpr double projection_noise_floor = 1e-14;

/// Projects node values onto spherical harmonics of degree <= lmax in the surface parametrization.
/// Exact for band-limited data when lmax < quadrature order.
ShExpansion project_to_harmonics(const SurfaceQuadrature& surf, std::span<const double> values, int lmax);

} // namespace rfe
