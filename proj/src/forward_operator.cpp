#include "rfe/forward_operator.hpp"

#include "rfe/error.hpp"

#include <boost/random/sobol.hpp>

#include <algorithm>
#include <cmath>
#include <tuple>

namespace rfe {

namespace {

constexpr double near_boundary_fraction = 1e-3;
constexpr double on_surface_fraction = 1e-6;
// beyond this distance (relative to the largest radial value) the plain surface rule is used
constexpr double direct_surface_fraction = 0.75;

void warn(Diagnostics* diag, std::string msg)
{
    if (diag && std::find(diag->warnings.begin(), diag->warnings.end(), msg) == diag->warnings.end())
        diag->warnings.push_back(std::move(msg));
}

// Panels in cos(psi) for rays leaving x. Directions near psi = pi/2 graze the boundary when x is
// close to it; the exit distance there varies on the scale s (branch points at +-i s for a ball).
std::vector<double> grazing_breaks(double s)
{
    std::vector<double> breaks{0.0};
    if (s >= 1.0)
        return breaks;
    for (double b = 0.25 * s; b < 1.0; b *= 2.0) {
        breaks.push_back(b);
        breaks.push_back(-b);
    }
    return breaks;
}

} // namespace

namespace {

CompensatedSum volume_sum(const KernelParams& k, const Domain& domain, const DensityFn& density, const Point& x,
                          int order, Diagnostics* diag)
{
    if (order < 1)
        throw Error(Errc::InvalidArgument, "quadrature order must be positive");
    if (!domain.contains(x) && domain.radial_gap(x) > 1e-12 * domain.radius())
        throw Error(Errc::InvalidArgument, "apply_volume needs a point in the closed domain");

    const Domain::Closest cp = domain.closest_boundary_point(x);
    const double big_r = domain.radius();
    if (cp.distance < near_boundary_fraction * big_r)
        warn(diag, "NearBoundary: evaluation point within 1e-3 R of the boundary");

    Point axis = cp.direction;
    double s = 2.0;
    if (cp.distance > 0.0)
        axis = (cp.point - x).normalized();
    else
        axis = cp.normal;
    const double r_loc = (cp.point - domain.center()).norm();
    const double p = r_loc - cp.distance;
    if (p > 0.0)
        s = std::sqrt(std::max(0.0, r_loc * r_loc - p * p)) / p;
    s = std::max(s, 1e-12);

    const AngularRule rule = axis_rule_cos(axis, grazing_breaks(s), order, 2 * order);
    const GaussRule& radial = gauss_legendre(order);
    const double a = k.a;

    constexpr double inv_4pi = 1.0 / (4.0 * pi);
    CompensatedSum total;
    for (std::size_t i = 0; i < rule.directions.size(); ++i) {
        const Point& dir = rule.directions[i];
        const double ell = domain.exit_distance(x, dir);
        if (ell <= 0.0)
            continue;
        double ray = 0.0;
        for (int j = 0; j < order; ++j) {
            const double r = 0.5 * ell * (radial.nodes[j] + 1.0);
            ray += radial.weights[j] * r * std::exp(-a * r) * density(x + r * dir);
        }
        total.add(rule.weights[i] * 0.5 * ell * ray * inv_4pi);
    }
    return total;
}

} // namespace

double apply_volume(const KernelParams& k, const Domain& domain, const DensityFn& density, const Point& x, int order,
                    Diagnostics* diag)
{
    return volume_sum(k, domain, density, x, order, diag).value();
}

SurfaceLayer::SurfaceLayer(const SurfaceQuadrature& surf, std::vector<double> density)
    : surf_(surf), density_(std::move(density))
{
    if (density_.size() != surf_.size())
        throw Error(Errc::DimensionMismatch, "layer density must have one value per surface node");
    const int lmax = std::max(0, surf_.order - 1);
    interpolant_ = project_to_harmonics(surf_, density_, lmax).truncated(projection_noise_floor);
}

double SurfaceLayer::direct(const KernelParams& k, const Point& x) const
{
    return direct_sum(k, x).value();
}

CompensatedSum SurfaceLayer::direct_sum(const KernelParams& k, const Point& x) const
{
    CompensatedSum total;
    for (std::size_t i = 0; i < surf_.size(); ++i) {
        if (density_[i] == 0.0)
            continue;
        total.add(surf_.weights[i] * density_[i] * kernel_of_distance(k.a, (x - surf_.nodes[i]).norm()));
    }
    return total;
}

double SurfaceLayer::potential(const KernelParams& k, const Point& x, int order, Diagnostics* diag) const
{
    return potential_sum(k, x, order, diag).value();
}

CompensatedSum SurfaceLayer::potential_sum(const KernelParams& k, const Point& x, int order, Diagnostics* diag) const
{
    const Domain& domain = *surf_.domain;
    const Domain::Closest cp = domain.closest_boundary_point(x);
    const double big_r = domain.radius();
    if (cp.distance < on_surface_fraction * big_r)
        throw Error(Errc::OnSurface, "single-layer potential requested on the boundary");
    if (cp.distance < near_boundary_fraction * big_r)
        warn(diag, "NearBoundary: evaluation point within 1e-3 R of the boundary");
    if (std::all_of(density_.begin(), density_.end(), [](double v) { return v == 0.0; }))
        return {};
    if (cp.distance >= direct_surface_fraction * big_r)
        return direct_sum(k, x);

    // |x - y| ~ sqrt(d^2 + (rho psi)^2) about the nearest point: grade the polar panels on d / rho
    const double rho = (cp.point - domain.center()).norm();
    const double scale = cp.distance / rho;
    std::vector<double> breaks{0.0};
    for (double b = scale; b < pi; b *= 2.0)
        breaks.push_back(b);
    const int ppp = std::max(order, 4);
    const AngularRule rule = axis_rule_angle(cp.direction, breaks, ppp, 2 * ppp);

    CompensatedSum total;
    for (std::size_t i = 0; i < rule.directions.size(); ++i) {
        const Domain::SurfacePoint sp = domain.surface_point(rule.theta[i], rule.phi[i]);
        const double sigma = interpolant_.value(rule.theta[i], rule.phi[i]);
        total.add(rule.weights[i] * sp.area_density * sigma * kernel_of_distance(k.a, (x - sp.position).norm()));
    }
    return total;
}

double apply_surface(const KernelParams& k, const SurfaceQuadrature& surf, std::span<const double> density,
                     const Point& x, Diagnostics* diag)
{
    const SurfaceLayer layer(surf, std::vector<double>(density.begin(), density.end()));
    return layer.potential(k, x, surf.order, diag);
}

namespace {

CompensatedSum filter_sum(const KernelParams& k, const DistributionalFilter& h, const SurfaceLayer& layer,
                          const Point& x, int order, Diagnostics* diag)
{
    CompensatedSum total;
    if (!h.field.annihilated_by_q(k.a)) {
        const DensityFn dens = [&](const Point& y) { return h.volume_density(y); };
        total.add(volume_sum(k, h.domain(), dens, x, order, diag));
    }
    total.add(layer.potential_sum(k, x, order, diag));
    return total;
}

} // namespace

double apply_filter(const KernelParams& k, const DistributionalFilter& h, const Point& x, int order, Diagnostics* diag)
{
    const SurfaceLayer layer(h.surface, h.surface_density);
    return filter_sum(k, h, layer, x, order, diag).value();
}

ResidualReport residual_report(const KernelParams& k, const DistributionalFilter& h, const SourceField& f,
                               std::span<const Point> points, int order, int threads)
{
    ResidualReport rep;
    rep.points.assign(points.begin(), points.end());
    rep.quad_order = order;
    const std::size_t n = points.size();
    rep.values.assign(n, 0.0);
    rep.target.assign(n, 0.0);
    std::vector<Diagnostics> diags(n);
    const SurfaceLayer layer(h.surface, h.surface_density);
    rep.residuals.assign(n, 0.0);
    parallel_for(n, threads > 0 ? threads : default_threads(), [&](std::size_t i) {
        CompensatedSum s = filter_sum(k, h, layer, points[i], order, &diags[i]);
        rep.values[i] = s.value();
        rep.target[i] = f.value(points[i]);
        // the difference is taken before rounding R h to double, so quadrature errors below
        // one ulp of f stay visible
        s.add(-rep.target[i]);
        rep.residuals[i] = s.value();
    });
    CompensatedSum sq;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = std::abs(rep.residuals[i]);
        rep.sup_error = std::max(rep.sup_error, e);
        sq.add(e * e);
        for (auto& w : diags[i].warnings)
            if (std::find(rep.warnings.begin(), rep.warnings.end(), w) == rep.warnings.end())
                rep.warnings.push_back(w);
    }
    rep.l2_error = n > 0 ? std::sqrt(sq.value() / static_cast<double>(n)) : 0.0;
    return rep;
}

std::vector<Point> interior_points(const Domain& domain, int count, double min_distance, unsigned seed)
{
    if (count < 0)
        throw Error(Errc::InvalidArgument, "point count must be nonnegative");
    boost::random::sobol engine(3);
    engine.discard(3ull * seed);
    const double half = domain.radius();
    auto unit = [&]() { return static_cast<double>(engine()) * 0x1p-64; };

    std::vector<Point> pts;
    pts.reserve(count);
    long attempts = 0;
    while (static_cast<int>(pts.size()) < count) {
        if (++attempts > 1000L * (count + 10))
            throw Error(Errc::InvalidArgument, "could not place interior points at the requested distance");
        Point u;
        for (int c = 0; c < 3; ++c)
            u[c] = unit();
        const Point x = domain.center() + half * (2.0 * u - Point::Ones());
        if (!domain.contains(x) || domain.radial_gap(x) > -min_distance)
            continue;
        if (domain.closest_boundary_point(x).distance < min_distance)
            continue;
        pts.push_back(x);
    }
    return pts;
}

namespace {

// Kernel between two Gaussian blobs whose variances per axis add up to s2: R convolved with a
// Gaussian, scaled by exp(-a^2 s2 / 2) so that the far field is exactly R. Positive definite in the
// blob centres for any widths, since it is a Gram matrix of the positive operator R.
double blob_kernel(double a, double r, double s2)
{
    const double s = std::sqrt(s2);
    const double root2s = std::sqrt(2.0) * s;
    const double u = (a * s2 - r) / root2s;
    const double v = (a * s2 + r) / root2s;
    if (-u > 6.5 && v > 6.5 && a * r < 5.0)
        return kernel_of_distance(a, r);
    if (r < 1e-5 * s) {
        // limit r -> 0; the correction is O(r^2 / s^2)
        const double u0 = a * s / std::sqrt(2.0);
        return (-2.0 * a * std::erfc(u0) + 4.0 / std::sqrt(pi) * std::exp(-u0 * u0) / root2s) / (8.0 * pi);
    }
    return (std::exp(-a * r) * std::erfc(u) - std::exp(a * r) * std::erfc(v)) / (8.0 * pi * r);
}

/// Blob width for a node of weight w. At leading order in the blob size the self interaction then
/// equals the kernel integral over the equal-volume ball, rho^2 / 2.
double blob_variance(double w)
{
    const double rho = std::cbrt(3.0 * w / (4.0 * pi));
    const double sigma = 2.0 * rho / (3.0 * std::sqrt(pi));
    return sigma * sigma;
}

} // namespace

double quadratic_form(const KernelParams& k, const VolumeQuadrature& vol, std::span<const double> density, int threads)
{
    const std::size_t n = vol.size();
    if (density.size() != n)
        throw Error(Errc::DimensionMismatch, "density must have one value per volume node");
    const double a = k.a;
    // sum in a canonical node order so that relabeling the nodes cannot change a single bit
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
        const Point& p = vol.nodes[l];
        const Point& q = vol.nodes[r];
        return std::tie(p[0], p[1], p[2], vol.weights[l], density[l]) <
               std::tie(q[0], q[1], q[2], vol.weights[r], density[r]);
    });
    std::vector<double> var(n);
    for (std::size_t i = 0; i < n; ++i)
        var[i] = blob_variance(vol.weights[i]);
    std::vector<double> rows(n, 0.0);
    parallel_for(n, threads > 0 ? threads : default_threads(), [&](std::size_t oi) {
        const std::size_t i = order[oi];
        if (density[i] == 0.0)
            return;
        CompensatedSum row;
        for (std::size_t oj = 0; oj < n; ++oj) {
            const std::size_t j = order[oj];
            if (density[j] == 0.0)
                continue;
            const double r = (vol.nodes[i] - vol.nodes[j]).norm();
            row.add(vol.weights[j] * blob_kernel(a, r, var[i] + var[j]) * density[j]);
        }
        rows[oi] = vol.weights[i] * density[i] * row.value();
    });
    // pairwise reduction keeps the result independent of thread count
    while (rows.size() > 1) {
        std::vector<double> next((rows.size() + 1) / 2);
        for (std::size_t i = 0; i < next.size(); ++i)
            next[i] = rows[2 * i] + (2 * i + 1 < rows.size() ? rows[2 * i + 1] : 0.0);
        rows.swap(next);
    }
    return rows.empty() ? 0.0 : rows.front();
}

} // namespace rfe
