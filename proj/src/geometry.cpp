#include "rfe/geometry.hpp"

#include "rfe/error.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rfe {

namespace {

Point theta_hat(double theta, double phi)
{
    return {std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
}

Point phi_hat(double phi) { return {-std::sin(phi), std::cos(phi), 0.0}; }

} // namespace

std::pair<double, double> spherical_angles(const Point& v)
{
    const double r = v.norm();
    if (r == 0.0)
        return {0.0, 0.0};
    const double theta = std::acos(std::clamp(v.z() / r, -1.0, 1.0));
    double phi = std::atan2(v.y(), v.x());
    if (phi < 0.0)
        phi += 2.0 * pi;
    return {theta, phi};
}

Domain Domain::ball(const Point& center, double radius)
{
    if (!(radius > 0.0))
        throw Error(Errc::NonPositiveRadius, "ball radius must be positive, got " + std::to_string(radius));
    Domain d;
    d.kind_ = DomainKind::Ball;
    d.center_ = center;
    d.radius_ = radius;
    d.min_radial_ = d.max_radial_ = radius;
    return d;
}

Domain Domain::star(const Point& center, std::vector<double> lm_coeffs)
{
    const auto count = static_cast<int>(lm_coeffs.size());
    const int lmax = static_cast<int>(std::lround(std::sqrt(static_cast<double>(count)))) - 1;
    if (count == 0 || sh_count(lmax) != count)
        throw Error(Errc::InvalidArgument, "radial coefficient count must be a perfect square (lmax+1)^2");
    Domain d;
    d.kind_ = DomainKind::StarShaped;
    d.center_ = center;
    d.radial_ = ShExpansion(lmax, std::move(lm_coeffs));

    // validation grid, poles included
    constexpr int n_theta = 64, n_phi = 128;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double theta = pi * i / (n_theta - 1);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = 2.0 * pi * j / n_phi;
            const double rho = d.radial_.value(theta, phi);
            if (!(rho > 0.0))
                throw Error(Errc::NonPositiveRadial, "radial function is " + std::to_string(rho) +
                                                         " at (theta, phi) = (" + std::to_string(theta) + ", " +
                                                         std::to_string(phi) + ")");
            lo = std::min(lo, rho);
            hi = std::max(hi, rho);
        }
    }
    d.min_radial_ = lo;
    d.max_radial_ = hi;
    return d;
}

Domain::Radial Domain::radial(double theta, double phi) const
{
    if (kind_ == DomainKind::Ball)
        return {radius_, Point::Zero()};
    constexpr double pole_guard = 1e-12;
    theta = std::clamp(theta, pole_guard, pi - pole_guard);
    const auto v = radial_.value_and_derivatives(theta, phi);
    const Point grad = v.d_theta * theta_hat(theta, phi) + (v.d_phi / std::sin(theta)) * phi_hat(phi);
    return {v.value, grad};
}

Domain::Radial Domain::radial(const Point& unit_dir) const
{
    if (kind_ == DomainKind::Ball)
        return {radius_, Point::Zero()};
    const auto [theta, phi] = spherical_angles(unit_dir);
    return radial(theta, phi);
}

Domain::SurfacePoint Domain::surface_point(const Point& unit_dir) const
{
    const Radial r = radial(unit_dir);
    const Point raw = r.rho * unit_dir - r.grad;
    const double len = raw.norm();
    return {center_ + r.rho * unit_dir, raw / len, r.rho * len};
}

Domain::SurfacePoint Domain::surface_point(double theta, double phi) const
{
    const Point dir{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
    const Radial r = radial(theta, phi);
    const Point raw = r.rho * dir - r.grad;
    const double len = raw.norm();
    return {center_ + r.rho * dir, raw / len, r.rho * len};
}

double Domain::radial_gap(const Point& x) const
{
    const Point v = x - center_;
    const double r = v.norm();
    if (kind_ == DomainKind::Ball)
        return r - radius_;
    if (r == 0.0)
        return -min_radial_;
    const auto [theta, phi] = spherical_angles(v);
    return r - radial_.value(theta, phi);
}

bool Domain::contains(const Point& x) const { return radial_gap(x) < 0.0; }

Domain::Closest Domain::closest_boundary_point(const Point& x) const
{
    const Point v = x - center_;
    if (kind_ == DomainKind::Ball) {
        const double r = v.norm();
        const Point dir = r > 0.0 ? Point(v / r) : Point(Point::UnitZ());
        return {center_ + radius_ * dir, dir, dir, std::abs(radius_ - r)};
    }

    auto dist2 = [&](const Point& dir) { return (surface_point(dir).position - x).squaredNorm(); };
    const AngularRule coarse = angular_rule(24);
    Point best = coarse.directions.front();
    double best_d2 = dist2(best);
    for (const Point& dir : coarse.directions) {
        const double d2 = dist2(dir);
        if (d2 < best_d2) {
            best_d2 = d2;
            best = dir;
        }
    }
    // pattern search in the tangent plane of the current best direction
    double step = pi / 24.0;
    while (step > 1e-13) {
        const Eigen::Matrix3d frame = frame_with_axis(best);
        bool moved = false;
        for (int k = 0; k < 8; ++k) {
            const double ang = 2.0 * pi * k / 8.0;
            const Point trial = (best + step * (std::cos(ang) * frame.col(0) + std::sin(ang) * frame.col(1))).normalized();
            const double d2 = dist2(trial);
            if (d2 < best_d2) {
                best_d2 = d2;
                best = trial;
                moved = true;
                break;
            }
        }
        if (!moved)
            step *= 0.5;
    }
    const SurfacePoint sp = surface_point(best);
    return {sp.position, sp.normal, best, std::sqrt(best_d2)};
}

double Domain::exit_distance(const Point& x, const Point& dir) const
{
    const Point v = x - center_;
    if (kind_ == DomainKind::Ball) {
        const double b = v.dot(dir);
        const double c = v.squaredNorm() - radius_ * radius_;
        if (c >= 0.0)
            return 0.0;
        const double disc = std::sqrt(b * b - c);
        return b <= 0.0 ? disc - b : -c / (b + disc);
    }

    auto gap = [&](double s) { return radial_gap(x + s * dir); };
    if (gap(0.0) >= 0.0)
        return 0.0;
    const double step = min_radial_ / 32.0;
    const double s_max = v.norm() + 1.1 * max_radial_ + step;
    double lo = 0.0, hi = step;
    while (gap(hi) < 0.0) {
        lo = hi;
        hi += step;
        if (hi > s_max)
            throw Error(Errc::DomainNotVisible, "ray did not leave the domain");
    }
    for (double s = hi + step; s < s_max; s += step)
        if (gap(s) < 0.0)
            throw Error(Errc::DomainNotVisible, "ray re-enters the domain; point does not see the whole domain");
    for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

AngularRule angular_rule(int order)
{
    if (order < 1)
        throw Error(Errc::InvalidArgument, "angular rule order must be positive");
    const GaussRule& g = gauss_legendre(order);
    const int n_phi = 2 * order;
    const double dphi = 2.0 * pi / n_phi;
    AngularRule rule;
    rule.directions.reserve(order * n_phi);
    for (int i = 0; i < order; ++i) {
        const double theta = std::acos(g.nodes[i]);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = dphi * j;
            rule.directions.push_back(direction(g.nodes[i], phi));
            rule.theta.push_back(theta);
            rule.phi.push_back(phi);
            rule.weights.push_back(g.weights[i] * dphi);
        }
    }
    return rule;
}

namespace {

std::vector<double> clean_breaks(std::vector<double> breaks, double lo, double hi)
{
    breaks.push_back(lo);
    breaks.push_back(hi);
    for (double& b : breaks)
        b = std::clamp(b, lo, hi);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double b : breaks)
        if (out.empty() || b - out.back() > 1e-14 * (hi - lo))
            out.push_back(b);
    out.back() = hi;
    return out;
}

void push_axis_direction(AngularRule& rule, const Eigen::Matrix3d& frame, double cos_psi, double az, double w)
{
    const Point local = direction(cos_psi, az);
    const Point dir = frame * local;
    const auto [theta, phi] = spherical_angles(dir);
    rule.directions.push_back(dir);
    rule.theta.push_back(theta);
    rule.phi.push_back(phi);
    rule.weights.push_back(w);
}

} // namespace

AngularRule axis_rule_cos(const Point& axis, std::vector<double> cos_breaks, int points_per_panel, int n_azimuth,
                          const std::vector<double>& sqrt_breaks)
{
    const Eigen::Matrix3d frame = frame_with_axis(axis);
    std::vector<double> all = cos_breaks;
    auto is_sqrt = [&](double t) {
        return std::any_of(sqrt_breaks.begin(), sqrt_breaks.end(), [&](double b) { return std::abs(b - t) < 1e-13; });
    };
    auto breaks = clean_breaks(all, -1.0, 1.0);
    // a panel with square-root behaviour at both ends is split so each half has one
    std::vector<double> extra;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p)
        if (is_sqrt(breaks[p]) && is_sqrt(breaks[p + 1]))
            extra.push_back(0.5 * (breaks[p] + breaks[p + 1]));
    all.insert(all.end(), extra.begin(), extra.end());
    breaks = clean_breaks(all, -1.0, 1.0);

    const double daz = 2.0 * pi / n_azimuth;
    const GaussRule& ref = gauss_legendre(points_per_panel);
    AngularRule rule;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double lo = breaks[p], hi = breaks[p + 1], len = hi - lo;
        const bool sqrt_lo = is_sqrt(lo), sqrt_hi = is_sqrt(hi);
        for (int i = 0; i < points_per_panel; ++i) {
            const double v = 0.5 * (ref.nodes[i] + 1.0), wv = 0.5 * ref.weights[i];
            double t, w;
            if (sqrt_lo) {
                t = lo + len * v * v;
                w = wv * 2.0 * len * v;
            } else if (sqrt_hi) {
                t = hi - len * v * v;
                w = wv * 2.0 * len * v;
            } else {
                t = lo + len * v;
                w = wv * len;
            }
            for (int j = 0; j < n_azimuth; ++j)
                push_axis_direction(rule, frame, t, daz * (j + 0.5), w * daz);
        }
    }
    return rule;
}

AngularRule axis_rule_angle(const Point& axis, std::vector<double> psi_breaks, int points_per_panel, int n_azimuth)
{
    const Eigen::Matrix3d frame = frame_with_axis(axis);
    const auto breaks = clean_breaks(std::move(psi_breaks), 0.0, pi);
    const double daz = 2.0 * pi / n_azimuth;
    AngularRule rule;
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const GaussRule g = gauss_legendre(points_per_panel, breaks[p], breaks[p + 1]);
        for (int i = 0; i < points_per_panel; ++i)
            for (int j = 0; j < n_azimuth; ++j)
                push_axis_direction(rule, frame, std::cos(g.nodes[i]), daz * (j + 0.5),
                                    g.weights[i] * std::sin(g.nodes[i]) * daz);
    }
    return rule;
}

SurfaceQuadrature surface_quadrature(const Domain& domain, int order)
{
    if (order < 4)
        throw Error(Errc::InvalidArgument, "surface quadrature order must be at least 4");
    const AngularRule ang = angular_rule(order);
    SurfaceQuadrature q;
    q.domain = std::make_shared<const Domain>(domain);
    q.order = order;
    const std::size_t n = ang.directions.size();
    q.nodes.reserve(n);
    q.weights.reserve(n);
    q.normals.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Domain::SurfacePoint sp = domain.surface_point(ang.theta[i], ang.phi[i]);
        q.nodes.push_back(sp.position);
        q.normals.push_back(sp.normal);
        q.weights.push_back(ang.weights[i] * sp.area_density);
    }
    q.theta = ang.theta;
    q.phi = ang.phi;
    q.angular_weights = ang.weights;
    return q;
}

VolumeQuadrature volume_quadrature(const Domain& domain, int order)
{
    if (order < 4)
        throw Error(Errc::InvalidArgument, "volume quadrature order must be at least 4");
    const AngularRule ang = angular_rule(order);
    const GaussRule& g = gauss_legendre(order);
    VolumeQuadrature q;
    q.domain = std::make_shared<const Domain>(domain);
    q.order = order;
    for (std::size_t i = 0; i < ang.directions.size(); ++i) {
        const double rho = domain.radial(ang.theta[i], ang.phi[i]).rho;
        for (int k = 0; k < order; ++k) {
            const double r = 0.5 * rho * (g.nodes[k] + 1.0);
            q.nodes.push_back(domain.center() + r * ang.directions[i]);
            q.weights.push_back(ang.weights[i] * 0.5 * rho * g.weights[k] * r * r);
        }
    }
    return q;
}

ShExpansion project_to_harmonics(const SurfaceQuadrature& surf, std::span<const double> values, int lmax)
{
    if (values.size() != surf.size())
        throw Error(Errc::InvalidArgument, "value count does not match quadrature nodes");
    ShExpansion out(lmax);
    std::vector<double> y(sh_count(lmax));
    std::vector<CompensatedSum> acc(y.size());
    for (std::size_t i = 0; i < surf.size(); ++i) {
        real_sh(lmax, surf.theta[i], surf.phi[i], y);
        const double wv = surf.angular_weights[i] * values[i];
        for (std::size_t k = 0; k < y.size(); ++k)
            acc[k].add(wv * y[k]);
    }
    auto c = out.coeffs();
    for (std::size_t k = 0; k < y.size(); ++k)
        c[k] = acc[k].value();
    return out;
}

} // namespace rfe
