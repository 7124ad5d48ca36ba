#include "rfe/exterior_solver.hpp"

#include "rfe/error.hpp"
#include "rfe/kernels.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfe {

std::vector<double> bessel_k(int lmax, double z)
{
    if (!(z > 0.0))
        throw Error(Errc::InvalidArgument, "k_l needs z > 0");
    std::vector<double> k(lmax + 1);
    const double e = std::exp(-z);
    k[0] = e / z;
    if (lmax >= 1)
        k[1] = e * (1.0 / z + 1.0 / (z * z));
    for (int l = 1; l < lmax; ++l)
        k[l + 1] = k[l - 1] + (2.0 * l + 1.0) / z * k[l];
    return k;
}

namespace {

// q_l = k_l / k_{l-1} for l = 1..lmax (index 0 unused)
std::vector<double> successive_ratios(int lmax, double z)
{
    std::vector<double> q(lmax + 1, 0.0);
    if (lmax >= 1)
        q[1] = 1.0 + 1.0 / z;
    for (int l = 1; l < lmax; ++l)
        q[l + 1] = 1.0 / q[l] + (2.0 * l + 1.0) / z;
    return q;
}

} // namespace

std::vector<double> bessel_k_ratios(int lmax, double z_num, double z_den)
{
    if (!(z_num > 0.0) || !(z_den > 0.0))
        throw Error(Errc::InvalidArgument, "k_l ratios need positive arguments");
    const auto qn = successive_ratios(lmax, z_num);
    const auto qd = successive_ratios(lmax, z_den);
    std::vector<double> out(lmax + 1);
    // exp of the difference keeps a*r > 700 finite (it underflows to zero instead)
    out[0] = (z_den / z_num) * std::exp(-(z_num - z_den));
    for (int l = 1; l <= lmax; ++l)
        out[l] = out[l - 1] * (qn[l] / qd[l]);
    return out;
}

std::vector<double> bessel_k_log_derivatives(int lmax, double z)
{
    if (!(z > 0.0))
        throw Error(Errc::InvalidArgument, "k_l'/k_l needs z > 0");
    const auto q = successive_ratios(lmax, z);
    std::vector<double> out(lmax + 1);
    out[0] = -1.0 - 1.0 / z;
    for (int l = 1; l <= lmax; ++l)
        out[l] = -1.0 / q[l] - (l + 1.0) / z;
    return out;
}

ExteriorSolution::ExteriorSolution(Spectral rep, const Domain& domain) : rep_(std::move(rep)), domain_(domain) {}
ExteriorSolution::ExteriorSolution(Mfs rep, const Domain& domain) : rep_(std::move(rep)), domain_(domain) {}

double ExteriorSolution::a() const
{
    return std::visit([](const auto& r) { return r.a; }, rep_);
}

double ExteriorSolution::value(const Point& x) const
{
    if (const auto* s = std::get_if<Spectral>(&rep_)) {
        const Point v = x - s->center;
        const double r = v.norm();
        const int lmax = s->coeffs.lmax();
        if (lmax < 0)
            return 0.0;
        const auto [theta, phi] = spherical_angles(v);
        std::vector<double> y(sh_count(lmax));
        real_sh(lmax, theta, phi, y);
        const auto ratio = bessel_k_ratios(lmax, s->a * r, s->a * s->radius);
        const auto c = s->coeffs.coeffs();
        double u = 0.0;
        for (int l = 0; l <= lmax; ++l) {
            double partial = 0.0;
            for (int m = -l; m <= l; ++m)
                partial += c[sh_index(l, m)] * y[sh_index(l, m)];
            u += ratio[l] * partial;
        }
        return u;
    }
    const Mfs& m = std::get<Mfs>(rep_);
    double u = 0.0;
    for (std::size_t j = 0; j < m.sources.size(); ++j)
        u += m.strengths[j] * kernel_of_distance(m.a, (x - m.sources[j]).norm());
    return u;
}

Point ExteriorSolution::gradient(const Point& x) const
{
    if (const auto* s = std::get_if<Spectral>(&rep_)) {
        const Point v = x - s->center;
        const double r = v.norm();
        const int lmax = s->coeffs.lmax();
        if (lmax < 0)
            return Point::Zero();
        auto [theta, phi] = spherical_angles(v);
        theta = std::clamp(theta, 1e-12, pi - 1e-12);
        const std::size_t n = sh_count(lmax);
        std::vector<double> y(n), yt(n), yp(n);
        real_sh_with_derivatives(lmax, theta, phi, y, yt, yp);
        const auto ratio = bessel_k_ratios(lmax, s->a * r, s->a * s->radius);
        const auto logd = bessel_k_log_derivatives(lmax, s->a * r);
        const auto c = s->coeffs.coeffs();
        double du_dr = 0.0, du_dtheta = 0.0, du_dphi = 0.0;
        for (int l = 0; l <= lmax; ++l) {
            double pv = 0.0, pt = 0.0, pp = 0.0;
            for (int m = -l; m <= l; ++m) {
                const int i = sh_index(l, m);
                pv += c[i] * y[i];
                pt += c[i] * yt[i];
                pp += c[i] * yp[i];
            }
            du_dr += s->a * logd[l] * ratio[l] * pv;
            du_dtheta += ratio[l] * pt;
            du_dphi += ratio[l] * pp;
        }
        const Point r_hat = direction(std::cos(theta), phi);
        const Point t_hat{std::cos(theta) * std::cos(phi), std::cos(theta) * std::sin(phi), -std::sin(theta)};
        const Point p_hat{-std::sin(phi), std::cos(phi), 0.0};
        return du_dr * r_hat + (du_dtheta / r) * t_hat + (du_dphi / (r * std::sin(theta))) * p_hat;
    }
    const Mfs& m = std::get<Mfs>(rep_);
    Point g = Point::Zero();
    for (std::size_t j = 0; j < m.sources.size(); ++j) {
        const Point d = x - m.sources[j];
        const double r = d.norm();
        g += m.strengths[j] * (-(m.a * r + 1.0) * std::exp(-m.a * r) / (4.0 * pi * r * r * r)) * d;
    }
    return g;
}

ExteriorSolution solve_ball_spectral(double a, double radius, const SphericalCoeffs& data, const Point& center)
{
    if (!(a > 0.0))
        throw Error(Errc::InvalidArgument, "a must be positive");
    const Domain ball = Domain::ball(center, radius);
    return ExteriorSolution(ExteriorSolution::Spectral{a, radius, center, data.coeffs}, ball);
}

ExteriorSolution solve_mfs(const SurfaceQuadrature& surf, double a, const NodeValues& data, const MfsOptions& options)
{
    if (!surf.domain)
        throw Error(Errc::InvalidArgument, "surface quadrature without domain");
    if (!(a > 0.0))
        throw Error(Errc::InvalidArgument, "a must be positive");
    if (!(options.beta > 0.0 && options.beta < 1.0))
        throw Error(Errc::InvalidArgument, "beta must lie in (0, 1)");
    if (data.values.size() != surf.size())
        throw Error(Errc::InvalidArgument, "node values do not match the quadrature");
    if (options.holdout_stride < 2)
        throw Error(Errc::InvalidArgument, "holdout stride must be at least 2");
    const Domain& domain = *surf.domain;

    std::vector<std::size_t> fit, held;
    for (std::size_t i = 0; i < surf.size(); ++i)
        (i % options.holdout_stride == static_cast<std::size_t>(options.holdout_stride - 1) ? held : fit).push_back(i);
    const int n_src = options.n_sources;
    if (n_src < 1 || static_cast<std::size_t>(n_src) > fit.size())
        throw Error(Errc::InvalidArgument, "number of sources must be between 1 and the fitted node count");

    ExteriorSolution::Mfs rep;
    rep.a = a;
    for (const Point& dir : fibonacci_sphere(n_src)) {
        const Point xb = domain.surface_point(dir).position;
        rep.sources.push_back(domain.center() + options.beta * (xb - domain.center()));
    }

    Eigen::MatrixXd A(fit.size(), n_src);
    Eigen::VectorXd rhs(fit.size());
    for (std::size_t i = 0; i < fit.size(); ++i) {
        const Point& x = surf.nodes[fit[i]];
        for (int j = 0; j < n_src; ++j)
            A(i, j) = kernel_of_distance(a, (x - rep.sources[j]).norm());
        rhs(i) = data.values[fit[i]];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    const Eigen::VectorXd strengths = qr.solve(rhs);
    rep.strengths.assign(strengths.data(), strengths.data() + n_src);

    const auto& R = qr.matrixQR();
    const double r_first = std::abs(R(0, 0)), r_last = std::abs(R(n_src - 1, n_src - 1));
    const double cond = r_last > 0.0 ? r_first / r_last : std::numeric_limits<double>::infinity();

    ExteriorSolution sol(std::move(rep), domain);
    sol.conditioning = cond;
    sol.ill_conditioned = !(cond <= options.ill_condition_threshold);
    if (sol.ill_conditioned) {
        std::ostringstream msg;
        msg << "IllConditioned: condition estimate " << cond << " exceeds " << options.ill_condition_threshold;
        sol.warnings.push_back(msg.str());
    }
    for (std::size_t i : fit)
        sol.fit_sup_residual = std::max(sol.fit_sup_residual, std::abs(sol.value(surf.nodes[i]) - data.values[i]));
    double sq = 0.0;
    for (std::size_t i : held) {
        const double e = std::abs(sol.value(surf.nodes[i]) - data.values[i]);
        sol.holdout_sup_residual = std::max(sol.holdout_sup_residual, e);
        sq += e * e;
    }
    sol.holdout_rms_residual = held.empty() ? 0.0 : std::sqrt(sq / held.size());
    if (sol.holdout_sup_residual > options.tol) {
        std::ostringstream msg;
        msg << "held-out boundary residual " << sol.holdout_sup_residual << " exceeds tolerance " << options.tol;
        throw Error(Errc::ResidualTooLarge, msg.str());
    }
    return sol;
}

double eval_solution(const ExteriorSolution& sol, const Point& x)
{
    if (!(sol.domain().radial_gap(x) > 1e-10))
        throw Error(Errc::PointInsideDomain, "exterior solution evaluated inside the domain or on its boundary");
    return sol.value(x);
}

std::vector<double> normal_derivative_trace(const ExteriorSolution& sol, const SurfaceQuadrature& surf)
{
    std::vector<double> out(surf.size());
    for (std::size_t i = 0; i < surf.size(); ++i)
        out[i] = sol.gradient(surf.nodes[i]).dot(surf.normals[i]);
    return out;
}

std::vector<double> boundary_values(const ExteriorSolution& sol, const SurfaceQuadrature& surf)
{
    std::vector<double> out(surf.size());
    for (std::size_t i = 0; i < surf.size(); ++i)
        out[i] = sol.value(surf.nodes[i]);
    return out;
}

} // namespace rfe
