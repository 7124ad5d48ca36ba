#include "rfe/filter_assembly.hpp"

#include "rfe/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace rfe {

BvpSpec reduce_to_bvp(const OrderInfo& info, const SourceField& f, const SurfaceQuadrature& surf)
{
    if (info.mu > 0) {
        std::ostringstream msg;
        msg << "mu = " << info.mu << " requires " << info.mu / 2
            << " extra boundary conditions built from pseudodifferential boundary operators; "
               "the exterior problem with Dirichlet data alone is underdetermined";
        throw UnsupportedMu(info.mu / 2, msg.str());
    }
    BvpSpec spec;
    spec.order_info = info;
    spec.dirichlet_count = info.a;
    spec.extra_condition_count = info.mu / 2;
    spec.solver_available = info.a == 1 && info.nu == 2;
    const int formed = std::min(info.a, 2);
    for (int j = 0; j < formed; ++j) {
        NodeValues trace;
        trace.values.resize(surf.size());
        for (std::size_t i = 0; i < surf.size(); ++i)
            trace.values[i] = j == 0 ? f.value(surf.nodes[i]) : f.gradient(surf.nodes[i]).dot(surf.normals[i]);
        spec.traces.push_back(std::move(trace));
    }
    return spec;
}

BvpSpec reduce_to_bvp(const KernelParams& k, const SourceField& f, const SurfaceQuadrature& surf)
{
    BvpSpec spec = reduce_to_bvp(k.order_info, f, surf);
    spec.interior_op = k;
    return spec;
}

namespace {

void check_exp_linear_rates(const SourceField& f, double a)
{
    for (const auto& t : f.terms())
        if (const auto* e = std::get_if<SourceField::ExpLinear>(&t.atom))
            if (std::abs(e->rate.norm() - a) > 1e-12 * a)
                throw Error(Errc::InvalidArgument, "exp_linear field needs |b| = a so that Qf vanishes");
}

} // namespace

DistributionalFilter make_filter(const KernelParams& k, const SourceField& f, const SurfaceQuadrature& surf,
                                 std::vector<double> surface_density)
{
    if (surface_density.size() != surf.size())
        throw Error(Errc::InvalidArgument, "surface density does not match the quadrature nodes");
    for (double v : surface_density)
        if (!std::isfinite(v))
            throw Error(Errc::InvalidArgument, "surface density is not finite");
    return DistributionalFilter{k, f, surf, std::move(surface_density)};
}

DistributionalFilter assemble_filter(const SourceField& f, const ExteriorSolution& sol, const SurfaceQuadrature& surf,
                                     const KernelParams& k, double trace_tol)
{
    check_exp_linear_rates(f, k.a);
    if (std::abs(sol.a() - k.a) > 1e-14 * k.a)
        throw Error(Errc::InvalidArgument, "exterior solution was computed for a different a");
    const auto u = boundary_values(sol, surf);
    double mismatch = 0.0;
    for (std::size_t i = 0; i < surf.size(); ++i)
        mismatch = std::max(mismatch, std::abs(u[i] - f.value(surf.nodes[i])));
    if (!(mismatch <= trace_tol)) {
        std::ostringstream msg;
        msg << "exterior solution misses the boundary trace of f by " << mismatch;
        throw Error(Errc::TraceMismatch, msg.str());
    }
    const auto dudn = normal_derivative_trace(sol, surf);
    std::vector<double> sigma(surf.size());
    for (std::size_t i = 0; i < surf.size(); ++i)
        sigma[i] = f.gradient(surf.nodes[i]).dot(surf.normals[i]) - dudn[i];
    return make_filter(k, f, surf, std::move(sigma));
}

namespace {

struct SupportLayout {
    Point axis = Point::UnitZ();
    Point offset = Point::Zero(); ///< phi center minus domain center
    std::vector<double> radii;    ///< spheres where phi's profile changes smoothness
    std::vector<double> cos_breaks;
    std::vector<double> tangent_breaks; ///< rays graze a support sphere here
};

// Interval of s where c + s w lies inside the sphere |x - p| <= radius.
std::optional<std::pair<double, double>> ray_sphere(const Point& offset, const Point& w, double radius)
{
    const double b = offset.dot(w);
    const double disc = b * b - (offset.squaredNorm() - radius * radius);
    if (disc <= 0.0)
        return std::nullopt;
    const double root = std::sqrt(disc);
    return std::pair{b - root, b + root};
}

SupportLayout support_layout(const Domain& domain, const TestFunction& phi)
{
    SupportLayout layout;
    layout.offset = phi.center() - domain.center();
    if (phi.inner_radius() > 0.0)
        layout.radii.push_back(phi.inner_radius());
    layout.radii.push_back(phi.support_radius());
    const double D = layout.offset.norm();
    if (D < 1e-14 * (1.0 + domain.radius()))
        return layout;
    layout.axis = layout.offset / D;
    const Eigen::Matrix3d frame = frame_with_axis(layout.axis);
    for (double S : layout.radii) {
        if (D > S) {
            const double t = std::sqrt(1.0 - (S / D) * (S / D));
            layout.cos_breaks.push_back(t);
            layout.tangent_breaks.push_back(t);
        }
        // where the boundary crosses the sphere, found along one meridian of the frame
        auto gap = [&](double t) {
            const Point w = frame * direction(t, 0.0);
            return (domain.surface_point(w).position - phi.center()).norm() - S;
        };
        constexpr int samples = 256;
        double t_prev = -1.0, g_prev = gap(-1.0);
        for (int i = 1; i <= samples; ++i) {
            const double t = -1.0 + 2.0 * i / samples;
            const double g = gap(t);
            if ((g_prev < 0.0) != (g < 0.0)) {
                double lo = t_prev, hi = t;
                for (int it = 0; it < 100; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    ((gap(mid) < 0.0) == (g_prev < 0.0) ? lo : hi) = mid;
                }
                layout.cos_breaks.push_back(0.5 * (lo + hi));
            }
            t_prev = t;
            g_prev = g;
        }
    }
    return layout;
}

// Flat bump edges are smooth but steep in between; composite panels resolve them far sooner
// than raising the Gauss order.
constexpr int radial_panels = 4;

// Gauss rule over [lo, hi] split where the ray crosses any support sphere.
template <class Fn>
double radial_segments(const SupportLayout& layout, const Point& w, double lo, double hi, int order, Fn&& integrand)
{
    const auto outer = ray_sphere(layout.offset, w, layout.radii.back());
    if (!outer)
        return 0.0;
    lo = std::max(lo, outer->first);
    hi = std::min(hi, outer->second);
    if (!(hi > lo))
        return 0.0;
    std::vector<double> cuts{lo, hi};
    for (double S : layout.radii)
        if (auto iv = ray_sphere(layout.offset, w, S))
            for (double s : {iv->first, iv->second})
                if (s > lo && s < hi)
                    cuts.push_back(s);
    std::sort(cuts.begin(), cuts.end());
    double total = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        if (!(cuts[k + 1] > cuts[k]))
            continue;
        const double width = (cuts[k + 1] - cuts[k]) / radial_panels;
        for (int p = 0; p < radial_panels; ++p) {
            const GaussRule g = gauss_legendre(order, cuts[k] + p * width, cuts[k] + (p + 1) * width);
            for (int i = 0; i < order; ++i)
                total += g.weights[i] * g.nodes[i] * g.nodes[i] * integrand(g.nodes[i]);
        }
    }
    return total;
}

} // namespace

double pairing_via_jump(const DistributionalFilter& h, const TestFunction& phi, int order)
{
    if (order < 4)
        throw Error(Errc::InvalidArgument, "pairing order must be at least 4");
    const Domain& domain = h.domain();
    const SupportLayout layout = support_layout(domain, phi);
    const AngularRule ang = axis_rule_cos(layout.axis, layout.cos_breaks, order, 2 * order, layout.tangent_breaks);
    const ShExpansion sigma =
        project_to_harmonics(h.surface, h.surface_density, h.surface.order - 1).truncated(1e-15);
    const double a = h.params.a;
    const bool volume_free = h.field.annihilated_by_q(a);

    CompensatedSum volume, surface;
    for (std::size_t i = 0; i < ang.directions.size(); ++i) {
        const Point& w = ang.directions[i];
        const Domain::SurfacePoint sp = domain.surface_point(w);
        const double rho = (sp.position - domain.center()).norm();
        if (!volume_free) {
            volume.add(ang.weights[i] * radial_segments(layout, w, 0.0, rho, order, [&](double s) {
                const Point x = domain.center() + s * w;
                return h.volume_density(x) * phi.value(x);
            }));
        }
        const double phi_s = phi.value(sp.position);
        if (phi_s != 0.0)
            surface.add(ang.weights[i] * sp.area_density * sigma.value(ang.theta[i], ang.phi[i]) * phi_s);
    }
    return volume.value() + surface.value();
}

double pairing_direct(const SourceField& f, const ExteriorSolution& sol, const TestFunction& phi, int order,
                      double truncation_radius)
{
    if (order < 4)
        throw Error(Errc::InvalidArgument, "pairing order must be at least 4");
    const Domain& domain = sol.domain();
    const double reach = (phi.center() - domain.center()).norm() + phi.support_radius();
    if (reach > truncation_radius)
        throw Error(Errc::TruncationTooSmall, "support of the test function extends beyond the truncation ball");
    const SupportLayout layout = support_layout(domain, phi);
    const AngularRule ang = axis_rule_cos(layout.axis, layout.cos_breaks, order, 2 * order, layout.tangent_breaks);
    const double a = sol.a();

    CompensatedSum interior, exterior;
    for (std::size_t i = 0; i < ang.directions.size(); ++i) {
        const Point& w = ang.directions[i];
        const double rho = domain.radial(w).rho;
        interior.add(ang.weights[i] * radial_segments(layout, w, 0.0, rho, order, [&](double s) {
            const Point x = domain.center() + s * w;
            return f.value(x) * phi.apply_q(x, a);
        }));
        exterior.add(ang.weights[i] * radial_segments(layout, w, rho, truncation_radius, order, [&](double s) {
            const Point x = domain.center() + s * w;
            const double qphi = phi.apply_q(x, a);
            return qphi == 0.0 ? 0.0 : sol.value(x) * qphi;
        }));
    }
    return interior.value() + exterior.value();
}

} // namespace rfe
