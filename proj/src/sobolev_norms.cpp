#include "rfe/sobolev_norms.hpp"

#include "rfe/error.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <mutex>

namespace rfe {

namespace {

// fftw's planner is not reentrant
std::mutex g_fftw_mutex;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// C-infinity step: 1 for t <= 0, 0 for t >= 1
double smooth_step_down(double t)
{
    if (t <= 0.0)
        return 1.0;
    if (t >= 1.0)
        return 0.0;
    const double a = std::exp(-1.0 / (1.0 - t));
    const double b = std::exp(-1.0 / t);
    return a / (a + b);
}

} // namespace

GridField::GridField(const Point& center, const GridBox& box) : center_(center), half_(box.half_width), n_(box.resolution)
{
    if (!power_of_two(n_) || n_ < 32 || n_ > 256)
        throw Error(Errc::InvalidArgument, "grid resolution must be a power of two between 32 and 256");
    if (!(half_ > 0.0))
        throw Error(Errc::InvalidArgument, "grid half-width must be positive");
    samples_.assign(static_cast<std::size_t>(n_) * n_ * n_, 0.0);
}

Point GridField::cell_center(int i, int j, int k) const
{
    const double h = spacing();
    return center_ + Point(-half_ + (i + 0.5) * h, -half_ + (j + 0.5) * h, -half_ + (k + 0.5) * h);
}

bool GridField::locate(const Point& x, int& i, int& j, int& k) const
{
    const double h = spacing();
    int idx[3];
    for (int c = 0; c < 3; ++c) {
        const double t = std::floor((x[c] - center_[c] + half_) / h);
        if (t < 0.0 || t >= n_)
            return false;
        idx[c] = static_cast<int>(t);
    }
    i = idx[0];
    j = idx[1];
    k = idx[2];
    return true;
}

double GridField::integral() const
{
    CompensatedSum s;
    for (double v : samples_)
        s.add(v);
    return s.value() * cell_volume();
}

void check_box(const Domain& domain, const GridBox& box)
{
    const double r = domain.max_radial();
    if (box.half_width < 1.5 * r)
        throw Error(Errc::BoxTooSmall, "grid box must contain the domain with a margin of half its radius");
}

GridField rasterize_filter(const DistributionalFilter& h, const GridBox& box)
{
    const Domain& domain = h.domain();
    check_box(domain, box);
    GridField g(domain.center(), box);
    const int n = g.resolution();
    auto& s = g.samples();
    if (!h.field.annihilated_by_q(h.params.a)) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const Point x = g.cell_center(i, j, k);
                    if (domain.contains(x))
                        s[g.index(i, j, k)] = h.volume_density(x);
                }
    }
    const double cell = g.cell_volume();
    for (std::size_t q = 0; q < h.surface.size(); ++q) {
        int i, j, k;
        if (!g.locate(h.surface.nodes[q], i, j, k))
            throw Error(Errc::BoxTooSmall, "surface node outside the grid box");
        s[g.index(i, j, k)] += h.surface_density[q] * h.surface.weights[q] / cell;
    }
    return g;
}

double domain_cutoff(const Domain& domain, const Point& x)
{
    const Point v = x - domain.center();
    const double r = v.norm();
    if (r == 0.0)
        return 1.0;
    const double rho = domain.radial(Point(v / r)).rho;
    return smooth_step_down((r / rho - 1.0) / (cutoff_stretch - 1.0));
}

GridField rasterize_extension(const SourceField& f, const Domain& domain, const GridBox& box)
{
    check_box(domain, box);
    GridField g(domain.center(), box);
    const int n = g.resolution();
    auto& s = g.samples();
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                const Point x = g.cell_center(i, j, k);
                const double chi = domain_cutoff(domain, x);
                if (chi > 0.0)
                    s[g.index(i, j, k)] = chi * f.value(x);
            }
    return g;
}

double hs_norm_grid(const GridField& g, double s)
{
    if (s < -2.0 || s > 2.0)
        throw Error(Errc::InvalidArgument, "Sobolev index must lie in [-2, 2]");
    const int n = g.resolution();
    const int nc = n / 2 + 1;
    const std::size_t total_c = static_cast<std::size_t>(n) * n * nc;

    std::vector<double> in(g.samples());
    auto* out = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * total_c));
    if (!out)
        throw std::bad_alloc();
    {
        std::lock_guard lock(g_fftw_mutex);
        fftw_plan plan = fftw_plan_dft_r2c_3d(n, n, n, in.data(), out, FFTW_ESTIMATE);
        fftw_execute(plan);
        fftw_destroy_plan(plan);
    }

    const double dxi = pi / g.half_width();
    auto freq = [&](int idx) { return dxi * (idx <= n / 2 ? idx : idx - n); };
    CompensatedSum acc;
    for (int i = 0; i < n; ++i) {
        const double xi0 = freq(i);
        for (int j = 0; j < n; ++j) {
            const double xi1 = freq(j);
            for (int k = 0; k < nc; ++k) {
                const double xi2 = dxi * k;
                // the half-spectrum stores each conjugate pair once
                const double mult = (k == 0 || 2 * k == n) ? 1.0 : 2.0;
                const std::size_t q = (static_cast<std::size_t>(i) * n + j) * nc + k;
                const double mag2 = out[q][0] * out[q][0] + out[q][1] * out[q][1];
                if (mag2 == 0.0)
                    continue;
                const double weight = std::pow(1.0 + xi0 * xi0 + xi1 * xi1 + xi2 * xi2, s);
                acc.add(mult * weight * mag2);
            }
        }
    }
    fftw_free(out);
    const double cell = g.cell_volume();
    const double scale = cell * cell * dxi * dxi * dxi / std::pow(2.0 * pi, 3);
    return std::sqrt(acc.value() * scale);
}

double grid_l2_norm(const GridField& g)
{
    CompensatedSum acc;
    for (double v : g.samples())
        acc.add(v * v);
    return std::sqrt(acc.value() * g.cell_volume());
}

double isomorphism_ratio(const SourceField& f, const DistributionalFilter& h, const GridBox& box)
{
    const double denom = hs_norm_grid(rasterize_extension(f, h.domain(), box), 1.0);
    if (!(denom >= 1e-12))
        throw Error(Errc::DegenerateNorm, "H^1 norm of the source field is numerically zero");
    return hs_norm_grid(rasterize_filter(h, box), -1.0) / denom;
}

} // namespace rfe
