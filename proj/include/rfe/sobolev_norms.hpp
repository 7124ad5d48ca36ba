#pragma once

#include "rfe/fields.hpp"
#include "rfe/filter_assembly.hpp"
#include "rfe/geometry.hpp"

#include <vector>

namespace rfe {

/// Cube [c - L, c + L]^3 sampled at N^3 cell centers.
struct GridBox {
    double half_width = 2.0;
    int resolution = 64;
};

class GridField {
public:
    /// N must be a power of two in [32, 256].
    GridField(const Point& center, const GridBox& box);

    const Point& center() const { return center_; }
    double half_width() const { return half_; }
    int resolution() const { return n_; }
    double spacing() const { return 2.0 * half_ / n_; }
    double cell_volume() const { return spacing() * spacing() * spacing(); }

    std::size_t index(int i, int j, int k) const
    {
        return (static_cast<std::size_t>(i) * n_ + j) * n_ + k;
    }
    Point cell_center(int i, int j, int k) const;
    /// Cell containing x, or false when x lies outside the box.
    bool locate(const Point& x, int& i, int& j, int& k) const;

    std::vector<double>& samples() { return samples_; }
    const std::vector<double>& samples() const { return samples_; }

    /// sum of samples times cell volume
    double integral() const;

private:
    Point center_;
    double half_ = 0.0;
    int n_ = 0;
    std::vector<double> samples_;
};

/// The box must hold the domain with a margin of at least half its radius.
void check_box(const Domain& domain, const GridBox& box);

/// Volume density at cell centers inside the domain plus the layer deposited node by node
/// (density * weight / cell volume into the containing cell). The box is centred on the domain.
GridField rasterize_filter(const DistributionalFilter& h, const GridBox& box);

/// f times a fixed smooth cutoff: 1 on the closed domain, falling to 0 along each ray between
/// rho(w) and cutoff_stretch * rho(w).
inline constexpr double cutoff_stretch = 1.4;
double domain_cutoff(const Domain& domain, const Point& x);
GridField rasterize_extension(const SourceField& f, const Domain& domain, const GridBox& box);

/// (2 pi)^{-3} sum (1 + |xi|^2)^s |F g(xi)|^2 (pi / L)^3 over the discrete frequencies xi = k pi / L,
/// with F g approximated by cell volume times the DFT. Square root returned.
double hs_norm_grid(const GridField& g, double s);
/// Plain grid L2 norm, sqrt(cell volume * sum g^2).
double grid_l2_norm(const GridField& g);

/// ||h||_{H^-1} / ||f cutoff||_{H^1} on the same box.
double isomorphism_ratio(const SourceField& f, const DistributionalFilter& h, const GridBox& box);

} // namespace rfe
