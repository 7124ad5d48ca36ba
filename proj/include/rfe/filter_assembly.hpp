#pragma once

#include "rfe/error.hpp"
#include "rfe/exterior_solver.hpp"
#include "rfe/fields.hpp"
#include "rfe/geometry.hpp"
#include "rfe/kernels.hpp"

#include <optional>
#include <vector>

namespace rfe {

/// The exterior boundary-value problem equivalent to R_Omega h = f.
struct BvpSpec {
    std::optional<KernelParams> interior_op;
    OrderInfo order_info;
    int dirichlet_count = 1;        ///< a: traces D_n^j f, 0 <= j < a
    int extra_condition_count = 0;  ///< mu / 2
    bool solver_available = false;  ///< only a = 1 with Q = -Lap + a^2 is solvable here
    std::vector<NodeValues> traces; ///< j-th normal derivative of f at the surface nodes
};

/// Thrown for mu > 0; carries the number of extra boundary conditions the problem would need.
class UnsupportedMu : public Error {
public:
    UnsupportedMu(int extra, const std::string& what) : Error(Errc::UnsupportedMu, what), extra_(extra) {}
    int extra_condition_count() const { return extra_; }

private:
    int extra_;
};

BvpSpec reduce_to_bvp(const KernelParams& k, const SourceField& f, const SurfaceQuadrature& surf);
/// Order-level reduction; traces beyond the first normal derivative are not formed.
BvpSpec reduce_to_bvp(const OrderInfo& info, const SourceField& f, const SurfaceQuadrature& surf);

/// h = (-Lap + a^2) f in Omega plus (df/dn - du/dn) delta on the boundary.
struct DistributionalFilter {
    KernelParams params;
    SourceField field;             ///< volume density is (-Lap + a^2) field
    SurfaceQuadrature surface;     ///< nodes carrying the layer density
    std::vector<double> surface_density;

    double volume_density(const Point& x) const { return field.apply_q(x, params.a); }
    const Domain& domain() const { return *surface.domain; }
};

/// Layer-free filter with given volume field and zero layer; used for tests and ablations.
DistributionalFilter make_filter(const KernelParams& k, const SourceField& f, const SurfaceQuadrature& surf,
                                 std::vector<double> surface_density);

/// Checks trace matching sup |u - f| <= trace_tol on the boundary, then assembles h.
DistributionalFilter assemble_filter(const SourceField& f, const ExteriorSolution& sol,
                                     const SurfaceQuadrature& surf, const KernelParams& k,
                                     double trace_tol = 1e-6);

// Both pairings integrate on rules adapted to the support of phi: angular panels about the axis
// through phi's center break at tangency and boundary-crossing angles, and radial segments break
// where rays cross phi's support spheres, so every panel sees a smooth integrand.

/// int_Omega (Qf) phi dV + int_boundary sigma phi dS.
double pairing_via_jump(const DistributionalFilter& h, const TestFunction& phi, int order);

/// int_Omega f (Q phi) dV + int_{exterior, |x - c| < T} u (Q phi) dV.
double pairing_direct(const SourceField& f, const ExteriorSolution& sol, const TestFunction& phi, int order,
                      double truncation_radius);

} // namespace rfe
