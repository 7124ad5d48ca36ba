#pragma once

#include "rfe/numerics.hpp"
#include "rfe/symbol_calculus.hpp"

namespace rfe {

enum class KernelFamily { ModifiedHelmholtz3D };

/// Covariance kernel of R = Q^{-1} with Q = -Laplacian + a^2 in R^3 (P = I).
struct KernelParams {
    KernelFamily family = KernelFamily::ModifiedHelmholtz3D;
    double a = 1.0;
    OrderInfo order_info{0, 2, 1, 1, false};

    static KernelParams modified_helmholtz(double a);
};

/// exp(-a r) / (4 pi r), r = |x - y|.
double kernel_value(const KernelParams& k, const Point& x, const Point& y);

/// Same kernel as a function of distance; r > 0.
inline double kernel_of_distance(double a, double r) { return std::exp(-a * r) / (4.0 * pi * r); }

struct SingularityProfile {
    int gamma = 0;
    bool log_flag = false;
    bool continuous = false;
};

SingularityProfile singularity_profile(const OrderInfo& info);

} // namespace rfe
