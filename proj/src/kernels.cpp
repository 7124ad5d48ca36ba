#include "rfe/kernels.hpp"

#include "rfe/error.hpp"

#include <cmath>

namespace rfe {

KernelParams KernelParams::modified_helmholtz(double a)
{
    if (!(a > 0.0) || !std::isfinite(a))
        throw Error(Errc::InvalidArgument, "kernel constant a must be positive");
    KernelParams k;
    k.family = KernelFamily::ModifiedHelmholtz3D;
    k.a = a;
    k.order_info = derive_orders(0, 2, 3);
    return k;
}

double kernel_value(const KernelParams& k, const Point& x, const Point& y)
{
    const double r = (x - y).norm();
    if (r < 1e-14 * (1.0 + x.norm()))
        throw Error(Errc::CoincidentPoints, "kernel evaluated at coincident points");
    return kernel_of_distance(k.a, r);
}

SingularityProfile singularity_profile(const OrderInfo& info)
{
    return {info.gamma, info.log_singular, info.gamma < 0};
}

} // namespace rfe
