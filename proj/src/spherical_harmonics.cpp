#include "rfe/spherical_harmonics.hpp"

#include "rfe/error.hpp"
#include "rfe/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace rfe {

namespace {

// Fully normalized associated Legendre functions Pbar_l^m(cos theta), stored at sh_index(l, m) for m >= 0.
void normalized_legendre(int lmax, double ct, double st, std::span<double> p)
{
    p[sh_index(0, 0)] = std::sqrt(1.0 / (4.0 * pi));
    for (int m = 1; m <= lmax; ++m)
        p[sh_index(m, m)] = std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * st * p[sh_index(m - 1, m - 1)];
    for (int m = 0; m < lmax; ++m)
        p[sh_index(m + 1, m)] = std::sqrt(2.0 * m + 3.0) * ct * p[sh_index(m, m)];
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m + 2; l <= lmax; ++l) {
            const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - double(m) * m) / (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            p[sh_index(l, m)] = a * (ct * p[sh_index(l - 1, m)] - b * p[sh_index(l - 2, m)]);
        }
    }
}

void check_size(int lmax, std::size_t n)
{
    if (lmax < 0 || n < static_cast<std::size_t>(sh_count(lmax)))
        throw Error(Errc::InvalidArgument, "spherical harmonic buffer too small");
}

} // namespace

void real_sh(int lmax, double theta, double phi, std::span<double> out)
{
    check_size(lmax, out.size());
    std::vector<double> p(sh_count(lmax));
    normalized_legendre(lmax, std::cos(theta), std::sin(theta), p);
    const double sqrt2 = std::sqrt(2.0);
    for (int l = 0; l <= lmax; ++l)
        out[sh_index(l, 0)] = p[sh_index(l, 0)];
    for (int m = 1; m <= lmax; ++m) {
        const double c = std::cos(m * phi), s = std::sin(m * phi);
        for (int l = m; l <= lmax; ++l) {
            out[sh_index(l, m)] = sqrt2 * p[sh_index(l, m)] * c;
            out[sh_index(l, -m)] = sqrt2 * p[sh_index(l, m)] * s;
        }
    }
}

void real_sh_with_derivatives(int lmax, double theta, double phi, std::span<double> value,
                              std::span<double> d_theta, std::span<double> d_phi)
{
    check_size(lmax, value.size());
    check_size(lmax, d_theta.size());
    check_size(lmax, d_phi.size());
    const double ct = std::cos(theta), st = std::sin(theta);
    std::vector<double> p(sh_count(lmax)), dp(sh_count(lmax));
    normalized_legendre(lmax, ct, st, p);
    // d/dtheta Pbar_l^m = (l ct Pbar_l^m - sqrt((2l+1)/(2l-1) (l^2-m^2)) Pbar_{l-1}^m) / st
    for (int m = 0; m <= lmax; ++m) {
        for (int l = m; l <= lmax; ++l) {
            double prev = 0.0;
            if (l > m)
                prev = std::sqrt((2.0 * l + 1.0) / (2.0 * l - 1.0) * (double(l) * l - double(m) * m)) *
                       p[sh_index(l - 1, m)];
            dp[sh_index(l, m)] = (l * ct * p[sh_index(l, m)] - prev) / st;
        }
    }
    const double sqrt2 = std::sqrt(2.0);
    for (int l = 0; l <= lmax; ++l) {
        value[sh_index(l, 0)] = p[sh_index(l, 0)];
        d_theta[sh_index(l, 0)] = dp[sh_index(l, 0)];
        d_phi[sh_index(l, 0)] = 0.0;
    }
    for (int m = 1; m <= lmax; ++m) {
        const double c = std::cos(m * phi), s = std::sin(m * phi);
        for (int l = m; l <= lmax; ++l) {
            const int ip = sh_index(l, m), in = sh_index(l, -m);
            value[ip] = sqrt2 * p[ip] * c;
            value[in] = sqrt2 * p[ip] * s;
            d_theta[ip] = sqrt2 * dp[ip] * c;
            d_theta[in] = sqrt2 * dp[ip] * s;
            d_phi[ip] = -m * sqrt2 * p[ip] * s;
            d_phi[in] = m * sqrt2 * p[ip] * c;
        }
    }
}

ShExpansion::ShExpansion(int lmax, std::vector<double> coeffs) : lmax_(lmax), coeffs_(std::move(coeffs))
{
    if (lmax < 0 || coeffs_.size() != static_cast<std::size_t>(sh_count(lmax)))
        throw Error(Errc::InvalidArgument, "coefficient count does not match (lmax+1)^2");
}

double ShExpansion::value(double theta, double phi) const
{
    if (lmax_ < 0)
        return 0.0;
    std::vector<double> y(coeffs_.size());
    real_sh(lmax_, theta, phi, y);
    double sum = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i)
        sum += coeffs_[i] * y[i];
    return sum;
}

ShExpansion::ValueAndGradient ShExpansion::value_and_derivatives(double theta, double phi) const
{
    if (lmax_ < 0)
        return {0.0, 0.0, 0.0};
    const std::size_t n = coeffs_.size();
    std::vector<double> y(n), yt(n), yp(n);
    real_sh_with_derivatives(lmax_, theta, phi, y, yt, yp);
    ValueAndGradient out{0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        out.value += coeffs_[i] * y[i];
        out.d_theta += coeffs_[i] * yt[i];
        out.d_phi += coeffs_[i] * yp[i];
    }
    return out;
}

ShExpansion ShExpansion::truncated(double rel_tol) const
{
    if (lmax_ < 0)
        return *this;
    double biggest = 0.0;
    for (double c : coeffs_)
        biggest = std::max(biggest, std::abs(c));
    int keep = 0;
    for (int l = 0; l <= lmax_; ++l)
        for (int m = -l; m <= l; ++m)
            if (std::abs(coeffs_[sh_index(l, m)]) > rel_tol * biggest)
                keep = l;
    return ShExpansion(keep, std::vector<double>(coeffs_.begin(), coeffs_.begin() + sh_count(keep)));
}

} // namespace rfe
