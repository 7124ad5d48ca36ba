#pragma once

#include <span>
#include <vector>

namespace rfe {

// Real orthonormal spherical harmonics on the unit sphere (no Condon-Shortley phase):
//   Y_l0 = Pbar_l^0(cos t),  Y_lm = sqrt2 Pbar_l^m cos(m phi),  Y_l,-m = sqrt2 Pbar_l^m sin(m phi)
// Coefficients are stored flat at index l*(l+1)+m.

inline constexpr int sh_index(int l, int m) { return l * (l + 1) + m; }
inline constexpr int sh_count(int lmax) { return (lmax + 1) * (lmax + 1); }

/// Values of all Y_lm, l <= lmax, at (theta, phi). `out` has sh_count(lmax) entries.
void real_sh(int lmax, double theta, double phi, std::span<double> out);

/// Values plus derivatives in theta and phi. theta must not be 0 or pi exactly.
void real_sh_with_derivatives(int lmax, double theta, double phi, std::span<double> value,
                              std::span<double> d_theta, std::span<double> d_phi);

/// A band-limited real function on the sphere.
class ShExpansion {
public:
    ShExpansion() = default;
    explicit ShExpansion(int lmax) : lmax_(lmax), coeffs_(sh_count(lmax), 0.0) {}
    ShExpansion(int lmax, std::vector<double> coeffs);

    int lmax() const { return lmax_; }
    std::span<const double> coeffs() const { return coeffs_; }
    std::span<double> coeffs() { return coeffs_; }
    double& operator()(int l, int m) { return coeffs_[sh_index(l, m)]; }
    double operator()(int l, int m) const { return coeffs_[sh_index(l, m)]; }

    double value(double theta, double phi) const;

    struct ValueAndGradient {
        double value;
        double d_theta;
        double d_phi;
    };
    ValueAndGradient value_and_derivatives(double theta, double phi) const;

    /// Drops trailing degrees whose coefficients are all below rel_tol * max |c|.
    ShExpansion truncated(double rel_tol) const;

private:
    int lmax_ = -1;
    std::vector<double> coeffs_;
};

} // namespace rfe
