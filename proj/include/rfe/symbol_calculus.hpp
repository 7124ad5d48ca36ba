#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace rfe {

using MultiIndex = std::vector<int>;
using Complex = std::complex<double>;

/// Constant-coefficient polynomial symbol p(xi) = sum_alpha c_alpha xi^alpha of even order.
class SymbolPoly {
public:
    /// Validates dimension >= 2, |alpha| <= order, nonzero principal part, even order.
    SymbolPoly(int dimension, int order, std::map<MultiIndex, double> coefficients);

    /// The symbol of the identity, p = c.
    static SymbolPoly constant(int dimension, double c);
    /// |xi|^2 + shift, i.e. the symbol of -Laplacian + shift.
    static SymbolPoly shifted_laplacian(int dimension, double shift);

    int dimension() const { return dimension_; }
    int order() const { return order_; }
    const std::map<MultiIndex, double>& coefficients() const { return coeffs_; }

    double evaluate(std::span<const double> xi) const;

    /// Coefficients c_0..c_order of z -> q(xi', z), the last variable taken as z.
    std::vector<Complex> normal_polynomial(std::span<const double> xi_prime) const;

    SymbolPoly operator*(const SymbolPoly& other) const;

private:
    int dimension_;
    int order_;
    std::map<MultiIndex, double> coeffs_;
};

struct OrderInfo {
    int mu = 0;
    int nu = 2;
    int a = 1;
    int gamma = 1;
    bool log_singular = false;

    friend bool operator==(const OrderInfo&, const OrderInfo&) = default;
};

/// Order bookkeeping for R = Q^{-1} P in dimension n.
OrderInfo derive_orders(const SymbolPoly& p, const SymbolPoly& q, int n);
/// Same from raw orders; used when no symbol objects exist.
OrderInfo derive_orders(int mu, int nu, int n);

struct MdEllipticity {
    bool md_elliptic = false;
    /// max over samples of <xi>^nu / |q(xi)|; infinite if q vanishes on a sample.
    double worst_ratio = 0.0;
    /// Set when q vanishes exactly at a sample (the ZeroOnGrid condition).
    std::optional<std::vector<double>> zero_sample;
    int sample_count = 0;
};

inline const std::vector<double> default_md_radii{1.0, 10.0, 100.0, 1000.0};

/// Samples |q(xi)| <xi>^{-nu} >= eps0 on shells |xi| = r for each radius and `directions`
/// quasi-uniform unit vectors, plus the single sample xi = 0. For x-independent symbols the
/// region "large |x| + |xi|" contains every bounded xi at large |x|, so xi = 0 is always audited.
MdEllipticity check_md_ellipticity(const SymbolPoly& q, std::span<const double> radii = default_md_radii,
                                   int directions = 64, double eps0 = 1e-8);

struct UpperRoots {
    std::vector<Complex> roots;
    /// Two roots closer than 1e-8 relative distance.
    bool clustered = false;
};

/// Roots of z -> q(xi', z) with positive imaginary part; exactly order/2 of them or WrongCount.
UpperRoots upper_half_roots(const SymbolPoly& q, std::span<const double> xi_prime);

/// All roots of a polynomial with coefficients c_0..c_d (c_d != 0), via companion eigenvalues.
std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs);

struct PolyDivision {
    std::vector<Complex> quotient;
    std::vector<Complex> remainder; ///< degree < divisor degree, padded to divisor degree
};

/// Long division by a monic divisor. Coefficients are stored lowest degree first.
PolyDivision poly_divmod(std::span<const Complex> numerator, std::span<const Complex> monic_divisor);

Complex poly_eval(std::span<const Complex> coeffs, Complex z);

/// Boundary symbol b_m(xi', z) = sum_j b_mj(xi') z^j of order rho_m, where b_mj is the principal
/// symbol of a tangential operator of order rho_m - j.
class BoundarySymbol {
public:
    using CoefficientFn = std::function<std::vector<Complex>(std::span<const double>)>;

    BoundarySymbol(int order, CoefficientFn coefficients);

    /// Principal part (terms of total degree == order) of a polynomial in (xi', z).
    static BoundarySymbol from_polynomial(int dimension, int order, const std::map<MultiIndex, double>& terms);
    /// D_n^j: the j-th normal derivative trace, symbol z^j.
    static BoundarySymbol normal_power(int j);

    int order() const { return order_; }
    std::vector<Complex> coefficients(std::span<const double> xi_prime) const { return fn_(xi_prime); }

    /// b_m(xi', z) = sum_j b_mj chi^{-rho_m + j} z^j with chi = (1 + |xi'|^2)^{1/2}.
    std::vector<Complex> scaled(std::span<const double> xi_prime) const;

    BoundarySymbol operator*(Complex c) const;

private:
    int order_;
    CoefficientFn fn_;
};

struct LopatinskiiBounds {
    double min_det = 0.0;
    double max_det = 0.0;
    int clustered_samples = 0;
};

/// |det(r_mj)| over samples, r_m the remainder of the scaled b_m modulo
/// q+(z) = prod_j (z - chi^{-1} tau_j). Requires exactly order(q)/2 boundary symbols.
LopatinskiiBounds lopatinskii_check(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                                    std::span<const std::vector<double>> xi_prime_samples);

/// |det| of the residue matrix at one xi' sample.
double lopatinskii_determinant(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                               std::span<const double> xi_prime, bool* clustered = nullptr);

/// Quasi-uniform unit vectors in R^dim (dim >= 1); deterministic.
std::vector<std::vector<double>> sphere_directions(int dim, int count);

/// Samples r * omega in R^{n-1} for the given radii; radius 0 contributes the origin once.
std::vector<std::vector<double>> xi_prime_samples(int n, std::span<const double> radii, int directions);

struct RootCount {
    std::vector<double> xi_prime;
    int upper = 0;
    int lower = 0;
    int near_real = 0;
};

/// Full audit of a symbol and its boundary operators.
struct EllipticityReport {
    bool md_elliptic = false;
    double worst_ratio = 0.0;
    std::optional<std::vector<double>> zero_sample;
    bool properly_elliptic = false;
    std::vector<RootCount> upper_root_counts;
    bool lopatinskii_evaluated = false;
    double sl_min_det = 0.0;
    double sl_max_det = 0.0;
    std::vector<std::string> notes;
};

struct AuditConfig {
    std::vector<double> md_radii = default_md_radii;
    int md_directions = 64;
    double eps0 = 1e-8;
    std::vector<double> xi_prime_radii{0.0, 1.0, 10.0, 100.0, 1000.0};
    int xi_prime_directions = 8;
};

EllipticityReport audit_symbol(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                               const AuditConfig& config = {});

} // namespace rfe
