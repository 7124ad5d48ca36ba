#include "rfe/symbol_calculus.hpp"

#include "rfe/error.hpp"
#include "rfe/numerics.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace rfe {

namespace {

int degree(const MultiIndex& alpha) { return std::accumulate(alpha.begin(), alpha.end(), 0); }

double monomial(const MultiIndex& alpha, std::span<const double> xi)
{
    double v = 1.0;
    for (std::size_t i = 0; i < alpha.size(); ++i)
        for (int k = 0; k < alpha[i]; ++k)
            v *= xi[i];
    return v;
}

std::vector<Complex> trim(std::vector<Complex> c)
{
    while (c.size() > 1 && c.back() == Complex(0.0))
        c.pop_back();
    return c;
}

} // namespace

SymbolPoly::SymbolPoly(int dimension, int order, std::map<MultiIndex, double> coefficients)
    : dimension_(dimension), order_(order), coeffs_(std::move(coefficients))
{
    if (dimension_ < 2)
        throw Error(Errc::InvalidSymbol, "dimension must be at least 2");
    if (order_ < 0)
        throw Error(Errc::InvalidSymbol, "order must be nonnegative");
    if (order_ % 2 != 0)
        throw Error(Errc::OrderParity, "symbol order " + std::to_string(order_) + " is odd");
    bool principal = false;
    for (auto it = coeffs_.begin(); it != coeffs_.end();) {
        const auto& [alpha, c] = *it;
        if (static_cast<int>(alpha.size()) != dimension_)
            throw Error(Errc::DimensionMismatch, "multi-index length differs from dimension");
        if (std::any_of(alpha.begin(), alpha.end(), [](int k) { return k < 0; }))
            throw Error(Errc::InvalidSymbol, "negative multi-index entry");
        if (degree(alpha) > order_)
            throw Error(Errc::InvalidSymbol, "term degree exceeds symbol order");
        if (c == 0.0) {
            it = coeffs_.erase(it);
            continue;
        }
        principal = principal || degree(alpha) == order_;
        ++it;
    }
    if (!principal)
        throw Error(Errc::InvalidSymbol, "no nonzero coefficient of top order");
}

SymbolPoly SymbolPoly::constant(int dimension, double c)
{
    return SymbolPoly(dimension, 0, {{MultiIndex(dimension, 0), c}});
}

SymbolPoly SymbolPoly::shifted_laplacian(int dimension, double shift)
{
    std::map<MultiIndex, double> terms;
    for (int i = 0; i < dimension; ++i) {
        MultiIndex alpha(dimension, 0);
        alpha[i] = 2;
        terms[alpha] = 1.0;
    }
    if (shift != 0.0)
        terms[MultiIndex(dimension, 0)] = shift;
    return SymbolPoly(dimension, 2, std::move(terms));
}

double SymbolPoly::evaluate(std::span<const double> xi) const
{
    if (static_cast<int>(xi.size()) != dimension_)
        throw Error(Errc::DimensionMismatch, "xi has wrong dimension");
    double sum = 0.0;
    for (const auto& [alpha, c] : coeffs_)
        sum += c * monomial(alpha, xi);
    return sum;
}

std::vector<Complex> SymbolPoly::normal_polynomial(std::span<const double> xi_prime) const
{
    if (static_cast<int>(xi_prime.size()) != dimension_ - 1)
        throw Error(Errc::DimensionMismatch, "xi' must have dimension n-1");
    std::vector<Complex> out(order_ + 1, 0.0);
    for (const auto& [alpha, c] : coeffs_) {
        double v = c;
        for (int i = 0; i < dimension_ - 1; ++i)
            for (int k = 0; k < alpha[i]; ++k)
                v *= xi_prime[i];
        out[alpha[dimension_ - 1]] += v;
    }
    return out;
}

SymbolPoly SymbolPoly::operator*(const SymbolPoly& other) const
{
    if (other.dimension_ != dimension_)
        throw Error(Errc::DimensionMismatch, "cannot multiply symbols of different dimension");
    std::map<MultiIndex, double> terms;
    for (const auto& [a, ca] : coeffs_)
        for (const auto& [b, cb] : other.coeffs_) {
            MultiIndex sum(dimension_);
            for (int i = 0; i < dimension_; ++i)
                sum[i] = a[i] + b[i];
            terms[sum] += ca * cb;
        }
    return SymbolPoly(dimension_, order_ + other.order_, std::move(terms));
}

OrderInfo derive_orders(int mu, int nu, int n)
{
    if (n < 2)
        throw Error(Errc::InvalidArgument, "dimension must be at least 2");
    if (mu < 0)
        throw Error(Errc::InvalidArgument, "mu must be nonnegative");
    if (mu >= nu)
        throw Error(Errc::NotSmaller, "order of P must be smaller than order of Q");
    if ((nu - mu) % 2 != 0)
        throw Error(Errc::OrderParity, "nu - mu must be even");
    OrderInfo info;
    info.mu = mu;
    info.nu = nu;
    info.a = (nu - mu) / 2;
    info.gamma = n + mu - nu;
    info.log_singular = (n % 2 == 0) && nu > n;
    return info;
}

OrderInfo derive_orders(const SymbolPoly& p, const SymbolPoly& q, int n)
{
    if (p.dimension() != n || q.dimension() != n)
        throw Error(Errc::DimensionMismatch, "symbol dimension differs from n");
    return derive_orders(p.order(), q.order(), n);
}

std::vector<std::vector<double>> sphere_directions(int dim, int count)
{
    if (dim < 1 || count < 1)
        throw Error(Errc::InvalidArgument, "sphere_directions needs dim >= 1 and count >= 1");
    std::vector<std::vector<double>> out;
    if (dim == 1) {
        out.push_back({1.0});
        out.push_back({-1.0});
        return out;
    }
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * pi * (i + 0.5) / count;
            out.push_back({std::cos(t), std::sin(t)});
        }
        return out;
    }
    if (dim == 3) {
        for (const Point& p : fibonacci_sphere(count))
            out.push_back({p.x(), p.y(), p.z()});
        return out;
    }
    std::mt19937_64 rng(20240917);
    std::normal_distribution<double> gauss;
    for (int i = 0; i < count; ++i) {
        std::vector<double> v(dim);
        double norm = 0.0;
        for (auto& x : v) {
            x = gauss(rng);
            norm += x * x;
        }
        norm = std::sqrt(norm);
        for (auto& x : v)
            x /= norm;
        out.push_back(std::move(v));
    }
    return out;
}

MdEllipticity check_md_ellipticity(const SymbolPoly& q, std::span<const double> radii, int directions, double eps0)
{
    if (radii.empty() || !std::is_sorted(radii.begin(), radii.end()) ||
        std::adjacent_find(radii.begin(), radii.end()) != radii.end())
        throw Error(Errc::InvalidArgument, "radii must be strictly increasing");
    if (radii.back() < 1e3)
        throw Error(Errc::InvalidArgument, "largest radius must be at least 1e3");
    if (directions < 50)
        throw Error(Errc::InvalidArgument, "at least 50 directions are required");

    const int n = q.dimension(), nu = q.order();
    MdEllipticity out;
    double worst = 0.0;
    auto visit = [&](const std::vector<double>& xi) {
        ++out.sample_count;
        double norm2 = 0.0;
        for (double v : xi)
            norm2 += v * v;
        const double weight = std::pow(1.0 + norm2, 0.5 * nu);
        const double value = std::abs(q.evaluate(xi));
        if (value == 0.0) {
            if (!out.zero_sample)
                out.zero_sample = xi;
            worst = std::numeric_limits<double>::infinity();
            return;
        }
        worst = std::max(worst, weight / value);
    };
    visit(std::vector<double>(n, 0.0));
    const auto dirs = sphere_directions(n, directions);
    for (double r : radii) {
        if (r == 0.0)
            continue;
        for (const auto& d : dirs) {
            std::vector<double> xi(n);
            for (int i = 0; i < n; ++i)
                xi[i] = r * d[i];
            visit(xi);
        }
    }
    out.worst_ratio = worst;
    out.md_elliptic = !out.zero_sample && std::isfinite(worst) && 1.0 / worst >= eps0;
    return out;
}

Complex poly_eval(std::span<const Complex> coeffs, Complex z)
{
    Complex acc = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;)
        acc = acc * z + coeffs[i];
    return acc;
}

std::vector<Complex> polynomial_roots(std::span<const Complex> coeffs_in)
{
    const std::vector<Complex> coeffs = trim({coeffs_in.begin(), coeffs_in.end()});
    const int d = static_cast<int>(coeffs.size()) - 1;
    if (d < 1)
        return {};
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 1; i < d; ++i)
        companion(i, i - 1) = 1.0;
    for (int i = 0; i < d; ++i)
        companion(i, d - 1) = -coeffs[i] / coeffs[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    std::vector<Complex> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + d);

    // Newton polish; skipped where the derivative nearly vanishes (multiple roots).
    std::vector<Complex> deriv(d);
    for (int i = 1; i <= d; ++i)
        deriv[i - 1] = coeffs[i] * static_cast<double>(i);
    for (auto& z : roots) {
        for (int it = 0; it < 3; ++it) {
            const Complex f = poly_eval(coeffs, z), df = poly_eval(deriv, z);
            if (std::abs(df) < 1e-8 * (1.0 + std::abs(f)) * std::abs(coeffs[d]))
                break;
            const Complex step = f / df;
            if (!(std::abs(step) < 1e-6 * (1.0 + std::abs(z))))
                break;
            z -= step;
        }
    }
    return roots;
}

UpperRoots upper_half_roots(const SymbolPoly& q, std::span<const double> xi_prime)
{
    const std::vector<Complex> poly = q.normal_polynomial(xi_prime);
    const int nu = q.order();
    if (poly[nu] == Complex(0.0))
        throw Error(Errc::WrongCount, "q(xi', z) drops degree in z; the boundary is characteristic");
    const std::vector<Complex> roots = polynomial_roots(poly);
    UpperRoots out;
    for (const Complex& z : roots) {
        if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z)))
            throw Error(Errc::RealRoot, "q(xi', z) has a real root near z = " + std::to_string(z.real()));
        if (z.imag() > 0.0)
            out.roots.push_back(z);
    }
    if (static_cast<int>(out.roots.size()) != nu / 2)
        throw Error(Errc::WrongCount, std::to_string(out.roots.size()) + " roots in the upper half plane, expected " +
                                          std::to_string(nu / 2));
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t j = i + 1; j < roots.size(); ++j)
            if (std::abs(roots[i] - roots[j]) < 1e-8 * std::max({1.0, std::abs(roots[i]), std::abs(roots[j])}))
                out.clustered = true;
    std::sort(out.roots.begin(), out.roots.end(),
              [](Complex x, Complex y) { return std::pair(x.real(), x.imag()) < std::pair(y.real(), y.imag()); });
    return out;
}

PolyDivision poly_divmod(std::span<const Complex> numerator, std::span<const Complex> monic_divisor)
{
    const int k = static_cast<int>(monic_divisor.size()) - 1;
    if (k < 0 || monic_divisor.back() != Complex(1.0))
        throw Error(Errc::InvalidArgument, "divisor must be monic");
    std::vector<Complex> rem(numerator.begin(), numerator.end());
    const int dn = static_cast<int>(rem.size()) - 1;
    PolyDivision out;
    if (dn >= k) {
        out.quotient.assign(dn - k + 1, 0.0);
        for (int i = dn; i >= k; --i) {
            const Complex c = rem[i];
            out.quotient[i - k] = c;
            for (int j = 0; j <= k; ++j)
                rem[i - k + j] -= c * monic_divisor[j];
        }
    }
    rem.resize(k, 0.0);
    out.remainder = std::move(rem);
    return out;
}

BoundarySymbol::BoundarySymbol(int order, CoefficientFn coefficients) : order_(order), fn_(std::move(coefficients))
{
    if (order_ < 0)
        throw Error(Errc::InvalidSymbol, "boundary symbol order must be nonnegative");
    if (!fn_)
        throw Error(Errc::InvalidSymbol, "boundary symbol needs a coefficient function");
}

BoundarySymbol BoundarySymbol::from_polynomial(int dimension, int order, const std::map<MultiIndex, double>& terms)
{
    std::map<MultiIndex, double> principal;
    for (const auto& [alpha, c] : terms) {
        if (static_cast<int>(alpha.size()) != dimension)
            throw Error(Errc::DimensionMismatch, "boundary multi-index length differs from dimension");
        if (degree(alpha) > order)
            throw Error(Errc::InvalidSymbol, "boundary term degree exceeds its order");
        if (degree(alpha) == order && c != 0.0)
            principal[alpha] = c;
    }
    if (principal.empty())
        throw Error(Errc::InvalidSymbol, "boundary symbol has no principal part");
    return BoundarySymbol(order, [dimension, order, principal](std::span<const double> xi_prime) {
        std::vector<Complex> out(order + 1, 0.0);
        for (const auto& [alpha, c] : principal) {
            double v = c;
            for (int i = 0; i < dimension - 1; ++i)
                for (int k = 0; k < alpha[i]; ++k)
                    v *= xi_prime[i];
            out[alpha[dimension - 1]] += v;
        }
        return out;
    });
}

BoundarySymbol BoundarySymbol::normal_power(int j)
{
    return BoundarySymbol(j, [j](std::span<const double>) {
        std::vector<Complex> out(j + 1, 0.0);
        out[j] = 1.0;
        return out;
    });
}

std::vector<Complex> BoundarySymbol::scaled(std::span<const double> xi_prime) const
{
    double norm2 = 0.0;
    for (double v : xi_prime)
        norm2 += v * v;
    const double chi = std::sqrt(1.0 + norm2);
    std::vector<Complex> b = fn_(xi_prime);
    for (std::size_t j = 0; j < b.size(); ++j)
        b[j] *= std::pow(chi, -order_ + static_cast<int>(j));
    return b;
}

BoundarySymbol BoundarySymbol::operator*(Complex c) const
{
    auto fn = fn_;
    return BoundarySymbol(order_, [fn, c](std::span<const double> xi_prime) {
        auto b = fn(xi_prime);
        for (auto& v : b)
            v *= c;
        return b;
    });
}

double lopatinskii_determinant(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                               std::span<const double> xi_prime, bool* clustered)
{
    const int k = q.order() / 2;
    if (static_cast<int>(boundary_ops.size()) != k)
        throw Error(Errc::InvalidArgument, "need exactly order(q)/2 boundary operators");
    const UpperRoots roots = upper_half_roots(q, xi_prime);
    if (clustered)
        *clustered = roots.clustered;
    double norm2 = 0.0;
    for (double v : xi_prime)
        norm2 += v * v;
    const double chi = std::sqrt(1.0 + norm2);

    std::vector<Complex> q_plus{1.0};
    for (const Complex& tau : roots.roots) {
        std::vector<Complex> next(q_plus.size() + 1, 0.0);
        for (std::size_t i = 0; i < q_plus.size(); ++i) {
            next[i + 1] += q_plus[i];
            next[i] -= q_plus[i] * (tau / chi);
        }
        q_plus = std::move(next);
    }
    Eigen::MatrixXcd residues(k, k);
    for (int m = 0; m < k; ++m) {
        const auto rem = poly_divmod(boundary_ops[m].scaled(xi_prime), q_plus).remainder;
        for (int j = 0; j < k; ++j)
            residues(m, j) = rem[j];
    }
    return std::abs(residues.fullPivLu().determinant());
}

LopatinskiiBounds lopatinskii_check(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                                    std::span<const std::vector<double>> samples)
{
    if (samples.empty())
        throw Error(Errc::InvalidArgument, "no xi' samples");
    LopatinskiiBounds out;
    out.min_det = std::numeric_limits<double>::infinity();
    out.max_det = 0.0;
    for (const auto& xi : samples) {
        bool clustered = false;
        const double det = lopatinskii_determinant(q, boundary_ops, xi, &clustered);
        out.min_det = std::min(out.min_det, det);
        out.max_det = std::max(out.max_det, det);
        out.clustered_samples += clustered ? 1 : 0;
    }
    return out;
}

std::vector<std::vector<double>> xi_prime_samples(int n, std::span<const double> radii, int directions)
{
    std::vector<std::vector<double>> out;
    const auto dirs = sphere_directions(n - 1, directions);
    for (double r : radii) {
        if (r == 0.0) {
            out.emplace_back(n - 1, 0.0);
            continue;
        }
        for (const auto& d : dirs) {
            std::vector<double> xi(n - 1);
            for (int i = 0; i < n - 1; ++i)
                xi[i] = r * d[i];
            out.push_back(std::move(xi));
        }
    }
    return out;
}

EllipticityReport audit_symbol(const SymbolPoly& q, std::span<const BoundarySymbol> boundary_ops,
                               const AuditConfig& config)
{
    EllipticityReport report;
    const MdEllipticity md = check_md_ellipticity(q, config.md_radii, config.md_directions, config.eps0);
    report.md_elliptic = md.md_elliptic;
    report.worst_ratio = md.worst_ratio;
    report.zero_sample = md.zero_sample;
    if (!md.md_elliptic)
        report.notes.push_back(md.zero_sample ? "md-ellipticity failed: q vanishes on the sample grid"
                                              : "md-ellipticity failed: |q| <xi>^-nu below threshold");

    const auto samples = xi_prime_samples(q.dimension(), config.xi_prime_radii, config.xi_prime_directions);
    report.properly_elliptic = true;
    for (const auto& xi : samples) {
        RootCount count;
        count.xi_prime = xi;
        const auto poly = q.normal_polynomial(xi);
        for (const Complex& z : polynomial_roots(poly)) {
            if (std::abs(z.imag()) < 1e-10 * (1.0 + std::abs(z)))
                ++count.near_real;
            else if (z.imag() > 0.0)
                ++count.upper;
            else
                ++count.lower;
        }
        if (count.near_real > 0 || count.upper != q.order() / 2 || count.lower != q.order() / 2)
            report.properly_elliptic = false;
        report.upper_root_counts.push_back(std::move(count));
    }
    if (!report.properly_elliptic)
        report.notes.push_back("proper ellipticity failed: upper root count differs from nu/2 or a real root exists");

    if (report.properly_elliptic && static_cast<int>(boundary_ops.size()) == q.order() / 2) {
        const LopatinskiiBounds sl = lopatinskii_check(q, boundary_ops, samples);
        report.lopatinskii_evaluated = true;
        report.sl_min_det = sl.min_det;
        report.sl_max_det = sl.max_det;
        if (sl.clustered_samples > 0)
            report.notes.push_back("multiple roots of q(xi', z) at " + std::to_string(sl.clustered_samples) +
                                   " samples");
    } else if (static_cast<int>(boundary_ops.size()) != q.order() / 2) {
        report.notes.push_back("Shapiro-Lopatinskii not evaluated: expected " + std::to_string(q.order() / 2) +
                               " boundary operators");
    } else {
        report.notes.push_back("Shapiro-Lopatinskii not evaluated: symbol is not properly elliptic");
    }
    return report;
}

} // namespace rfe
