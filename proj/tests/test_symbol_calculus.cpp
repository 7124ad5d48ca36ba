#include "rfe/error.hpp"
#include "rfe/symbol_calculus.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfe;

namespace {

SymbolPoly shifted_laplacian_squared(int n) { return SymbolPoly::shifted_laplacian(n, 1.0) * SymbolPoly::shifted_laplacian(n, 1.0); }

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an rfe::Error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("symbol construction rejects odd order, missing principal part and bad indices")
{
    CHECK(code_of([] { SymbolPoly(3, 1, {{{1, 0, 0}, 1.0}}); }) == Errc::OrderParity);
    CHECK(code_of([] { SymbolPoly(3, 2, {{{1, 0, 0}, 1.0}}); }) == Errc::InvalidSymbol);
    CHECK(code_of([] { SymbolPoly(3, 2, {{{2, 0}, 1.0}}); }) == Errc::DimensionMismatch);
}

TEST_CASE("symbol evaluation and products")
{
    const SymbolPoly q = SymbolPoly::shifted_laplacian(3, 1.0);
    const std::vector<double> xi{1.0, 2.0, -0.5};
    CHECK(q.evaluate(xi) == doctest::Approx(1.0 + 4.0 + 0.25 + 1.0));
    const SymbolPoly q2 = shifted_laplacian_squared(3);
    CHECK(q2.order() == 4);
    CHECK(q2.evaluate(xi) == doctest::Approx(6.25 * 6.25));
}

TEST_CASE("derive_orders on the worked example and its variants")
{
    const SymbolPoly p = SymbolPoly::constant(3, 1.0);
    const OrderInfo o = derive_orders(p, SymbolPoly::shifted_laplacian(3, 1.0), 3);
    CHECK(o == OrderInfo{0, 2, 1, 1, false});

    const OrderInfo o4 = derive_orders(p, shifted_laplacian_squared(3), 3);
    CHECK(o4.a == 2);
    CHECK(o4.gamma == -1);

    const OrderInfo o2 = derive_orders(SymbolPoly::constant(2, 1.0), SymbolPoly::shifted_laplacian(2, 1.0), 2);
    CHECK(o2.gamma == 0);
    CHECK_FALSE(o2.log_singular);

    CHECK(derive_orders(0, 6, 4).log_singular);
    CHECK(code_of([] { derive_orders(2, 2, 3); }) == Errc::NotSmaller);
    CHECK(code_of([] { derive_orders(0, 3, 3); }) == Errc::OrderParity);
}

TEST_CASE("derive_orders satisfies gamma + nu = n + mu on random valid inputs")
{
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> half(0, 6), dim(2, 7);
    for (int t = 0; t < 100; ++t) {
        const int mu = 2 * half(rng);
        const int nu = mu + 2 * (1 + half(rng));
        const int n = dim(rng);
        const OrderInfo o = derive_orders(mu, nu, n);
        CHECK(o.gamma + o.nu == n + o.mu);
        CHECK(2 * o.a == nu - mu);
        CHECK(o.log_singular == (n % 2 == 0 && nu > n));
    }
}

TEST_CASE("md-ellipticity: I - Lap passes, Lap fails at the origin")
{
    const MdEllipticity good = check_md_ellipticity(SymbolPoly::shifted_laplacian(3, 1.0));
    CHECK(good.md_elliptic);
    CHECK(std::isfinite(good.worst_ratio));
    CHECK_FALSE(good.zero_sample);

    const MdEllipticity bad = check_md_ellipticity(SymbolPoly::shifted_laplacian(3, 0.0));
    CHECK_FALSE(bad.md_elliptic);
    REQUIRE(bad.zero_sample);
    for (double v : *bad.zero_sample)
        CHECK(v == 0.0);
}

TEST_CASE("md-ellipticity worst ratio of (|xi|^2+1)^2 matches a direct evaluation")
{
    const SymbolPoly q = shifted_laplacian_squared(3);
    const MdEllipticity md = check_md_ellipticity(q);
    CHECK(md.md_elliptic);
    // oracle: <xi>^4 / |q| on the same shells, evaluated independently
    double worst = 0.0;
    for (double r : default_md_radii)
        for (const auto& w : sphere_directions(3, 64)) {
            std::vector<double> xi{r * w[0], r * w[1], r * w[2]};
            const double s = 1.0 + r * r;
            worst = std::max(worst, s * s / std::abs(q.evaluate(xi)));
        }
    CHECK(md.worst_ratio <= 1.0 + 1e-12);
    CHECK(md.worst_ratio == doctest::Approx(std::max(worst, 1.0)).epsilon(1e-12));
}

TEST_CASE("md-ellipticity validates its sampling plan")
{
    const SymbolPoly q = SymbolPoly::shifted_laplacian(3, 1.0);
    const std::vector<double> small{1.0, 10.0};
    const std::vector<double> unsorted{1.0, 1000.0, 10.0};
    CHECK(code_of([&] { check_md_ellipticity(q, small); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { check_md_ellipticity(q, unsorted); }) == Errc::InvalidArgument);
    CHECK(code_of([&] { check_md_ellipticity(q, default_md_radii, 20); }) == Errc::InvalidArgument);
}

TEST_CASE("upper half roots against the quadratic formula")
{
    const SymbolPoly q = SymbolPoly::shifted_laplacian(3, 1.0);
    // z^2 + |xi'|^2 + 1 = 0  =>  z = i sqrt(|xi'|^2 + 1)
    for (const std::vector<double>& xp : {std::vector<double>{1.0, 0.0}, {0.0, 0.0}, {3.0, -4.0}}) {
        const UpperRoots r = upper_half_roots(q, xp);
        REQUIRE(r.roots.size() == 1);
        const double expect = std::sqrt(xp[0] * xp[0] + xp[1] * xp[1] + 1.0);
        CHECK(r.roots[0].real() == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(r.roots[0].imag() == doctest::Approx(expect).epsilon(1e-12));
    }
    const std::vector<double> zero{0.0, 0.0};
    CHECK(code_of([&] { upper_half_roots(SymbolPoly::shifted_laplacian(3, 0.0), zero); }) == Errc::RealRoot);
}

TEST_CASE("roots of a real symbol come in conjugate pairs")
{
    const SymbolPoly q = shifted_laplacian_squared(3) * SymbolPoly::shifted_laplacian(3, 2.0);
    const std::vector<double> xp{0.3, -1.2};
    const auto all = polynomial_roots(q.normal_polynomial(xp));
    int up = 0, down = 0;
    for (const Complex& z : all)
        (z.imag() > 0 ? up : down) += 1;
    CHECK(up == 3);
    CHECK(down == 3);
    CHECK(upper_half_roots(q, xp).roots.size() == 3);
}

TEST_CASE("wrong upper root count is reported")
{
    // q = xi_1^2 + xi_2^2 + (z - i)^2-like asymmetry is impossible with real coefficients, so use an
    // order-2 symbol with real roots z = +-sqrt(xi_1^2 + 1): xi_1^2 - z^2 + 1
    const SymbolPoly q(3, 2, {{{2, 0, 0}, 1.0}, {{0, 0, 2}, -1.0}, {{0, 0, 0}, 1.0}});
    const std::vector<double> xp{0.5, 0.0};
    const Errc c = code_of([&] { upper_half_roots(q, xp); });
    CHECK((c == Errc::RealRoot || c == Errc::WrongCount));
}

TEST_CASE("polynomial division reconstructs the numerator")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const std::vector<Complex> num{Complex(1, 2), Complex(-3, 0.5), Complex(0.25, -1), Complex(2, 0), Complex(-1, 1)};
    const std::vector<Complex> den{Complex(0.5, -0.5), Complex(1, 1), Complex(1, 0)};
    const PolyDivision d = poly_divmod(num, den);
    for (int t = 0; t < 20; ++t) {
        const Complex z(u(rng), u(rng));
        const Complex lhs = poly_eval(num, z);
        const Complex rhs = poly_eval(d.quotient, z) * poly_eval(den, z) + poly_eval(d.remainder, z);
        CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
    }
}

TEST_CASE("Shapiro-Lopatinskii determinants")
{
    const SymbolPoly q = SymbolPoly::shifted_laplacian(3, 1.0);
    const auto samples = xi_prime_samples(3, std::vector<double>{0.0, 1.0, 10.0, 100.0, 1000.0}, 8);
    const std::vector<BoundarySymbol> dirichlet{BoundarySymbol::normal_power(0)};
    const LopatinskiiBounds b = lopatinskii_check(q, dirichlet, samples);
    CHECK(b.min_det == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(b.max_det == doctest::Approx(1.0).epsilon(1e-10));

    // b0 = -tau, b1 = 1 scales to z - tau / chi, which is q+ itself: remainder zero
    const BoundarySymbol factor(1, [](std::span<const double> xp) {
        const double tau = std::sqrt(xp[0] * xp[0] + xp[1] * xp[1] + 1.0);
        return std::vector<Complex>{Complex(0.0, -tau), Complex(1.0, 0.0)};
    });
    const std::vector<BoundarySymbol> own{factor};
    CHECK(lopatinskii_check(q, own, samples).min_det <= 1e-12);

    const SymbolPoly q2 = shifted_laplacian_squared(3);
    const std::vector<BoundarySymbol> pair{BoundarySymbol::normal_power(0), BoundarySymbol::normal_power(1)};
    const std::vector<double> origin{0.0, 0.0};
    CHECK(lopatinskii_determinant(q2, pair, origin) == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("Shapiro-Lopatinskii determinant scales linearly with a constant factor")
{
    const SymbolPoly q = shifted_laplacian_squared(3);
    const std::vector<double> xp{0.7, -0.2};
    const BoundarySymbol b0 = BoundarySymbol::normal_power(0);
    const BoundarySymbol b1 = BoundarySymbol::from_polynomial(3, 1, {{{0, 0, 1}, 1.0}, {{1, 0, 0}, 0.5}});
    const std::vector<BoundarySymbol> base{b0, b1};
    const std::vector<BoundarySymbol> scaled{b0, b1 * Complex(3.0, -4.0)};
    const double d0 = lopatinskii_determinant(q, base, xp);
    CHECK(d0 > 0.0);
    CHECK(lopatinskii_determinant(q, scaled, xp) == doctest::Approx(5.0 * d0).epsilon(1e-10));
}

TEST_CASE("full audit reproduces the worked example statements")
{
    const std::vector<BoundarySymbol> dirichlet{BoundarySymbol::normal_power(0)};
    const EllipticityReport good = audit_symbol(SymbolPoly::shifted_laplacian(3, 1.0), dirichlet);
    CHECK(good.md_elliptic);
    CHECK(good.properly_elliptic);
    REQUIRE(good.lopatinskii_evaluated);
    CHECK(good.sl_min_det == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(good.sl_min_det <= good.sl_max_det);
    for (const auto& c : good.upper_root_counts)
        CHECK(c.upper == 1);

    const EllipticityReport bad = audit_symbol(SymbolPoly::shifted_laplacian(3, 0.0), dirichlet);
    CHECK_FALSE(bad.md_elliptic);
}
