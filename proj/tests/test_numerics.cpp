#include "rfe/numerics.hpp"
#include "rfe/spherical_harmonics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace rfe;

TEST_CASE("gauss-legendre integrates polynomials up to degree 2n-1")
{
    for (int n : {1, 2, 5, 16, 33}) {
        const GaussRule& g = gauss_legendre(n);
        for (int d = 0; d <= 2 * n - 1; ++d) {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                s += g.weights[i] * std::pow(g.nodes[i], d);
            const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-14));
        }
    }
}

TEST_CASE("gauss-legendre nodes are sorted, symmetric and weights positive")
{
    const GaussRule& g = gauss_legendre(24);
    for (int i = 0; i < 24; ++i) {
        CHECK(g.weights[i] > 0.0);
        CHECK(g.nodes[i] == doctest::Approx(-g.nodes[23 - i]).epsilon(1e-16));
        if (i > 0)
            CHECK(g.nodes[i] > g.nodes[i - 1]);
    }
}

TEST_CASE("mapped rule integrates exp on an interval")
{
    const GaussRule g = gauss_legendre(20, 0.5, 3.0);
    double s = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i)
        s += g.weights[i] * std::exp(g.nodes[i]);
    CHECK(s == doctest::Approx(std::exp(3.0) - std::exp(0.5)).epsilon(1e-14));
}

TEST_CASE("frame_with_axis is orthonormal with the axis last")
{
    std::mt19937_64 rng(4);
    std::normal_distribution<double> n01;
    for (int t = 0; t < 20; ++t) {
        const Point ax = Point(n01(rng), n01(rng), n01(rng)).normalized();
        const Eigen::Matrix3d f = frame_with_axis(ax);
        CHECK((f.transpose() * f - Eigen::Matrix3d::Identity()).norm() < 1e-14);
        CHECK((f.col(2) - ax).norm() < 1e-15);
    }
}

TEST_CASE("compensated sum recovers cancelled small terms")
{
    CompensatedSum s;
    s.add(1.0);
    for (int i = 0; i < 1000; ++i)
        s.add(1e-17);
    s.add(-1.0);
    CHECK(s.value() == doctest::Approx(1e-14).epsilon(1e-10));
}

TEST_CASE("parallel_for covers every index once regardless of thread count")
{
    for (int threads : {1, 3, 8}) {
        std::vector<int> hits(101, 0);
        parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
        for (int h : hits)
            CHECK(h == 1);
    }
}

TEST_CASE("real spherical harmonics are orthonormal under a product rule")
{
    const int lmax = 6, n = 12;
    const GaussRule& g = gauss_legendre(n);
    std::vector<double> gram(sh_count(lmax) * sh_count(lmax), 0.0);
    std::vector<double> y(sh_count(lmax));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2 * n; ++j) {
            const double phi = pi * j / n;
            real_sh(lmax, std::acos(g.nodes[i]), phi, y);
            const double w = g.weights[i] * pi / n;
            for (std::size_t p = 0; p < y.size(); ++p)
                for (std::size_t q = 0; q < y.size(); ++q)
                    gram[p * y.size() + q] += w * y[p] * y[q];
        }
    for (std::size_t p = 0; p < y.size(); ++p)
        for (std::size_t q = 0; q < y.size(); ++q)
            CHECK(gram[p * y.size() + q] == doctest::Approx(p == q ? 1.0 : 0.0).epsilon(1e-13));
}

TEST_CASE("harmonic derivatives agree with central differences")
{
    const int lmax = 5;
    const double th = 1.1, ph = 0.7, h = 1e-6;
    std::vector<double> y(sh_count(lmax)), yt(y.size()), yp(y.size()), a(y.size()), b(y.size());
    real_sh_with_derivatives(lmax, th, ph, y, yt, yp);
    real_sh(lmax, th + h, ph, a);
    real_sh(lmax, th - h, ph, b);
    for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(yt[k] == doctest::Approx((a[k] - b[k]) / (2 * h)).epsilon(1e-7));
    real_sh(lmax, th, ph + h, a);
    real_sh(lmax, th, ph - h, b);
    for (std::size_t k = 0; k < y.size(); ++k)
        CHECK(yp[k] == doctest::Approx((a[k] - b[k]) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("Y00 is the constant 1/(2 sqrt(pi)) and Y10 is sqrt(3/4pi) cos(theta)")
{
    std::vector<double> y(sh_count(1));
    real_sh(1, 0.4, 2.0, y);
    CHECK(y[0] == doctest::Approx(0.5 / std::sqrt(pi)).epsilon(1e-15));
    CHECK(y[sh_index(1, 0)] == doctest::Approx(std::sqrt(3.0 / (4.0 * pi)) * std::cos(0.4)).epsilon(1e-15));
}
