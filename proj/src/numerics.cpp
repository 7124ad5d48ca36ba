#include "rfe/numerics.hpp"

#include "rfe/error.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

namespace rfe {

namespace {

// Legendre P_n(x) and P_n'(x) by the three-term recurrence, carried in extended precision so the
// rules come out correctly rounded in double.
std::pair<long double, long double> legendre_with_derivative(int n, long double x)
{
    long double p0 = 1.0L, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const long double p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return {p1, n * (x * p1 - p0) / (x * x - 1.0L)};
}

GaussRule compute_gauss_legendre(int n)
{
    GaussRule rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    if (n == 1) {
        rule.weights[0] = 2.0;
        return rule;
    }
    const long double pi_l = 3.141592653589793238462643383279502884L;
    for (int i = 0; i < n / 2; ++i) {
        long double x = std::cos(pi_l * (i + 0.75L) / (n + 0.5L));
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, dp] = legendre_with_derivative(n, x);
            const long double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-19L)
                break;
        }
        const long double dp = legendre_with_derivative(n, x).second;
        const double w = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
        rule.nodes[i] = static_cast<double>(-x);
        rule.nodes[n - 1 - i] = static_cast<double>(x);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        const long double dp = legendre_with_derivative(n, 0.0L).second;
        rule.weights[n / 2] = static_cast<double>(2.0L / (dp * dp));
    }
    return rule;
}

std::atomic<int> g_threads{1};

} // namespace

const GaussRule& gauss_legendre(int n)
{
    if (n < 1)
        throw Error(Errc::InvalidArgument, "Gauss rule needs at least one node");
    static std::mutex mutex;
    static std::map<int, GaussRule> cache;
    std::lock_guard lock(mutex);
    auto it = cache.find(n);
    if (it == cache.end())
        it = cache.emplace(n, compute_gauss_legendre(n)).first;
    return it->second;
}

GaussRule gauss_legendre(int n, double lo, double hi)
{
    const GaussRule& ref = gauss_legendre(n);
    GaussRule out;
    out.nodes.resize(n);
    out.weights.resize(n);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
        out.nodes[i] = mid + half * ref.nodes[i];
        out.weights[i] = half * ref.weights[i];
    }
    return out;
}

std::vector<Point> fibonacci_sphere(int count)
{
    std::vector<Point> pts;
    pts.reserve(count);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        pts.push_back(direction(z, golden * i));
    }
    return pts;
}

Eigen::Matrix3d frame_with_axis(const Point& axis)
{
    const Point e3 = axis.normalized();
    const Point helper = std::abs(e3.x()) < 0.9 ? Point::UnitX() : Point::UnitY();
    const Point e1 = (helper - helper.dot(e3) * e3).normalized();
    const Point e2 = e3.cross(e1);
    Eigen::Matrix3d m;
    m.col(0) = e1;
    m.col(1) = e2;
    m.col(2) = e3;
    return m;
}

void set_default_threads(int threads) { g_threads = std::max(1, threads); }
int default_threads() { return g_threads; }

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body)
{
    if (threads <= 0)
        threads = default_threads();
    const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::jthread> pool;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                const std::size_t lo = w * chunk, hi = std::min(n, lo + chunk);
                for (std::size_t i = lo; i < hi; ++i)
                    body(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    pool.clear();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

} // namespace rfe
