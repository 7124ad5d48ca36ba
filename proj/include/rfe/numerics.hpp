#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace rfe {

using Point = Eigen::Vector3d;

inline constexpr double pi = 3.14159265358979323846;

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Nodes in increasing order. Rules are cached per size.
const GaussRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped affinely to [lo, hi].
GaussRule gauss_legendre(int n, double lo, double hi);

/// Quasi-uniform points on the unit sphere (spherical Fibonacci lattice).
std::vector<Point> fibonacci_sphere(int count);

/// Unit direction from polar angle (via cos) and azimuth.
inline Point direction(double cos_theta, double phi)
{
    const double s = std::sqrt(std::max(0.0, 1.0 - cos_theta * cos_theta));
    return {s * std::cos(phi), s * std::sin(phi), cos_theta};
}

/// Orthonormal frame whose third column is `axis` (unit).
Eigen::Matrix3d frame_with_axis(const Point& axis);

/// Kahan-Babuska summation; order-dependent but deterministic.
class CompensatedSum {
public:
    void add(double v)
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v))
            comp_ += (sum_ - t) + v;
        else
            comp_ += (v - t) + sum_;
        sum_ = t;
    }
    void add(const CompensatedSum& other)
    {
        add(other.sum_);
        add(other.comp_);
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Runs body(i) for i in [0, n) on up to `threads` workers with static chunking.
/// Results must be written to per-index slots so the outcome does not depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body);

/// Process-wide default for parallel_for callers that do not pass a count.
void set_default_threads(int threads);
int default_threads();

} // namespace rfe
