#pragma once

#include "rfe/numerics.hpp"
#include "rfe/symbol_calculus.hpp"

#include <map>
#include <variant>
#include <vector>

namespace rfe {

/// f on and around the closed domain, drawn from analytic families so that the value,
/// gradient and Laplacian are exact. Linear combinations of family members are allowed.
class SourceField {
public:
    struct Constant {
        double value;
    };
    /// exp(b . x)
    struct ExpLinear {
        Point rate;
    };
    /// exp(-|x - c|^2 / w^2)
    struct Gaussian {
        Point center;
        double width;
    };
    struct Polynomial {
        std::map<MultiIndex, double> terms; ///< 3-component multi-indices
    };
    using Atom = std::variant<Constant, ExpLinear, Gaussian, Polynomial>;

    SourceField() = default;
    explicit SourceField(Atom atom) { terms_.push_back({1.0, std::move(atom)}); }

    static SourceField constant(double c) { return SourceField(Constant{c}); }
    /// exp(b . x) with b = a * direction / |direction|, so that (-Lap + a^2) f = 0.
    static SourceField exp_linear(const Point& direction, double a);
    static SourceField gaussian(const Point& center, double width);
    static SourceField polynomial(std::map<MultiIndex, double> terms);

    double value(const Point& x) const;
    Point gradient(const Point& x) const;
    double laplacian(const Point& x) const;
    /// (-Lap + a^2) f
    double apply_q(const Point& x, double a) const { return -laplacian(x) + a * a * value(x); }

    SourceField operator+(const SourceField& other) const;
    SourceField operator*(double s) const;
    friend SourceField operator*(double s, const SourceField& f) { return f * s; }

    struct Term {
        double scale;
        Atom atom;
    };
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const;
    /// True when every term is annihilated by -Lap + a^2 (ExpLinear with |b| = a, or zero).
    bool annihilated_by_q(double a) const;

private:
    std::vector<Term> terms_;
};

/// Compactly supported radial test function phi(x) = g(|x - center|) with analytic derivatives.
class TestFunction {
public:
    /// (1 - r^2/R^2)^power on r < R; C^{power-1}.
    static TestFunction poly_bump(const Point& center, double radius, int power);
    /// exp(1 - 1/(1 - r^2/R^2)) on r < R; C-infinity.
    static TestFunction smooth_bump(const Point& center, double radius);
    /// 1 on r <= inner, C-infinity transition to 0 at r = outer.
    static TestFunction plateau(const Point& center, double inner, double outer);

    double value(const Point& x) const;
    Point gradient(const Point& x) const;
    double laplacian(const Point& x) const;
    double apply_q(const Point& x, double a) const { return -laplacian(x) + a * a * value(x); }

    const Point& center() const { return center_; }
    /// phi vanishes outside the closed ball of this radius about center().
    double support_radius() const { return support_; }
    /// Radius where the profile stops being a single smooth piece (plateau edge), or 0.
    double inner_radius() const { return inner_; }

private:
    enum class Kind { PolyBump, SmoothBump, Plateau };

    struct Profile {
        double f;
        double h;   ///< f'(r) / r
        double fpp; ///< f''(r)
    };
    Profile profile(double r) const;

    Kind kind_ = Kind::PolyBump;
    Point center_ = Point::Zero();
    double support_ = 1.0;
    double inner_ = 0.0;
    int power_ = 4;
};

} // namespace rfe
