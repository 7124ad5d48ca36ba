#include "rfe/fields.hpp"

#include "rfe/error.hpp"

#include <array>
#include <cmath>

namespace rfe {

namespace {

double pow_int(double x, int k)
{
    double v = 1.0;
    for (int i = 0; i < k; ++i)
        v *= x;
    return v;
}

struct AtomEval {
    double value;
    Point grad;
    double lap;
};

AtomEval eval_atom(const SourceField::Atom& atom, const Point& x)
{
    return std::visit(
        [&](const auto& a) -> AtomEval {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, SourceField::Constant>) {
                return {a.value, Point::Zero(), 0.0};
            } else if constexpr (std::is_same_v<T, SourceField::ExpLinear>) {
                const double e = std::exp(a.rate.dot(x));
                return {e, e * a.rate, a.rate.squaredNorm() * e};
            } else if constexpr (std::is_same_v<T, SourceField::Gaussian>) {
                const Point d = x - a.center;
                const double w2 = a.width * a.width;
                const double g = std::exp(-d.squaredNorm() / w2);
                return {g, (-2.0 / w2) * g * d, (4.0 * d.squaredNorm() / (w2 * w2) - 6.0 / w2) * g};
            } else {
                AtomEval out{0.0, Point::Zero(), 0.0};
                for (const auto& [alpha, c] : a.terms) {
                    std::array<double, 3> p{}, dp{}, ddp{};
                    for (int i = 0; i < 3; ++i) {
                        const int k = alpha[i];
                        p[i] = pow_int(x[i], k);
                        dp[i] = k >= 1 ? k * pow_int(x[i], k - 1) : 0.0;
                        ddp[i] = k >= 2 ? k * (k - 1) * pow_int(x[i], k - 2) : 0.0;
                    }
                    out.value += c * p[0] * p[1] * p[2];
                    out.grad += c * Point(dp[0] * p[1] * p[2], p[0] * dp[1] * p[2], p[0] * p[1] * dp[2]);
                    out.lap += c * (ddp[0] * p[1] * p[2] + p[0] * ddp[1] * p[2] + p[0] * p[1] * ddp[2]);
                }
                return out;
            }
        },
        atom);
}

} // namespace

SourceField SourceField::exp_linear(const Point& direction, double a)
{
    const double len = direction.norm();
    if (!(len > 0.0))
        throw Error(Errc::InvalidArgument, "exp_linear direction must be nonzero");
    if (!(a > 0.0))
        throw Error(Errc::InvalidArgument, "exp_linear rate must be positive");
    return SourceField(ExpLinear{(a / len) * direction});
}

SourceField SourceField::gaussian(const Point& center, double width)
{
    if (!(width > 0.0))
        throw Error(Errc::InvalidArgument, "gaussian width must be positive");
    return SourceField(Gaussian{center, width});
}

SourceField SourceField::polynomial(std::map<MultiIndex, double> terms)
{
    for (const auto& [alpha, c] : terms)
        if (alpha.size() != 3 || alpha[0] < 0 || alpha[1] < 0 || alpha[2] < 0)
            throw Error(Errc::InvalidArgument, "polynomial multi-indices must have three nonnegative entries");
    return SourceField(Polynomial{std::move(terms)});
}

double SourceField::value(const Point& x) const
{
    double v = 0.0;
    for (const auto& t : terms_)
        v += t.scale * eval_atom(t.atom, x).value;
    return v;
}

Point SourceField::gradient(const Point& x) const
{
    Point g = Point::Zero();
    for (const auto& t : terms_)
        g += t.scale * eval_atom(t.atom, x).grad;
    return g;
}

double SourceField::laplacian(const Point& x) const
{
    double v = 0.0;
    for (const auto& t : terms_)
        v += t.scale * eval_atom(t.atom, x).lap;
    return v;
}

SourceField SourceField::operator+(const SourceField& other) const
{
    SourceField out = *this;
    out.terms_.insert(out.terms_.end(), other.terms_.begin(), other.terms_.end());
    return out;
}

SourceField SourceField::operator*(double s) const
{
    SourceField out = *this;
    for (auto& t : out.terms_)
        t.scale *= s;
    return out;
}

bool SourceField::is_zero() const
{
    for (const auto& t : terms_) {
        if (t.scale == 0.0)
            continue;
        if (const auto* c = std::get_if<Constant>(&t.atom); c && c->value == 0.0)
            continue;
        if (const auto* p = std::get_if<Polynomial>(&t.atom)) {
            bool all_zero = true;
            for (const auto& [alpha, c] : p->terms)
                all_zero = all_zero && c == 0.0;
            if (all_zero)
                continue;
        }
        return false;
    }
    return true;
}

bool SourceField::annihilated_by_q(double a) const
{
    for (const auto& t : terms_) {
        if (t.scale == 0.0)
            continue;
        const auto* e = std::get_if<ExpLinear>(&t.atom);
        if (!e || std::abs(e->rate.norm() - a) > 1e-12 * a)
            return false;
    }
    return true;
}

TestFunction TestFunction::poly_bump(const Point& center, double radius, int power)
{
    if (!(radius > 0.0) || power < 3)
        throw Error(Errc::InvalidArgument, "poly_bump needs radius > 0 and power >= 3");
    TestFunction t;
    t.kind_ = Kind::PolyBump;
    t.center_ = center;
    t.support_ = radius;
    t.power_ = power;
    return t;
}

TestFunction TestFunction::smooth_bump(const Point& center, double radius)
{
    if (!(radius > 0.0))
        throw Error(Errc::InvalidArgument, "smooth_bump needs radius > 0");
    TestFunction t;
    t.kind_ = Kind::SmoothBump;
    t.center_ = center;
    t.support_ = radius;
    return t;
}

TestFunction TestFunction::plateau(const Point& center, double inner, double outer)
{
    if (!(inner > 0.0) || !(outer > inner))
        throw Error(Errc::InvalidArgument, "plateau needs 0 < inner < outer");
    TestFunction t;
    t.kind_ = Kind::Plateau;
    t.center_ = center;
    t.inner_ = inner;
    t.support_ = outer;
    return t;
}

TestFunction::Profile TestFunction::profile(double r) const
{
    if (r >= support_)
        return {0.0, 0.0, 0.0};
    const double R2 = support_ * support_;
    switch (kind_) {
    case Kind::PolyBump: {
        const int k = power_;
        const double u = 1.0 - r * r / R2;
        const double f = pow_int(u, k);
        const double h = -2.0 * k * pow_int(u, k - 1) / R2;
        const double fpp = h + 4.0 * k * (k - 1) * r * r * pow_int(u, k - 2) / (R2 * R2);
        return {f, h, fpp};
    }
    case Kind::SmoothBump: {
        const double u = 1.0 - r * r / R2;
        const double f = std::exp(1.0 - 1.0 / u);
        const double h = -2.0 * f / (R2 * u * u);
        const double fpp = h + 4.0 * r * r / (R2 * R2) * f * (1.0 / (u * u * u * u) - 2.0 / (u * u * u));
        return {f, h, fpp};
    }
    case Kind::Plateau: {
        if (r <= inner_)
            return {1.0, 0.0, 0.0};
        const double width = support_ - inner_;
        const double t = (r - inner_) / width;
        // f = A / (A + B) with A = E(1 - t), B = E(t), E(s) = exp(-1/s)
        auto E = [](double s) { return std::exp(-1.0 / s); };
        auto dE = [&](double s) { return E(s) / (s * s); };
        auto ddE = [&](double s) { return E(s) * (1.0 / (s * s * s * s) - 2.0 / (s * s * s)); };
        const double A = E(1.0 - t), B = E(t);
        const double Ap = -dE(1.0 - t), Bp = dE(t);
        const double App = ddE(1.0 - t), Bpp = ddE(t);
        const double S = A + B;
        const double N = Ap * B - A * Bp;
        const double Np = App * B - A * Bpp;
        const double df_dt = N / (S * S);
        const double d2f_dt2 = (Np * S - 2.0 * N * (Ap + Bp)) / (S * S * S);
        return {A / S, df_dt / width / r, d2f_dt2 / (width * width)};
    }
    }
    return {0.0, 0.0, 0.0};
}

double TestFunction::value(const Point& x) const { return profile((x - center_).norm()).f; }

Point TestFunction::gradient(const Point& x) const
{
    const Point d = x - center_;
    return profile(d.norm()).h * d;
}

double TestFunction::laplacian(const Point& x) const
{
    const Profile p = profile((x - center_).norm());
    return p.fpp + 2.0 * p.h;
}

} // namespace rfe
