#pragma once

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <iosfwd>
#include <limits>

#include "lyapcert/errors.hpp"

namespace lyapcert {

// Directed rounding without touching the FPU mode. Each primitive computes the
// round-to-nearest result and recovers the sign of the rounding error with an
// error-free transformation (TwoSum, fma residual); exact results stay exact.
namespace rnd {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
// below this magnitude fma residuals may be inexact (subnormal range)
inline constexpr double kTiny = 0x1p-960;

inline double next_up(double x) { return std::nextafter(x, kInf); }
inline double next_down(double x) { return std::nextafter(x, -kInf); }

inline double add_down(double a, double b) {
    double s = a + b;
    if (std::isfinite(s)) {
        double bb = s - a;
        double e = (a - (s - bb)) + (b - bb);
        return e < 0 ? next_down(s) : s;
    }
    if (std::isnan(s)) return -kInf;
    if (s > 0 && std::isfinite(a) && std::isfinite(b)) return DBL_MAX;
    return s;
}

inline double add_up(double a, double b) {
    double s = a + b;
    if (std::isfinite(s)) {
        double bb = s - a;
        double e = (a - (s - bb)) + (b - bb);
        return e > 0 ? next_up(s) : s;
    }
    if (std::isnan(s)) return kInf;
    if (s < 0 && std::isfinite(a) && std::isfinite(b)) return -DBL_MAX;
    return s;
}

inline double sub_down(double a, double b) { return add_down(a, -b); }
inline double sub_up(double a, double b) { return add_up(a, -b); }

inline double mul_down(double a, double b) {
    if (a == 0 || b == 0) return 0.0;
    double p = a * b;
    if (std::isfinite(p)) {
        if (std::fabs(p) < kTiny) return next_down(p);
        return std::fma(a, b, -p) < 0 ? next_down(p) : p;
    }
    if (std::isnan(p)) return -kInf;
    if (p > 0 && std::isfinite(a) && std::isfinite(b)) return DBL_MAX;
    return p;
}

inline double mul_up(double a, double b) {
    if (a == 0 || b == 0) return 0.0;
    double p = a * b;
    if (std::isfinite(p)) {
        if (std::fabs(p) < kTiny) return next_up(p);
        return std::fma(a, b, -p) > 0 ? next_up(p) : p;
    }
    if (std::isnan(p)) return kInf;
    if (p < 0 && std::isfinite(a) && std::isfinite(b)) return -DBL_MAX;
    return p;
}

// b must be nonzero
inline double div_down(double a, double b) {
    if (a == 0) return 0.0;
    double q = a / b;
    if (std::isfinite(q) && std::isfinite(b)) {
        if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_down(q);
        double r = std::fma(-q, b, a);  // a - q*b exactly
        return (b > 0 ? r < 0 : r > 0) ? next_down(q) : q;
    }
    if (!std::isfinite(b) && std::isfinite(a)) return q <= 0 ? next_down(q) : q;
    if (std::isnan(q)) return -kInf;
    if (q > 0 && std::isfinite(a)) return DBL_MAX;
    return q;
}

inline double div_up(double a, double b) {
    if (a == 0) return 0.0;
    double q = a / b;
    if (std::isfinite(q) && std::isfinite(b)) {
        if (std::fabs(q) < kTiny || std::fabs(a) < kTiny) return next_up(q);
        double r = std::fma(-q, b, a);
        return (b > 0 ? r > 0 : r < 0) ? next_up(q) : q;
    }
    if (!std::isfinite(b) && std::isfinite(a)) return q >= 0 ? next_up(q) : q;
    if (std::isnan(q)) return kInf;
    if (q < 0 && std::isfinite(a)) return -DBL_MAX;
    return q;
}

inline double sqrt_down(double x) {
    if (x <= 0) return 0.0;
    double r = std::sqrt(x);
    if (!std::isfinite(r)) return DBL_MAX;
    if (x < kTiny) return next_down(r);
    return std::fma(-r, r, x) < 0 ? next_down(r) : r;
}

inline double sqrt_up(double x) {
    if (x <= 0) return 0.0;
    double r = std::sqrt(x);
    if (!std::isfinite(r)) return r;
    if (x < kTiny) return next_up(r);
    return std::fma(-r, r, x) > 0 ? next_up(r) : r;
}

// widen by n ulps; used for libm results carrying an accuracy claim
inline double ulps_down(double x, int n) {
    for (int i = 0; i < n; ++i) x = next_down(x);
    return x;
}
inline double ulps_up(double x, int n) {
    for (int i = 0; i < n; ++i) x = next_up(x);
    return x;
}

}  // namespace rnd

// libm accuracy claim (ulps) applied to exp, log, pow, sin, cos
inline constexpr int kLibmUlps = 2;

class Interval {
public:
    constexpr Interval() : lo_(0.0), hi_(0.0) {}
    constexpr explicit Interval(double x) : lo_(x), hi_(x) {}
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (!(lo <= hi)) throw DomainError("interval with lo > hi or NaN endpoint");
    }

    static Interval hull(double a, double b) { return a <= b ? Interval(a, b) : Interval(b, a); }
    static Interval entire() { return {-rnd::kInf, rnd::kInf}; }
    // tolerant constructor for kernels that already guarantee ordering
    static Interval unchecked(double lo, double hi) {
        Interval r;
        r.lo_ = lo;
        r.hi_ = hi;
        return r;
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double mid() const;
    // upper bound on the distance from mid() to either endpoint
    double rad() const;
    double width() const { return rnd::sub_up(hi_, lo_); }
    double mag() const { return std::max(std::fabs(lo_), std::fabs(hi_)); }
    double mig() const;

    bool is_point() const { return lo_ == hi_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_ <= 0 && 0 <= hi_; }
    bool positive() const { return lo_ > 0; }
    bool negative() const { return hi_ < 0; }
    bool finite() const { return std::isfinite(lo_) && std::isfinite(hi_); }

    Interval operator-() const { return unchecked(-hi_, -lo_); }

    Interval& operator+=(const Interval& b);
    Interval& operator-=(const Interval& b);
    Interval& operator*=(const Interval& b);
    Interval& operator/=(const Interval& b);

private:
    double lo_;
    double hi_;
};

inline Interval operator+(const Interval& a, const Interval& b) {
    return Interval::unchecked(rnd::add_down(a.lo(), b.lo()), rnd::add_up(a.hi(), b.hi()));
}
inline Interval operator-(const Interval& a, const Interval& b) {
    return Interval::unchecked(rnd::sub_down(a.lo(), b.hi()), rnd::sub_up(a.hi(), b.lo()));
}
Interval operator*(const Interval& a, const Interval& b);
Interval operator/(const Interval& a, const Interval& b);

inline Interval operator+(const Interval& a, double b) { return a + Interval(b); }
inline Interval operator+(double a, const Interval& b) { return Interval(a) + b; }
inline Interval operator-(const Interval& a, double b) { return a - Interval(b); }
inline Interval operator-(double a, const Interval& b) { return Interval(a) - b; }
inline Interval operator*(const Interval& a, double b) { return a * Interval(b); }
inline Interval operator*(double a, const Interval& b) { return Interval(a) * b; }
inline Interval operator/(const Interval& a, double b) { return a / Interval(b); }
inline Interval operator/(double a, const Interval& b) { return Interval(a) / b; }

inline Interval& Interval::operator+=(const Interval& b) { return *this = *this + b; }
inline Interval& Interval::operator-=(const Interval& b) { return *this = *this - b; }
inline Interval& Interval::operator*=(const Interval& b) { return *this = *this * b; }
inline Interval& Interval::operator/=(const Interval& b) { return *this = *this / b; }

Interval hull(const Interval& a, const Interval& b);
// throws DomainError when the intersection is empty
Interval intersect(const Interval& a, const Interval& b);

Interval abs(const Interval& x);
Interval sqr(const Interval& x);
Interval pow_n(const Interval& x, unsigned n);

Interval exp(const Interval& x);
Interval log(const Interval& x);
Interval sqrt(const Interval& x);
Interval sin(const Interval& x);
Interval cos(const Interval& x);

// |t|^alpha for alpha >= 1
Interval abs_pow(const Interval& x, double alpha);

namespace detail {
// |t|^e for any e >= 0 (0^0 = 1)
Interval abs_pow_any(const Interval& x, double e);
}

// enclosures of constants
Interval pi();
Interval ln2();

std::ostream& operator<<(std::ostream& os, const Interval& x);

class ComplexInterval {
public:
    ComplexInterval() = default;
    explicit ComplexInterval(const Interval& re, const Interval& im = Interval()) : re(re), im(im) {}
    ComplexInterval(double re, double im) : re(re), im(im) {}

    // upper bound on |z| over the rectangle
    double mag() const;
    bool contains(double x, double y) const { return re.contains(x) && im.contains(y); }
    bool contains(const ComplexInterval& o) const { return re.contains(o.re) && im.contains(o.im); }

    Interval re;
    Interval im;
};

inline ComplexInterval operator+(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re + b.re, a.im + b.im);
}
inline ComplexInterval operator-(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re - b.re, a.im - b.im);
}
inline ComplexInterval operator-(const ComplexInterval& a) { return ComplexInterval(-a.re, -a.im); }
inline ComplexInterval operator*(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
}
inline ComplexInterval operator*(const Interval& s, const ComplexInterval& z) {
    return ComplexInterval(s * z.re, s * z.im);
}
inline ComplexInterval operator*(const ComplexInterval& z, const Interval& s) { return s * z; }
inline ComplexInterval conj(const ComplexInterval& z) { return ComplexInterval(z.re, -z.im); }

ComplexInterval hull(const ComplexInterval& a, const ComplexInterval& b);
// e^{i theta}
ComplexInterval expi(const Interval& theta);

std::ostream& operator<<(std::ostream& os, const ComplexInterval& z);

}  // namespace lyapcert
