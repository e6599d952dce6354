#include "lyapcert/interval.hpp"

#include <ostream>

namespace lyapcert {

using namespace rnd;

double Interval::mid() const {
    if (std::isfinite(lo_) && std::isfinite(hi_)) return 0.5 * lo_ + 0.5 * hi_;
    if (std::isfinite(lo_)) return lo_;
    if (std::isfinite(hi_)) return hi_;
    return 0.0;
}

double Interval::rad() const {
    double m = mid();
    return std::max(sub_up(hi_, m), sub_up(m, lo_));
}

double Interval::mig() const {
    if (contains_zero()) return 0.0;
    return std::min(std::fabs(lo_), std::fabs(hi_));
}

Interval operator*(const Interval& a, const Interval& b) {
    double lo = std::min(std::min(mul_down(a.lo(), b.lo()), mul_down(a.lo(), b.hi())),
                         std::min(mul_down(a.hi(), b.lo()), mul_down(a.hi(), b.hi())));
    double hi = std::max(std::max(mul_up(a.lo(), b.lo()), mul_up(a.lo(), b.hi())),
                         std::max(mul_up(a.hi(), b.lo()), mul_up(a.hi(), b.hi())));
    return Interval::unchecked(lo, hi);
}

Interval operator/(const Interval& a, const Interval& b) {
    if (b.contains_zero()) throw DomainError("interval division by an interval containing zero");
    double lo = std::min(std::min(div_down(a.lo(), b.lo()), div_down(a.lo(), b.hi())),
                         std::min(div_down(a.hi(), b.lo()), div_down(a.hi(), b.hi())));
    double hi = std::max(std::max(div_up(a.lo(), b.lo()), div_up(a.lo(), b.hi())),
                         std::max(div_up(a.hi(), b.lo()), div_up(a.hi(), b.hi())));
    return Interval::unchecked(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
    return Interval::unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Interval intersect(const Interval& a, const Interval& b) {
    double lo = std::max(a.lo(), b.lo());
    double hi = std::min(a.hi(), b.hi());
    if (lo > hi) throw DomainError("empty interval intersection");
    return Interval::unchecked(lo, hi);
}

Interval abs(const Interval& x) {
    if (x.lo() >= 0) return x;
    if (x.hi() <= 0) return -x;
    return Interval::unchecked(0.0, x.mag());
}

Interval sqr(const Interval& x) {
    double m = x.mag();
    double n = x.mig();
    return Interval::unchecked(n == 0 ? 0.0 : mul_down(n, n), mul_up(m, m));
}

namespace {

Interval pown_nonneg(const Interval& a, unsigned n) {
    double lo = 1.0;
    double hi = 1.0;
    for (unsigned i = 0; i < n; ++i) {
        lo = mul_down(lo, a.lo());
        hi = mul_up(hi, a.hi());
    }
    return Interval::unchecked(std::max(lo, 0.0), hi);
}

bool small_integer(double e) { return e == std::floor(e) && e >= 0 && e <= 64; }

}  // namespace

Interval pow_n(const Interval& x, unsigned n) {
    if (n == 0) return Interval(1.0);
    if (n % 2 == 0) return pown_nonneg(abs(x), n);
    if (x.lo() >= 0) return pown_nonneg(x, n);
    if (x.hi() <= 0) return -pown_nonneg(-x, n);
    double lo = -pown_nonneg(Interval(-x.lo()), n).hi();
    double hi = pown_nonneg(Interval(x.hi()), n).hi();
    return Interval::unchecked(lo, hi);
}

Interval exp(const Interval& x) {
    double lo = x.lo() == 0 ? 1.0 : std::max(0.0, ulps_down(std::exp(x.lo()), kLibmUlps));
    double hi = x.hi() == 0 ? 1.0 : ulps_up(std::exp(x.hi()), kLibmUlps);
    // below ln(denorm_min) - 1 the true value is under the smallest subnormal
    if (x.hi() < -745.5) hi = std::numeric_limits<double>::denorm_min();
    // positivity-preserving underflow
    if (hi <= 0) hi = std::numeric_limits<double>::denorm_min();
    return Interval::unchecked(lo, hi);
}

Interval log(const Interval& x) {
    if (!(x.lo() > 0)) throw DomainError("log of an interval not strictly positive");
    double lo = x.lo() == 1 ? 0.0 : ulps_down(std::log(x.lo()), kLibmUlps);
    double hi = x.hi() == 1 ? 0.0 : ulps_up(std::log(x.hi()), kLibmUlps);
    return Interval::unchecked(lo, hi);
}

Interval sqrt(const Interval& x) {
    if (x.lo() < 0) throw DomainError("sqrt of an interval with negative part");
    return Interval::unchecked(sqrt_down(x.lo()), sqrt_up(x.hi()));
}

namespace {

// extrema of cos sit at k*pi, those of sin at pi/2 + k*pi; value (-1)^k in both cases
Interval trig(const Interval& x, bool is_cos) {
    const Interval full(-1.0, 1.0);
    if (!x.finite() || x.width() >= 6.28) return full;
    if (x.is_point() && x.lo() == 0) return is_cos ? Interval(1.0) : Interval(0.0);
    double ya = is_cos ? std::cos(x.lo()) : std::sin(x.lo());
    double yb = is_cos ? std::cos(x.hi()) : std::sin(x.hi());
    double lo = ulps_down(std::min(ya, yb), kLibmUlps);
    double hi = ulps_up(std::max(ya, yb), kLibmUlps);

    Interval shift = is_cos ? Interval(0.0) : pi() / 2.0;
    double ka = std::ceil(((Interval(x.lo()) - shift) / pi()).lo());
    double kb = std::floor(((Interval(x.hi()) - shift) / pi()).hi());
    if (std::fabs(ka) > 0x1p52 || std::fabs(kb) > 0x1p52 || kb - ka >= 2) return full;
    for (double k = ka; k <= kb; k += 1) {
        if (std::fmod(k, 2.0) == 0)
            hi = 1.0;
        else
            lo = -1.0;
    }
    return Interval::unchecked(std::max(lo, -1.0), std::min(hi, 1.0));
}

}  // namespace

Interval sin(const Interval& x) { return trig(x, false); }
Interval cos(const Interval& x) { return trig(x, true); }

namespace detail {

Interval abs_pow_any(const Interval& x, double e) {
    Interval a = abs(x);
    if (e == 0) return Interval(1.0);
    if (e == 1) return a;
    if (small_integer(e)) return pown_nonneg(a, static_cast<unsigned>(e));
    double lo = a.lo() == 0 ? 0.0 : std::max(0.0, ulps_down(std::pow(a.lo(), e), kLibmUlps));
    double hi = a.hi() == 0 ? 0.0 : ulps_up(std::pow(a.hi(), e), kLibmUlps);
    return Interval::unchecked(lo, hi);
}

}  // namespace detail

Interval abs_pow(const Interval& x, double alpha) {
    if (!(alpha >= 1)) throw DomainError("abs_pow requires alpha >= 1");
    return detail::abs_pow_any(x, alpha);
}

Interval pi() {
    constexpr double p = 0x1.921fb54442d18p+1;  // below pi
    return Interval::unchecked(p, next_up(p));
}

Interval ln2() {
    constexpr double l = 0x1.62e42fefa39efp-1;  // below ln 2
    return Interval::unchecked(l, next_up(l));
}

std::ostream& operator<<(std::ostream& os, const Interval& x) {
    auto old = os.precision(17);
    os << '[' << x.lo() << ", " << x.hi() << ']';
    os.precision(old);
    return os;
}

double ComplexInterval::mag() const {
    double a = re.mag();
    double b = im.mag();
    return sqrt_up(add_up(mul_up(a, a), mul_up(b, b)));
}

ComplexInterval hull(const ComplexInterval& a, const ComplexInterval& b) {
    return ComplexInterval(hull(a.re, b.re), hull(a.im, b.im));
}

ComplexInterval expi(const Interval& theta) { return ComplexInterval(cos(theta), sin(theta)); }

std::ostream& operator<<(std::ostream& os, const ComplexInterval& z) {
    return os << z.re << " + i" << z.im;
}

}  // namespace lyapcert
