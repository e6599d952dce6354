#include "lyapcert/dynamics.hpp"

#include <sstream>

namespace lyapcert {

void MapParams::validate() const {
    if (!(alpha >= 1) || !std::isfinite(alpha)) throw DomainError("map parameter alpha must be >= 1");
    if (!(beta > -1 && beta <= 1)) throw DomainError("map parameter beta must lie in (-1, 1]");
}

void NoiseParams::validate() const {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("noise sigma must be positive");
}

Interval map_eval(const MapParams& p, const Interval& x) {
    Interval b(p.beta);
    return b - (1.0 + b) * abs_pow(x, p.alpha);
}

double map_point(const MapParams& p, double x) {
    return p.beta - (1.0 + p.beta) * std::pow(std::fabs(x), p.alpha);
}

double fold_point(double x) {
    double r = x - 2.0 * std::floor((x + 1.0) / 2.0);
    if (r >= 1.0) r -= 2.0;
    if (r < -1.0) r += 2.0;
    return r;
}

Interval boundary_fold(const Interval& x) {
    const Interval full(-1.0, 1.0);
    if (!x.finite() || x.width() >= 2.0) return full;
    if (x.lo() >= -1.0 && x.hi() < 1.0) return x;
    // shift by -2k where 2k-1 <= lo
    double k = std::floor((x.lo() + 1.0) / 2.0);
    Interval shift = Interval(2.0) * Interval(k);
    Interval y = x - shift;
    if (y.lo() < -1.0 || y.hi() >= 1.0) {
        if (x.is_point()) return Interval(fold_point(x.lo()));
        return full;
    }
    return y;
}

Interval log_abs_derivative(const MapParams& p, const Interval& x) {
    Interval c = log(Interval(p.alpha) * (1.0 + Interval(p.beta)));
    if (p.alpha == 1) return c;
    if (x.contains_zero()) throw SingularityError("log|T'| is singular at x = 0");
    return c + (Interval(p.alpha) - 1.0) * log(abs(x));
}

namespace {

Interval sqrt_two_pi() { return sqrt(2.0 * pi()); }

}  // namespace

Interval doeblin_constant(const NoiseParams& n) {
    // single exponential so the result stays representable as long as possible
    Interval s(n.sigma);
    return exp(-1.0 / (2.0 * sqr(s)) - log(s * sqrt_two_pi()));
}

KernelConstants kernel_constants(const NoiseParams& n) {
    Interval s(n.sigma);
    KernelConstants k;
    k.rho0 = 1.0 / (s * sqrt_two_pi());
    k.l2norm = 1.0 / sqrt(2.0 * s * sqrt(pi()));
    return k;
}

Interval upsilon(const MapParams& p) {
    Interval am1 = Interval(p.alpha) - 1.0;
    Interval a = log(Interval(p.alpha) * (1.0 + Interval(p.beta))) - am1;
    return sqrt(2.0 * (sqr(a) + sqr(am1)));
}

TestMap TestMap::family(const MapParams& p) {
    p.validate();
    TestMap m;
    m.kind_ = Kind::family;
    m.params_ = p;
    return m;
}

TestMap TestMap::identity() { return TestMap{}; }

TestMap TestMap::constant(double c) {
    TestMap m;
    m.kind_ = Kind::constant;
    m.c_ = c;
    return m;
}

TestMap TestMap::tent() {
    TestMap m;
    m.kind_ = Kind::tent;
    m.params_ = MapParams{1.0, 1.0};
    return m;
}

bool TestMap::branch_at_zero() const {
    return (kind_ == Kind::family || kind_ == Kind::tent) && !params_.integer_alpha();
}

Interval TestMap::eval(const Interval& x) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::constant:
            return Interval(c_);
        default:
            return map_eval(params_, x);
    }
}

Interval TestMap::derivative_magnitude(const Interval& x) const {
    switch (kind_) {
        case Kind::identity:
            return Interval(1.0);
        case Kind::constant:
            return Interval(0.0);
        default: {
            Interval k = Interval(params_.alpha) * (1.0 + Interval(params_.beta));
            return k * detail::abs_pow_any(x, params_.alpha - 1.0);
        }
    }
}

std::optional<double> TestMap::complex_derivative_bound(double c, double a, double b) const {
    switch (kind_) {
        case Kind::identity:
            return 1.0;
        case Kind::constant:
            return 0.0;
        default: {
            // T'(z) = -alpha(1+beta) z^(alpha-1) continued from the positive axis
            // (entire for integer alpha); |z|^(alpha-1) is maximal at the far corner
            if (branch_at_zero() && !(rnd::sub_down(c, a) > 0)) return std::nullopt;
            double x = rnd::add_up(std::fabs(c), a);
            double r = rnd::sqrt_up(rnd::add_up(rnd::mul_up(x, x), rnd::mul_up(b, b)));
            return derivative_magnitude(Interval(r)).hi();
        }
    }
}

std::string TestMap::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case Kind::identity:
            os << "identity";
            break;
        case Kind::constant:
            os << "constant c=" << c_;
            break;
        case Kind::tent:
            os << "tent";
            break;
        case Kind::family:
            os << "family alpha=" << params_.alpha << " beta=" << params_.beta;
            break;
    }
    return os.str();
}

}  // namespace lyapcert
