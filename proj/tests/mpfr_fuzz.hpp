#pragma once

#include <mpfr.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "lyapcert/interval.hpp"

namespace fuzz {

using namespace lyapcert;

// 256-bit MPFR scratch value; add/sub use enough bits to be exact
struct Mp {
    mpfr_t v;
    explicit Mp(mpfr_prec_t prec = 256) { mpfr_init2(v, prec); }
    ~Mp() { mpfr_clear(v); }
    Mp(const Mp&) = delete;
    Mp& operator=(const Mp&) = delete;
};

inline bool encloses(const Interval& r, const Mp& exact) {
    return mpfr_cmp_d(exact.v, r.lo()) >= 0 && mpfr_cmp_d(exact.v, r.hi()) <= 0;
}

struct Gen {
    std::mt19937_64 rng{20240611};

    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    // random sign, mantissa and binary exponent in [emin, emax]
    double wide(int emin, int emax) {
        double m = uniform(1.0, 2.0);
        int e = std::uniform_int_distribution<int>(emin, emax)(rng);
        return (rng() & 1 ? -1.0 : 1.0) * std::ldexp(m, e);
    }
    Interval around(double x) {
        switch (rng() % 3) {
            case 0:
                return Interval(x);
            case 1: {
                double w = std::fabs(x) * std::ldexp(1.0, -static_cast<int>(rng() % 40) - 1);
                return Interval(x - w, x + w);
            }
            default: {
                double y = x + wide(-20, 2);
                return Interval::hull(x, y);
            }
        }
    }
    // endpoints plus one interior point
    std::array<double, 3> probes(const Interval& x) {
        double t = x.lo() + uniform(0.0, 1.0) * (x.hi() - x.lo());
        t = std::min(std::max(t, x.lo()), x.hi());
        return {x.lo(), x.hi(), t};
    }
};

struct Stats {
    long checks = 0;
    long failures = 0;
};

// ten elementary operations, then abs_pow and pow_n; each sample is checked
// at both endpoints and one interior point
inline Stats run(int samples) {
    Gen g;
    Mp a, b, r;
    Stats st;
    auto check = [&](const Interval& res, const Mp& exact) {
        ++st.checks;
        if (!encloses(res, exact)) ++st.failures;
    };
    const int kElementary = samples / 13 * 10;
    for (int s = 0; s < kElementary; ++s) {
        const int op = s % 10;
        Interval X = g.around(g.wide(-30, 30));
        Interval Y = g.around(g.wide(-30, 30));
        switch (op) {
            case 3:
                if (Y.contains_zero()) Y = Interval(1.5, 2.5);
                break;
            case 5:
                X = abs(X);
                break;
            case 6:
                X = g.around(g.uniform(-700, 700));
                break;
            case 7:
                X = abs(X);
                if (X.lo() <= 0) X = Interval(0.25, 4.0);
                break;
            case 8:
            case 9:
                X = g.around(g.uniform(-1e4, 1e4));
                break;
            default:
                break;
        }
        Interval R;
        switch (op) {
            case 0: R = X + Y; break;
            case 1: R = X - Y; break;
            case 2: R = X * Y; break;
            case 3: R = X / Y; break;
            case 4: R = sqr(X); break;
            case 5: R = sqrt(X); break;
            case 6: R = exp(X); break;
            case 7: R = log(X); break;
            case 8: R = sin(X); break;
            default: R = cos(X); break;
        }
        const auto px = g.probes(X);
        const auto py = g.probes(Y);
        for (std::size_t k = 0; k < 3; ++k) {
            mpfr_set_d(a.v, px[k], MPFR_RNDN);
            mpfr_set_d(b.v, py[k], MPFR_RNDN);
            switch (op) {
                case 0: mpfr_add(r.v, a.v, b.v, MPFR_RNDN); break;
                case 1: mpfr_sub(r.v, a.v, b.v, MPFR_RNDN); break;
                case 2: mpfr_mul(r.v, a.v, b.v, MPFR_RNDN); break;
                case 3: mpfr_div(r.v, a.v, b.v, MPFR_RNDN); break;
                case 4: mpfr_sqr(r.v, a.v, MPFR_RNDN); break;
                case 5: mpfr_sqrt(r.v, a.v, MPFR_RNDN); break;
                case 6: mpfr_exp(r.v, a.v, MPFR_RNDN); break;
                case 7: mpfr_log(r.v, a.v, MPFR_RNDN); break;
                case 8: mpfr_sin(r.v, a.v, MPFR_RNDN); break;
                default: mpfr_cos(r.v, a.v, MPFR_RNDN); break;
            }
            check(R, r);
        }
    }
    for (int s = kElementary; s < samples; ++s) {
        Interval X = g.around(g.uniform(-1.0, 1.0));
        const int kind = s % 3;
        const double e = kind == 0 ? static_cast<double>(1 + g.rng() % 6) : g.uniform(1.0, 5.0);
        const unsigned n = static_cast<unsigned>(g.rng() % 9);
        if (kind == 2) X = g.around(g.uniform(-3.0, 3.0));
        Interval R = kind == 2 ? pow_n(X, n) : abs_pow(X, e);
        for (double x : g.probes(X)) {
            mpfr_set_d(a.v, kind == 2 ? x : std::fabs(x), MPFR_RNDN);
            if (kind == 2) {
                mpfr_pow_ui(r.v, a.v, n, MPFR_RNDN);
            } else {
                mpfr_set_d(b.v, e, MPFR_RNDN);
                mpfr_pow(r.v, a.v, b.v, MPFR_RNDN);
            }
            check(R, r);
        }
    }
    return st;
}

}  // namespace fuzz
