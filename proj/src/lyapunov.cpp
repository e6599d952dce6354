#include "lyapcert/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace lyapcert {

namespace {

constexpr int kDegree = 16;
constexpr int kSubPanels = 4;

// Si(pi) from the alternating series, cut once a term drops below 1e-20
Interval si_pi() {
    const Interval p = pi();
    const Interval p2 = sqr(p);
    Interval pw = p;  // pi^{2n+1} / (2n+1)!
    Interval sum(0.0);
    for (int n = 0;; ++n) {
        Interval term = pw / static_cast<double>(2 * n + 1);
        if (term.hi() < 1e-20) return sum + Interval(-term.hi(), term.hi());
        sum = (n % 2 == 0) ? sum + term : sum - term;
        pw = pw * p2 / (static_cast<double>(2 * n + 2) * static_cast<double>(2 * n + 3));
    }
}

// int over [x_c - r, x_c + r] of sin(x)/x, x_c = (l + t) pi, r = pi/8
Interval sub_panel(int l, int q, const Interval& sin_t, const Interval& cos_t, const Interval& r) {
    const Interval sign(l % 2 == 0 ? 1.0 : -1.0);
    const Interval S = sign * sin_t;
    const Interval C = sign * cos_t;
    const Interval xc = (static_cast<double>(l) + (2.0 * q + 1.0) / 8.0) * pi();

    Interval a[kDegree + 1];
    Interval b[kDegree + 1];
    Interval fact(1.0);
    const Interval inv_xc = 1.0 / xc;
    Interval ipow = inv_xc;
    for (int k = 0; k <= kDegree; ++k) {
        if (k > 0) fact = fact * static_cast<double>(k);
        const int quarter = k % 4;
        Interval base = (k % 2 == 0) ? S : C;
        if (quarter >= 2) base = -base;
        a[k] = base / fact;
        b[k] = (k % 2 == 0) ? ipow : -ipow;
        ipow = ipow * inv_xc;
    }

    Interval sum(0.0);
    Interval rpow = r;  // r^{k+1}
    for (int k = 0; k <= kDegree; ++k) {
        if (k % 2 == 0) {
            Interval c(0.0);
            for (int i = 0; i <= k; ++i) c = c + a[i] * b[k - i];
            sum = sum + c * (2.0 * rpow / static_cast<double>(k + 1));
        }
        rpow = rpow * r;
    }

    // Lagrange remainder: |f^{(d+1)}| <= sum_k C(d+1,k) k! / x_min^{k+1}
    const int n = kDegree + 1;
    const Interval xmin = Interval(xc.lo()) - r;
    const Interval inv_min = 1.0 / Interval(xmin.lo());
    Interval bound(0.0);
    Interval binom(1.0);
    Interval kf(1.0);
    Interval ip = inv_min;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) {
            binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
            kf = kf * static_cast<double>(k);
        }
        bound = bound + binom * kf * ip;
        ip = ip * inv_min;
    }
    Interval nfact(1.0);
    for (int k = 2; k <= n; ++k) nfact = nfact * static_cast<double>(k);
    // rpow = r^{d+2} here
    const Interval rem = 2.0 * bound * rpow / (static_cast<double>(n + 1) * nfact);
    return sum + Interval(-rem.hi(), rem.hi());
}

}  // namespace

SineTable sine_integral_multiples(int j_max) {
    if (j_max < 1) throw DomainError("sine_integral_multiples: j_max must be >= 1");
    SineTable si(static_cast<std::size_t>(j_max) + 1);
    si[0] = Interval(0.0);
    si[1] = si_pi();

    const Interval r = pi() / 8.0;
    Interval sin_t[kSubPanels], cos_t[kSubPanels];
    for (int q = 0; q < kSubPanels; ++q) {
        Interval t = (2.0 * q + 1.0) / 8.0 * pi();
        sin_t[q] = sin(t);
        cos_t[q] = cos(t);
    }
    for (int l = 1; l < j_max; ++l) {
        Interval panel(0.0);
        for (int q = 0; q < kSubPanels; ++q) panel = panel + sub_panel(l, q, sin_t[q], cos_t[q], r);
        si[static_cast<std::size_t>(l) + 1] = si[static_cast<std::size_t>(l)] + panel;
    }
    return si;
}

FourierVector observable_coefficients(const MapParams& p, int K, const SineTable& si) {
    p.validate();
    if (K < 0) throw DomainError("observable_coefficients: K must be >= 0");
    if (si.size() <= static_cast<std::size_t>(K)) throw DimensionError("observable_coefficients: sine table too short");
    FourierVector F(K);
    const Interval am1 = Interval(p.alpha) - 1.0;
    F[0] = ComplexInterval(log(Interval(p.alpha) * (1.0 + Interval(p.beta))) - am1);
    for (int j = 1; j <= K; ++j) {
        Interval v = (p.alpha == 1.0) ? Interval(0.0)
                                      : -(am1 / (static_cast<double>(j) * pi())) * si[static_cast<std::size_t>(j)];
        F[j] = ComplexInterval(v);
        F[-j] = ComplexInterval(v);
    }
    return F;
}

ComplexInterval pairing(const FourierVector& phi, const FourierVector& g) {
    const int K = std::min(phi.K, g.K);
    ComplexInterval s(0.0, 0.0);
    for (int j = -K; j <= K; ++j) s = s + phi[j] * conj(g[j]);
    return Interval(2.0) * s;
}

LyapunovEnclosure lyapunov_enclosure(const DensityEnclosure& d, const MapParams& p, const SineTable& si) {
    if (!d.E.finite()) throw CertificationError("lyapunov_enclosure: density error bound not finite", d.E.hi());
    if (d.map.kind() == TestMap::Kind::family &&
        (d.map.params().alpha != p.alpha || d.map.params().beta != p.beta))
        throw DomainError("lyapunov_enclosure: map parameters differ from the density's");

    LyapunovEnclosure out;
    out.alpha = p.alpha;
    out.beta = p.beta;
    out.sigma = d.sigma;
    out.K = d.K;
    const FourierVector F = observable_coefficients(p, d.K, si);
    const ComplexInterval s = pairing(F, d.g);
    out.lambda_s = s.re;
    out.lambda_s_im = s.im;
    out.pairing_tail = Interval(0.0);
    out.upsilon = upsilon(p);
    out.density_term = out.upsilon * d.E;

    const double spread = rnd::add_up(rnd::add_up(out.density_term.hi(), out.pairing_tail.mag()), s.im.mag());
    out.lambda = s.re + Interval(-spread, spread);

    // accounting identity; a few ulps of slack for the outward rounding
    const double budget = rnd::add_up(
        out.lambda_s.width(),
        rnd::mul_up(2.0, rnd::add_up(s.im.mag(), rnd::add_up(out.density_term.hi(), out.pairing_tail.mag()))));
    if (!(out.lambda.width() <= rnd::add_up(budget, 8.0 * std::numeric_limits<double>::epsilon() * out.lambda.mag())))
        throw std::logic_error("lyapunov_enclosure: width budget violated");
    return out;
}

ComplexInterval observable_integral(const DensityEnclosure& d, const FourierVector& phi, const Interval& phi_l2) {
    const ComplexInterval s = pairing(phi, d.g);
    const double e = (phi_l2 * d.E).hi();
    const Interval w(-e, e);
    return ComplexInterval(s.re + w, s.im + w);
}

}  // namespace lyapcert
