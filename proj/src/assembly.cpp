// Certified assembly of M[m,j] = 1/2 int_{-1}^{1} e^{i pi (j y - m T(y))} dy.
//
// Composite Gauss-Legendre on dyadic panels. For a panel [c-h, c+h] and a rule
// of order n the error of the exact rule is bounded by
//     h (64/15) M_rho rho^{-2n} / (rho^2 - 1)
// where M_rho bounds the integrand on the Bernstein ellipse c + h E_rho. With
// |Im T(x + is)| <= |s| sup|T'| on the vertical segment (T real on the real
// axis) we take M_rho = exp(pi b (|j| + |m| Lc)), b = h (rho - 1/rho)/2.
// The tabulated nodes/weights are the exact ones rounded to nearest; that
// perturbation, and the rounding of the node positions, is bounded through
// sup|f'| <= pi (|j| + |m| sup|T'|) on the real panel. Node values themselves
// are enclosed in interval arithmetic and summed with the ball kernel.

#include <array>
#include <cmath>

#include "lyapcert/fourier.hpp"

namespace lyapcert {

namespace {

#include "gauss_legendre_table.inc"

struct Rule {
    int n;
    const double* t;
    const double* w;
};

constexpr std::array<Rule, 3> kRules{{{8, kGlNodes8, kGlWeights8},
                                      {16, kGlNodes16, kGlWeights16},
                                      {32, kGlNodes32, kGlWeights32}}};

constexpr std::array<double, 15> kRhos{1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 6.0,
                                       8.0,  11.0, 16.0, 24.0, 32.0, 48.0, 64.0};

// dyadic shells [2^-p-1, 2^-p] for p < kShells; [0, 2^-kShells] is bounded crudely
constexpr int kShells = 62;
constexpr int kMaxDepth = 40;
// relative slack on floating evaluation of the truncation bound
constexpr double kBoundSlack = 1.000001;

struct Panel {
    double c;
    double h;
    const Rule* rule;
    double trunc;   // truncation bound at the worst (j, m)
    double l_real;  // sup |T'| on the (slightly enlarged) real panel
    double dy;      // node position error bound
};

struct Frequencies {
    double j_max;
    double m_max;
};

bool is_power_of_two(double h) {
    int e;
    return std::frexp(h, &e) == 0.5;
}

double trunc_bound(const TestMap& map, double c, double h, int n, Frequencies f) {
    double best = std::numeric_limits<double>::infinity();
    for (double rho : kRhos) {
        double a = h * (rho + 1.0 / rho) / 2.0;
        double b = h * (rho - 1.0 / rho) / 2.0;
        auto lc = map.complex_derivative_bound(c, a, b);
        if (!lc) continue;
        double logb = std::log(64.0 / 15.0) - std::log(rho * rho - 1.0) - 2.0 * n * std::log(rho) +
                      M_PI * 1.0000001 * b * (f.j_max + f.m_max * *lc);
        best = std::min(best, h * std::exp(logb) * kBoundSlack);
    }
    return best;
}

void split(const TestMap& map, double a, double b, Frequencies f, double per_length, int depth,
           std::vector<Panel>& out) {
    double c = 0.5 * (a + b);
    double h = 0.5 * (b - a);
    if (!is_power_of_two(h)) throw std::logic_error("assembly panels must be dyadic");
    for (const Rule& r : kRules) {
        double t = trunc_bound(map, c, h, r.n, f);
        if (t <= per_length * 2.0 * h) {
            Panel p;
            p.c = c;
            p.h = h;
            p.rule = &r;
            p.trunc = t;
            p.dy = 0x1p-52 * (std::fabs(c) + 2.0 * h);
            p.l_real = map.derivative_magnitude(Interval(a - p.dy, b + p.dy)).hi();
            out.push_back(p);
            return;
        }
    }
    if (depth >= kMaxDepth) throw AssemblyError("assembly panel refinement exhausted", 0, 0, b - a);
    split(map, a, c, f, per_length, depth + 1, out);
    split(map, c, b, f, per_length, depth + 1, out);
}

std::vector<Panel> make_panels(const TestMap& map, Frequencies f, double per_length, double& tail) {
    std::vector<Panel> panels;
    tail = 0.0;
    if (!map.is_even()) {
        split(map, -1.0, 1.0, f, per_length, 0, panels);
        return panels;
    }
    if (!map.branch_at_zero()) {
        split(map, 0.0, 1.0, f, per_length, 0, panels);
        return panels;
    }
    for (int p = kShells - 1; p >= 0; --p)
        split(map, std::ldexp(1.0, -p - 1), std::ldexp(1.0, -p), f, per_length, 0, panels);
    tail = std::ldexp(1.0, -kShells);  // |int_0^delta f| <= delta
    return panels;
}

void to_ball(const ComplexInterval& z, BallMatrix& B, std::size_t k) {
    B.re[k] = z.re.mid();
    B.im[k] = z.im.mid();
    double rr = z.re.rad();
    double ri = z.im.rad();
    B.rad[k] = rnd::sqrt_up(rnd::add_up(rnd::mul_up(rr, rr), rnd::mul_up(ri, ri)));
}

struct RawResult {
    BallMatrix P;            // rows m = 0..mq, columns per layout
    double extra_const = 0;  // radius added to every entry
    double extra_j = 0;      // per |j|
    double extra_m = 0;      // per |m|
    double trunc_total = 0;
    std::size_t nodes = 0;
    std::size_t panels = 0;
};

RawResult integrate(const TestMap& map, int K, int mq, double per_length) {
    using namespace rnd;
    const bool even = map.is_even();
    Frequencies f{static_cast<double>(K), static_cast<double>(mq)};
    double tail = 0.0;
    std::vector<Panel> panels = make_panels(map, f, per_length, tail);

    std::size_t nodes = 0;
    for (const Panel& p : panels) nodes += static_cast<std::size_t>(p.rule->n);
    const std::size_t ncols = even ? static_cast<std::size_t>(K + 1) : static_cast<std::size_t>(2 * K + 1);
    const std::size_t nrows = static_cast<std::size_t>(mq + 1);

    BallMatrix E(nrows, nodes);
    BallMatrix C(nodes, ncols);
    const Interval piv = pi();
    const Interval half(0.5);

    std::vector<double> ys(nodes);
    std::vector<double> ws(nodes);
    {
        std::size_t q = 0;
        for (const Panel& p : panels) {
            for (int i = 0; i < p.rule->n; ++i, ++q) {
                ys[q] = p.c + p.h * p.rule->t[i];  // h is a power of two: one rounding
                ws[q] = p.h * p.rule->w[i];        // exact
            }
        }
    }

    const long ln = static_cast<long>(nodes);
#pragma omp parallel for schedule(static)
    for (long lq = 0; lq < ln; ++lq) {
        std::size_t q = static_cast<std::size_t>(lq);
        Interval y(ys[q]);
        Interval ty = map.eval(y);
        for (std::size_t m = 0; m < nrows; ++m) {
            Interval theta = -(piv * static_cast<double>(m)) * ty;
            to_ball(expi(theta), E, E.index(m, q));
        }
        Interval w(ws[q]);
        if (!even) w = w * half;
        for (std::size_t col = 0; col < ncols; ++col) {
            double j = even ? static_cast<double>(col) : static_cast<double>(col) - K;
            Interval arg = (piv * j) * y;
            ComplexInterval k = even ? ComplexInterval(cos(arg)) : expi(arg);
            to_ball(w * k, C, C.index(q, col));
        }
    }

    RawResult r;
    r.P = ball_matmul_accurate(E, C);
    r.nodes = nodes;
    r.panels = panels.size();

    double trunc = 0.0;
    double weights = 0.0;
    double per_j = 0.0;
    double per_m = 0.0;
    for (const Panel& p : panels) {
        trunc = add_up(trunc, p.trunc);
        // sum_q h |w_q - w*_q| <= h 2^-53 sum w_q (sum w_q ~ 2)
        weights = add_up(weights, mul_up(p.h, 0x1.02p-52));
        // sum_q h w*_q |dy| pi (|j| + |m| L)
        double s = mul_up(mul_up(2.02 * p.h, p.dy), piv.hi());
        per_j = add_up(per_j, s);
        per_m = add_up(per_m, mul_up(s, p.l_real));
    }
    r.trunc_total = trunc;
    r.extra_const = add_up(add_up(trunc, weights), tail);
    r.extra_j = per_j;
    r.extra_m = per_m;
    return r;
}

}  // namespace

double TolProfile::target(double damping) const { return base_tol / std::max(damping, floor); }

DeterministicMatrix assemble_deterministic(const TestMap& map, int K, const TolProfile& tol) {
    using namespace rnd;
    if (K < 1) throw DomainError("assemble_deterministic: K must be >= 1");
    std::vector<double> damp(static_cast<std::size_t>(K + 1), 1.0);
    if (tol.sigma > 0) {
        auto D = gaussian_multiplier(NoiseParams{tol.sigma}, K);
        for (int m = 0; m <= K; ++m) damp[static_cast<std::size_t>(m)] = D[static_cast<std::size_t>(m + K)].hi();
    }
    int mq = 0;
    for (int m = 1; m <= K; ++m) {
        double d = damp[static_cast<std::size_t>(m)];
        if (d > tol.skip_below) mq = m;
    }

    const bool even = map.is_even();
    const std::size_t dim = static_cast<std::size_t>(2 * K + 1);
    double per_length = 1e-19;

    for (int round = 0;; ++round) {
        RawResult raw = integrate(map, K, mq, per_length);

        DeterministicMatrix out;
        out.K = K;
        out.map = map;
        out.M = IntervalMatrix(dim, dim);
        auto at = [&](int m, int j) -> ComplexInterval& {
            return out.M(static_cast<std::size_t>(m + K), static_cast<std::size_t>(j + K));
        };

        const Interval unit(-1.0, 1.0);
        for (int m = 1; m <= K; ++m) {
            for (int j = -K; j <= K; ++j) {
                if (m > mq) {
                    at(m, j) = ComplexInterval(unit, unit);
                    at(-m, -j) = ComplexInterval(unit, unit);
                    continue;
                }
                std::size_t col = even ? static_cast<std::size_t>(std::abs(j)) : static_cast<std::size_t>(j + K);
                std::size_t k = raw.P.index(static_cast<std::size_t>(m), col);
                double extra = add_up(add_up(raw.extra_const, mul_up(raw.extra_j, std::abs(j))),
                                      mul_up(raw.extra_m, static_cast<double>(m)));
                double rad = add_up(raw.P.rad[k], extra);
                ComplexInterval z(Interval::unchecked(sub_down(raw.P.re[k], rad), add_up(raw.P.re[k], rad)),
                                  Interval::unchecked(sub_down(raw.P.im[k], rad), add_up(raw.P.im[k], rad)));
                // |M| <= 1
                z.re = Interval::unchecked(std::max(z.re.lo(), -1.0), std::min(z.re.hi(), 1.0));
                z.im = Interval::unchecked(std::max(z.im.lo(), -1.0), std::min(z.im.hi(), 1.0));
                at(m, j) = z;
                at(-m, -j) = conj(z);
            }
        }
        for (int j = -K; j <= K; ++j) at(0, j) = ComplexInterval(j == 0 ? 1.0 : 0.0, 0.0);

        AssemblyReport& rep = out.report;
        rep.quadrature_rows = mq;
        rep.panels = raw.panels;
        rep.nodes = raw.nodes;
        rep.row_width.assign(static_cast<std::size_t>(K + 1), 0.0);
        double min_target = std::numeric_limits<double>::infinity();
        for (int m = 0; m <= K; ++m) {
            double wmax = 0.0;
            int jmax = 0;
            for (int j = -K; j <= K; ++j) {
                const ComplexInterval& z = at(m, j);
                double w = std::max(z.re.width(), z.im.width());
                if (w > wmax) {
                    wmax = w;
                    jmax = j;
                }
            }
            double d = damp[static_cast<std::size_t>(m)];
            rep.row_width[static_cast<std::size_t>(m)] = wmax;
            double target = tol.target(d);
            if (m <= mq) min_target = std::min(min_target, target);
            if (wmax > target && m <= mq) rep.rows_over_target.push_back(m);
            double scaled = mul_up(d, wmax);
            if (scaled > rep.worst_scaled_width) {
                rep.worst_scaled_width = scaled;
                rep.worst_row = m;
                rep.worst_col = jmax;
            }
        }

        bool truncation_dominates = raw.trunc_total > 0.1 * min_target;
        if (!rep.rows_over_target.empty() && truncation_dominates && round < 2) {
            per_length *= 1e-4;
            continue;
        }
        if (rep.worst_scaled_width > tol.hard_cap)
            throw AssemblyError("assembled entry wider than the hard cap", rep.worst_row, rep.worst_col,
                                rep.worst_scaled_width);
        return out;
    }
}

}  // namespace lyapcert
