#include "lyapcert/certification.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace lyapcert {

using cd = std::complex<double>;

double default_fixed_point_tol(int K) {
    return 1e2 * std::numeric_limits<double>::epsilon() * static_cast<double>(2 * K + 1);
}

namespace {

void symmetrize(FourierVector& v) {
    v[0] = ComplexInterval(0.5, 0.0);
    for (int k = 1; k <= v.K; ++k) {
        double re = 0.5 * (v[k].re.mid() + v[-k].re.mid());
        double im = 0.5 * (v[k].im.mid() - v[-k].im.mid());
        v[k] = ComplexInterval(re, im);
        v[-k] = ComplexInterval(re, -im);
    }
}

double diff_norm(const std::vector<cd>& a, const std::vector<cd>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
    return std::sqrt(s);
}

}  // namespace

FourierVector approx_fixed_point(const DiscretizedOperator& A, double tol, int max_iter, int* iterations) {
    const int K = A.K;
    const std::size_t dim = static_cast<std::size_t>(2 * K + 1);
    if (A.A.rows() != dim || A.A.cols() != dim) throw DimensionError("approx_fixed_point: matrix shape");
    std::vector<cd> mid(dim * dim);
    for (std::size_t k = 0; k < mid.size(); ++k) mid[k] = cd(A.A.data()[k].re.mid(), A.A.data()[k].im.mid());

    std::vector<cd> v(dim, cd(0.0, 0.0)), w(dim);
    v[static_cast<std::size_t>(K)] = 0.5;
    auto step = [&] {
        for (std::size_t i = 0; i < dim; ++i) {
            cd s = 0.0;
            const cd* row = &mid[i * dim];
            for (std::size_t j = 0; j < dim; ++j) s += row[j] * v[j];
            w[i] = s;
        }
        double d = diff_norm(w, v);
        std::swap(v, w);
        return d;
    };

    int it = 0;
    double d = std::numeric_limits<double>::infinity();
    while (d > tol) {
        if (it >= max_iter)
            throw ConvergenceError("approx_fixed_point: no convergence after " + std::to_string(max_iter) +
                                   " iterations (last step " + std::to_string(d) + ")");
        d = step();
        ++it;
    }
    // keep iterating while rounding noise still shrinks; after step() w holds
    // the previous iterate, whose floating residual is the step just taken
    std::vector<cd> best = w;
    double best_d = d;
    // a start vector that is already fixed up to rounding is returned as is
    const double noise = std::numeric_limits<double>::epsilon() * std::sqrt(static_cast<double>(dim));
    const int polish = it == 1 && d <= noise ? 0 : 200;
    for (int extra = 0, stale = 0; extra < polish && stale < 5; ++extra) {
        double dn = step();
        if (dn < best_d) {
            best_d = dn;
            best = w;
            stale = 0;
        } else {
            ++stale;
        }
        ++it;
    }
    if (iterations) *iterations = it;

    FourierVector g(K);
    for (std::size_t i = 0; i < dim; ++i) g.coeffs[i] = ComplexInterval(best[i].real(), best[i].imag());
    symmetrize(g);
    return g;
}

Interval residual(const DiscretizedOperator& A, const FourierVector& g) {
    FourierVector r = apply(A, g);
    for (std::size_t i = 0; i < r.size(); ++i) r.coeffs[i] = r.coeffs[i] - g.coeffs[i];
    return Interval(0.0, l2_norm_upper(r));
}

MixingCertificate mixing_norms_of(const IntervalMatrix& B, int n_max, double target, int min_steps) {
    if (n_max < 1) throw DomainError("mixing_norms: n_max must be >= 1");
    if (!(target > 0.0 && target < 1.0)) throw DomainError("mixing_norms: target must lie in (0, 1)");
    if (B.rows() != B.cols()) throw DimensionError("mixing_norms: B must be square");

    MixingCertificate cert;
    cert.C.push_back(1.0);
    BallMatrix b = to_ball(B);
    coarsen(b);
    BallMatrix P = b;
    double best = std::numeric_limits<double>::infinity();
    const int last = std::max(n_max, min_steps);
    for (int i = 1; i <= last; ++i) {
        if (cert.N == 0 && i > n_max) break;
        if (i > 1) {
            P = ball_matmul(P, b);
            coarsen(P);
        }
        double c = norm2_upper(P);
        // submultiplicativity can only help
        for (int a = 1; a < i; ++a)
            c = std::min(c, rnd::mul_up(cert.C[static_cast<std::size_t>(a)], cert.C[static_cast<std::size_t>(i - a)]));
        cert.C.push_back(c);
        best = std::min(best, c);
        if (cert.N == 0 && c <= target) cert.N = i;
        if (cert.N > 0 && i >= min_steps) return cert;
    }
    if (cert.N > 0) return cert;
    throw CertificationError("mixing_norms: C_i > " + std::to_string(target) + " for all i <= " +
                                 std::to_string(n_max),
                             best);
}

MixingCertificate mixing_norms(const DiscretizedOperator& A, int n_max, double target, int min_steps) {
    const std::size_t dim = A.A.rows();
    const std::size_t zero = static_cast<std::size_t>(A.K);
    IntervalMatrix B(dim - 1, dim - 1);
    for (std::size_t i = 0, bi = 0; i < dim; ++i) {
        if (i == zero) continue;
        for (std::size_t j = 0, bj = 0; j < dim; ++j) {
            if (j == zero) continue;
            B(bi, bj++) = A.A(i, j);
        }
        ++bi;
    }
    return mixing_norms_of(B, n_max, target, min_steps);
}

AprioriMixing apriori_mixing(const NoiseParams& n, int steps) {
    if (steps < 1) throw DomainError("apriori_mixing: steps must be >= 1");
    const Interval c = doeblin_constant(n);
    const Interval q = 1.0 - 2.0 * c;
    AprioriMixing out;
    out.l1 = pow_n(q, steps);
    out.theta = sqrt(q);
    const Interval s2 = sqrt(Interval(2.0));
    out.constant = sqrt(s2 + 3.0 * s2 * kernel_constants(n).rho0);
    out.l2 = out.constant * pow_n(out.theta, steps);
    return out;
}

MixingCertificate apriori_certificate(const NoiseParams& n, int n_max, double target) {
    MixingCertificate cert;
    cert.source = MixingSource::doeblin;
    cert.C.push_back(1.0);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n_max; ++i) {
        double c = apriori_mixing(n, i).l2.hi();
        cert.C.push_back(c);
        best = std::min(best, c);
        if (c <= target) {
            cert.N = i;
            return cert;
        }
    }
    throw CertificationError("apriori_certificate: Doeblin bound above target", best);
}

AprioriDiscrete apriori_discrete_norms(const NoiseParams& n, int K, int i) {
    if (K < 1 || i < 1) throw DomainError("apriori_discrete_norms: K and i must be >= 1");
    const Interval onep = 1.0 + tail_gamma(n, K);
    const double dim = 2.0 * K + 1.0;
    AprioriDiscrete out;
    out.l1 = pow_n(onep, i) * dim;
    out.l2 = kernel_constants(n).l2norm * pow_n(onep, i - 1) * dim * sqrt(Interval(2.0));
    return out;
}

Interval error_bound(const MixingCertificate& cert, const Interval& eps, const NoiseParams& n, int K) {
    if (cert.source != MixingSource::matrix)
        throw CertificationError("error_bound: the Doeblin bound does not cover the truncated operator", 0.0);
    if (cert.N < 1 || cert.C.size() <= static_cast<std::size_t>(cert.N))
        throw CertificationError("error_bound: malformed certificate", 0.0);
    const double cn = cert.cn();
    if (!(cn < 1.0)) throw CertificationError("error_bound: C_N >= 1", cn);
    Interval sum(1.0);
    for (int i = 1; i < cert.N; ++i) {
        double c = cert.C[static_cast<std::size_t>(i)];
        if (!std::isfinite(c)) throw CertificationError("error_bound: non-finite C_i", c);
        sum = sum + Interval(c);
    }
    const Interval gamma = tail_gamma(n, K);
    const Interval rho = kernel_constants(n).l2norm;
    const Interval e = sum / (1.0 - Interval(cn)) * ((1.0 + gamma + rho) * gamma + eps);
    return Interval(0.0, e.hi());
}

DensityEnclosure enclose_density(const DiscretizedOperator& A, const TestMap& map, const CertOptions& opts) {
    DensityEnclosure d;
    d.K = A.K;
    d.sigma = A.sigma;
    d.map = map;
    d.gamma = A.gamma;
    const NoiseParams n{A.sigma};
    const double tol = opts.fp_tol > 0.0 ? opts.fp_tol : default_fixed_point_tol(A.K);
    d.g = approx_fixed_point(A, tol, opts.fp_max_iter, &d.fp_iterations);
    d.eps = residual(A, d.g);
    d.cert = mixing_norms(A, opts.n_max, opts.target, opts.mixing_min_steps);
    d.E = error_bound(d.cert, d.eps, n, A.K);
    return d;
}

DensityEnclosure enclose_density(const TestMap& map, const NoiseParams& n, int K, const CertOptions& opts,
                                 const DeterministicMatrix* cached) {
    n.validate();
    if (K < 8) throw DomainError("enclose_density: K must be >= 8");
    DeterministicMatrix fresh;
    const DeterministicMatrix* M = cached;
    if (M) {
        if (M->K != K || M->map.describe() != map.describe())
            throw DimensionError("enclose_density: cached matrix does not match map/K");
    } else {
        TolProfile tol = opts.tol;
        if (tol.sigma == 0.0) tol.sigma = n.sigma;
        fresh = assemble_deterministic(map, K, tol);
        M = &fresh;
    }
    DensityEnclosure d = enclose_density(discretize(*M, n), map, opts);
    d.assembly = M->report;
    return d;
}

}  // namespace lyapcert
