#include "lyapcert/matrix.hpp"

#include <omp.h>

namespace lyapcert {

using namespace rnd;

double norm2_upper_from_magnitudes(const double* mag, std::size_t rows, std::size_t cols) {
    double frob2 = 0.0;
    double inf_norm = 0.0;
    std::vector<double> col_sums(cols, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double row_sum = 0.0;
        for (std::size_t j = 0; j < cols; ++j) {
            double m = mag[i * cols + j];
            frob2 = add_up(frob2, mul_up(m, m));
            row_sum = add_up(row_sum, m);
            col_sums[j] = add_up(col_sums[j], m);
        }
        inf_norm = std::max(inf_norm, row_sum);
    }
    double one_norm = 0.0;
    for (double s : col_sums) one_norm = std::max(one_norm, s);
    double frob = sqrt_up(frob2);
    double induced = sqrt_up(mul_up(one_norm, inf_norm));
    return std::min(frob, induced);
}

double norm2_upper(const IntervalMatrix& M) {
    std::vector<double> mag(M.rows() * M.cols());
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = M.data()[k].mag();
    return norm2_upper_from_magnitudes(mag.data(), M.rows(), M.cols());
}

BallMatrix to_ball(const IntervalMatrix& M) {
    BallMatrix B(M.rows(), M.cols());
    for (std::size_t k = 0; k < M.data().size(); ++k) {
        const ComplexInterval& z = M.data()[k];
        B.re[k] = z.re.mid();
        B.im[k] = z.im.mid();
        double rr = z.re.rad();
        double ri = z.im.rad();
        B.rad[k] = sqrt_up(add_up(mul_up(rr, rr), mul_up(ri, ri)));
    }
    return B;
}

ComplexInterval ball_entry(const BallMatrix& B, std::size_t i, std::size_t j) {
    std::size_t k = B.index(i, j);
    double r = B.rad[k];
    return ComplexInterval(Interval::unchecked(sub_down(B.re[k], r), add_up(B.re[k], r)),
                           Interval::unchecked(sub_down(B.im[k], r), add_up(B.im[k], r)));
}

double norm2_upper(const BallMatrix& B) {
    std::vector<double> mag(B.re.size());
    for (std::size_t k = 0; k < mag.size(); ++k) {
        double m = sqrt_up(add_up(mul_up(B.re[k], B.re[k]), mul_up(B.im[k], B.im[k])));
        mag[k] = add_up(m, B.rad[k]);
    }
    return norm2_upper_from_magnitudes(mag.data(), B.rows, B.cols);
}

void coarsen(BallMatrix& B, double floor) {
    for (std::size_t k = 0; k < B.re.size(); ++k) {
        double r = B.rad[k];
        if (std::fabs(B.re[k]) < floor) {
            r = add_up(r, std::fabs(B.re[k]));
            B.re[k] = 0.0;
        }
        if (std::fabs(B.im[k]) < floor) {
            r = add_up(r, std::fabs(B.im[k]));
            B.im[k] = 0.0;
        }
        if (B.re[k] != 0.0 || B.im[k] != 0.0 || r != 0.0) B.rad[k] = std::max(r, floor);
    }
}

namespace kernels {

namespace {

constexpr double kU = 0x1p-53;
constexpr double kEta = 0x1p-1074;

// Error model for one entry with inner dimension n (no fma contraction):
//   exact product in disk(c_hat, R) with
//   R = sum |Am|(Br + g|Bm|) + Ar(|Bm| + Br) + 2*sqrt2*n*eta,  g >= sqrt2*gamma_{2n}
// where the g term covers rounding of the midpoint dot products. R itself is
// summed in floating point from nonnegative terms with at most n+10 roundings
// each, so the computed value times (1 + 4(n+10)u) bounds it; 16 n eta covers
// subnormal absolute errors.
struct Prepared {
    std::vector<double> b_soft;  // Br + g|Bm|
    std::vector<double> b_hard;  // |Bm| + Br
    std::vector<double> b_nz;    // 1 unless the entry is the exact zero ball
    double scale;
    double tiny;
};

Prepared prepare(const BallMatrix& B, std::size_t n, bool compensated) {
    Prepared p;
    double dn = static_cast<double>(n);
    double g = compensated ? 2.0 * (2.0 * dn * kU) * (2.0 * dn * kU) * 1.01 : 3.0 * dn * kU;
    p.b_soft.resize(B.re.size());
    p.b_hard.resize(B.re.size());
    p.b_nz.resize(B.re.size());
    for (std::size_t k = 0; k < B.re.size(); ++k) {
        double m = std::sqrt(B.re[k] * B.re[k] + B.im[k] * B.im[k]);
        p.b_soft[k] = B.rad[k] + g * m;
        p.b_hard[k] = m + B.rad[k];
        p.b_nz[k] = (B.re[k] != 0.0 || B.im[k] != 0.0 || B.rad[k] != 0.0) ? 1.0 : 0.0;
    }
    p.scale = 1.0 + 4.0 * static_cast<double>(n + 10) * kU;
    p.tiny = 64.0 * static_cast<double>(n + 1) * kEta;
    return p;
}

void check_dims(const BallMatrix& A, const BallMatrix& B) {
    if (A.cols != B.rows) throw DimensionError("ball_matmul: inner dimensions differ");
}

// An entry none of whose products pairs two nonzero balls is exactly zero.
void matmul_row(const BallMatrix& A, const BallMatrix& B, const Prepared& p, std::size_t i,
                double* cre, double* cim, double* crad, double* cnt, BallMatrix& C) {
    const std::size_t n = A.cols;
    const std::size_t c = B.cols;
    std::fill(cre, cre + c, 0.0);
    std::fill(cim, cim + c, 0.0);
    std::fill(crad, crad + c, 0.0);
    std::fill(cnt, cnt + c, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t ak = A.index(i, k);
        const double ar = A.re[ak];
        const double ai = A.im[ak];
        const double arad = A.rad[ak];
        const double aabs = std::sqrt(ar * ar + ai * ai);
        if (ar == 0 && ai == 0 && arad == 0) continue;
        const double* bre = &B.re[k * c];
        const double* bim = &B.im[k * c];
        const double* bs = &p.b_soft[k * c];
        const double* bh = &p.b_hard[k * c];
        const double* bz = &p.b_nz[k * c];
        for (std::size_t j = 0; j < c; ++j) {
            cre[j] += ar * bre[j] - ai * bim[j];
            cim[j] += ar * bim[j] + ai * bre[j];
            crad[j] += aabs * bs[j] + arad * bh[j];
            cnt[j] += bz[j];
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        std::size_t cj = C.index(i, j);
        C.re[cj] = cre[j];
        C.im[cj] = cim[j];
        C.rad[cj] = cnt[j] == 0.0 ? 0.0 : add_up(mul_up(crad[j], p.scale), p.tiny);
    }
}

inline void two_sum_acc(double& s, double& comp, double x) {
    double t = s + x;
    double z = t - s;
    comp += (s - (t - z)) + (x - z);
    s = t;
}

inline void dot2_acc(double& s, double& comp, double a, double b) {
    double p = a * b;
    comp += std::fma(a, b, -p);
    two_sum_acc(s, comp, p);
}

// Compensated variant (Ogita-Rump-Oishi Dot2): per real component
// |res - exact| <= u|exact| + gamma_{2n}^2 sum|x y|, so the midpoint error is
// bounded by 2u(|re| + |im|) + g2 sum|a||b| with g2 >= 2 gamma_{2n}^2; the
// g2 term rides in b_soft.
void matmul_row_dot2(const BallMatrix& A, const BallMatrix& B, const Prepared& p, std::size_t i,
                     double* buf, BallMatrix& C) {
    const std::size_t n = A.cols;
    const std::size_t c = B.cols;
    double* sre = buf;
    double* ere = buf + c;
    double* sim = buf + 2 * c;
    double* eim = buf + 3 * c;
    double* crad = buf + 4 * c;
    double* cnt = buf + 5 * c;
    std::fill(buf, buf + 6 * c, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t ak = A.index(i, k);
        const double ar = A.re[ak];
        const double ai = A.im[ak];
        const double arad = A.rad[ak];
        const double aabs = std::sqrt(ar * ar + ai * ai);
        if (ar == 0 && ai == 0 && arad == 0) continue;
        const double* bre = &B.re[k * c];
        const double* bim = &B.im[k * c];
        const double* bs = &p.b_soft[k * c];
        const double* bh = &p.b_hard[k * c];
        const double* bz = &p.b_nz[k * c];
        for (std::size_t j = 0; j < c; ++j) {
            cnt[j] += bz[j];
            dot2_acc(sre[j], ere[j], ar, bre[j]);
            dot2_acc(sre[j], ere[j], -ai, bim[j]);
            dot2_acc(sim[j], eim[j], ar, bim[j]);
            dot2_acc(sim[j], eim[j], ai, bre[j]);
            crad[j] += aabs * bs[j] + arad * bh[j];
        }
    }
    for (std::size_t j = 0; j < c; ++j) {
        std::size_t cj = C.index(i, j);
        double re = sre[j] + ere[j];
        double im = sim[j] + eim[j];
        C.re[cj] = re;
        C.im[cj] = im;
        double rel = mul_up(0x1p-51, add_up(std::fabs(re), std::fabs(im)));
        C.rad[cj] = cnt[j] == 0.0 ? 0.0 : add_up(add_up(mul_up(crad[j], p.scale), rel), p.tiny);
    }
}

}  // namespace

void ball_matmul_serial(const BallMatrix& A, const BallMatrix& B, BallMatrix& C) {
    check_dims(A, B);
    C = BallMatrix(A.rows, B.cols);
    Prepared p = prepare(B, A.cols, false);
    std::vector<double> buf(4 * B.cols);
    for (std::size_t i = 0; i < A.rows; ++i)
        matmul_row(A, B, p, i, buf.data(), buf.data() + B.cols, buf.data() + 2 * B.cols, buf.data() + 3 * B.cols,
                   C);
}

void ball_matmul_omp(const BallMatrix& A, const BallMatrix& B, BallMatrix& C) {
    check_dims(A, B);
    C = BallMatrix(A.rows, B.cols);
    Prepared p = prepare(B, A.cols, false);
    const long rows = static_cast<long>(A.rows);
#pragma omp parallel
    {
        std::vector<double> buf(4 * B.cols);
#pragma omp for schedule(static)
        for (long i = 0; i < rows; ++i)
            matmul_row(A, B, p, static_cast<std::size_t>(i), buf.data(), buf.data() + B.cols,
                       buf.data() + 2 * B.cols, buf.data() + 3 * B.cols, C);
    }
}

void ball_matmul_dot2_serial(const BallMatrix& A, const BallMatrix& B, BallMatrix& C) {
    check_dims(A, B);
    C = BallMatrix(A.rows, B.cols);
    Prepared p = prepare(B, A.cols, true);
    std::vector<double> buf(6 * B.cols);
    for (std::size_t i = 0; i < A.rows; ++i) matmul_row_dot2(A, B, p, i, buf.data(), C);
}

void ball_matmul_dot2_omp(const BallMatrix& A, const BallMatrix& B, BallMatrix& C) {
    check_dims(A, B);
    C = BallMatrix(A.rows, B.cols);
    Prepared p = prepare(B, A.cols, true);
    const long rows = static_cast<long>(A.rows);
#pragma omp parallel
    {
        std::vector<double> buf(6 * B.cols);
#pragma omp for schedule(static)
        for (long i = 0; i < rows; ++i) matmul_row_dot2(A, B, p, static_cast<std::size_t>(i), buf.data(), C);
    }
}

namespace {

ComplexInterval matvec_row(const IntervalMatrix& A, const std::vector<ComplexInterval>& x,
                           std::size_t i) {
    ComplexInterval acc;
    for (std::size_t j = 0; j < A.cols(); ++j) {
        const ComplexInterval& a = A(i, j);
        if (a.re.is_point() && a.im.is_point() && a.re.lo() == 0 && a.im.lo() == 0) continue;
        acc = acc + a * x[j];
    }
    return acc;
}

}  // namespace

void interval_matvec_serial(const IntervalMatrix& A, const std::vector<ComplexInterval>& x,
                            std::vector<ComplexInterval>& y) {
    if (A.cols() != x.size()) throw DimensionError("interval_matvec: size mismatch");
    y.assign(A.rows(), ComplexInterval());
    for (std::size_t i = 0; i < A.rows(); ++i) y[i] = matvec_row(A, x, i);
}

void interval_matvec_omp(const IntervalMatrix& A, const std::vector<ComplexInterval>& x,
                         std::vector<ComplexInterval>& y) {
    if (A.cols() != x.size()) throw DimensionError("interval_matvec: size mismatch");
    y.assign(A.rows(), ComplexInterval());
    const long rows = static_cast<long>(A.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < rows; ++i) y[static_cast<std::size_t>(i)] = matvec_row(A, x, static_cast<std::size_t>(i));
}

}  // namespace kernels

BallMatrix ball_matmul(const BallMatrix& A, const BallMatrix& B) {
    BallMatrix C;
    kernels::ball_matmul_omp(A, B, C);
    return C;
}

BallMatrix ball_matmul_accurate(const BallMatrix& A, const BallMatrix& B) {
    BallMatrix C;
    kernels::ball_matmul_dot2_omp(A, B, C);
    return C;
}

}  // namespace lyapcert
