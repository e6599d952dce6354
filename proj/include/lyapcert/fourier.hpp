#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lyapcert/dynamics.hpp"
#include "lyapcert/matrix.hpp"

namespace lyapcert {

// Coefficients k = -K..K of f under F(f)[k] = 1/2 int_{-1}^{1} f(x) e^{-k pi i x} dx.
struct FourierVector {
    FourierVector() = default;
    explicit FourierVector(int K) : K(K), coeffs(static_cast<std::size_t>(2 * K + 1)) {}

    int K = 0;
    std::vector<ComplexInterval> coeffs;

    ComplexInterval& operator[](int k) { return coeffs[static_cast<std::size_t>(k + K)]; }
    const ComplexInterval& operator[](int k) const { return coeffs[static_cast<std::size_t>(k + K)]; }
    std::size_t size() const { return coeffs.size(); }

    // coeffs[0] = 1/2, everything else 0
    static FourierVector uniform_density(int K);
};

// upper bound on the L2[-1,1] norm, sqrt(2 sum |c_k|^2)
double l2_norm_upper(const FourierVector& v);

// Per-row accuracy targets for assembly. Rows whose multiplier upper bound is
// at most skip_below are enclosed by |M| <= 1 without quadrature.
struct TolProfile {
    double sigma = 0.0;  // 0: no damping, every row integrated
    double base_tol = 1e-12;
    double floor = 1e-300;
    double skip_below = 1e-18;
    double hard_cap = 1e-6;  // bound on D[m] * width(M[m, j])

    double target(double damping) const;
};

struct AssemblyReport {
    int quadrature_rows = 0;  // rows |m| <= this were integrated
    std::size_t panels = 0;
    std::size_t nodes = 0;
    std::vector<double> row_width;  // max entry width per row m >= 0
    std::vector<int> rows_over_target;
    double worst_scaled_width = 0.0;  // max D[m] * width
    int worst_row = 0;
    int worst_col = 0;
};

struct DeterministicMatrix {
    int K = 0;
    IntervalMatrix M;  // (2K+1)^2, index (m+K, j+K)
    TestMap map;
    AssemblyReport report;

    const ComplexInterval& operator()(int m, int j) const {
        return M(static_cast<std::size_t>(m + K), static_cast<std::size_t>(j + K));
    }
};

struct DiscretizedOperator {
    int K = 0;
    double sigma = 0.0;
    IntervalMatrix A;
    Interval gamma;

    const ComplexInterval& operator()(int m, int j) const {
        return A(static_cast<std::size_t>(m + K), static_cast<std::size_t>(j + K));
    }
};

// D[k] = exp(-sigma^2 k^2 pi^2 / 2), k = -K..K
std::vector<Interval> gaussian_multiplier(const NoiseParams& n, int K);
// (sigma sqrt(2 pi))^-1 exp(-sigma^2 K^2 pi^2 / 2)
Interval tail_gamma(const NoiseParams& n, int K);

DeterministicMatrix assemble_deterministic(const TestMap& map, int K, const TolProfile& tol = {});

DiscretizedOperator compose(const std::vector<Interval>& D, const DeterministicMatrix& M,
                            const Interval& gamma, double sigma = 0.0);
DiscretizedOperator discretize(const DeterministicMatrix& M, const NoiseParams& n);

FourierVector apply(const DiscretizedOperator& A, const FourierVector& v);

// Binary dump: text header terminated by "end\n", then four little-endian
// binary64 arrays (re.lo, re.hi, im.lo, im.hi), each row-major (2K+1)^2.
void save_matrix(const DeterministicMatrix& M, const std::string& path);
DeterministicMatrix load_matrix(const std::string& path);

}  // namespace lyapcert
