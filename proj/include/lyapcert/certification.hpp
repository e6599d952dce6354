#pragma once

#include <optional>
#include <vector>

#include "lyapcert/fourier.hpp"

namespace lyapcert {

enum class MixingSource { matrix, doeblin };

// C[i] bounds ||P_{sigma,K}^i restricted to U0|| in L2; C[0] = 1.
struct MixingCertificate {
    int N = 0;
    std::vector<double> C;
    MixingSource source = MixingSource::matrix;

    double cn() const { return C.at(static_cast<std::size_t>(N)); }
};

struct DensityEnclosure {
    FourierVector g;  // point coefficients, coeffs[0] = 1/2, Hermitian
    Interval eps;     // residual bound
    Interval E;       // ||f_sigma - g||_{L2}
    Interval gamma;   // tail constant of the truncation
    MixingCertificate cert;
    AssemblyReport assembly;
    int fp_iterations = 0;
    double sigma = 0.0;
    int K = 0;
    TestMap map;
};

// default power iteration tolerance 1e2 * eps_mach * (2K+1)
double default_fixed_point_tol(int K);

// Power iteration on the midpoint matrix from the uniform density. After the
// tolerance is met, iteration continues while the step keeps shrinking
// (polish) and the best iterate is kept. The result is symmetrized.
FourierVector approx_fixed_point(const DiscretizedOperator& A, double tol, int max_iter,
                                 int* iterations = nullptr);

// [0, upper bound on sqrt(2) ||A g - g||_2]
Interval residual(const DiscretizedOperator& A, const FourierVector& g);

// Norm bounds for powers of B = A without row/column 0. N is the first i with
// C_i <= target; with min_steps > N the powers continue up to min_steps
// (heatmaps at a fixed step count) without changing N.
MixingCertificate mixing_norms(const DiscretizedOperator& A, int n_max, double target, int min_steps = 0);
// same on an explicit matrix acting on U0
MixingCertificate mixing_norms_of(const IntervalMatrix& B, int n_max, double target, int min_steps = 0);

struct AprioriMixing {
    Interval l1;      // (1 - 2c)^n
    Interval l2;      // C theta^n
    Interval theta;   // (1 - 2c)^{1/2}
    Interval constant;  // (sqrt2 + 3 sqrt2 rho0)^{1/2}
};
AprioriMixing apriori_mixing(const NoiseParams& n, int steps);

// Certificate from the Doeblin bound C theta^i. It bounds the untruncated
// operator only, so error_bound refuses it; diagnostics and heatmaps use it.
MixingCertificate apriori_certificate(const NoiseParams& n, int n_max, double target);

struct AprioriDiscrete {
    Interval l1;  // (1 + Gamma)^i (2K+1)
    Interval l2;  // ||rho|| (1 + Gamma)^{i-1} (2K+1) sqrt2
};
AprioriDiscrete apriori_discrete_norms(const NoiseParams& n, int K, int i);

// (1 - C_N)^-1 (sum_{i<N} C_i) ((1 + Gamma + ||rho||) Gamma + eps)
Interval error_bound(const MixingCertificate& cert, const Interval& eps, const NoiseParams& n, int K);

struct CertOptions {
    TolProfile tol{};        // tol.sigma = 0 means "use the point's sigma"
    double target = 0.5;     // for C_N
    int n_max = 64;
    double fp_tol = 0.0;     // 0: default_fixed_point_tol
    int fp_max_iter = 20000;
    int mixing_min_steps = 0;
};

// Full pipeline. A cached deterministic matrix may be supplied; it must match
// the map and K.
DensityEnclosure enclose_density(const TestMap& map, const NoiseParams& n, int K, const CertOptions& opts = {},
                                 const DeterministicMatrix* cached = nullptr);
DensityEnclosure enclose_density(const DiscretizedOperator& A, const TestMap& map, const CertOptions& opts);

}  // namespace lyapcert
