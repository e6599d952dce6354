#pragma once

#include <vector>

#include "lyapcert/certification.hpp"

namespace lyapcert {

// entry j encloses Si(j pi) = int_0^{j pi} sin(x)/x dx
using SineTable = std::vector<Interval>;

SineTable sine_integral_multiples(int j_max);

// F[0] = ln(alpha(1+beta)) - (alpha-1), F[j] = -(alpha-1)/(j pi) Si(j pi)
FourierVector observable_coefficients(const MapParams& p, int K, const SineTable& si);

struct LyapunovEnclosure {
    Interval lambda;
    Interval lambda_s;     // real part of the discrete pairing
    Interval lambda_s_im;  // imaginary rounding residue, contains 0
    Interval pairing_tail;  // always [0, 0]: g has no modes above K
    Interval density_term;  // upsilon * E
    Interval upsilon;
    double alpha = 0.0;
    double beta = 0.0;
    double sigma = 0.0;
    int K = 0;
};

// 2 sum_j phi[j] conj(g[j]) over the common modes
ComplexInterval pairing(const FourierVector& phi, const FourierVector& g);

LyapunovEnclosure lyapunov_enclosure(const DensityEnclosure& d, const MapParams& p, const SineTable& si);

// int phi f_sigma, with |phi|_{L2} <= phi_l2; both parts widened by phi_l2 E
ComplexInterval observable_integral(const DensityEnclosure& d, const FourierVector& phi, const Interval& phi_l2);

}  // namespace lyapcert
