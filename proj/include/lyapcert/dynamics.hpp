#pragma once

#include <optional>
#include <string>

#include "lyapcert/interval.hpp"

namespace lyapcert {

// T(x) = beta - (1 + beta)|x|^alpha on [-1, 1]
struct MapParams {
    double alpha = 2.0;
    double beta = 1.0;

    void validate() const;
    bool integer_alpha() const { return alpha == std::floor(alpha) && alpha <= 64; }
};

struct NoiseParams {
    double sigma = 0.1;

    void validate() const;
};

Interval map_eval(const MapParams& p, const Interval& x);
// point evaluation in plain floating point (simulator)
double map_point(const MapParams& p, double x);

// tau(x) = x - 2 floor((x + 1)/2)
Interval boundary_fold(const Interval& x);
double fold_point(double x);

// ln(alpha(1+beta)) + (alpha-1) ln|x|
Interval log_abs_derivative(const MapParams& p, const Interval& x);

Interval doeblin_constant(const NoiseParams& n);

struct KernelConstants {
    Interval rho0;    // (sigma sqrt(2 pi))^-1
    Interval l2norm;  // (2 sigma sqrt(pi))^-1/2
};
KernelConstants kernel_constants(const NoiseParams& n);

// L2 norm of log|T'| on [-1, 1]
Interval upsilon(const MapParams& p);

// Maps the operator assembler understands. The family branch carries the
// analytic data the quadrature needs: a real derivative bound and a bound on
// |T'| over complex rectangles (nullopt outside the domain of analyticity).
class TestMap {
public:
    enum class Kind { family, identity, constant, tent };

    static TestMap family(const MapParams& p);
    static TestMap identity();
    static TestMap constant(double c);
    static TestMap tent();

    Kind kind() const { return kind_; }
    const MapParams& params() const { return params_; }
    double constant_value() const { return c_; }
    bool is_even() const { return kind_ != Kind::identity; }
    // non-integer alpha: |y|^alpha has a branch point at y = 0
    bool branch_at_zero() const;

    Interval eval(const Interval& x) const;
    // upper bound of |T'| on x
    Interval derivative_magnitude(const Interval& x) const;
    // sup |T'(z)| over the rectangle [c-a, c+a] x [-b, b]; T must be analytic
    // there and real on its real segment
    std::optional<double> complex_derivative_bound(double c, double a, double b) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::identity;
    MapParams params_{};
    double c_ = 0.0;
};

}  // namespace lyapcert
