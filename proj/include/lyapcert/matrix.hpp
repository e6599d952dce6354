#pragma once

#include <cstddef>
#include <vector>

#include "lyapcert/interval.hpp"

namespace lyapcert {

// Dense row-major matrix of complex intervals.
class IntervalMatrix {
public:
    IntervalMatrix() = default;
    IntervalMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    ComplexInterval& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const ComplexInterval& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    const std::vector<ComplexInterval>& data() const { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<ComplexInterval> data_;
};

// Upper bound on the spectral norm given entrywise magnitude upper bounds:
// min(Frobenius, sqrt(|.|_1 |.|_inf)), all sums rounded upward.
double norm2_upper_from_magnitudes(const double* mag, std::size_t rows, std::size_t cols);

// Upper bound on the spectral norm of every point matrix inside M.
double norm2_upper(const IntervalMatrix& M);

// Complex midpoint-radius matrix: entry (i,j) is the disk mid(i,j) + rad(i,j)*D.
// Used for the O(n^3) kernels where rectangular intervals would be too slow.
struct BallMatrix {
    BallMatrix() = default;
    BallMatrix(std::size_t rows, std::size_t cols)
        : rows(rows), cols(cols), re(rows * cols), im(rows * cols), rad(rows * cols) {}

    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> re;
    std::vector<double> im;
    std::vector<double> rad;

    std::size_t index(std::size_t i, std::size_t j) const { return i * cols + j; }
};

BallMatrix to_ball(const IntervalMatrix& M);
// rectangular hull of a disk
ComplexInterval ball_entry(const BallMatrix& B, std::size_t i, std::size_t j);
double norm2_upper(const BallMatrix& B);

// Components below floor move into the radius and every radius is raised to
// at least floor, so products of nonzero parts stay in the normal range
// (subnormal arithmetic is very slow). The disks only grow.
inline constexpr double kBallFloor = 0x1p-500;
void coarsen(BallMatrix& B, double floor = kBallFloor);

namespace kernels {

// C = A*B with a rigorous radius (error bound derived in matrix.cpp).
void ball_matmul_serial(const BallMatrix& A, const BallMatrix& B, BallMatrix& C);
void ball_matmul_omp(const BallMatrix& A, const BallMatrix& B, BallMatrix& C);
// compensated midpoints (error-free products and sums)
void ball_matmul_dot2_serial(const BallMatrix& A, const BallMatrix& B, BallMatrix& C);
void ball_matmul_dot2_omp(const BallMatrix& A, const BallMatrix& B, BallMatrix& C);

// y = A*x in rectangular interval arithmetic
void interval_matvec_serial(const IntervalMatrix& A, const std::vector<ComplexInterval>& x,
                            std::vector<ComplexInterval>& y);
void interval_matvec_omp(const IntervalMatrix& A, const std::vector<ComplexInterval>& x,
                         std::vector<ComplexInterval>& y);

}  // namespace kernels

BallMatrix ball_matmul(const BallMatrix& A, const BallMatrix& B);
BallMatrix ball_matmul_accurate(const BallMatrix& A, const BallMatrix& B);

}  // namespace lyapcert
