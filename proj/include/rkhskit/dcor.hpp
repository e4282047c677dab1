#pragma once

#include "rkhskit/kernels.hpp"

#include <cstdint>

namespace rkhs {

// Double-centered pairwise Euclidean distances of a sample (rows of an
// n x p matrix): A_ij = a_ij - rowmean_i - colmean_j + grandmean. All row
// and column sums vanish and A is symmetric.
struct CenteredDistances {
    Matrix A;
};

CenteredDistances double_center(const Matrix& points);

// dcov(A, B) = sqrt(max(0, (1/n^2) Σ_ij A_ij B_ij)).
double dcov(const CenteredDistances& A, const CenteredDistances& B);

struct DcorReport {
    double dcov = 0.0;
    double dvar_x = 0.0;
    double dvar_y = 0.0;
    double dcor = 0.0;       // in [0, 1]; 0 by convention when either dvar is 0
    double p_value = -1.0;   // in [0, 1]; -1 = no test performed
    int permutations = 0;
    std::uint64_t seed = 0;
    bool degenerate = false;  // either sample had zero distance variance
};

// Distance correlation between paired samples of arbitrary dimensions p, q.
DcorReport dcor(const Matrix& X, const Matrix& Y);

// Independence test: p = (1 + #{permuted dcor >= observed}) / (n_perm + 1),
// permuting the rows of Y with a seeded counter-based generator (replicates
// are order-independent). Degenerate samples get p = 1 and a flag.
DcorReport permutation_test(const Matrix& X, const Matrix& Y, int n_perm, std::uint64_t seed);

}  // namespace rkhs
