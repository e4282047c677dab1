#pragma once

#include <Eigen/Dense>

#include <string>

namespace rkhs {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Relative eigenvalue tolerance below which a symmetric matrix still counts
// as positive semidefinite (float64 round-off scale).
inline constexpr double kPsdRelTol = 1e-8;

// A positive definite function K(s,t). Built-ins:
//   spline(m):    penalty-subspace kernel of the order-m smoothing spline on
//                 [0,1], K(s,t) = ∫ (s-u)_+^{m-1} (t-u)_+^{m-1} / ((m-1)!)^2 du
//                 (m=1: min(s,t); m=2, s<=t: s^2 (3t - s) / 6).
//                 Null space: polynomials of degree <= m-1.
//   gaussian(w):  exp(-||s-t||^2 / (2 w^2)), w > 0.
//   linear():     <s, t>.
//   precomputed:  a user Gram over abstract objects; points are row indices.
struct KernelSpec {
    enum class Kind { spline, gaussian, linear, precomputed };

    Kind kind = Kind::spline;
    int spline_order = 2;  // m in {1, 2}
    double width = 1.0;    // gaussian only
    Matrix gram_data;      // precomputed only

    static KernelSpec spline(int m);
    static KernelSpec gaussian(double width);
    static KernelSpec linear();
    static KernelSpec precomputed(Matrix gram);

    // e.g. "spline:2", "gaussian:0.5", "linear", "precomputed"
    std::string name() const;
};

// Evaluate K(x, y) for vector arguments (spline kernels require 1-d points
// in [0,1]; precomputed kernels cannot be evaluated pointwise).
double kernel_value(const KernelSpec& kernel, const Eigen::Ref<const Vector>& x,
                    const Eigen::Ref<const Vector>& y);

// Symmetric Gram matrix over a finite point set. Construction enforces exact
// symmetry: built-in kernels fill one triangle and mirror it, precomputed
// input is averaged with its transpose.
class GramMatrix {
public:
    GramMatrix() = default;
    // Symmetrizes `raw` as (G + G^T)/2.
    explicit GramMatrix(Matrix raw, Matrix points = Matrix());

    Index size() const { return entries_.rows(); }
    double operator()(Index i, Index j) const { return entries_(i, j); }
    const Matrix& matrix() const { return entries_; }
    const Matrix& points() const { return points_; }

private:
    Matrix entries_;
    Matrix points_;  // n x p evaluation locations; empty for precomputed
};

// Tabulate the kernel on `points` (one point per row). For precomputed
// kernels, pass an empty points matrix to get the full stored Gram, or a
// single integer-valued column selecting rows of it.
GramMatrix gram(const KernelSpec& kernel, const Matrix& points);

// Squared-distance-from-kernel identity d_ij = K(i,i) + K(j,j) - 2 K(i,j);
// negative round-off is clamped to zero.
double squared_distance_from_kernel(const GramMatrix& K, Index i, Index j);

// Nearest PSD matrix in Frobenius norm: eigendecompose and clamp negative
// eigenvalues to zero.
Matrix psd_project(const Matrix& S);

// min eigenvalue >= -kPsdRelTol * max(|eigenvalues|)?
bool is_psd_within_tolerance(const Matrix& S, double rel_tol = kPsdRelTol);

// Evaluations of the penalty null-space basis functions at the data points.
// Full column rank is checked at construction; M may be zero.
struct NullSpaceBasis {
    Matrix columns;  // n x M

    NullSpaceBasis() = default;
    explicit NullSpaceBasis(Matrix cols);

    Index dim() const { return columns.cols(); }
    Index n() const { return columns.rows(); }
};

NullSpaceBasis empty_basis(Index n);
NullSpaceBasis constant_basis(Index n);
// Monomials 1, t, ..., t^(degree) on 1-d points.
NullSpaceBasis polynomial_basis(const Vector& t, int degree);

// Default null space for a kernel: polynomials of degree <= m-1 for the
// order-m spline, the constant function otherwise. `dim` overrides the
// number of columns (0 = none, -1 = kernel default).
NullSpaceBasis null_space_basis(const KernelSpec& kernel, const Matrix& points, int dim = -1);

}  // namespace rkhs
