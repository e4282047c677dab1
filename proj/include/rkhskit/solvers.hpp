#pragma once

#include "rkhskit/kernels.hpp"

#include <string>
#include <vector>

namespace rkhs {

enum class Loss { square, bernoulli, hinge };

std::string loss_name(Loss loss);

// A fitted penalized model f = sum_i c_i K(t_i, .) + sum_v d_v phi_v.
//
// Objective conventions: square loss is averaged, (1/n)||y - f||^2 + λ c'Kc
// (the solved system is (K + nλI)c + Td = y, T'c = 0); hinge and bernoulli
// losses are summed, Σ C(y_i, f_i) + λ c'Kc.
struct PenalizedFit {
    Vector c;
    Vector d;
    double lambda = 0.0;
    Loss loss = Loss::square;
    double objective_value = 0.0;
};

// Multicategory fit: k coordinate functions f_j = K C_j + d_j subject to
// sum_j f_j = 0 everywhere.
struct MultiFit {
    Matrix coefficients;  // n x k
    Vector intercepts;    // k
    double lambda = 0.0;
    int k = 0;
    double objective_value = 0.0;
    std::vector<std::string> warnings;
};

// L1-penalized least-squares fit; support holds the indices of the
// exactly-nonzero coefficients.
struct SparseFit {
    Vector beta;
    double lambda = 0.0;
    std::vector<int> support;
};

// Square loss: unique minimizer of (1/n) Σ (y_i - f(t_i))^2 + λ ||Pf||^2
// via the block system (K + nλI)c + Td = y, T'c = 0.
PenalizedFit fit_penalized_ls(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                              double lambda);

// Cross-kernel matrix K(x_i, t_j) between new points (rows of X) and
// training points (rows of T).
Matrix cross_gram(const KernelSpec& kernel, const Matrix& new_points, const Matrix& train_points);

// Predictions at new points; the null-space part is rebuilt from the kernel's
// default basis with fit.d.size() columns.
Vector evaluate_fit(const PenalizedFit& fit, const KernelSpec& kernel, const Matrix& train_points,
                    const Matrix& new_points);

// Penalized Bernoulli likelihood with ±1 coding,
// Σ log(1 + exp(-y_i f_i)) + λ c'Kc, by damped Newton iterations.
// Converged when the gradient norm drops below 1e-8; throws SolverFailure
// (with the final gradient norm) after 100 iterations.
PenalizedFit fit_penalized_logistic(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                                    double lambda);

// Hinge-loss SVM Σ (1 - y_i f_i)_+ + λ c'Kc with constant null space, solved
// in the box-constrained dual by pairwise coordinate updates over seeded
// random-permutation sweeps; terminates when the duality gap is < 1e-6.
PenalizedFit fit_svm(const GramMatrix& K, const Vector& y, double lambda,
                     std::uint64_t seed = 0);

// Class-r target vector: 1 in position r (1-based), -1/(k-1) elsewhere.
Vector msvm_label_coding(int k, int label);

// Multicategory SVM with the sum-to-zero constraint: minimizes
// Σ_i Σ_{j != y_i} (f_j(t_i) + 1/(k-1))_+ + λ Σ_j c_j'Kc_j over function
// vectors with Σ_j f_j = 0 everywhere; classification is argmax (ties ->
// lowest class index).
MultiFit fit_msvm(const GramMatrix& K, const std::vector<int>& labels, double lambda, int k);

// Component values of a MultiFit at new points (rows), one column per class.
Matrix evaluate_msvm(const MultiFit& fit, const KernelSpec& kernel, const Matrix& train_points,
                     const Matrix& new_points);

// argmax rule, ties broken toward the lowest class index; returns 1-based labels.
std::vector<int> msvm_classify(const Matrix& component_values);

// LASSO: cyclic coordinate descent on (1/2)||y - Bβ||^2 + λ Σ |β_j|;
// converged when the largest coefficient change in a sweep is < 1e-9.
SparseFit fit_lasso(const Matrix& B, const Vector& y, double lambda);

// Objective evaluators at arbitrary coefficients (the conventions above).
double square_objective(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                        double lambda, const Vector& c, const Vector& d);
double logistic_objective(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                          double lambda, const Vector& c, const Vector& d);
double hinge_objective(const GramMatrix& K, const Vector& y, double lambda, const Vector& c,
                       double d);
double msvm_objective(const GramMatrix& K, const std::vector<int>& labels, double lambda, int k,
                      const Matrix& coefficients, const Vector& intercepts);
double lasso_objective(const Matrix& B, const Vector& y, double lambda, const Vector& beta);

}  // namespace rkhs
