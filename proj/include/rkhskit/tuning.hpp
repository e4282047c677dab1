#pragma once

#include "rkhskit/kernels.hpp"

#include <cstdint>
#include <functional>

namespace rkhs {

// Influence matrix A(λ) of the square-loss fit: fitted values = A(λ) y for
// every y. Closed form A = I - nλ M^{-1} + nλ M^{-1} T (T'M^{-1}T)^{-1} T'M^{-1}
// with M = K + nλI; symmetric, eigenvalues in [0, 1].
Matrix influence_matrix(const GramMatrix& K, const NullSpaceBasis& T, double lambda);

// Equivalent degrees of freedom for signal: trace of the influence matrix.
double df_signal(const Matrix& A);

// GCV function V(λ) = Σ (y_i - f(t_i))^2 / (trace(I - A(λ)))^2.
// Returns +inf when trace(I - A) <= 1e-12 (interpolating fit).
double gcv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T, double lambda);

// Leave-one-out score (1/n) Σ (y_i - f^{[-i]}(t_i))^2 by explicit refit on
// each n-1 subset.
double loo_cv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T, double lambda);

// Probe-based trace estimate: mean over replicates of
// δ'(fitter(y+δ) - fitter(y)) / delta_scale^2 with i.i.d. ±delta_scale
// (Rademacher) perturbations. Unbiased for trace A of a linear smoother; for
// a differentiable nonlinear fitter it estimates Σ_i ∂ŷ_i/∂y_i.
struct RandomizedTraceEstimate {
    double mean = 0.0;
    double standard_error = 0.0;  // sample std / sqrt(replicates); 0 when replicates == 1
    int replicates = 0;
    double delta_scale = 0.0;
    std::uint64_t seed = 0;
};

using Fitter = std::function<Vector(const Vector&)>;

RandomizedTraceEstimate randomized_trace(const Fitter& fitter, const Vector& y, double delta_scale,
                                         int replicates, std::uint64_t seed);

// Default probe size for nonlinear fitters: 1e-3 standard deviations of y.
double default_delta_scale(const Vector& y);

struct TuningReport {
    Vector lambda_grid;
    Vector gcv_values;
    Vector loo_values;  // empty unless requested
    Vector df_values;   // trace A(λ) per grid point
    double selected_lambda = 0.0;
};

// 40 points log-spaced over [1e-8, 1e2].
Vector default_lambda_grid(int points = 40);

// Grid scan of V(λ); selected_lambda attains the minimum (ties -> smallest λ).
TuningReport minimize_gcv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T,
                          const Vector& lambda_grid, bool with_loo = false);

}  // namespace rkhs
