#pragma once

#include "rkhskit/kernels.hpp"

#include <array>
#include <string>
#include <vector>

namespace rkhs {

// Discrete probability measure over the n observed values of one coordinate;
// drives the averaging operator E_α.
struct AveragingMeasure {
    Vector weights;

    AveragingMeasure() = default;
    explicit AveragingMeasure(Vector w);

    static AveragingMeasure uniform(Index n);
};

// Apply (I - E_α) to both kernel arguments under the measure:
// Ĝ = G - a 1' - 1 a' + g 11' with a = Gw, g = w'Gw. Weighted row sums of
// the result vanish; constants are annihilated.
GramMatrix center_kernel(const GramMatrix& G, const AveragingMeasure& mu);

// One term of the expansion: coords = {α, -1} for a main effect,
// {α, β} with α < β for a two-factor interaction (0-based coordinates).
struct AnovaComponent {
    std::array<int, 2> coords;
    GramMatrix gram;

    bool is_interaction() const { return coords[1] >= 0; }
};

std::string component_label(const std::array<int, 2>& coords,
                            const std::vector<std::string>& names = {});

// Main-effect components are the centered per-coordinate Grams; interaction
// components are their entrywise products (the finite-sample tensor-product
// kernel). max_order must be 1 or 2.
std::vector<AnovaComponent> build_anova_kernels(const std::vector<GramMatrix>& centered,
                                                int max_order);

struct AnovaTerm {
    std::array<int, 2> coords;
    double theta = 1.0;
    Vector values;  // component function at the n data points
};

// f = μ + Σ_α f_α + Σ_{α<β} f_αβ at the data points; the terms reproduce the
// full fitted values exactly and each averages to zero under its measures.
struct AnovaDecomposition {
    double mu = 0.0;
    std::vector<AnovaTerm> terms;
    double lambda = 0.0;
    Vector coefficients;   // shared representer coefficients c
    Vector fitted_values;  // mu + sum of term values
};

// Square-loss representer fit with combined Gram Σ_k θ_k G_k and constant
// null space; component k recovered as θ_k G_k c.
AnovaDecomposition fit_ssanova(const std::vector<AnovaComponent>& components, const Vector& theta,
                               const Vector& y, double lambda);

struct SsanovaPrediction {
    double total = 0.0;
    std::vector<double> components;  // aligned with decomposition terms
};

// Evaluate each component at a new point via centered kernel sections;
// total = mu + sum of components. Coordinates of new_point may be arbitrary
// values in each kernel's domain.
SsanovaPrediction predict_ssanova(const AnovaDecomposition& decomposition,
                                  const std::vector<KernelSpec>& kernels,
                                  const Matrix& train_points,
                                  const std::vector<AveragingMeasure>& measures,
                                  const Vector& new_point);

}  // namespace rkhs
