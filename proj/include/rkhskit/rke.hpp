#pragma once

#include "rkhskit/kernels.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace rkhs {

// Scattered, possibly incomplete, possibly non-metric pairwise
// dissimilarities on the squared-distance scale.
struct DissimilaritySet {
    struct Entry {
        Index i = 0;
        Index j = 0;
        double d = 0.0;
    };

    std::vector<Entry> entries;
    Index n = 0;

    DissimilaritySet() = default;
    DissimilaritySet(Index n_objects, std::vector<Entry> obs);
};

// Σ |d_obs - (K_ii + K_jj - 2 K_ij)| + λ trace(K).
double rke_objective(const Matrix& K, const DissimilaritySet& D, double lambda);

struct RkeOptions {
    int max_iters = 2000;
    double step0 = 0.0;       // 0 = (Σ d_obs) / (n * entries)
    std::uint64_t seed = 0;   // recorded for reproducibility manifests
    double tol = 0.0;         // stop early once the objective falls below tol
    int rank = 0;             // embedding rank; 0 = smallest with >= 95% of trace
    bool center = false;      // double-center K before the spectral embedding
    // called with (iteration, iterate, objective) after each projection
    std::function<void(int, const Matrix&, double)> observer;
};

struct EmbeddingResult {
    Matrix K;                    // fitted PSD matrix
    double objective = 0.0;
    Vector eigenvalues;          // descending, clamped at zero
    Matrix coordinates;          // n x rank, eigenvectors scaled by sqrt(eigenvalue)
    double trace_fraction = 0.0; // share of trace kept by the retained eigenvalues
    int iterations = 0;
};

// Projected subgradient descent on the objective over the PSD cone with
// diminishing steps η_t = η_0/sqrt(t) and best-iterate tracking, warm-started
// from the classical-scaling estimate (missing dissimilarities imputed by the
// observed mean). K = 0 is always a candidate, so the returned objective is
// never worse than either start.
EmbeddingResult fit_rke(const DissimilaritySet& D, double lambda, const RkeOptions& options = {});

// Spectral embedding: top-d eigenpairs of K, coordinates = V sqrt(Λ), with
// optional double-centering first. Column signs are fixed so the largest
// entry of each eigenvector is positive.
EmbeddingResult embed(const Matrix& K, Index rank, bool center = false);

}  // namespace rkhs
