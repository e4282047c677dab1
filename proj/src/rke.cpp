#include "rkhskit/rke.hpp"

#include "rkhskit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rkhs {

DissimilaritySet::DissimilaritySet(Index n_objects, std::vector<Entry> obs)
    : entries(std::move(obs)), n(n_objects) {
    if (n < 1) throw InvalidInput("dissimilarity set: need at least one object");
    std::vector<bool> seen(static_cast<std::size_t>(n * n), false);
    for (const auto& e : entries) {
        if (e.i < 0 || e.j < 0 || e.i >= n || e.j >= n)
            throw InvalidInput("dissimilarity entry index out of range");
        if (e.i == e.j) throw InvalidInput("dissimilarity entry with i == j");
        if (e.d < 0.0) throw InvalidInput("dissimilarity must be nonnegative");
        const Index a = std::min(e.i, e.j), b = std::max(e.i, e.j);
        const std::size_t key = static_cast<std::size_t>(a * n + b);
        if (seen[key]) throw InvalidInput("duplicate dissimilarity pair (" + std::to_string(a) +
                                          "," + std::to_string(b) + ")");
        seen[key] = true;
    }
}

double rke_objective(const Matrix& K, const DissimilaritySet& D, double lambda) {
    if (K.rows() != D.n || K.cols() != D.n)
        throw InvalidInput("rke_objective: matrix size does not match object count");
    double obj = lambda * K.trace();
    for (const auto& e : D.entries) {
        const double dk = K(e.i, e.i) + K(e.j, e.j) - 2.0 * K(e.i, e.j);
        obj += std::abs(e.d - dk);
    }
    return obj;
}

namespace {

// Classical-scaling warm start from the (completed) dissimilarity matrix.
Matrix classical_start(const DissimilaritySet& D) {
    const Index n = D.n;
    double mean = 0.0;
    for (const auto& e : D.entries) mean += e.d;
    mean /= std::max<std::size_t>(1, D.entries.size());

    Matrix delta = Matrix::Constant(n, n, mean);
    delta.diagonal().setZero();
    for (const auto& e : D.entries) {
        delta(e.i, e.j) = e.d;
        delta(e.j, e.i) = e.d;
    }
    const Matrix J = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
    return psd_project(-0.5 * J * delta * J);
}

void spectral_embedding(EmbeddingResult& result, Index rank, bool center) {
    Matrix K = result.K;
    const Index n = K.rows();
    if (center) {
        const Matrix J = Matrix::Identity(n, n) - Matrix::Constant(n, n, 1.0 / n);
        K = J * K * J;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (K + K.transpose()));
    if (eig.info() != Eigen::Success) throw SolverFailure("embed: eigendecomposition failed");

    // descending order, negative round-off clamped
    Vector lam(n);
    Matrix vec(n, n);
    for (Index i = 0; i < n; ++i) {
        lam(i) = std::max(0.0, eig.eigenvalues()(n - 1 - i));
        vec.col(i) = eig.eigenvectors().col(n - 1 - i);
        Index arg = 0;
        vec.col(i).cwiseAbs().maxCoeff(&arg);
        if (vec(arg, i) < 0.0) vec.col(i) = -vec.col(i);
    }
    result.eigenvalues = lam;

    const double total = lam.sum();
    if (rank <= 0) {
        rank = 1;
        if (total > 0.0) {
            double kept = lam(0);
            while (rank < n && kept < 0.95 * total) kept += lam(rank++);
        }
    }
    if (rank > n) throw InvalidInput("embed: rank exceeds matrix size");

    result.coordinates = vec.leftCols(rank) * lam.head(rank).cwiseSqrt().asDiagonal();
    result.trace_fraction = total > 0.0 ? lam.head(rank).sum() / total : 1.0;
}

}  // namespace

EmbeddingResult fit_rke(const DissimilaritySet& D, double lambda, const RkeOptions& options) {
    if (D.entries.empty()) throw InvalidInput("fit_rke: no dissimilarity entries");
    if (lambda < 0.0) throw InvalidInput("fit_rke: lambda must be nonnegative");

    const Index n = D.n;
    double d_total = 0.0;
    for (const auto& e : D.entries) d_total += e.d;
    const double step0 =
        options.step0 > 0.0
            ? options.step0
            : d_total / (static_cast<double>(n) * static_cast<double>(D.entries.size()));

    Matrix K = classical_start(D);
    Matrix best_K = Matrix::Zero(n, n);
    double best_obj = rke_objective(best_K, D, lambda);  // K = 0 candidate
    {
        const double start_obj = rke_objective(K, D, lambda);
        if (start_obj < best_obj) {
            best_obj = start_obj;
            best_K = K;
        }
    }

    int iters = 0;
    for (int t = 1; t <= options.max_iters; ++t) {
        if (options.tol > 0.0 && best_obj <= options.tol) break;
        Matrix grad = lambda * Matrix::Identity(n, n);
        for (const auto& e : D.entries) {
            const double dk = K(e.i, e.i) + K(e.j, e.j) - 2.0 * K(e.i, e.j);
            const double r = e.d - dk;
            if (r == 0.0) continue;  // subgradient of |.| at 0 taken as 0
            // d|r|/dK = -sign(r) (E_ii + E_jj - E_ij - E_ji)
            const double s = (r > 0.0) ? -1.0 : 1.0;
            grad(e.i, e.i) += s;
            grad(e.j, e.j) += s;
            grad(e.i, e.j) -= s;
            grad(e.j, e.i) -= s;
        }
        const double eta = step0 / std::sqrt(static_cast<double>(t));
        K = psd_project(K - eta * grad);
        if (!K.allFinite()) {
            std::ostringstream msg;
            msg << "fit_rke: non-finite iterate at iteration " << t << " (step " << eta << ")";
            throw SolverFailure(msg.str());
        }
        const double obj = rke_objective(K, D, lambda);
        if (options.observer) options.observer(t, K, obj);
        if (obj < best_obj) {
            best_obj = obj;
            best_K = K;
        }
        iters = t;
    }

    EmbeddingResult result;
    result.K = best_K;
    result.objective = best_obj;
    result.iterations = iters;
    spectral_embedding(result, options.rank, options.center);
    return result;
}

EmbeddingResult embed(const Matrix& K, Index rank, bool center) {
    if (K.rows() != K.cols()) throw InvalidInput("embed: matrix must be square");
    if (rank < 1 || rank > K.rows()) throw InvalidInput("embed: rank out of range");
    EmbeddingResult result;
    result.K = K;
    spectral_embedding(result, rank, center);
    return result;
}

}  // namespace rkhs
