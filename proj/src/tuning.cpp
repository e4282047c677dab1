#include "rkhskit/tuning.hpp"

#include "rkhskit/errors.hpp"
#include "rkhskit/rng.hpp"
#include "rkhskit/solvers.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>

namespace rkhs {

Matrix influence_matrix(const GramMatrix& K, const NullSpaceBasis& T, double lambda) {
    const Index n = K.size();
    if (T.n() != n) throw InvalidInput("influence_matrix: dimension mismatch");
    if (!(lambda > 0.0)) throw InvalidInput("influence_matrix: lambda must be positive");

    const double nl = static_cast<double>(n) * lambda;
    const Matrix M = K.matrix() + nl * Matrix::Identity(n, n);
    const Eigen::LDLT<Matrix> ldlt(M);
    if (ldlt.info() != Eigen::Success)
        throw SolverFailure("influence_matrix: singular block system");
    const Matrix Minv = ldlt.solve(Matrix::Identity(n, n));

    Matrix A = Matrix::Identity(n, n) - nl * Minv;
    if (T.dim() > 0) {
        const Matrix MinvT = Minv * T.columns;
        const Matrix small = T.columns.transpose() * MinvT;
        const Eigen::LDLT<Matrix> inner(small);
        if (inner.info() != Eigen::Success)
            throw SolverFailure("influence_matrix: singular block system");
        A += nl * MinvT * inner.solve(MinvT.transpose());
    }
    return 0.5 * (A + A.transpose());
}

double df_signal(const Matrix& A) {
    if (A.rows() != A.cols()) throw InvalidInput("df_signal: matrix must be square");
    return A.trace();
}

double gcv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T, double lambda) {
    const Matrix A = influence_matrix(K, T, lambda);
    const double denom = static_cast<double>(y.size()) - A.trace();
    if (denom <= 1e-12) return std::numeric_limits<double>::infinity();
    const double rss = (y - A * y).squaredNorm();
    return rss / (denom * denom);
}

double loo_cv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T, double lambda) {
    const Index n = y.size();
    if (n < 3) throw InvalidInput("loo_cv: need at least 3 observations");

    double total = 0.0;
    for (Index i = 0; i < n; ++i) {
        Matrix Ksub(n - 1, n - 1);
        Matrix Tsub(n - 1, T.dim());
        Vector ysub(n - 1);
        Vector kx(n - 1);
        Index r = 0;
        for (Index a = 0; a < n; ++a) {
            if (a == i) continue;
            ysub(r) = y(a);
            kx(r) = K(i, a);
            if (T.dim() > 0) Tsub.row(r) = T.columns.row(a);
            Index s = 0;
            for (Index b = 0; b < n; ++b) {
                if (b == i) continue;
                Ksub(r, s++) = K(a, b);
            }
            ++r;
        }
        const PenalizedFit fit =
            fit_penalized_ls(GramMatrix(Ksub), NullSpaceBasis(Tsub), ysub, lambda);
        double pred = kx.dot(fit.c);
        if (T.dim() > 0) pred += T.columns.row(i).dot(fit.d);
        const double e = y(i) - pred;
        total += e * e;
    }
    return total / static_cast<double>(n);
}

double default_delta_scale(const Vector& y) {
    const double mean = y.mean();
    const double var =
        (y.array() - mean).square().sum() / std::max<double>(1.0, static_cast<double>(y.size() - 1));
    const double sd = std::sqrt(var);
    return 1e-3 * (sd > 0.0 ? sd : 1.0);
}

RandomizedTraceEstimate randomized_trace(const Fitter& fitter, const Vector& y, double delta_scale,
                                         int replicates, std::uint64_t seed) {
    if (replicates < 1) throw InvalidInput("randomized_trace: replicates must be >= 1");
    if (!(delta_scale > 0.0)) throw InvalidInput("randomized_trace: delta_scale must be positive");

    const Vector base = fitter(y);
    if (base.size() != y.size()) throw InvalidInput("randomized_trace: fitter changed dimension");

    Vector estimates(replicates);
    for (int r = 0; r < replicates; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        Vector delta(y.size());
        for (Index i = 0; i < y.size(); ++i) delta(i) = delta_scale * rng.rademacher();
        const Vector perturbed = fitter(y + delta);
        estimates(r) = delta.dot(perturbed - base) / (delta_scale * delta_scale);
    }

    RandomizedTraceEstimate est;
    est.mean = estimates.mean();
    if (replicates > 1) {
        const double var =
            (estimates.array() - est.mean).square().sum() / static_cast<double>(replicates - 1);
        est.standard_error = std::sqrt(var / static_cast<double>(replicates));
    }
    est.replicates = replicates;
    est.delta_scale = delta_scale;
    est.seed = seed;
    return est;
}

Vector default_lambda_grid(int points) {
    if (points < 1) throw InvalidInput("lambda grid needs at least one point");
    Vector grid(points);
    if (points == 1) {
        grid(0) = 1e-3;
        return grid;
    }
    const double lo = std::log10(1e-8), hi = std::log10(1e2);
    for (int i = 0; i < points; ++i)
        grid(i) = std::pow(10.0, lo + (hi - lo) * static_cast<double>(i) / (points - 1));
    return grid;
}

TuningReport minimize_gcv(const Vector& y, const GramMatrix& K, const NullSpaceBasis& T,
                          const Vector& lambda_grid, bool with_loo) {
    if (lambda_grid.size() == 0) throw InvalidInput("minimize_gcv: empty grid");
    for (Index i = 0; i < lambda_grid.size(); ++i) {
        if (!(lambda_grid(i) > 0.0)) throw InvalidInput("minimize_gcv: grid must be positive");
        if (i > 0 && lambda_grid(i) <= lambda_grid(i - 1))
            throw InvalidInput("minimize_gcv: grid must be strictly increasing");
    }

    TuningReport report;
    report.lambda_grid = lambda_grid;
    report.gcv_values.resize(lambda_grid.size());
    report.df_values.resize(lambda_grid.size());
    if (with_loo) report.loo_values.resize(lambda_grid.size());

    Index best = -1;
    for (Index i = 0; i < lambda_grid.size(); ++i) {
        const Matrix A = influence_matrix(K, T, lambda_grid(i));
        report.df_values(i) = A.trace();
        const double denom = static_cast<double>(y.size()) - A.trace();
        report.gcv_values(i) = (denom <= 1e-12)
                                   ? std::numeric_limits<double>::infinity()
                                   : (y - A * y).squaredNorm() / (denom * denom);
        if (with_loo) report.loo_values(i) = loo_cv(y, K, T, lambda_grid(i));
        if (std::isfinite(report.gcv_values(i)) &&
            (best < 0 || report.gcv_values(i) < report.gcv_values(best)))
            best = i;
    }
    if (best < 0) throw SolverFailure("minimize_gcv: every grid point is degenerate");
    report.selected_lambda = lambda_grid(best);
    return report;
}

}  // namespace rkhs
