#include "rkhskit/solvers.hpp"

#include "rkhskit/errors.hpp"
#include "rkhskit/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rkhs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(1 + exp(-z)) without overflow
double softplus_neg(double z) {
    if (z > 0.0) return std::log1p(std::exp(-z));
    return -z + std::log1p(std::exp(z));
}

double soft_threshold(double x, double lam) {
    if (x > lam) return x - lam;
    if (x < -lam) return x + lam;
    return 0.0;
}

void check_binary_labels(const Vector& y, bool require_both) {
    int pos = 0, neg = 0;
    for (Index i = 0; i < y.size(); ++i) {
        if (y(i) == 1.0)
            ++pos;
        else if (y(i) == -1.0)
            ++neg;
        else
            throw InvalidInput("labels must be +1 or -1, got " + std::to_string(y(i)));
    }
    if (require_both && (pos == 0 || neg == 0))
        throw InvalidInput("both classes must be present");
}

void check_fit_inputs(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y) {
    if (K.size() != y.size() || T.n() != y.size())
        throw InvalidInput("fit: inconsistent dimensions (n_K=" + std::to_string(K.size()) +
                           ", n_T=" + std::to_string(T.n()) + ", n_y=" + std::to_string(y.size()) +
                           ")");
    if (!y.allFinite() || !K.matrix().allFinite())
        throw InvalidInput("fit: non-finite inputs");
}

}  // namespace

std::string loss_name(Loss loss) {
    switch (loss) {
        case Loss::square: return "square";
        case Loss::bernoulli: return "bernoulli";
        case Loss::hinge: return "hinge";
    }
    return "?";
}

double square_objective(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                        double lambda, const Vector& c, const Vector& d) {
    const Vector f = K.matrix() * c + T.columns * d;
    const double n = static_cast<double>(y.size());
    return (y - f).squaredNorm() / n + lambda * c.dot(K.matrix() * c);
}

PenalizedFit fit_penalized_ls(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                              double lambda) {
    check_fit_inputs(K, T, y);
    if (lambda < 0.0) throw InvalidInput("lambda must be nonnegative");
    const Index n = K.size();
    const Index m = T.dim();

    // Schur-complement solve of (K + nλI)c + Td = y, T'c = 0: robust across
    // the full λ range, where one rank-revealing pass on the raw block matrix
    // would drown the T columns at large nλ.
    const Matrix M = K.matrix() + static_cast<double>(n) * lambda * Matrix::Identity(n, n);
    const Eigen::LDLT<Matrix> ldlt(M);
    if (ldlt.info() != Eigen::Success)
        throw SolverFailure("fit_penalized_ls: singular block system");

    PenalizedFit fit;
    if (m > 0) {
        const Matrix G = ldlt.solve(T.columns);      // M^{-1} T
        const Matrix small = T.columns.transpose() * G;
        Eigen::FullPivLU<Matrix> lu(small);
        if (!lu.isInvertible()) throw SolverFailure("fit_penalized_ls: singular block system");
        fit.d = lu.solve(G.transpose() * y);
        fit.c = ldlt.solve(y - T.columns * fit.d);
    } else {
        fit.d = Vector(0);
        fit.c = ldlt.solve(y);
    }

    const Vector resid = M * fit.c + T.columns * fit.d - y;
    if (resid.norm() > 1e-6 * std::max(1.0, y.norm()))
        throw SolverFailure("fit_penalized_ls: singular block system");

    fit.lambda = lambda;
    fit.loss = Loss::square;
    fit.objective_value = square_objective(K, T, y, lambda, fit.c, fit.d);
    return fit;
}

Matrix cross_gram(const KernelSpec& kernel, const Matrix& new_points, const Matrix& train_points) {
    if (kernel.kind == KernelSpec::Kind::precomputed) {
        if (new_points.cols() != 1 || train_points.cols() != 1)
            throw InvalidInput("precomputed kernel expects single-column index points");
        Matrix out(new_points.rows(), train_points.rows());
        const Index total = kernel.gram_data.rows();
        auto to_index = [&](double v) {
            const Index k = static_cast<Index>(std::llround(v));
            if (v != static_cast<double>(k) || k < 0 || k >= total)
                throw InvalidInput("precomputed kernel index out of range: " + std::to_string(v));
            return k;
        };
        for (Index i = 0; i < new_points.rows(); ++i)
            for (Index j = 0; j < train_points.rows(); ++j)
                out(i, j) = kernel.gram_data(to_index(new_points(i, 0)), to_index(train_points(j, 0)));
        return out;
    }
    Matrix out(new_points.rows(), train_points.rows());
    for (Index i = 0; i < new_points.rows(); ++i)
        for (Index j = 0; j < train_points.rows(); ++j)
            out(i, j) = kernel_value(kernel, new_points.row(i).transpose(),
                                     train_points.row(j).transpose());
    return out;
}

Vector evaluate_fit(const PenalizedFit& fit, const KernelSpec& kernel, const Matrix& train_points,
                    const Matrix& new_points) {
    if (fit.c.size() != train_points.rows())
        throw InvalidInput("evaluate_fit: coefficient count does not match training points");
    Vector pred = cross_gram(kernel, new_points, train_points) * fit.c;
    if (fit.d.size() > 0) {
        const NullSpaceBasis phi =
            null_space_basis(kernel, new_points, static_cast<int>(fit.d.size()));
        pred += phi.columns * fit.d;
    }
    return pred;
}

double logistic_objective(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                          double lambda, const Vector& c, const Vector& d) {
    const Vector f = K.matrix() * c + T.columns * d;
    double obj = lambda * c.dot(K.matrix() * c);
    for (Index i = 0; i < y.size(); ++i) obj += softplus_neg(y(i) * f(i));
    return obj;
}

PenalizedFit fit_penalized_logistic(const GramMatrix& K, const NullSpaceBasis& T, const Vector& y,
                                    double lambda) {
    check_fit_inputs(K, T, y);
    check_binary_labels(y, /*require_both=*/true);
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");

    const Index n = K.size();
    const Index m = T.dim();
    const Matrix& Km = K.matrix();
    Vector c = Vector::Zero(n);
    Vector d = Vector::Zero(m);
    Vector f = Vector::Zero(n);

    constexpr double grad_tol = 1e-8;
    constexpr int max_iters = 100;
    const double ridge = 1e-12 * (1.0 + Km.diagonal().cwiseAbs().maxCoeff());

    double obj = logistic_objective(K, T, y, lambda, c, d);
    double grad_norm = kInf;
    for (int iter = 0; iter < max_iters; ++iter) {
        // gradient and curvature of the loss in the fitted values
        Vector g(n), w(n);
        for (Index i = 0; i < n; ++i) {
            const double sig = 1.0 / (1.0 + std::exp(-y(i) * f(i)));
            g(i) = -y(i) * (1.0 - sig);
            w(i) = sig * (1.0 - sig);
        }
        Vector grad(n + m);
        grad.head(n) = Km * (g + 2.0 * lambda * c);
        if (m > 0) grad.tail(m) = T.columns.transpose() * g;
        grad_norm = grad.norm();
        if (grad_norm < grad_tol) break;

        Matrix H(n + m, n + m);
        const Matrix KW = Km * w.asDiagonal();
        H.topLeftCorner(n, n) = KW * Km + 2.0 * lambda * Km;
        if (m > 0) {
            H.topRightCorner(n, m) = KW * T.columns;
            H.bottomLeftCorner(m, n) = H.topRightCorner(n, m).transpose();
            H.bottomRightCorner(m, m) = T.columns.transpose() * w.asDiagonal() * T.columns;
        }
        H.diagonal().array() += ridge;

        const Vector step = Eigen::LDLT<Matrix>(H).solve(-grad);
        const double slope = grad.dot(step);

        // backtracking line search
        double t = 1.0;
        while (t > 1e-14) {
            const Vector c_try = c + t * step.head(n);
            const Vector d_try = m > 0 ? Vector(d + t * step.tail(m)) : d;
            const double obj_try = logistic_objective(K, T, y, lambda, c_try, d_try);
            if (obj_try <= obj + 1e-4 * t * slope) {
                c = c_try;
                d = d_try;
                obj = obj_try;
                break;
            }
            t *= 0.5;
        }
        f = Km * c + T.columns * d;
    }
    if (grad_norm >= grad_tol) {
        std::ostringstream msg;
        msg << "fit_penalized_logistic: no convergence after " << max_iters
            << " iterations (gradient norm " << grad_norm << ")";
        throw SolverFailure(msg.str());
    }

    PenalizedFit fit;
    fit.c = c;
    fit.d = d;
    fit.lambda = lambda;
    fit.loss = Loss::bernoulli;
    fit.objective_value = obj;
    return fit;
}

double hinge_objective(const GramMatrix& K, const Vector& y, double lambda, const Vector& c,
                       double d) {
    const Vector f = K.matrix() * c + Vector::Constant(y.size(), d);
    double obj = lambda * c.dot(K.matrix() * c);
    for (Index i = 0; i < y.size(); ++i) obj += std::max(0.0, 1.0 - y(i) * f(i));
    return obj;
}

namespace {

// Intercept from the dual KKT conditions: free multipliers pin it; otherwise
// the bound constraints leave an interval and we take its midpoint.
double svm_intercept(const Vector& alpha, const Vector& y, const Vector& F, double lambda) {
    const double box_tol = 1e-9;
    double lo = -kInf, hi = kInf, free_sum = 0.0;
    int free_count = 0;
    for (Index i = 0; i < y.size(); ++i) {
        const double b = y(i) - F(i) / (2.0 * lambda);
        if (alpha(i) > box_tol && alpha(i) < 1.0 - box_tol) {
            free_sum += b;
            ++free_count;
        } else if ((alpha(i) <= box_tol && y(i) > 0) || (alpha(i) >= 1.0 - box_tol && y(i) < 0)) {
            lo = std::max(lo, b);
        } else {
            hi = std::min(hi, b);
        }
    }
    if (free_count > 0) return free_sum / free_count;
    if (std::isfinite(lo) && std::isfinite(hi)) return 0.5 * (lo + hi);
    if (std::isfinite(lo)) return lo;
    if (std::isfinite(hi)) return hi;
    return 0.0;
}

}  // namespace

PenalizedFit fit_svm(const GramMatrix& K, const Vector& y, double lambda, std::uint64_t seed) {
    if (K.size() != y.size()) throw InvalidInput("fit_svm: dimension mismatch");
    check_binary_labels(y, /*require_both=*/false);
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");

    const Index n = K.size();
    const Matrix& Km = K.matrix();
    Vector alpha = Vector::Zero(n);
    Vector F = Vector::Zero(n);  // F_i = sum_j K_ij y_j alpha_j = 2 lambda (Kc)_i

    constexpr double gap_tol = 1e-6;
    const int max_sweeps = 200 + 50 * static_cast<int>(n);
    double gap = kInf;
    CounterRng rng(seed, /*stream=*/0x53564d);

    for (int sweep = 0; sweep < max_sweeps && n > 1; ++sweep) {
        const auto order = rng.permutation(static_cast<std::size_t>(n));
        for (const std::size_t iu : order) {
            const Index i = static_cast<Index>(iu);
            // best partner j by actual clipped dual gain
            Index best_j = -1;
            double best_gain = 0.0, best_step = 0.0;
            for (Index j = 0; j < n; ++j) {
                if (j == i) continue;
                double s_lo = (y(i) > 0) ? -alpha(i) : alpha(i) - 1.0;
                double s_hi = (y(i) > 0) ? 1.0 - alpha(i) : alpha(i);
                s_lo = std::max(s_lo, (y(j) > 0) ? alpha(j) - 1.0 : -alpha(j));
                s_hi = std::min(s_hi, (y(j) > 0) ? alpha(j) : 1.0 - alpha(j));
                if (s_hi <= s_lo) continue;
                const double lin = (y(i) - y(j)) - (F(i) - F(j)) / (2.0 * lambda);
                const double curv = Km(i, i) + Km(j, j) - 2.0 * Km(i, j);
                double s;
                if (curv > 1e-14) {
                    s = std::clamp(2.0 * lambda * lin / curv, s_lo, s_hi);
                } else {
                    s = lin > 0.0 ? s_hi : s_lo;
                }
                const double gain = s * lin - s * s * curv / (4.0 * lambda);
                if (gain > best_gain) {
                    best_gain = gain;
                    best_step = s;
                    best_j = j;
                }
            }
            if (best_j >= 0 && best_gain > 0.0) {
                alpha(i) += y(i) * best_step;
                alpha(best_j) -= y(best_j) * best_step;
                alpha(i) = std::clamp(alpha(i), 0.0, 1.0);
                alpha(best_j) = std::clamp(alpha(best_j), 0.0, 1.0);
                F += best_step * (Km.col(i) - Km.col(best_j));
            }
        }
        const Vector c = y.cwiseProduct(alpha) / (2.0 * lambda);
        const double d = svm_intercept(alpha, y, F, lambda);
        const double primal = hinge_objective(K, y, lambda, c, d);
        const double dual = alpha.sum() - alpha.dot(y.cwiseProduct(F)) / (4.0 * lambda);
        gap = primal - dual;
        if (gap < gap_tol) break;
    }
    if (n > 1 && gap >= gap_tol) {
        std::ostringstream msg;
        msg << "fit_svm: no convergence (duality gap " << gap << ")";
        throw SolverFailure(msg.str());
    }

    PenalizedFit fit;
    fit.c = y.cwiseProduct(alpha) / (2.0 * lambda);
    const double d = svm_intercept(alpha, y, F, lambda);
    fit.d = Vector::Constant(1, d);
    fit.lambda = lambda;
    fit.loss = Loss::hinge;
    fit.objective_value = hinge_objective(K, y, lambda, fit.c, d);
    return fit;
}

Vector msvm_label_coding(int k, int label) {
    if (k < 2) throw InvalidInput("msvm_label_coding: k must be >= 2");
    if (label < 1 || label > k)
        throw InvalidInput("msvm_label_coding: label out of range 1.." + std::to_string(k));
    Vector v = Vector::Constant(k, -1.0 / (k - 1));
    v(label - 1) = 1.0;
    return v;
}

double msvm_objective(const GramMatrix& K, const std::vector<int>& labels, double lambda, int k,
                      const Matrix& coefficients, const Vector& intercepts) {
    const Index n = K.size();
    const double margin = 1.0 / (k - 1);
    const Matrix F =
        K.matrix() * coefficients + Vector::Ones(n) * intercepts.transpose();
    double obj = 0.0;
    for (int j = 0; j < k; ++j)
        obj += lambda * coefficients.col(j).dot(K.matrix() * coefficients.col(j));
    for (Index i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) {
            if (j == labels[static_cast<std::size_t>(i)] - 1) continue;
            obj += std::max(0.0, F(i, j) + margin);
        }
    return obj;
}

MultiFit fit_msvm(const GramMatrix& K, const std::vector<int>& labels, double lambda, int k) {
    const Index n = K.size();
    if (static_cast<Index>(labels.size()) != n) throw InvalidInput("fit_msvm: dimension mismatch");
    if (k < 2) throw InvalidInput("fit_msvm: k must be >= 2");
    if (!(lambda > 0.0)) throw InvalidInput("lambda must be positive");

    MultiFit fit;
    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (const int lab : labels) {
        if (lab < 1 || lab > k)
            throw InvalidInput("fit_msvm: label " + std::to_string(lab) + " out of range 1.." +
                               std::to_string(k));
        ++counts[static_cast<std::size_t>(lab - 1)];
    }
    for (int j = 0; j < k; ++j)
        if (counts[static_cast<std::size_t>(j)] == 0)
            fit.warnings.push_back("class " + std::to_string(j + 1) + " has no observations");

    // ADMM with splitting Z = KC + 1 d', C and d restricted to the
    // sum-to-zero subspace (the k-1 dimensional constraint subspace).
    const Matrix& Km = K.matrix();
    const double margin = 1.0 / (k - 1);
    const double rho = 1.0;

    Matrix S(n + 1, n + 1);
    S.topLeftCorner(n, n) = Km * Km + (2.0 * lambda / rho) * Km;
    S.topRightCorner(n, 1) = Km * Vector::Ones(n);
    S.bottomLeftCorner(1, n) = S.topRightCorner(n, 1).transpose();
    S(n, n) = static_cast<double>(n);
    S.diagonal().array() += 1e-13 * (1.0 + S.diagonal().cwiseAbs().maxCoeff());
    const Eigen::LDLT<Matrix> solver(S);

    Matrix C = Matrix::Zero(n, k);
    Vector d = Vector::Zero(k);
    Matrix Z = Matrix::Zero(n, k);
    Matrix U = Matrix::Zero(n, k);

    const int max_iters = 20000;
    const double eps = 1e-11 * std::sqrt(static_cast<double>(n * k));
    for (int iter = 0; iter < max_iters; ++iter) {
        // (C, d) update: per-class solves against class-centered targets
        const Matrix V = Z - U;
        const Vector vbar = V.rowwise().mean();
        for (int j = 0; j < k; ++j) {
            const Vector vj = V.col(j) - vbar;
            Vector rhs(n + 1);
            rhs.head(n) = Km * vj;
            rhs(n) = vj.sum();
            const Vector sol = solver.solve(rhs);
            C.col(j) = sol.head(n);
            d(j) = sol(n);
        }
        const Matrix F = Km * C + Vector::Ones(n) * d.transpose();

        // Z update: prox of the multicategory hinge, elementwise
        const Matrix W = F + U;
        Matrix Z_new(n, k);
        for (Index i = 0; i < n; ++i) {
            const int yi = labels[static_cast<std::size_t>(i)] - 1;
            for (int j = 0; j < k; ++j) {
                const double w = W(i, j);
                if (j == yi) {
                    Z_new(i, j) = w;
                } else if (w < -margin) {
                    Z_new(i, j) = w;
                } else if (w > -margin + 1.0 / rho) {
                    Z_new(i, j) = w - 1.0 / rho;
                } else {
                    Z_new(i, j) = -margin;
                }
            }
        }
        const double r_dual = rho * (Z_new - Z).norm();
        Z = Z_new;
        U += F - Z;
        const double r_prim = (F - Z).norm();
        if (r_prim < eps && r_dual < eps) break;
    }

    // exact projection onto the sum-to-zero subspace
    C.colwise() -= Vector(C.rowwise().mean());
    d.array() -= d.mean();

    fit.coefficients = C;
    fit.intercepts = d;
    fit.lambda = lambda;
    fit.k = k;
    fit.objective_value = msvm_objective(K, labels, lambda, k, C, d);
    return fit;
}

Matrix evaluate_msvm(const MultiFit& fit, const KernelSpec& kernel, const Matrix& train_points,
                     const Matrix& new_points) {
    const Matrix Kx = cross_gram(kernel, new_points, train_points);
    return Kx * fit.coefficients + Vector::Ones(new_points.rows()) * fit.intercepts.transpose();
}

std::vector<int> msvm_classify(const Matrix& component_values) {
    std::vector<int> out(static_cast<std::size_t>(component_values.rows()));
    for (Index i = 0; i < component_values.rows(); ++i) {
        Index best = 0;
        for (Index j = 1; j < component_values.cols(); ++j)
            if (component_values(i, j) > component_values(i, best)) best = j;
        out[static_cast<std::size_t>(i)] = static_cast<int>(best) + 1;
    }
    return out;
}

double lasso_objective(const Matrix& B, const Vector& y, double lambda, const Vector& beta) {
    return 0.5 * (y - B * beta).squaredNorm() + lambda * beta.cwiseAbs().sum();
}

SparseFit fit_lasso(const Matrix& B, const Vector& y, double lambda) {
    if (B.rows() != y.size()) throw InvalidInput("fit_lasso: dimension mismatch");
    if (B.cols() < 1) throw InvalidInput("fit_lasso: design needs at least one column");
    if (!B.allFinite() || !y.allFinite()) throw InvalidInput("fit_lasso: non-finite inputs");
    if (lambda < 0.0) throw InvalidInput("lambda must be nonnegative");

    const Index p = B.cols();
    const Vector col_sq = B.colwise().squaredNorm();
    Vector beta = Vector::Zero(p);
    Vector r = y;

    constexpr double tol = 1e-9;
    constexpr int max_sweeps = 1000000;
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        double max_change = 0.0;
        for (Index j = 0; j < p; ++j) {
            if (col_sq(j) == 0.0) continue;
            const double rho = B.col(j).dot(r) + col_sq(j) * beta(j);
            const double bj = soft_threshold(rho, lambda) / col_sq(j);
            const double change = bj - beta(j);
            if (change != 0.0) {
                r -= change * B.col(j);
                beta(j) = bj;
                max_change = std::max(max_change, std::abs(change));
            }
        }
        converged = max_change < tol;
    }
    if (!converged) throw SolverFailure("fit_lasso: coordinate descent did not converge");

    SparseFit fit;
    fit.beta = beta;
    fit.lambda = lambda;
    for (Index j = 0; j < p; ++j)
        if (beta(j) != 0.0) fit.support.push_back(static_cast<int>(j));
    return fit;
}

}  // namespace rkhs
