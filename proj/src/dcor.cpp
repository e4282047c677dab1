#include "rkhskit/dcor.hpp"

#include "rkhskit/errors.hpp"
#include "rkhskit/rng.hpp"

#include <cmath>

namespace rkhs {

CenteredDistances double_center(const Matrix& points) {
    const Index n = points.rows();
    if (n < 2) throw InvalidInput("double_center: need at least two points");

    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        a(i, i) = 0.0;
        for (Index j = 0; j < i; ++j) {
            const double d = (points.row(i) - points.row(j)).norm();
            a(i, j) = d;
            a(j, i) = d;
        }
    }
    const Vector row_mean = a.rowwise().mean();
    const double grand = row_mean.mean();
    CenteredDistances out;
    out.A.resize(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) {
            const double v = a(i, j) - row_mean(i) - row_mean(j) + grand;
            out.A(i, j) = v;
            out.A(j, i) = v;
        }
    return out;
}

double dcov(const CenteredDistances& A, const CenteredDistances& B) {
    const Index n = A.A.rows();
    if (B.A.rows() != n) throw InvalidInput("dcov: size mismatch");
    const double inner = A.A.cwiseProduct(B.A).sum() / static_cast<double>(n * n);
    return std::sqrt(std::max(0.0, inner));
}

namespace {

DcorReport dcor_from_centered(const CenteredDistances& A, const CenteredDistances& B) {
    DcorReport report;
    report.dcov = dcov(A, B);
    report.dvar_x = dcov(A, A);
    report.dvar_y = dcov(B, B);
    if (report.dvar_x > 0.0 && report.dvar_y > 0.0) {
        report.dcor = report.dcov / std::sqrt(report.dvar_x * report.dvar_y);
        report.dcor = std::min(report.dcor, 1.0);
    } else {
        report.dcor = 0.0;  // a constant sample carries no dependence information
        report.degenerate = true;
    }
    return report;
}

}  // namespace

DcorReport dcor(const Matrix& X, const Matrix& Y) {
    if (X.rows() != Y.rows()) throw InvalidInput("dcor: samples must have equal length");
    return dcor_from_centered(double_center(X), double_center(Y));
}

DcorReport permutation_test(const Matrix& X, const Matrix& Y, int n_perm, std::uint64_t seed) {
    if (n_perm < 1) throw InvalidInput("permutation_test: n_perm must be >= 1");
    const CenteredDistances A = double_center(X);
    const CenteredDistances B = double_center(Y);
    DcorReport report = dcor_from_centered(A, B);
    report.permutations = n_perm;
    report.seed = seed;
    if (report.degenerate) {
        report.p_value = 1.0;
        return report;
    }

    const Index n = X.rows();
    const double n2 = static_cast<double>(n * n);
    const double denom = std::sqrt(report.dvar_x * report.dvar_y);
    int exceed = 0;
    for (int r = 0; r < n_perm; ++r) {
        CounterRng rng(seed, static_cast<std::uint64_t>(r));
        const auto perm = rng.permutation(static_cast<std::size_t>(n));
        // permuting the rows of Y permutes B's rows and columns in lockstep;
        // dvar_y is unchanged
        double inner = 0.0;
        for (Index i = 0; i < n; ++i)
            for (Index j = 0; j < n; ++j)
                inner += A.A(i, j) * B.A(static_cast<Index>(perm[static_cast<std::size_t>(i)]),
                                         static_cast<Index>(perm[static_cast<std::size_t>(j)]));
        const double stat = std::min(1.0, std::sqrt(std::max(0.0, inner / n2)) / denom);
        if (stat >= report.dcor) ++exceed;
    }
    report.p_value = (1.0 + exceed) / (n_perm + 1.0);
    return report;
}

}  // namespace rkhs
