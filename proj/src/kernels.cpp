#include "rkhskit/kernels.hpp"

#include "rkhskit/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace rkhs {

namespace {

// Order-m spline penalty kernel on [0,1]; closed forms of
// ∫ (s-u)_+^{m-1} (t-u)_+^{m-1} / ((m-1)!)^2 du.
double spline_kernel(int m, double s, double t) {
    const double a = std::min(s, t);
    const double b = std::max(s, t);
    if (m == 1) return a;
    // m == 2
    return a * a * (3.0 * b - a) / 6.0;
}

void check_spline_domain(const Matrix& points) {
    if (points.cols() != 1)
        throw InvalidInput("spline kernel expects 1-d points, got dimension " +
                           std::to_string(points.cols()));
    for (Index i = 0; i < points.rows(); ++i) {
        const double t = points(i, 0);
        if (!(t >= 0.0 && t <= 1.0))
            throw InvalidInput("spline kernel point out of domain [0,1]: " + std::to_string(t));
    }
}

void validate(const KernelSpec& k) {
    switch (k.kind) {
        case KernelSpec::Kind::spline:
            if (k.spline_order != 1 && k.spline_order != 2)
                throw InvalidInput("spline order must be 1 or 2, got " +
                                   std::to_string(k.spline_order));
            break;
        case KernelSpec::Kind::gaussian:
            if (!(k.width > 0.0))
                throw InvalidInput("gaussian width must be > 0, got " + std::to_string(k.width));
            break;
        case KernelSpec::Kind::precomputed:
            if (k.gram_data.rows() == 0 || k.gram_data.rows() != k.gram_data.cols())
                throw InvalidInput("precomputed kernel needs a nonempty square Gram matrix");
            break;
        case KernelSpec::Kind::linear:
            break;
    }
}

}  // namespace

KernelSpec KernelSpec::spline(int m) {
    KernelSpec k;
    k.kind = Kind::spline;
    k.spline_order = m;
    validate(k);
    return k;
}

KernelSpec KernelSpec::gaussian(double width) {
    KernelSpec k;
    k.kind = Kind::gaussian;
    k.width = width;
    validate(k);
    return k;
}

KernelSpec KernelSpec::linear() {
    KernelSpec k;
    k.kind = Kind::linear;
    return k;
}

KernelSpec KernelSpec::precomputed(Matrix gram) {
    KernelSpec k;
    k.kind = Kind::precomputed;
    k.gram_data = std::move(gram);
    validate(k);
    return k;
}

std::string KernelSpec::name() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::spline: out << "spline:" << spline_order; break;
        case Kind::gaussian: out << "gaussian:" << width; break;
        case Kind::linear: out << "linear"; break;
        case Kind::precomputed: out << "precomputed"; break;
    }
    return out.str();
}

double kernel_value(const KernelSpec& kernel, const Eigen::Ref<const Vector>& x,
                    const Eigen::Ref<const Vector>& y) {
    validate(kernel);
    switch (kernel.kind) {
        case KernelSpec::Kind::spline: {
            if (x.size() != 1 || y.size() != 1)
                throw InvalidInput("spline kernel expects 1-d points");
            const double s = x(0), t = y(0);
            if (!(s >= 0.0 && s <= 1.0) || !(t >= 0.0 && t <= 1.0))
                throw InvalidInput("spline kernel point out of domain [0,1]");
            return spline_kernel(kernel.spline_order, s, t);
        }
        case KernelSpec::Kind::gaussian: {
            const double d2 = (x - y).squaredNorm();
            return std::exp(-d2 / (2.0 * kernel.width * kernel.width));
        }
        case KernelSpec::Kind::linear:
            return x.dot(y);
        case KernelSpec::Kind::precomputed:
            throw InvalidInput("precomputed kernel has no pointwise evaluation");
    }
    return 0.0;  // unreachable
}

GramMatrix::GramMatrix(Matrix raw, Matrix points) : points_(std::move(points)) {
    if (raw.rows() != raw.cols()) throw InvalidInput("Gram matrix must be square");
    const Index n = raw.rows();
    entries_.resize(n, n);
    for (Index i = 0; i < n; ++i) {
        entries_(i, i) = raw(i, i);
        for (Index j = 0; j < i; ++j) {
            const double v = 0.5 * (raw(i, j) + raw(j, i));
            entries_(i, j) = v;
            entries_(j, i) = v;
        }
    }
}

GramMatrix gram(const KernelSpec& kernel, const Matrix& points) {
    validate(kernel);

    if (kernel.kind == KernelSpec::Kind::precomputed) {
        if (points.size() == 0) return GramMatrix(kernel.gram_data);
        if (points.cols() != 1)
            throw InvalidInput("precomputed kernel expects a single column of row indices");
        const Index m = kernel.gram_data.rows();
        Matrix sub(points.rows(), points.rows());
        std::vector<Index> idx(static_cast<std::size_t>(points.rows()));
        for (Index i = 0; i < points.rows(); ++i) {
            const double v = points(i, 0);
            const Index k = static_cast<Index>(std::llround(v));
            if (std::abs(v - static_cast<double>(k)) > 0.0 || k < 0 || k >= m)
                throw InvalidInput("precomputed kernel index out of range: " + std::to_string(v));
            idx[static_cast<std::size_t>(i)] = k;
        }
        for (Index i = 0; i < points.rows(); ++i)
            for (Index j = 0; j < points.rows(); ++j)
                sub(i, j) = kernel.gram_data(idx[static_cast<std::size_t>(i)],
                                             idx[static_cast<std::size_t>(j)]);
        return GramMatrix(sub, points);
    }

    if (points.rows() == 0) throw InvalidInput("gram: empty point set");
    if (kernel.kind == KernelSpec::Kind::spline) check_spline_domain(points);

    const Index n = points.rows();
    Matrix g(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) {
            const double v = kernel_value(kernel, points.row(i).transpose(),
                                          points.row(j).transpose());
            g(i, j) = v;
            g(j, i) = v;
        }
    return GramMatrix(std::move(g), points);
}

double squared_distance_from_kernel(const GramMatrix& K, Index i, Index j) {
    const Index n = K.size();
    if (i < 0 || j < 0 || i >= n || j >= n)
        throw InvalidInput("squared_distance_from_kernel: index out of range");
    const double d = K(i, i) + K(j, j) - 2.0 * K(i, j);
    return d > 0.0 ? d : 0.0;
}

Matrix psd_project(const Matrix& S) {
    if (S.rows() != S.cols()) throw InvalidInput("psd_project: matrix must be square");
    if (!S.allFinite()) throw InvalidInput("psd_project: non-finite entries");
    const Matrix sym = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
    if (eig.info() != Eigen::Success) throw SolverFailure("psd_project: eigendecomposition failed");
    Vector lam = eig.eigenvalues().cwiseMax(0.0);
    return eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().transpose();
}

bool is_psd_within_tolerance(const Matrix& S, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (S + S.transpose()));
    if (eig.info() != Eigen::Success) return false;
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
    return lo >= -rel_tol * std::max(hi, 1e-300);
}

NullSpaceBasis::NullSpaceBasis(Matrix cols) : columns(std::move(cols)) {
    if (columns.cols() == 0) return;
    if (columns.cols() > columns.rows())
        throw InvalidInput("null-space basis has more columns than points");
    Eigen::ColPivHouseholderQR<Matrix> qr(columns);
    if (qr.rank() < columns.cols())
        throw InvalidInput("null-space basis is rank deficient");
}

NullSpaceBasis empty_basis(Index n) { return NullSpaceBasis(Matrix(n, 0)); }

NullSpaceBasis constant_basis(Index n) { return NullSpaceBasis(Matrix::Ones(n, 1)); }

NullSpaceBasis polynomial_basis(const Vector& t, int degree) {
    Matrix cols(t.size(), degree + 1);
    for (Index i = 0; i < t.size(); ++i) {
        double p = 1.0;
        for (int k = 0; k <= degree; ++k) {
            cols(i, k) = p;
            p *= t(i);
        }
    }
    return NullSpaceBasis(std::move(cols));
}

NullSpaceBasis null_space_basis(const KernelSpec& kernel, const Matrix& points, int dim) {
    const Index n = points.rows();
    if (dim == 0) return empty_basis(n);
    if (kernel.kind == KernelSpec::Kind::spline) {
        const int m = (dim > 0) ? dim : kernel.spline_order;
        if (m > kernel.spline_order)
            throw InvalidInput("spline null space limited to polynomials of degree < order");
        return polynomial_basis(points.col(0), m - 1);
    }
    if (dim > 1) throw InvalidInput("only a constant null space is supported for this kernel");
    return constant_basis(n);
}

}  // namespace rkhs
