#include "rkhskit/ssanova.hpp"

#include "rkhskit/errors.hpp"
#include "rkhskit/solvers.hpp"

#include <cmath>
#include <sstream>

namespace rkhs {

AveragingMeasure::AveragingMeasure(Vector w) : weights(std::move(w)) {
    if (weights.size() == 0) throw InvalidInput("averaging measure: empty weights");
    double sum = 0.0;
    for (Index i = 0; i < weights.size(); ++i) {
        if (weights(i) < 0.0) throw InvalidInput("averaging measure: negative weight");
        sum += weights(i);
    }
    if (std::abs(sum - 1.0) > 1e-12)
        throw InvalidInput("averaging measure: weights sum to " + std::to_string(sum) +
                           ", expected 1");
}

AveragingMeasure AveragingMeasure::uniform(Index n) {
    return AveragingMeasure(Vector::Constant(n, 1.0 / static_cast<double>(n)));
}

GramMatrix center_kernel(const GramMatrix& G, const AveragingMeasure& mu) {
    const Index n = G.size();
    if (mu.weights.size() != n) throw InvalidInput("center_kernel: dimension mismatch");
    const Vector a = G.matrix() * mu.weights;
    const double g = mu.weights.dot(a);
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i)
        for (Index j = 0; j <= i; ++j) {
            const double v = G(i, j) - a(i) - a(j) + g;
            out(i, j) = v;
            out(j, i) = v;
        }
    return GramMatrix(std::move(out), G.points());
}

std::string component_label(const std::array<int, 2>& coords,
                            const std::vector<std::string>& names) {
    auto name = [&](int c) {
        if (c >= 0 && c < static_cast<int>(names.size())) return names[static_cast<std::size_t>(c)];
        return "x" + std::to_string(c + 1);
    };
    if (coords[1] < 0) return name(coords[0]);
    return name(coords[0]) + "*" + name(coords[1]);
}

std::vector<AnovaComponent> build_anova_kernels(const std::vector<GramMatrix>& centered,
                                                int max_order) {
    if (centered.empty()) throw InvalidInput("build_anova_kernels: no kernels");
    if (max_order < 1 || max_order > 2)
        throw InvalidInput("build_anova_kernels: max_order must be 1 or 2");
    const Index n = centered.front().size();
    for (const auto& g : centered)
        if (g.size() != n) throw InvalidInput("build_anova_kernels: size mismatch");

    std::vector<AnovaComponent> components;
    const int d = static_cast<int>(centered.size());
    for (int a = 0; a < d; ++a)
        components.push_back({{a, -1}, centered[static_cast<std::size_t>(a)]});
    if (max_order >= 2) {
        for (int a = 0; a < d; ++a)
            for (int b = a + 1; b < d; ++b) {
                const Matrix prod = centered[static_cast<std::size_t>(a)].matrix().cwiseProduct(
                    centered[static_cast<std::size_t>(b)].matrix());
                components.push_back({{a, b}, GramMatrix(prod)});
            }
    }
    return components;
}

AnovaDecomposition fit_ssanova(const std::vector<AnovaComponent>& components, const Vector& theta,
                               const Vector& y, double lambda) {
    if (components.empty()) throw InvalidInput("fit_ssanova: no components");
    if (theta.size() != static_cast<Index>(components.size()))
        throw InvalidInput("fit_ssanova: theta size mismatch");
    for (Index k = 0; k < theta.size(); ++k)
        if (!(theta(k) > 0.0)) throw InvalidInput("fit_ssanova: theta must be positive");

    const Index n = y.size();
    Matrix combined = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < components.size(); ++k) {
        if (components[k].gram.size() != n) throw InvalidInput("fit_ssanova: size mismatch");
        combined += theta(static_cast<Index>(k)) * components[k].gram.matrix();
    }

    const PenalizedFit fit =
        fit_penalized_ls(GramMatrix(combined), constant_basis(n), y, lambda);

    AnovaDecomposition dec;
    dec.mu = fit.d(0);
    dec.lambda = lambda;
    dec.coefficients = fit.c;
    dec.fitted_values = Vector::Constant(n, dec.mu);
    for (std::size_t k = 0; k < components.size(); ++k) {
        AnovaTerm term;
        term.coords = components[k].coords;
        term.theta = theta(static_cast<Index>(k));
        term.values = term.theta * (components[k].gram.matrix() * fit.c);
        dec.fitted_values += term.values;
        dec.terms.push_back(std::move(term));
    }
    return dec;
}

SsanovaPrediction predict_ssanova(const AnovaDecomposition& decomposition,
                                  const std::vector<KernelSpec>& kernels,
                                  const Matrix& train_points,
                                  const std::vector<AveragingMeasure>& measures,
                                  const Vector& new_point) {
    const Index n = train_points.rows();
    const int d = static_cast<int>(kernels.size());
    if (train_points.cols() != d || new_point.size() != d ||
        static_cast<int>(measures.size()) != d)
        throw InvalidInput("predict_ssanova: dimension mismatch");
    if (decomposition.coefficients.size() != n)
        throw InvalidInput("predict_ssanova: coefficients do not match training points");

    // centered kernel section r_α(j) = K̃_α(s_α, t_αj) for the new point
    std::vector<Vector> sections(static_cast<std::size_t>(d));
    for (int a = 0; a < d; ++a) {
        const auto& kern = kernels[static_cast<std::size_t>(a)];
        const Vector& w = measures[static_cast<std::size_t>(a)].weights;
        if (w.size() != n) throw InvalidInput("predict_ssanova: measure size mismatch");
        const Matrix G = gram(kern, train_points.col(a)).matrix();
        const Vector avg = G * w;
        const double grand = w.dot(avg);
        Vector ks(n);
        Vector s(1);
        s(0) = new_point(a);
        for (Index j = 0; j < n; ++j) {
            Vector t(1);
            t(0) = train_points(j, a);
            ks(j) = kernel_value(kern, s, t);
        }
        const double smean = w.dot(ks);
        sections[static_cast<std::size_t>(a)] = ks - avg - Vector::Constant(n, smean - grand);
    }

    SsanovaPrediction pred;
    pred.total = decomposition.mu;
    for (const auto& term : decomposition.terms) {
        const int a = term.coords[0];
        const int b = term.coords[1];
        if (a < 0 || a >= d || b >= d)
            throw InvalidInput("predict_ssanova: component coordinate out of range");
        Vector section = sections[static_cast<std::size_t>(a)];
        if (b >= 0) section = section.cwiseProduct(sections[static_cast<std::size_t>(b)]);
        const double value = term.theta * section.dot(decomposition.coefficients);
        pred.components.push_back(value);
        pred.total += value;
    }
    return pred;
}

}  // namespace rkhs
