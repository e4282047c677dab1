#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rkhskit/errors.hpp"
#include "rkhskit/kernels.hpp"
#include "rkhskit/rke.hpp"
#include "test_support.hpp"

#include <cmath>

using namespace rkhs;

namespace {

// squared-distance observations from a coordinate configuration
DissimilaritySet from_points(const Matrix& x) {
    std::vector<DissimilaritySet::Entry> entries;
    for (Index i = 0; i < x.rows(); ++i)
        for (Index j = i + 1; j < x.rows(); ++j)
            entries.push_back({i, j, (x.row(i) - x.row(j)).squaredNorm()});
    return DissimilaritySet(x.rows(), std::move(entries));
}

// centered Gram of a configuration: a feasible witness that fits exactly
Matrix centered_gram(const Matrix& x) {
    Matrix xc = x;
    xc.rowwise() -= x.colwise().mean();
    return xc * xc.transpose();
}

// Exhaustive oracle for a single-pair 2x2 instance: grid over the diagonal
// (a, c) with refinement; for fixed (a, c) the best feasible off-diagonal is
// the clamp of (a+c-d_obs)/2 into [-sqrt(ac), sqrt(ac)], since only the
// misfit term depends on b. Grid points on the PSD boundary stay reachable.
double rke_grid_oracle_2x2(const DissimilaritySet& D, double lambda) {
    REQUIRE(D.n == 2);
    REQUIRE(D.entries.size() == 1);
    const double d_obs = D.entries.front().d;
    double lo_a = 0, hi_a = 4, lo_c = 0, hi_c = 4;
    double best = 1e300, ba = 0, bc = 0;
    for (int stage = 0; stage < 12; ++stage) {
        const int steps = 48;
        for (int ia = 0; ia <= steps; ++ia)
            for (int ic = 0; ic <= steps; ++ic) {
                const double a = lo_a + (hi_a - lo_a) * ia / steps;
                const double c = lo_c + (hi_c - lo_c) * ic / steps;
                if (a < 0 || c < 0) continue;
                const double bound = std::sqrt(a * c);
                const double b = std::clamp((a + c - d_obs) / 2.0, -bound, bound);
                Matrix K(2, 2);
                K << a, b, b, c;
                const double f = rke_objective(K, D, lambda);
                if (f < best) {
                    best = f;
                    ba = a;
                    bc = c;
                }
            }
        const double wa = (hi_a - lo_a) / steps, wc = (hi_c - lo_c) / steps;
        lo_a = std::max(0.0, ba - wa);
        hi_a = ba + wa;
        lo_c = std::max(0.0, bc - wc);
        hi_c = bc + wc;
    }
    return best;
}

}  // namespace

TEST_CASE("rke objective: arithmetic of the formula") {
    DissimilaritySet D(2, {{0, 1, 2.0}});
    CHECK(rke_objective(Matrix::Zero(2, 2), D, 0.0) == 2.0);
    CHECK(rke_objective(Matrix::Identity(2, 2), D, 0.5) == 1.0);  // |2-2| + 0.5*2

    CounterRng rng(301, 0);
    const Matrix x = test::random_matrix(rng, 4, 2);
    const DissimilaritySet Dx = from_points(x);
    double total = 0.0;
    for (const auto& e : Dx.entries) total += e.d;
    CHECK(rke_objective(Matrix::Zero(4, 4), Dx, 0.0) == doctest::Approx(total).epsilon(1e-14));

    // centered Gram of the generating points fits the distances exactly
    CHECK(rke_objective(centered_gram(x), Dx, 0.0) < 1e-10);

    CHECK_THROWS_AS(rke_objective(Matrix::Zero(3, 3), D, 0.0), InvalidInput);
}

TEST_CASE("dissimilarity set validation") {
    CHECK_THROWS_AS(DissimilaritySet(2, {{0, 0, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(DissimilaritySet(2, {{0, 2, 1.0}}), InvalidInput);
    CHECK_THROWS_AS(DissimilaritySet(2, {{0, 1, -1.0}}), InvalidInput);
    CHECK_THROWS_AS(DissimilaritySet(2, {{0, 1, 1.0}, {1, 0, 2.0}}), InvalidInput);
    CHECK_THROWS_AS(fit_rke(DissimilaritySet(3, {}), 0.1), InvalidInput);
}

TEST_CASE("fit_rke on an exact triangle beats the witness bound") {
    Matrix x(3, 2);
    x << 0.0, 0.0, 1.0, 0.0, 0.3, 0.8;
    const DissimilaritySet D = from_points(x);
    const double lambda = 1e-4;

    RkeOptions opts;
    opts.max_iters = 3000;
    const EmbeddingResult result = fit_rke(D, lambda, opts);
    const double witness = lambda * centered_gram(x).trace();
    CHECK(result.objective <= witness + 1e-3);
    CHECK(is_psd_within_tolerance(result.K));
}

TEST_CASE("fit_rke single-pair instance reaches the optimum") {
    DissimilaritySet D(2, {{0, 1, 2.0}});
    RkeOptions opts;
    opts.max_iters = 10000;
    const EmbeddingResult zero_penalty = fit_rke(D, 0.0, opts);
    CHECK(zero_penalty.objective < 1e-6);

    const double lambda = 0.5;
    const EmbeddingResult fit = fit_rke(D, lambda, opts);
    const double oracle = rke_grid_oracle_2x2(D, lambda);
    CHECK(std::abs(fit.objective - oracle) < 1e-3);
}

TEST_CASE("fit_rke iterates stay PSD and the best iterate only improves") {
    CounterRng rng(302, 0);
    const Matrix x = test::random_matrix(rng, 5, 2);
    const DissimilaritySet D = from_points(x);

    double prev_obj = 1e300;
    bool all_psd = true;
    RkeOptions opts;
    opts.max_iters = 400;
    opts.observer = [&](int, const Matrix& K, double) {
        if (!is_psd_within_tolerance(K)) all_psd = false;
    };
    const EmbeddingResult result = fit_rke(D, 1e-3, opts);
    CHECK(all_psd);
    CHECK(result.objective <= rke_objective(Matrix::Zero(5, 5), D, 1e-3));
    (void)prev_obj;
}

TEST_CASE("fit_rke trace is nonincreasing in lambda (fixed seed)") {
    CounterRng rng(303, 0);
    const Matrix x = test::random_matrix(rng, 6, 3);
    DissimilaritySet D = from_points(x);
    // perturb to make it noisy and non-Euclidean
    for (auto& e : D.entries) e.d = std::max(0.0, e.d + 0.3 * rng.normal());

    RkeOptions opts;
    opts.max_iters = 60000;
    double prev_trace = 1e300;
    for (const double lambda : {1e-2, 1e-1, 1.0, 5.0, 25.0}) {
        const EmbeddingResult r = fit_rke(D, lambda, opts);
        const double tr = r.K.trace();
        CHECK(tr <= prev_trace + 1e-6);
        prev_trace = tr;
    }
}

TEST_CASE("embed: explicit spectrum") {
    Matrix K = Matrix::Zero(3, 3);
    K(0, 0) = 4.0;
    K(1, 1) = 1.0;
    const EmbeddingResult r = embed(K, 1);
    CHECK(r.trace_fraction == doctest::Approx(0.8).epsilon(1e-14));
    REQUIRE(r.coordinates.cols() == 1);
    CHECK(std::abs(std::abs(r.coordinates(0, 0)) - 2.0) < 1e-12);
    CHECK(std::abs(r.coordinates(1, 0)) < 1e-12);
    CHECK(std::abs(r.coordinates(2, 0)) < 1e-12);
    CHECK(r.eigenvalues(0) == doctest::Approx(4.0));
    CHECK(r.eigenvalues(1) == doctest::Approx(1.0));

    CHECK_THROWS_AS(embed(K, 0), InvalidInput);
    CHECK_THROWS_AS(embed(K, 4), InvalidInput);
}

TEST_CASE("embed: planar configuration round-trips distances") {
    CounterRng rng(304, 0);
    const Matrix x = test::random_matrix(rng, 6, 2);
    const Matrix K = centered_gram(x);  // rank 2
    const EmbeddingResult r = embed(K, 2);
    const GramMatrix GK(K);
    for (Index i = 0; i < 6; ++i)
        for (Index j = 0; j < 6; ++j) {
            const double via_k = squared_distance_from_kernel(GK, i, j);
            const double via_coords = (r.coordinates.row(i) - r.coordinates.row(j)).squaredNorm();
            CHECK(std::abs(via_k - via_coords) < 1e-8);
        }
}

TEST_CASE("embed with full rank reconstructs the matrix") {
    CounterRng rng(305, 0);
    const Matrix K = test::random_psd(rng, 5);
    const EmbeddingResult r = embed(K, 5);
    CHECK((r.coordinates * r.coordinates.transpose() - K).norm() < 1e-8);
    CHECK(r.trace_fraction == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embed coordinates are determined up to rotation") {
    CounterRng rng(306, 0);
    const Matrix x = test::random_matrix(rng, 5, 3);
    const Matrix K = centered_gram(x);
    const EmbeddingResult r = embed(K, 3);
    const Matrix rot = test::random_orthogonal(rng, 3);
    const Matrix rotated = r.coordinates * rot;
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) {
            const double before = (r.coordinates.row(i) - r.coordinates.row(j)).norm();
            const double after = (rotated.row(i) - rotated.row(j)).norm();
            CHECK(std::abs(before - after) < 1e-10);
        }
}

TEST_CASE("fit_rke auto rank keeps at least 95 percent of the trace") {
    CounterRng rng(307, 0);
    const Matrix x = test::random_matrix(rng, 7, 2);  // planar truth
    const DissimilaritySet D = from_points(x);
    RkeOptions opts;
    opts.max_iters = 2500;
    const EmbeddingResult r = fit_rke(D, 1e-4, opts);
    CHECK(r.trace_fraction >= 0.95);
    CHECK(r.coordinates.cols() <= 7);
    // a planar instance should not need many dimensions
    CHECK(r.coordinates.cols() <= 3);
}

TEST_CASE("embedding result coordinates' Gram equals the truncation") {
    CounterRng rng(308, 0);
    const Matrix K = test::random_psd(rng, 6);
    for (const Index rank : {1L, 3L, 6L}) {
        const EmbeddingResult r = embed(K, rank);
        Eigen::SelfAdjointEigenSolver<Matrix> eig(K);
        Matrix trunc = Matrix::Zero(6, 6);
        for (Index k = 0; k < rank; ++k) {
            const Index idx = 5 - k;
            trunc += std::max(0.0, eig.eigenvalues()(idx)) * eig.eigenvectors().col(idx) *
                     eig.eigenvectors().col(idx).transpose();
        }
        CHECK((r.coordinates * r.coordinates.transpose() - trunc).norm() < 1e-8);
    }
}

TEST_CASE("fit_rke handles incomplete, non-metric dissimilarity sets") {
    // triangle-violating and missing pairs are both allowed
    DissimilaritySet D(4, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 25.0}, {0, 3, 4.0}});
    RkeOptions opts;
    opts.max_iters = 1500;
    const EmbeddingResult r = fit_rke(D, 0.05, opts);
    CHECK(is_psd_within_tolerance(r.K));
    CHECK(r.objective <= rke_objective(Matrix::Zero(4, 4), D, 0.05));
}

TEST_CASE("fit_rke aborts on a non-finite iterate with diagnostics") {
    DissimilaritySet D(2, {{0, 1, 2.0}});
    RkeOptions opts;
    opts.step0 = 1e308;
    CHECK_THROWS_AS(fit_rke(D, 1.0, opts), SolverFailure);
}

TEST_CASE("embed centers coordinates only when asked") {
    CounterRng rng(309, 0);
    Matrix x = test::random_matrix(rng, 5, 2);
    x.rowwise() += Eigen::RowVector2d(4.0, -3.0);  // deliberately uncentered
    const Matrix K = x * x.transpose();

    const EmbeddingResult centered = embed(K, 2, /*center=*/true);
    CHECK(centered.coordinates.colwise().sum().lpNorm<Eigen::Infinity>() < 1e-8);

    const EmbeddingResult plain = embed(K, 2, /*center=*/false);
    CHECK(plain.coordinates.colwise().sum().lpNorm<Eigen::Infinity>() > 1e-3);
}
