// rkhskit batch CLI: fit penalized models, tune lambda, decompose, embed,
// and test independence; emits JSON results plus plot-ready CSV.

#include "rkhskit/dcor.hpp"
#include "rkhskit/errors.hpp"
#include "rkhskit/io.hpp"
#include "rkhskit/kernels.hpp"
#include "rkhskit/rke.hpp"
#include "rkhskit/solvers.hpp"
#include "rkhskit/ssanova.hpp"
#include "rkhskit/tuning.hpp"
#include "rkhskit/version.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace rkhs;

namespace {

struct CommonOpts {
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int threads = 1;
};

int env_threads() {
    const char* v = std::getenv("RKHSKIT_THREADS");
    if (!v) return 1;
    const int t = std::atoi(v);
    return t >= 1 ? t : 1;
}

KernelSpec parse_kernel(const std::string& text, int order) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    const std::string param = colon == std::string::npos ? "" : text.substr(colon + 1);
    if (name == "spline") {
        const int m = param.empty() ? order : std::atoi(param.c_str());
        return KernelSpec::spline(m);
    }
    if (name == "gaussian") {
        if (param.empty()) throw InvalidInput("gaussian kernel needs a width, e.g. gaussian:0.5");
        return KernelSpec::gaussian(std::atof(param.c_str()));
    }
    if (name == "linear") return KernelSpec::linear();
    if (name == "gram") {
        if (param.empty()) throw InvalidInput("precomputed kernel needs a path, e.g. gram:G.csv");
        return KernelSpec::precomputed(read_matrix_csv(param));
    }
    throw InvalidInput("unknown kernel '" + text + "' (expected spline|gaussian|linear|gram)");
}

std::string out_path(const CommonOpts& common, const std::string& name) {
    fs::create_directories(common.out_dir);
    return (fs::path(common.out_dir) / name).string();
}

void write_manifest(const CommonOpts& common, const std::string& command, Json params) {
    Json m = Json::object();
    m.set("command", Json::string(command));
    m.set("version", Json::string(kVersion));
    m.set("seed", Json::integer(static_cast<std::int64_t>(common.seed)));
    m.set("threads", Json::integer(common.threads));
    m.set("params", std::move(params));
    write_file_atomic(out_path(common, "manifest.json"), m.dump());
}

Json fit_json(const PenalizedFit& fit, const std::string& kernel_name) {
    Json j = Json::object();
    j.set("loss", Json::string(loss_name(fit.loss)));
    j.set("lambda", Json::number(fit.lambda));
    j.set("c", Json::array_of(fit.c));
    j.set("d", Json::array_of(fit.d));
    j.set("kernel", Json::string(kernel_name));
    j.set("objective", Json::number(fit.objective_value));
    return j;
}

// Covariate columns then the response/label column.
struct TrainingData {
    std::vector<std::string> names;
    Matrix points;
    Vector y;
};

TrainingData load_training(const std::string& path) {
    const Table t = read_table_csv(path);
    if (t.data.cols() < 2)
        throw InvalidInput(path + ": need at least one covariate column and a response column");
    TrainingData d;
    const Index p = t.data.cols() - 1;
    for (Index j = 0; j < p; ++j) d.names.push_back(t.headers[static_cast<std::size_t>(j)]);
    d.points = t.data.leftCols(p);
    d.y = t.data.col(p);
    return d;
}

Matrix curve_grid(const KernelSpec& kernel, const Matrix& points) {
    const int samples = 201;
    double lo = 0.0, hi = 1.0;
    if (kernel.kind != KernelSpec::Kind::spline) {
        lo = points.col(0).minCoeff();
        hi = points.col(0).maxCoeff();
    }
    Matrix grid(samples, 1);
    for (int i = 0; i < samples; ++i)
        grid(i, 0) = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    return grid;
}

void emit_curve(const CommonOpts& common, const PenalizedFit& fit, const KernelSpec& kernel,
                const Matrix& points) {
    if (kernel.kind == KernelSpec::Kind::precomputed || points.cols() != 1) return;
    const Matrix grid = curve_grid(kernel, points);
    const Vector fhat = evaluate_fit(fit, kernel, points, grid);
    Matrix out(grid.rows(), 2);
    out.col(0) = grid.col(0);
    out.col(1) = fhat;
    write_table_csv(out_path(common, "curve.csv"), {"t", "fhat"}, out);
}

int run_fit_spline(const CommonOpts& common, const std::string& input, const std::string& kernel_s,
                   int order, double lambda) {
    const KernelSpec kernel = parse_kernel(kernel_s, order);
    const TrainingData data = load_training(input);
    const GramMatrix K = gram(kernel, data.points);
    const NullSpaceBasis T = null_space_basis(kernel, data.points);
    const PenalizedFit fit = fit_penalized_ls(K, T, data.y, lambda);

    write_file_atomic(out_path(common, "fit.json"), fit_json(fit, kernel.name()).dump());
    const Vector fitted = evaluate_fit(fit, kernel, data.points, data.points);
    Matrix table(data.points.rows(), data.points.cols() + 2);
    table.leftCols(data.points.cols()) = data.points;
    table.col(data.points.cols()) = data.y;
    table.col(data.points.cols() + 1) = fitted;
    std::vector<std::string> headers = data.names;
    headers.push_back("y");
    headers.push_back("fitted");
    write_table_csv(out_path(common, "fitted.csv"), headers, table);
    emit_curve(common, fit, kernel, data.points);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("kernel", Json::string(kernel.name()));
    params.set("lambda", Json::number(lambda));
    write_manifest(common, "fit-spline", std::move(params));
    return 0;
}

int run_tune(const CommonOpts& common, const std::string& input, const std::string& kernel_s,
             int order, int grid_points, int replicates, bool with_loo) {
    const KernelSpec kernel = parse_kernel(kernel_s, order);
    const TrainingData data = load_training(input);
    const GramMatrix K = gram(kernel, data.points);
    const NullSpaceBasis T = null_space_basis(kernel, data.points);
    const Vector grid = default_lambda_grid(grid_points);
    const TuningReport report = minimize_gcv(data.y, K, T, grid, with_loo);

    Json j = Json::object();
    j.set("lambda_grid", Json::array_of(report.lambda_grid));
    j.set("gcv", Json::array_of(report.gcv_values));
    j.set("df", Json::array_of(report.df_values));
    if (with_loo) j.set("loo", Json::array_of(report.loo_values));
    j.set("selected_lambda", Json::number(report.selected_lambda));
    if (replicates > 0) {
        const auto fitter = [&](const Vector& yy) {
            const PenalizedFit f = fit_penalized_ls(K, T, yy, report.selected_lambda);
            return Vector(K.matrix() * f.c + T.columns * f.d);
        };
        const RandomizedTraceEstimate est = randomized_trace(
            fitter, data.y, default_delta_scale(data.y), replicates, common.seed);
        Json e = Json::object();
        e.set("mean", Json::number(est.mean));
        e.set("standard_error", Json::number(est.standard_error));
        e.set("replicates", Json::integer(est.replicates));
        e.set("delta_scale", Json::number(est.delta_scale));
        e.set("seed", Json::integer(static_cast<std::int64_t>(est.seed)));
        j.set("trace_estimate", std::move(e));
    }
    write_file_atomic(out_path(common, "tuning_report.json"), j.dump());

    Matrix curve(report.lambda_grid.size(), 3);
    curve.col(0) = report.lambda_grid;
    curve.col(1) = report.gcv_values;
    curve.col(2) = report.df_values;
    write_table_csv(out_path(common, "tuning_curve.csv"), {"lambda", "gcv", "df"}, curve);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("kernel", Json::string(kernel.name()));
    params.set("grid", Json::integer(grid_points));
    params.set("replicates", Json::integer(replicates));
    write_manifest(common, "tune", std::move(params));
    return 0;
}

int run_fit_binary(const CommonOpts& common, const std::string& command, const std::string& input,
                   const std::string& kernel_s, int order, double lambda) {
    const KernelSpec kernel = parse_kernel(kernel_s, order);
    const TrainingData data = load_training(input);
    const GramMatrix K = gram(kernel, data.points);
    PenalizedFit fit;
    if (command == "fit-logit") {
        const NullSpaceBasis T = null_space_basis(kernel, data.points, 1);
        fit = fit_penalized_logistic(K, T, data.y, lambda);
    } else {
        fit = fit_svm(K, data.y, lambda, common.seed);
    }

    write_file_atomic(out_path(common, "fit.json"), fit_json(fit, kernel.name()).dump());
    const Vector f = evaluate_fit(fit, kernel, data.points, data.points);
    Matrix table(data.points.rows(), data.points.cols() + 3);
    table.leftCols(data.points.cols()) = data.points;
    table.col(data.points.cols()) = data.y;
    table.col(data.points.cols() + 1) = f;
    std::vector<std::string> headers = data.names;
    headers.push_back("label");
    if (command == "fit-logit") {
        for (Index i = 0; i < f.size(); ++i)
            table(i, data.points.cols() + 2) = 1.0 / (1.0 + std::exp(-f(i)));
        headers.push_back("f");
        headers.push_back("prob");
    } else {
        for (Index i = 0; i < f.size(); ++i)
            table(i, data.points.cols() + 2) = f(i) >= 0.0 ? 1.0 : -1.0;
        headers.push_back("f");
        headers.push_back("predicted");
    }
    write_table_csv(out_path(common, "fitted.csv"), headers, table);
    emit_curve(common, fit, kernel, data.points);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("kernel", Json::string(kernel.name()));
    params.set("lambda", Json::number(lambda));
    write_manifest(common, command, std::move(params));
    return 0;
}

int run_fit_msvm(const CommonOpts& common, const std::string& input, const std::string& kernel_s,
                 int order, double lambda, int k) {
    const KernelSpec kernel = parse_kernel(kernel_s, order);
    const TrainingData data = load_training(input);
    std::vector<int> labels;
    for (Index i = 0; i < data.y.size(); ++i) {
        const int lab = static_cast<int>(data.y(i));
        if (static_cast<double>(lab) != data.y(i))
            throw InvalidInput("fit-msvm: labels must be integers 1..k");
        labels.push_back(lab);
    }
    const GramMatrix K = gram(kernel, data.points);
    const MultiFit fit = fit_msvm(K, labels, lambda, k);

    Json j = Json::object();
    j.set("loss", Json::string("multicategory-hinge"));
    j.set("lambda", Json::number(fit.lambda));
    j.set("k", Json::integer(fit.k));
    j.set("coefficients", Json::array_of(fit.coefficients));
    j.set("intercepts", Json::array_of(fit.intercepts));
    j.set("kernel", Json::string(kernel.name()));
    j.set("objective", Json::number(fit.objective_value));
    if (!fit.warnings.empty()) {
        Json w = Json::array();
        for (const auto& s : fit.warnings) w.push(Json::string(s));
        j.set("warnings", std::move(w));
    }
    write_file_atomic(out_path(common, "msvm_fit.json"), j.dump());

    const Matrix F = evaluate_msvm(fit, kernel, data.points, data.points);
    const std::vector<int> predicted = msvm_classify(F);
    Matrix table(data.points.rows(), data.points.cols() + 2 + k);
    table.leftCols(data.points.cols()) = data.points;
    table.col(data.points.cols()) = data.y;
    table.middleCols(data.points.cols() + 1, k) = F;
    for (Index i = 0; i < F.rows(); ++i)
        table(i, data.points.cols() + 1 + k) = predicted[static_cast<std::size_t>(i)];
    std::vector<std::string> headers = data.names;
    headers.push_back("label");
    for (int c = 1; c <= k; ++c) headers.push_back("f" + std::to_string(c));
    headers.push_back("predicted");
    write_table_csv(out_path(common, "fitted.csv"), headers, table);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("kernel", Json::string(kernel.name()));
    params.set("lambda", Json::number(lambda));
    params.set("k", Json::integer(k));
    write_manifest(common, "fit-msvm", std::move(params));
    return 0;
}

int run_ssanova(const CommonOpts& common, const std::string& input, const std::string& kernel_s,
                int order, double lambda) {
    const TrainingData data = load_training(input);
    const Index n = data.points.rows();
    const int d = static_cast<int>(data.points.cols());

    std::vector<KernelSpec> kernels;
    std::vector<AveragingMeasure> measures;
    std::vector<GramMatrix> centered;
    for (int a = 0; a < d; ++a) {
        kernels.push_back(parse_kernel(kernel_s, order));
        measures.push_back(AveragingMeasure::uniform(n));
        centered.push_back(center_kernel(gram(kernels.back(), data.points.col(a)),
                                         measures.back()));
    }
    const auto components = build_anova_kernels(centered, d >= 2 ? 2 : 1);
    const Vector theta = Vector::Ones(static_cast<Index>(components.size()));
    const AnovaDecomposition dec = fit_ssanova(components, theta, data.y, lambda);

    Json j = Json::object();
    j.set("lambda", Json::number(dec.lambda));
    j.set("mu", Json::number(dec.mu));
    j.set("coefficients", Json::array_of(dec.coefficients));
    Json comps = Json::array();
    for (const auto& term : dec.terms) {
        Json c = Json::object();
        c.set("label", Json::string(component_label(term.coords, data.names)));
        c.set("coords", Json::array().push(Json::integer(term.coords[0]))
                            .push(Json::integer(term.coords[1])));
        c.set("theta", Json::number(term.theta));
        c.set("values", Json::array_of(term.values));
        comps.push(std::move(c));
    }
    j.set("components", std::move(comps));
    write_file_atomic(out_path(common, "decomposition.json"), j.dump());

    // component values at the data points
    Matrix table(n, static_cast<Index>(d) + 2 + static_cast<Index>(dec.terms.size()));
    table.leftCols(d) = data.points;
    table.col(d) = data.y;
    table.col(d + 1) = dec.fitted_values;
    std::vector<std::string> headers = data.names;
    headers.push_back("y");
    headers.push_back("fitted");
    for (std::size_t t = 0; t < dec.terms.size(); ++t) {
        table.col(d + 2 + static_cast<Index>(t)) = dec.terms[t].values;
        headers.push_back(component_label(dec.terms[t].coords, data.names));
    }
    write_table_csv(out_path(common, "components.csv"), headers, table);

    // per-main-effect curves over each coordinate's observed range
    const int samples = 101;
    Matrix curves(static_cast<Index>(d) * samples, 3);
    Index row = 0;
    for (int a = 0; a < d; ++a) {
        const double lo = data.points.col(a).minCoeff();
        const double hi = data.points.col(a).maxCoeff();
        Vector point = data.points.colwise().mean();
        for (int s = 0; s < samples; ++s) {
            const double t = lo + (hi - lo) * static_cast<double>(s) / (samples - 1);
            point(a) = t;
            const SsanovaPrediction pred =
                predict_ssanova(dec, kernels, data.points, measures, point);
            std::size_t term_index = 0;
            for (std::size_t ti = 0; ti < dec.terms.size(); ++ti)
                if (dec.terms[ti].coords[0] == a && dec.terms[ti].coords[1] < 0) term_index = ti;
            curves(row, 0) = static_cast<double>(a);
            curves(row, 1) = t;
            curves(row, 2) = pred.components[term_index];
            ++row;
        }
    }
    write_table_csv(out_path(common, "main_effect_curves.csv"),
                    {"coordinate", "t", "value"}, curves);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("kernel", Json::string(kernels.front().name()));
    params.set("lambda", Json::number(lambda));
    write_manifest(common, "ssanova", std::move(params));
    return 0;
}

int run_lasso(const CommonOpts& common, const std::string& input, double lambda) {
    const TrainingData data = load_training(input);
    const SparseFit fit = fit_lasso(data.points, data.y, lambda);

    Json j = Json::object();
    j.set("lambda", Json::number(fit.lambda));
    j.set("beta", Json::array_of(fit.beta));
    Json support = Json::array();
    for (const int idx : fit.support) support.push(Json::integer(idx));
    j.set("support", std::move(support));
    j.set("objective", Json::number(lasso_objective(data.points, data.y, lambda, fit.beta)));
    write_file_atomic(out_path(common, "lasso.json"), j.dump());

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("lambda", Json::number(lambda));
    write_manifest(common, "lasso", std::move(params));
    return 0;
}

DissimilaritySet load_dissimilarities(const std::string& path) {
    // three columns i,j,d; header row optional (detected)
    std::vector<std::vector<double>> rows;
    {
        const Matrix m = [&] {
            try {
                return read_matrix_csv(path);
            } catch (const InvalidInput&) {
                const Table t = read_table_csv(path);
                return Matrix(t.data);
            }
        }();
        if (m.cols() != 3) throw InvalidInput(path + ": expected three columns i,j,d");
        for (Index r = 0; r < m.rows(); ++r)
            rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
    }
    Index n = 0;
    std::vector<DissimilaritySet::Entry> entries;
    for (const auto& row : rows) {
        DissimilaritySet::Entry e;
        e.i = static_cast<Index>(row[0]);
        e.j = static_cast<Index>(row[1]);
        if (static_cast<double>(e.i) != row[0] || static_cast<double>(e.j) != row[1])
            throw InvalidInput(path + ": indices must be integers");
        e.d = row[2];
        n = std::max({n, e.i + 1, e.j + 1});
        entries.push_back(e);
    }
    return DissimilaritySet(n, std::move(entries));
}

int run_rke(const CommonOpts& common, const std::string& input, double lambda, int rank) {
    const DissimilaritySet D = load_dissimilarities(input);
    RkeOptions opts;
    opts.seed = common.seed;
    opts.rank = rank;
    const EmbeddingResult result = fit_rke(D, lambda, opts);

    Json j = Json::object();
    j.set("lambda", Json::number(lambda));
    j.set("objective", Json::number(result.objective));
    j.set("iterations", Json::integer(result.iterations));
    j.set("eigenvalues", Json::array_of(result.eigenvalues));
    j.set("rank", Json::integer(static_cast<std::int64_t>(result.coordinates.cols())));
    j.set("trace_fraction", Json::number(result.trace_fraction));
    write_file_atomic(out_path(common, "rke.json"), j.dump());
    write_matrix_csv(out_path(common, "coordinates.csv"), result.coordinates);

    Json params = Json::object();
    params.set("input", Json::string(input));
    params.set("lambda", Json::number(lambda));
    params.set("rank", Json::integer(rank));
    write_manifest(common, "rke", std::move(params));
    return 0;
}

Matrix load_points(const std::string& path) {
    // matrix of sample rows; header detected by non-numeric first line
    try {
        return read_matrix_csv(path);
    } catch (const InvalidInput&) {
        return read_table_csv(path).data;
    }
}

int run_dcor(const CommonOpts& common, const std::string& x_path, const std::string& y_path,
             int perms) {
    const Matrix X = load_points(x_path);
    const Matrix Y = load_points(y_path);
    const DcorReport report = perms > 0 ? permutation_test(X, Y, perms, common.seed) : dcor(X, Y);

    Json j = Json::object();
    j.set("dcov", Json::number(report.dcov));
    j.set("dvar_x", Json::number(report.dvar_x));
    j.set("dvar_y", Json::number(report.dvar_y));
    j.set("dcor", Json::number(report.dcor));
    if (perms > 0) {
        j.set("p_value", Json::number(report.p_value));
        j.set("permutations", Json::integer(report.permutations));
        j.set("seed", Json::integer(static_cast<std::int64_t>(report.seed)));
    }
    j.set("degenerate", Json::boolean(report.degenerate));
    write_file_atomic(out_path(common, "dcor.json"), j.dump());

    Json params = Json::object();
    params.set("x", Json::string(x_path));
    params.set("y", Json::string(y_path));
    params.set("perms", Json::integer(perms));
    write_manifest(common, "dcor", std::move(params));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rkhskit: kernel regularization, tuning, embeddings and dependence tests"};
    app.require_subcommand(1);

    CommonOpts common;
    common.threads = env_threads();

    std::string input, x_path, y_path;
    std::string kernel_s = "spline:2";
    int order = 2;
    double lambda = 1e-3;
    int grid_points = 40;
    int k_classes = 3;
    int rank = 0;
    int perms = 0;
    int replicates = 0;
    bool with_loo = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out", common.out_dir, "output directory");
        cmd->add_option("--seed", common.seed, "random seed");
    };

    auto* fit_spline = app.add_subcommand("fit-spline", "penalized least-squares fit");
    fit_spline->add_option("--input", input, "training CSV (covariates then response)")->required();
    fit_spline->add_option("--kernel", kernel_s, "kernel spec, e.g. spline:2, gaussian:0.5");
    fit_spline->add_option("--order", order, "spline order m (1 or 2)");
    fit_spline->add_option("--lambda", lambda, "smoothing parameter")->required();
    add_common(fit_spline);

    auto* tune = app.add_subcommand("tune", "GCV sweep over a lambda grid");
    tune->add_option("--input", input)->required();
    tune->add_option("--kernel", kernel_s);
    tune->add_option("--order", order);
    tune->add_option("--grid", grid_points, "number of grid points");
    tune->add_option("--replicates", replicates, "randomized-trace replicates at selected lambda");
    tune->add_flag("--loo", with_loo, "also compute leave-one-out scores");
    add_common(tune);

    auto* fit_logit = app.add_subcommand("fit-logit", "penalized Bernoulli likelihood fit");
    fit_logit->add_option("--input", input)->required();
    fit_logit->add_option("--kernel", kernel_s);
    fit_logit->add_option("--order", order);
    fit_logit->add_option("--lambda", lambda)->required();
    add_common(fit_logit);

    auto* fit_svm_cmd = app.add_subcommand("fit-svm", "hinge-loss SVM fit");
    fit_svm_cmd->add_option("--input", input)->required();
    fit_svm_cmd->add_option("--kernel", kernel_s);
    fit_svm_cmd->add_option("--order", order);
    fit_svm_cmd->add_option("--lambda", lambda)->required();
    add_common(fit_svm_cmd);

    auto* fit_msvm_cmd = app.add_subcommand("fit-msvm", "multicategory SVM fit");
    fit_msvm_cmd->add_option("--input", input)->required();
    fit_msvm_cmd->add_option("--kernel", kernel_s);
    fit_msvm_cmd->add_option("--order", order);
    fit_msvm_cmd->add_option("--lambda", lambda)->required();
    fit_msvm_cmd->add_option("--k", k_classes, "number of classes")->required();
    add_common(fit_msvm_cmd);

    auto* ssanova_cmd = app.add_subcommand("ssanova", "smoothing-spline ANOVA decomposition");
    ssanova_cmd->add_option("--input", input)->required();
    ssanova_cmd->add_option("--kernel", kernel_s);
    ssanova_cmd->add_option("--order", order);
    ssanova_cmd->add_option("--lambda", lambda)->required();
    add_common(ssanova_cmd);

    auto* lasso_cmd = app.add_subcommand("lasso", "L1-penalized least squares");
    lasso_cmd->add_option("--input", input)->required();
    lasso_cmd->add_option("--lambda", lambda)->required();
    add_common(lasso_cmd);

    auto* rke_cmd = app.add_subcommand("rke", "regularized kernel estimation from dissimilarities");
    rke_cmd->add_option("--input", input, "CSV with columns i,j,d (0-based indices)")->required();
    rke_cmd->add_option("--lambda", lambda)->required();
    rke_cmd->add_option("--rank", rank, "embedding rank (0 = auto at 95% of trace)");
    add_common(rke_cmd);

    auto* dcor_cmd = app.add_subcommand("dcor", "distance correlation and permutation test");
    dcor_cmd->add_option("--x", x_path, "sample X (rows aligned with Y)")->required();
    dcor_cmd->add_option("--y", y_path, "sample Y")->required();
    dcor_cmd->add_option("--perms", perms, "permutation count (0 = no test)");
    add_common(dcor_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (fit_spline->parsed()) return run_fit_spline(common, input, kernel_s, order, lambda);
        if (tune->parsed())
            return run_tune(common, input, kernel_s, order, grid_points, replicates, with_loo);
        if (fit_logit->parsed())
            return run_fit_binary(common, "fit-logit", input, kernel_s, order, lambda);
        if (fit_svm_cmd->parsed())
            return run_fit_binary(common, "fit-svm", input, kernel_s, order, lambda);
        if (fit_msvm_cmd->parsed())
            return run_fit_msvm(common, input, kernel_s, order, lambda, k_classes);
        if (ssanova_cmd->parsed()) return run_ssanova(common, input, kernel_s, order, lambda);
        if (lasso_cmd->parsed()) return run_lasso(common, input, lambda);
        if (rke_cmd->parsed()) return run_rke(common, input, lambda, rank);
        if (dcor_cmd->parsed()) return run_dcor(common, x_path, y_path, perms);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const SolverFailure& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
