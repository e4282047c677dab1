// pybind11 bindings for the rkhskit core.

#include "rkhskit/dcor.hpp"
#include "rkhskit/errors.hpp"
#include "rkhskit/kernels.hpp"
#include "rkhskit/rke.hpp"
#include "rkhskit/solvers.hpp"
#include "rkhskit/ssanova.hpp"
#include "rkhskit/tuning.hpp"
#include "rkhskit/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace rkhs;

PYBIND11_MODULE(_rkhskit, m) {
    m.doc() = "Kernel regularization toolkit: representer-theorem solvers, GCV tuning, "
              "SS-ANOVA, RKE embeddings, and distance correlation.";
    m.attr("__version__") = kVersion;

    py::register_exception<rkhs::InvalidInput>(m, "InvalidInput", PyExc_ValueError);
    py::register_exception<rkhs::SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

    // kernels
    py::class_<KernelSpec>(m, "KernelSpec")
        .def_static("spline", &KernelSpec::spline, py::arg("m"))
        .def_static("gaussian", &KernelSpec::gaussian, py::arg("width"))
        .def_static("linear", &KernelSpec::linear)
        .def_static("precomputed", &KernelSpec::precomputed, py::arg("gram"))
        .def("name", &KernelSpec::name)
        .def("__repr__", [](const KernelSpec& k) { return "KernelSpec(" + k.name() + ")"; });

    py::class_<GramMatrix>(m, "GramMatrix")
        .def(py::init<Matrix, Matrix>(), py::arg("entries"), py::arg("points") = Matrix())
        .def_property_readonly("matrix", &GramMatrix::matrix)
        .def_property_readonly("points", &GramMatrix::points)
        .def("__len__", &GramMatrix::size);

    py::class_<NullSpaceBasis>(m, "NullSpaceBasis")
        .def(py::init<Matrix>(), py::arg("columns"))
        .def_readonly("columns", &NullSpaceBasis::columns)
        .def_property_readonly("dim", &NullSpaceBasis::dim);

    m.def("gram", &gram, py::arg("kernel"), py::arg("points"));
    m.def("kernel_value", &kernel_value, py::arg("kernel"), py::arg("x"), py::arg("y"));
    m.def("squared_distance_from_kernel", &squared_distance_from_kernel, py::arg("K"),
          py::arg("i"), py::arg("j"));
    m.def("psd_project", &psd_project, py::arg("S"));
    m.def("is_psd_within_tolerance", &is_psd_within_tolerance, py::arg("S"),
          py::arg("rel_tol") = kPsdRelTol);
    m.def("null_space_basis", &null_space_basis, py::arg("kernel"), py::arg("points"),
          py::arg("dim") = -1);
    m.def("constant_basis", &constant_basis, py::arg("n"));
    m.def("empty_basis", &empty_basis, py::arg("n"));
    m.def("polynomial_basis", &polynomial_basis, py::arg("t"), py::arg("degree"));

    // solvers
    py::enum_<Loss>(m, "Loss")
        .value("square", Loss::square)
        .value("bernoulli", Loss::bernoulli)
        .value("hinge", Loss::hinge);

    py::class_<PenalizedFit>(m, "PenalizedFit")
        .def_readonly("c", &PenalizedFit::c)
        .def_readonly("d", &PenalizedFit::d)
        .def_readonly("lambda_", &PenalizedFit::lambda)
        .def_readonly("loss", &PenalizedFit::loss)
        .def_readonly("objective_value", &PenalizedFit::objective_value);

    py::class_<MultiFit>(m, "MultiFit")
        .def_readonly("coefficients", &MultiFit::coefficients)
        .def_readonly("intercepts", &MultiFit::intercepts)
        .def_readonly("lambda_", &MultiFit::lambda)
        .def_readonly("k", &MultiFit::k)
        .def_readonly("objective_value", &MultiFit::objective_value)
        .def_readonly("warnings", &MultiFit::warnings);

    py::class_<SparseFit>(m, "SparseFit")
        .def_readonly("beta", &SparseFit::beta)
        .def_readonly("lambda_", &SparseFit::lambda)
        .def_readonly("support", &SparseFit::support);

    m.def("fit_penalized_ls", &fit_penalized_ls, py::arg("K"), py::arg("T"), py::arg("y"),
          py::arg("lam"));
    m.def("evaluate_fit", &evaluate_fit, py::arg("fit"), py::arg("kernel"),
          py::arg("train_points"), py::arg("new_points"));
    m.def("fit_penalized_logistic", &fit_penalized_logistic, py::arg("K"), py::arg("T"),
          py::arg("y"), py::arg("lam"));
    m.def("fit_svm", &fit_svm, py::arg("K"), py::arg("y"), py::arg("lam"), py::arg("seed") = 0);
    m.def("msvm_label_coding", &msvm_label_coding, py::arg("k"), py::arg("label"));
    m.def("fit_msvm", &fit_msvm, py::arg("K"), py::arg("labels"), py::arg("lam"), py::arg("k"));
    m.def("evaluate_msvm", &evaluate_msvm, py::arg("fit"), py::arg("kernel"),
          py::arg("train_points"), py::arg("new_points"));
    m.def("msvm_classify", &msvm_classify, py::arg("component_values"));
    m.def("fit_lasso", &fit_lasso, py::arg("B"), py::arg("y"), py::arg("lam"));

    // tuning
    py::class_<RandomizedTraceEstimate>(m, "RandomizedTraceEstimate")
        .def_readonly("mean", &RandomizedTraceEstimate::mean)
        .def_readonly("standard_error", &RandomizedTraceEstimate::standard_error)
        .def_readonly("replicates", &RandomizedTraceEstimate::replicates)
        .def_readonly("delta_scale", &RandomizedTraceEstimate::delta_scale)
        .def_readonly("seed", &RandomizedTraceEstimate::seed);

    py::class_<TuningReport>(m, "TuningReport")
        .def_readonly("lambda_grid", &TuningReport::lambda_grid)
        .def_readonly("gcv_values", &TuningReport::gcv_values)
        .def_readonly("loo_values", &TuningReport::loo_values)
        .def_readonly("df_values", &TuningReport::df_values)
        .def_readonly("selected_lambda", &TuningReport::selected_lambda);

    m.def("influence_matrix", &influence_matrix, py::arg("K"), py::arg("T"), py::arg("lam"));
    m.def("df_signal", &df_signal, py::arg("A"));
    m.def("gcv", &gcv, py::arg("y"), py::arg("K"), py::arg("T"), py::arg("lam"));
    m.def("loo_cv", &loo_cv, py::arg("y"), py::arg("K"), py::arg("T"), py::arg("lam"));
    m.def("randomized_trace", &randomized_trace, py::arg("fitter"), py::arg("y"),
          py::arg("delta_scale"), py::arg("replicates"), py::arg("seed"));
    m.def("default_delta_scale", &default_delta_scale, py::arg("y"));
    m.def("default_lambda_grid", &default_lambda_grid, py::arg("points") = 40);
    m.def("minimize_gcv", &minimize_gcv, py::arg("y"), py::arg("K"), py::arg("T"),
          py::arg("lambda_grid"), py::arg("with_loo") = false);

    // ss-anova
    py::class_<AveragingMeasure>(m, "AveragingMeasure")
        .def(py::init<Vector>(), py::arg("weights"))
        .def_static("uniform", &AveragingMeasure::uniform, py::arg("n"))
        .def_readonly("weights", &AveragingMeasure::weights);

    py::class_<AnovaComponent>(m, "AnovaComponent")
        .def_readonly("coords", &AnovaComponent::coords)
        .def_readonly("gram", &AnovaComponent::gram)
        .def("is_interaction", &AnovaComponent::is_interaction);

    py::class_<AnovaTerm>(m, "AnovaTerm")
        .def_readonly("coords", &AnovaTerm::coords)
        .def_readonly("theta", &AnovaTerm::theta)
        .def_readonly("values", &AnovaTerm::values);

    py::class_<AnovaDecomposition>(m, "AnovaDecomposition")
        .def_readonly("mu", &AnovaDecomposition::mu)
        .def_readonly("terms", &AnovaDecomposition::terms)
        .def_readonly("lambda_", &AnovaDecomposition::lambda)
        .def_readonly("coefficients", &AnovaDecomposition::coefficients)
        .def_readonly("fitted_values", &AnovaDecomposition::fitted_values);

    py::class_<SsanovaPrediction>(m, "SsanovaPrediction")
        .def_readonly("total", &SsanovaPrediction::total)
        .def_readonly("components", &SsanovaPrediction::components);

    m.def("center_kernel", &center_kernel, py::arg("G"), py::arg("mu"));
    m.def("build_anova_kernels", &build_anova_kernels, py::arg("centered"), py::arg("max_order"));
    m.def("fit_ssanova", &fit_ssanova, py::arg("components"), py::arg("theta"), py::arg("y"),
          py::arg("lam"));
    m.def("predict_ssanova", &predict_ssanova, py::arg("decomposition"), py::arg("kernels"),
          py::arg("train_points"), py::arg("measures"), py::arg("new_point"));
    m.def("component_label", &component_label, py::arg("coords"),
          py::arg("names") = std::vector<std::string>{});

    // rke
    py::class_<DissimilaritySet::Entry>(m, "DissimilarityEntry")
        .def(py::init([](Index i, Index j, double d) {
                 return DissimilaritySet::Entry{i, j, d};
             }),
             py::arg("i"), py::arg("j"), py::arg("d"))
        .def_readonly("i", &DissimilaritySet::Entry::i)
        .def_readonly("j", &DissimilaritySet::Entry::j)
        .def_readonly("d", &DissimilaritySet::Entry::d);

    py::class_<DissimilaritySet>(m, "DissimilaritySet")
        .def(py::init<Index, std::vector<DissimilaritySet::Entry>>(), py::arg("n"),
             py::arg("entries"))
        .def_readonly("entries", &DissimilaritySet::entries)
        .def_readonly("n", &DissimilaritySet::n);

    py::class_<RkeOptions>(m, "RkeOptions")
        .def(py::init<>())
        .def_readwrite("max_iters", &RkeOptions::max_iters)
        .def_readwrite("step0", &RkeOptions::step0)
        .def_readwrite("seed", &RkeOptions::seed)
        .def_readwrite("tol", &RkeOptions::tol)
        .def_readwrite("rank", &RkeOptions::rank)
        .def_readwrite("center", &RkeOptions::center);

    py::class_<EmbeddingResult>(m, "EmbeddingResult")
        .def_readonly("K", &EmbeddingResult::K)
        .def_readonly("objective", &EmbeddingResult::objective)
        .def_readonly("eigenvalues", &EmbeddingResult::eigenvalues)
        .def_readonly("coordinates", &EmbeddingResult::coordinates)
        .def_readonly("trace_fraction", &EmbeddingResult::trace_fraction)
        .def_readonly("iterations", &EmbeddingResult::iterations);

    m.def("rke_objective", &rke_objective, py::arg("K"), py::arg("D"), py::arg("lam"));
    m.def("fit_rke", &fit_rke, py::arg("D"), py::arg("lam"), py::arg("options") = RkeOptions{});
    m.def("embed", &embed, py::arg("K"), py::arg("rank"), py::arg("center") = false);

    // dcor
    py::class_<CenteredDistances>(m, "CenteredDistances").def_readonly("A", &CenteredDistances::A);

    py::class_<DcorReport>(m, "DcorReport")
        .def_readonly("dcov", &DcorReport::dcov)
        .def_readonly("dvar_x", &DcorReport::dvar_x)
        .def_readonly("dvar_y", &DcorReport::dvar_y)
        .def_readonly("dcor", &DcorReport::dcor)
        .def_readonly("p_value", &DcorReport::p_value)
        .def_readonly("permutations", &DcorReport::permutations)
        .def_readonly("seed", &DcorReport::seed)
        .def_readonly("degenerate", &DcorReport::degenerate);

    m.def("double_center", &double_center, py::arg("points"));
    m.def("dcov", &dcov, py::arg("A"), py::arg("B"));
    m.def("dcor", &dcor, py::arg("X"), py::arg("Y"));
    m.def("permutation_test", &permutation_test, py::arg("X"), py::arg("Y"), py::arg("n_perm"),
          py::arg("seed"));
}
