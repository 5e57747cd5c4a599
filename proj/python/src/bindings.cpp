#include <tglasso/errors.hpp>
#include <tglasso/eval.hpp>
#include <tglasso/io.hpp>
#include <tglasso/penalty.hpp>
#include <tglasso/simgen.hpp>
#include <tglasso/solver.hpp>
#include <tglasso/study.hpp>
#include <tglasso/treelearn.hpp>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace tglasso;

namespace {

SolverConfig solver_config(double lambda, double tol, int max_iter, double epsilon, const std::string& dual_update)
{
    SolverConfig c;
    c.lambda = lambda;
    c.tol = tol;
    c.max_iter = max_iter;
    c.epsilon_floor = epsilon;
    if (dual_update == "weighted") {
        c.dual_update = DualUpdate::kWeighted;
    } else if (dual_update == "unweighted") {
        c.dual_update = DualUpdate::kUnweighted;
    } else {
        throw ConfigError("dual_update must be 'weighted' or 'unweighted', got '" + dual_update + "'");
    }
    c.validate();
    return c;
}

py::dict fit_to_dict(const FitResult& f)
{
    py::dict d;
    d["b"] = f.b;
    d["lambda"] = f.lambda;
    d["iterations"] = f.iterations;
    d["converged"] = f.converged;
    d["objective_trace"] = f.objective_trace;
    d["x_means"] = f.x_means;
    d["y_means"] = f.y_means;
    return d;
}

py::dict simulated_to_dict(const SimulatedData& s)
{
    py::dict d;
    d["x_train"] = s.train.raw_x();
    d["y_train"] = s.train.raw_y();
    d["x_test"] = s.test.raw_x();
    d["y_test"] = s.test.raw_y();
    d["b_true"] = s.b_true;
    d["tree"] = s.tree;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Tree-guided group lasso for multi-output regression";
    m.attr("__version__") = TGLASSO_VERSION;

    auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<InputError>(m, "InputError", base.ptr());
    py::register_exception<SolverError>(m, "SolverError", base.ptr());
    py::register_exception<IoError>(m, "IoError", base.ptr());

    py::class_<OutputTree>(m, "OutputTree")
        .def_static(
            "from_json", [](const std::string& text) { return compute_group_weights(io::tree_from_json(text)); },
            py::arg("text"))
        .def("to_json", [](const OutputTree& t) { return io::tree_to_json(t); })
        .def_property_readonly("num_outputs", &OutputTree::num_outputs)
        .def_property_readonly("num_nodes", &OutputTree::num_nodes)
        .def_property_readonly("root", &OutputTree::root)
        .def("parent", &OutputTree::parent, py::arg("node"))
        .def("group", [](const OutputTree& t, int v) { return t.node(v).group; }, py::arg("node"))
        .def("weights", [](const OutputTree& t) {
            std::vector<double> w;
            for (const auto& n : t.nodes()) w.push_back(n.w);
            return w;
        })
        .def("is_valid", [](const OutputTree& t) { return validate_tree(t).ok(); })
        .def("__repr__", [](const OutputTree& t) {
            return "<OutputTree outputs=" + std::to_string(t.num_outputs()) + " nodes=" + std::to_string(t.num_nodes())
                   + ">";
        });

    m.def("lasso_tree", &make_lasso_tree, py::arg("num_outputs"));
    m.def("l1l2_tree", &make_l1l2_tree, py::arg("num_outputs"));
    m.def("star_tree", &make_star_tree, py::arg("num_outputs"), py::arg("s_root"));
    m.def("balanced_tree", &make_balanced_tree, py::arg("branching"), py::arg("s") = 0.5);
    m.def("learn_tree", &learn_output_tree, py::arg("y"), py::arg("rho") = 1.0,
          "UPGMA on 1 - correlation, pruned at normalized height rho");
    m.def(
        "cluster",
        [](const Matrix& y) {
            const Dendrogram d = normalize_heights(agglomerative_cluster(correlation_distance(correlation_matrix(y))));
            std::vector<std::tuple<int, int, double, int>> merges;
            for (const auto& mg : d.merges) merges.emplace_back(mg.left, mg.right, mg.height, mg.size);
            return py::make_tuple(merges, d.normalized_heights);
        },
        py::arg("y"), "Merges (left, right, height, size) and normalized heights");

    m.def("penalty", &penalty_flat, py::arg("b"), py::arg("tree"));
    m.def(
        "objective",
        [](const Matrix& x, const Matrix& y, const Matrix& b, const OutputTree& t, double lambda) {
            return objective(center_columns(DataSet::from_raw(x, y)), b, t, lambda);
        },
        py::arg("x"), py::arg("y"), py::arg("b"), py::arg("tree"), py::arg("lam"));

    m.def(
        "fit",
        [](const Matrix& x, const Matrix& y, const OutputTree& t, double lambda, double tol, int max_iter,
           double epsilon, const std::string& dual_update) {
            const SolverConfig c = solver_config(lambda, tol, max_iter, epsilon, dual_update);
            FitResult f;
            {
                py::gil_scoped_release release;
                f = fit(DataSet::from_raw(x, y), t, c);
            }
            return fit_to_dict(f);
        },
        py::arg("x"), py::arg("y"), py::arg("tree"), py::arg("lam") = 1.0, py::arg("tol") = 1e-6,
        py::arg("max_iter") = 1000, py::arg("epsilon") = 1e-10, py::arg("dual_update") = "weighted");
    m.def(
        "predict",
        [](const Matrix& x_new, const Matrix& b, const Vector& x_means, const Vector& y_means) {
            return predict(x_new, b, x_means, y_means);
        },
        py::arg("x_new"), py::arg("b"), py::arg("x_means"), py::arg("y_means"));
    m.def(
        "cross_validate",
        [](const Matrix& x, const Matrix& y, const OutputTree& t, const std::vector<double>& grid, int folds,
           std::uint64_t seed, int jobs) {
            CvResult r;
            {
                py::gil_scoped_release release;
                r = cross_validate(DataSet::from_raw(x, y), t, grid, folds, SolverConfig{}, seed, jobs);
            }
            std::vector<double> means;
            for (const auto& row : r.table) means.push_back(row.mean_mse);
            return py::make_tuple(r.best_lambda, means);
        },
        py::arg("x"), py::arg("y"), py::arg("tree"), py::arg("grid"), py::arg("folds") = 5, py::arg("seed") = 1,
        py::arg("jobs") = 1, "Best lambda and the mean held-out MSE at each grid point");
    m.def("log_grid", &log_grid, py::arg("lo"), py::arg("hi"), py::arg("count"));

    m.def(
        "simulate",
        [](int n_train, int n_test, int j_inputs, int k_outputs, const std::vector<int>& branching, double signal,
           double noise_sd, int causal_inputs_per_group, const std::vector<int>& active_levels, double tree_s,
           std::uint64_t seed) {
            SimulationSpec s;
            s.n_train = n_train;
            s.n_test = n_test;
            s.j_inputs = j_inputs;
            s.k_outputs = k_outputs;
            s.branching = branching;
            s.signal = signal;
            s.noise_sd = noise_sd;
            s.causal_inputs_per_group = causal_inputs_per_group;
            s.active_levels = active_levels;
            s.tree_s = tree_s;
            s.seed = seed;
            return simulated_to_dict(generate_dataset(s));
        },
        py::arg("n_train") = 150, py::arg("n_test") = 50, py::arg("j_inputs") = 200, py::arg("k_outputs") = 60,
        py::arg("branching") = std::vector<int>{3, 2, 5, 2}, py::arg("signal") = 0.4, py::arg("noise_sd") = 1.0,
        py::arg("causal_inputs_per_group") = 2, py::arg("active_levels") = std::vector<int>{1, 2, 3},
        py::arg("tree_s") = 0.5, py::arg("seed") = 1);

    m.def(
        "roc",
        [](const Matrix& b_hat, const Matrix& b_true) {
            const RocCurve c = roc_by_threshold(b_hat, b_true);
            return py::make_tuple(c.fpr, c.tpr, c.thresholds);
        },
        py::arg("b_hat"), py::arg("b_true"), "Threshold-sweep ROC as (fpr, tpr, thresholds)");
    m.def(
        "auc", [](const Matrix& b_hat, const Matrix& b_true) { return auc(roc_by_threshold(b_hat, b_true)); },
        py::arg("b_hat"), py::arg("b_true"));
    m.def("test_mse", &test_mse, py::arg("y_pred"), py::arg("y_test"));
}
