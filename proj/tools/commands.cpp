#include "commands.hpp"
#include "params.hpp"

#include <tglasso/errors.hpp>
#include <tglasso/eval.hpp>
#include <tglasso/io.hpp>
#include <tglasso/simgen.hpp>
#include <tglasso/solver.hpp>
#include <tglasso/study.hpp>
#include <tglasso/treelearn.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace tglasso::cli {
namespace {

using io::format_number;

struct Context
{
    const json& config;
    fs::path out;
    std::vector<std::string> written;

    void matrix(const std::string& name, const Matrix& m, const std::vector<std::string>& header)
    {
        io::write_matrix(out / name, m, header);
        written.push_back(name);
    }

    void text(const std::string& name, const std::string& content)
    {
        io::write_text(out / name, content);
        written.push_back(name);
    }
};

// Config accessors. Resolved configs always carry every key.
double num(const json& c, const char* key) { return c.at(key).get<double>(); }
int integer(const json& c, const char* key) { return c.at(key).get<int>(); }
std::string str(const json& c, const char* key) { return c.at(key).get<std::string>(); }
bool given(const json& c, const char* key) { return c.contains(key) && !c.at(key).is_null(); }

std::string required_path(const json& c, const char* key)
{
    if (!given(c, key)) {
        std::string flag = key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        throw ConfigError("missing required --" + flag);
    }
    return str(c, key);
}

void add_solver_params(ParamSet& p)
{
    p.number("tol", 1e-6, "Relative objective change that stops the solver");
    p.integer("max-iter", 1000, "Maximum alternating-minimization iterations");
    p.number("epsilon", 1e-10, "Floor on the dual weights");
    p.string("dual-update", "weighted", "Dual update rule: weighted | unweighted");
}

SolverConfig solver_config(const json& c)
{
    SolverConfig s;
    s.tol = num(c, "tol");
    s.max_iter = integer(c, "max_iter");
    s.epsilon_floor = num(c, "epsilon");
    const std::string rule = str(c, "dual_update");
    if (rule == "weighted") s.dual_update = DualUpdate::kWeighted;
    else if (rule == "unweighted") s.dual_update = DualUpdate::kUnweighted;
    else throw ConfigError("dual-update must be weighted or unweighted, got '" + rule + "'");
    return s;
}

void add_spec_params(ParamSet& p)
{
    const SimulationSpec d;
    p.integer("n-train", d.n_train, "Training samples");
    p.integer("n-test", d.n_test, "Test samples");
    p.integer("j-inputs", d.j_inputs, "Inputs (SNPs)");
    p.integer("k-outputs", d.k_outputs, "Outputs (traits)");
    p.integer_list("branching", d.branching, "Branching factor per tree level, root first");
    p.number("signal", d.signal, "Nonzero coefficient value");
    p.number("noise-sd", d.noise_sd, "Noise standard deviation");
    p.integer("causal-inputs-per-group", d.causal_inputs_per_group, "Causal inputs assigned to each active node");
    p.integer_list("active-levels", d.active_levels, "Tree depths whose nodes own causal inputs");
    p.number("tree-s", d.tree_s, "s on every internal node of the true tree");
    p.unsigned_integer("seed", d.seed, "Random seed");
}

SimulationSpec spec_from(const json& c)
{
    SimulationSpec s;
    s.n_train = integer(c, "n_train");
    s.n_test = integer(c, "n_test");
    s.j_inputs = integer(c, "j_inputs");
    s.k_outputs = integer(c, "k_outputs");
    s.branching = c.at("branching").get<std::vector<int>>();
    s.signal = num(c, "signal");
    s.noise_sd = num(c, "noise_sd");
    s.causal_inputs_per_group = integer(c, "causal_inputs_per_group");
    s.active_levels = c.at("active_levels").get<std::vector<int>>();
    s.tree_s = num(c, "tree_s");
    s.seed = c.at("seed").get<std::uint64_t>();
    s.validate();
    return s;
}

// ---- simulate ----------------------------------------------------------

void params_simulate(ParamSet& p)
{
    add_spec_params(p);
}

void run_simulate(Context& ctx)
{
    const SimulationSpec spec = spec_from(ctx.config);
    const SimulatedData data = generate_dataset(spec);
    const auto xh = io::indexed_header("x", spec.j_inputs);
    const auto yh = io::indexed_header("y", spec.k_outputs);
    ctx.matrix("x_train.csv", data.train.raw_x(), xh);
    ctx.matrix("y_train.csv", data.train.raw_y(), yh);
    ctx.matrix("x_test.csv", data.test.raw_x(), xh);
    ctx.matrix("y_test.csv", data.test.raw_y(), yh);
    ctx.matrix("b_true.csv", data.b_true, yh);
    ctx.text("tree.json", io::tree_to_json(data.tree));
}

// ---- cluster -----------------------------------------------------------

void params_cluster(ParamSet& p)
{
    p.string("y", nullptr, "Output matrix (samples x outputs)");
    p.number("rho", 1.0, "Neutralize nodes with normalized height above rho");
}

void run_cluster(Context& ctx)
{
    const Matrix y = io::read_matrix(required_path(ctx.config, "y"));
    const double rho = num(ctx.config, "rho");
    require_finite(y, "output matrix");
    const Dendrogram dend = normalize_heights(agglomerative_cluster(correlation_distance(correlation_matrix(y))));
    const OutputTree tree = normalize_and_assign(dend, rho);
    io::write_dendrogram(ctx.out / "dendrogram.csv", dend);
    ctx.written.push_back("dendrogram.csv");
    ctx.text("tree.json", io::tree_to_json(tree));
    std::cerr << "clustered " << y.cols() << " outputs; " << pruned_nodes(dend, rho).size()
              << " node(s) neutralized at rho " << rho << "\n";
}

// ---- fit ---------------------------------------------------------------

void params_fit(ParamSet& p)
{
    p.string("x", nullptr, "Input matrix (samples x inputs)");
    p.string("y", nullptr, "Output matrix (samples x outputs)");
    p.string("tree", nullptr, "Output tree (JSON); required for --method tree");
    p.string("method", "tree", "lasso | l1l2 | tree");
    p.number("lambda", 1.0, "Regularization strength");
    p.flag("cv", "Choose lambda by k-fold cross-validation");
    p.integer("folds", 5, "Cross-validation folds");
    p.number("grid-min", 1e-3, "Smallest lambda on the CV grid");
    p.number("grid-max", 1e3, "Largest lambda on the CV grid");
    p.integer("grid-points", 30, "Log-spaced CV grid size");
    p.unsigned_integer("cv-seed", 1, "Fold assignment seed");
    p.string("x-predict", nullptr, "Inputs to predict; writes y_pred.csv");
    add_solver_params(p);
}

OutputTree load_tree(const fs::path& path, Eigen::Index num_outputs)
{
    OutputTree tree = io::read_tree(path);
    tree.require_valid();
    tree = compute_group_weights(tree);
    tree.require_weights(num_outputs);
    return tree;
}

OutputTree tree_for(const json& c, Eigen::Index k)
{
    const std::string method = str(c, "method");
    if (method == "lasso") return make_lasso_tree(static_cast<int>(k));
    if (method == "l1l2") return make_l1l2_tree(static_cast<int>(k));
    if (method == "tree") {
        if (!given(c, "tree")) throw ConfigError("--method tree needs --tree");
        return load_tree(str(c, "tree"), k);
    }
    throw ConfigError("method must be lasso, l1l2 or tree, got '" + method + "'");
}

void run_fit(Context& ctx, int jobs)
{
    const json& c = ctx.config;
    Matrix x = io::read_matrix(required_path(c, "x"));
    Matrix y = io::read_matrix(required_path(c, "y"));
    if (x.rows() != y.rows()) {
        throw DimensionError("x has " + std::to_string(x.rows()) + " rows but y has " + std::to_string(y.rows()));
    }
    require_finite(x, "input matrix");
    require_finite(y, "output matrix");
    const DataSet data = DataSet::from_raw(std::move(x), std::move(y));
    const OutputTree tree = tree_for(c, data.num_outputs());
    SolverConfig solver = solver_config(c);
    solver.lambda = num(c, "lambda");

    json report;
    report["method"] = str(c, "method");
    if (c.at("cv").get<bool>()) {
        const auto grid = log_grid(num(c, "grid_min"), num(c, "grid_max"), integer(c, "grid_points"));
        const CvResult cv = cross_validate(data, tree, grid, integer(c, "folds"), solver,
                                           c.at("cv_seed").get<std::uint64_t>(), jobs);
        solver.lambda = cv.best_lambda;
        json table = json::array();
        for (const auto& row : cv.table) {
            table.push_back({{"lambda", row.lambda}, {"mean_mse", row.mean_mse}, {"se_mse", row.se_mse},
                             {"fold_mse", row.fold_mse}});
        }
        report["cv"] = {{"folds", integer(c, "folds")}, {"best_lambda", cv.best_lambda}, {"table", table}};
    }

    const FitResult result = fit(data, tree, solver);
    report["lambda"] = result.lambda;
    report["iterations"] = result.iterations;
    report["converged"] = result.converged;
    report["final_objective"] = result.final_objective();
    report["objective_trace"] = result.objective_trace;

    io::write_fit_result(ctx.out / "coefficients.csv", result);
    ctx.written.push_back("coefficients.csv");
    ctx.text("report.json", report.dump(1) + "\n");

    if (given(c, "x_predict")) {
        const Matrix xp = io::read_matrix(str(c, "x_predict"));
        if (xp.cols() != data.num_inputs()) {
            throw DimensionError("x-predict has " + std::to_string(xp.cols()) + " columns, expected "
                                 + std::to_string(data.num_inputs()));
        }
        ctx.matrix("y_pred.csv", predict(xp, result), io::indexed_header("y", data.num_outputs()));
    }
    std::cerr << "lambda " << result.lambda << ", " << result.iterations << " iterations"
              << (result.converged ? "" : " (not converged)") << "\n";
}

// ---- eval --------------------------------------------------------------

void params_eval(ParamSet& p)
{
    p.string_list("b-hat", nullptr, "Estimated coefficients; several files with --roc-mode lambda");
    p.string("b-true", nullptr, "True coefficients");
    p.string("y-pred", nullptr, "Predicted test outputs");
    p.string("y-test", nullptr, "Observed test outputs");
    p.string("replicates", nullptr, "Directory of replicate subdirectories to aggregate");
    p.string("roc-mode", "threshold", "threshold | lambda");
    p.number("tau", nullptr, "Support threshold (default 1e-4 * max|b_hat|)");
    p.integer("grid-points", 101, "FPR grid size for averaged curves");
}

std::string roc_table(const RocCurve& roc)
{
    std::ostringstream os;
    os << "fpr,tpr,threshold\n";
    for (std::size_t i = 0; i < roc.fpr.size(); ++i) {
        os << format_number(roc.fpr[i]) << ',' << format_number(roc.tpr[i]) << ','
           << format_number(roc.thresholds[i]) << '\n';
    }
    return os.str();
}

CoefficientMatrix read_coefficients(const fs::path& path) { return io::read_matrix(path); }

void eval_support(Context& ctx, std::ostringstream& metrics)
{
    const json& c = ctx.config;
    const auto paths = c.at("b_hat").get<std::vector<std::string>>();
    if (paths.empty()) throw ConfigError("--b-hat needs at least one file");
    if (!given(c, "b_true")) throw ConfigError("support evaluation needs --b-true");
    const CoefficientMatrix b_true = read_coefficients(str(c, "b_true"));
    const std::string mode = str(c, "roc_mode");

    RocCurve roc;
    if (mode == "threshold") {
        if (paths.size() != 1) throw ConfigError("threshold ROC takes exactly one --b-hat");
        roc = roc_by_threshold(read_coefficients(paths.front()), b_true);
    } else if (mode == "lambda") {
        std::vector<CoefficientMatrix> path;
        for (const auto& p : paths) path.push_back(read_coefficients(p));
        roc = roc_by_lambda(path, b_true);
    } else {
        throw ConfigError("roc-mode must be threshold or lambda, got '" + mode + "'");
    }
    ctx.text("roc.csv", roc_table(roc));
    metrics << "auc," << format_number(auc(roc)) << '\n';

    const CoefficientMatrix b_hat = read_coefficients(paths.back());
    const double tau = given(c, "tau") ? num(c, "tau") : default_support_threshold(b_hat);
    const SupportMetrics m = support_metrics(support_from_coefficients(b_hat, tau), b_true);
    metrics << "tau," << format_number(tau) << '\n'
            << "sensitivity," << format_number(m.sensitivity) << '\n'
            << "specificity," << format_number(m.specificity) << '\n'
            << "true_positives," << m.true_positives << '\n'
            << "false_positives," << m.false_positives << '\n'
            << "true_negatives," << m.true_negatives << '\n'
            << "false_negatives," << m.false_negatives << '\n';
}

fs::path first_existing(const fs::path& dir, std::initializer_list<const char*> names)
{
    for (const char* n : names) {
        if (fs::exists(dir / n)) return dir / n;
    }
    return {};
}

void eval_replicates(Context& ctx)
{
    const fs::path root = str(ctx.config, "replicates");
    if (!fs::is_directory(root)) throw InputError(root.string() + " is not a directory");
    std::vector<fs::path> dirs;
    for (const auto& e : fs::directory_iterator(root)) {
        if (e.is_directory()) dirs.push_back(e.path());
    }
    std::sort(dirs.begin(), dirs.end());

    std::vector<RocCurve> curves;
    std::vector<double> aucs;
    std::vector<double> mses;
    std::ostringstream rows;
    rows << "replicate,auc,mse\n";
    for (const auto& dir : dirs) {
        const fs::path b_hat = first_existing(dir, {"b_hat.csv", "coefficients.csv"});
        const fs::path b_true = first_existing(dir, {"b_true.csv"});
        const fs::path y_pred = first_existing(dir, {"y_pred.csv"});
        const fs::path y_test = first_existing(dir, {"y_test.csv"});
        const bool has_roc = !b_hat.empty() && !b_true.empty();
        const bool has_mse = !y_pred.empty() && !y_test.empty();
        if (!has_roc && !has_mse) continue;
        rows << dir.filename().string() << ',';
        if (has_roc) {
            curves.push_back(roc_by_threshold(read_coefficients(b_hat), read_coefficients(b_true)));
            aucs.push_back(auc(curves.back()));
            rows << format_number(aucs.back());
        }
        rows << ',';
        if (has_mse) {
            mses.push_back(test_mse(io::read_matrix(y_pred), io::read_matrix(y_test)));
            rows << format_number(mses.back());
        }
        rows << '\n';
    }
    if (curves.empty() && mses.empty()) {
        throw InputError(root.string() + ": no replicate directory holds b_hat/b_true or y_pred/y_test");
    }
    ctx.text("replicate_metrics.csv", rows.str());

    std::ostringstream summary;
    summary << "metric,mean,se,count\n";
    if (!curves.empty()) {
        const MeanCurve mean = aggregate_curves(curves, integer(ctx.config, "grid_points"));
        std::ostringstream os;
        os << "fpr,tpr_mean,tpr_se\n";
        for (std::size_t i = 0; i < mean.fpr.size(); ++i) {
            os << format_number(mean.fpr[i]) << ',' << format_number(mean.tpr_mean[i]) << ','
               << format_number(mean.tpr_se[i]) << '\n';
        }
        ctx.text("mean_roc.csv", os.str());
        const ScalarSummary s = aggregate_scalars(aucs);
        summary << "auc," << format_number(s.mean) << ',' << format_number(s.se) << ',' << s.count << '\n';
    }
    if (!mses.empty()) {
        const ScalarSummary s = aggregate_scalars(mses);
        summary << "mse," << format_number(s.mean) << ',' << format_number(s.se) << ',' << s.count << '\n';
    }
    ctx.text("summary.csv", summary.str());
}

void run_eval(Context& ctx)
{
    const json& c = ctx.config;
    if (given(c, "replicates")) {
        eval_replicates(ctx);
        return;
    }
    const bool support = given(c, "b_hat") || given(c, "b_true");
    const bool mse = given(c, "y_pred") || given(c, "y_test");
    if (!support && !mse) throw ConfigError("nothing to evaluate: give --b-hat/--b-true, --y-pred/--y-test or --replicates");

    std::ostringstream metrics;
    metrics << "metric,value\n";
    if (support) {
        if (!given(c, "b_hat")) throw ConfigError("support evaluation needs --b-hat");
        eval_support(ctx, metrics);
    }
    if (mse) {
        const Matrix y_pred = io::read_matrix(required_path(c, "y_pred"));
        const Matrix y_test = io::read_matrix(required_path(c, "y_test"));
        metrics << "mse," << format_number(test_mse(y_pred, y_test)) << '\n';
    }
    ctx.text("metrics.csv", metrics.str());
}

// ---- reproduce ---------------------------------------------------------

void params_reproduce(ParamSet& p)
{
    p.positional("figures", std::vector<std::string>{"fig4", "fig5"}, "fig3, fig4 and/or fig5");
    add_spec_params(p);
    p.number_list("signals", std::vector<double>{0.2, 0.4, 0.6}, "Signal levels");
    p.integer("replicates", 50, "Replicates per signal level");
    p.string_list("methods", std::vector<std::string>{"lasso", "l1l2", "tree", "T0.9", "T0.7"}, "Methods to compare");
    const StudyConfig d;
    p.number("grid-min", d.lambda_grid.front(), "Smallest lambda on the CV grid");
    p.number("grid-max", d.lambda_grid.back(), "Largest lambda on the CV grid");
    p.integer("grid-points", static_cast<int>(d.lambda_grid.size()), "Log-spaced CV grid size");
    p.integer("folds", 5, "Cross-validation folds");
    p.integer("calibration-replicate", 0, "Replicate used to choose lambda");
    p.number("lambda", nullptr, "Fixed lambda for every method (skips cross-validation)");
    p.integer("fig3-replicate", 0, "Replicate shown in fig3");
    add_solver_params(p);
}

StudyConfig study_from(const json& c, int jobs)
{
    StudyConfig s;
    s.base = spec_from(c);
    s.signals = c.at("signals").get<std::vector<double>>();
    s.replicates = integer(c, "replicates");
    s.methods.clear();
    for (const auto& m : c.at("methods").get<std::vector<std::string>>()) s.methods.push_back(parse_method(m));
    s.lambda_grid = log_grid(num(c, "grid_min"), num(c, "grid_max"), integer(c, "grid_points"));
    s.folds = integer(c, "folds");
    s.calibration_replicate = integer(c, "calibration_replicate");
    if (given(c, "lambda")) s.fixed_lambda = num(c, "lambda");
    s.solver = solver_config(c);
    s.jobs = jobs;
    s.validate();
    return s;
}

std::string lambda_table(const std::vector<LambdaChoice>& choices)
{
    std::ostringstream os;
    os << "method,signal,lambda,cv_mse\n";
    for (const auto& ch : choices) {
        double cv_mse = 0.0;
        bool have = false;
        for (const auto& row : ch.cv.table) {
            if (row.lambda == ch.lambda) {
                cv_mse = row.mean_mse;
                have = true;
            }
        }
        os << method_name(ch.method) << ',' << format_number(ch.signal) << ',' << format_number(ch.lambda) << ','
           << (have ? format_number(cv_mse) : std::string()) << '\n';
    }
    return os.str();
}

void write_fig4(Context& ctx, const StudyConfig& cfg, const StudyResult& res)
{
    std::ostringstream roc;
    std::ostringstream aucs;
    std::ostringstream summary;
    roc << "method,signal,fpr,tpr_mean,tpr_se\n";
    aucs << "method,signal,replicate,auc\n";
    summary << "method,signal,auc_mean,auc_se,replicates\n";
    for (double signal : cfg.signals) {
        for (Method m : cfg.methods) {
            const MeanCurve mean = res.mean_roc(m, signal);
            for (std::size_t i = 0; i < mean.fpr.size(); ++i) {
                roc << method_name(m) << ',' << format_number(signal) << ',' << format_number(mean.fpr[i]) << ','
                    << format_number(mean.tpr_mean[i]) << ',' << format_number(mean.tpr_se[i]) << '\n';
            }
            for (const auto* o : res.select(m, signal)) {
                aucs << method_name(m) << ',' << format_number(signal) << ',' << o->replicate << ','
                     << format_number(o->auc) << '\n';
            }
            const ScalarSummary s = res.auc_summary(m, signal);
            summary << method_name(m) << ',' << format_number(signal) << ',' << format_number(s.mean) << ','
                    << format_number(s.se) << ',' << s.count << '\n';
        }
    }
    ctx.text("fig4_roc.csv", roc.str());
    ctx.text("fig4_auc.csv", aucs.str());
    ctx.text("fig4_summary.csv", summary.str());
}

void write_fig5(Context& ctx, const StudyConfig& cfg, const StudyResult& res)
{
    std::ostringstream mse;
    std::ostringstream reps;
    mse << "method,signal,mse_mean,mse_se,replicates\n";
    reps << "method,signal,replicate,mse\n";
    for (double signal : cfg.signals) {
        for (Method m : cfg.methods) {
            const ScalarSummary s = res.mse_summary(m, signal);
            mse << method_name(m) << ',' << format_number(signal) << ',' << format_number(s.mean) << ','
                << format_number(s.se) << ',' << s.count << '\n';
            for (const auto* o : res.select(m, signal)) {
                reps << method_name(m) << ',' << format_number(signal) << ',' << o->replicate << ','
                     << format_number(o->mse) << '\n';
            }
        }
    }
    ctx.text("fig5_mse.csv", mse.str());
    ctx.text("fig5_replicates.csv", reps.str());
}

void run_reproduce(Context& ctx, int jobs)
{
    const json& c = ctx.config;
    const auto figures = c.at("figures").get<std::vector<std::string>>();
    std::set<std::string> wanted;
    for (const auto& f : figures) {
        if (f != "fig3" && f != "fig4" && f != "fig5") {
            throw ConfigError("figure must be fig3, fig4 or fig5, got '" + f + "'");
        }
        wanted.insert(f);
    }
    if (wanted.empty()) throw ConfigError("no figure requested");
    const StudyConfig cfg = study_from(c, jobs);
    const ProgressFn progress = [](const std::string& msg) { std::cerr << msg << "\n"; };

    if (wanted.count("fig4") || wanted.count("fig5")) {
        const StudyResult res = run_study(cfg, progress);
        ctx.text("lambdas.csv", lambda_table(res.lambdas));
        if (wanted.count("fig4")) write_fig4(ctx, cfg, res);
        if (wanted.count("fig5")) write_fig5(ctx, cfg, res);
    }
    if (wanted.count("fig3")) {
        StudyConfig one = cfg;
        one.signals = {cfg.base.signal};
        const CoefficientSnapshot snap = coefficient_snapshot(one, integer(c, "fig3_replicate"), progress);
        const auto yh = io::indexed_header("y", snap.b_true.cols());
        ctx.matrix("fig3_b_true.csv", snap.b_true, yh);
        for (const auto& [m, b] : snap.estimates) {
            ctx.matrix(std::string("fig3_b_hat_") + method_name(m) + ".csv", b, yh);
        }
        ctx.text("fig3_tree.json", io::tree_to_json(snap.tree));
    }
}

// ---- dispatch ----------------------------------------------------------

struct Command
{
    void (*params)(ParamSet&);
    void (*run)(Context&, int jobs);
};

const std::map<std::string, Command>& commands()
{
    static const std::map<std::string, Command> table{
        {"simulate", {params_simulate, [](Context& c, int) { run_simulate(c); }}},
        {"cluster", {params_cluster, [](Context& c, int) { run_cluster(c); }}},
        {"fit", {params_fit, run_fit}},
        {"eval", {params_eval, [](Context& c, int) { run_eval(c); }}},
        {"reproduce", {params_reproduce, run_reproduce}},
    };
    return table;
}

fs::path output_dir(const std::string& name, const json& config)
{
    if (given(config, "out")) return str(config, "out");
    if (const char* base = std::getenv("TGLASSO_DATA_DIR"); base && *base) return fs::path(base) / name;
    throw ConfigError("missing required --out (or set TGLASSO_DATA_DIR)");
}

} // namespace

const std::vector<std::string>& command_names()
{
    static const std::vector<std::string> names{"simulate", "cluster", "fit", "eval", "reproduce"};
    return names;
}

std::function<json()> register_command(const std::string& name, CLI::App* sub)
{
    auto params = std::make_shared<ParamSet>(sub);
    params->string("out", nullptr, "Output directory (default $TGLASSO_DATA_DIR/<command>)");
    params->integer("jobs", 1, "Parallel workers for replicate/fold fits");
    commands().at(name).params(*params);
    return [params]() { return params->resolve(); };
}

std::vector<std::string> execute(const std::string& name, json config)
{
    const auto it = commands().find(name);
    if (it == commands().end()) throw ConfigError("unknown command '" + name + "'");
    const fs::path out = output_dir(name, config);
    config["out"] = out.string();
    const int jobs = config.contains("jobs") ? config.at("jobs").get<int>() : 1;
    if (jobs < 1) throw ConfigError("jobs must be ≥ 1");

    const auto start = std::chrono::steady_clock::now();
    Context ctx{config, out, {}};
    it->second.run(ctx, jobs);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json manifest;
    manifest["command"] = name;
    manifest["config"] = config;
    json inputs = json::object();
    for (const char* key : {"x", "y", "tree", "b_hat", "b_true", "y_pred", "y_test", "replicates", "x_predict"}) {
        if (given(config, key)) inputs[key] = config.at(key);
    }
    manifest["inputs"] = inputs;
    manifest["outputs"] = ctx.written;
    manifest["seed"] = config.contains("seed") ? config.at("seed") : json(nullptr);
    manifest["version"] = TGLASSO_VERSION;
    manifest["wall_time_seconds"] = seconds;
    io::write_text(out / "manifest.json", manifest.dump(1) + "\n");
    return ctx.written;
}

std::vector<std::string> rerun(const fs::path& manifest_path, const std::string& out)
{
    json manifest;
    try {
        manifest = json::parse(io::read_text(manifest_path));
    } catch (const json::exception& e) {
        throw InputError(manifest_path.string() + ": not a valid manifest: " + e.what());
    }
    if (!manifest.contains("command") || !manifest.contains("config")) {
        throw InputError(manifest_path.string() + ": manifest lacks command or config");
    }
    json config = manifest.at("config");
    if (!out.empty()) config["out"] = out;
    return execute(manifest.at("command").get<std::string>(), config);
}

} // namespace tglasso::cli
