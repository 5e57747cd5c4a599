#include <tglasso/study.hpp>
#include <tglasso/errors.hpp>
#include <tglasso/parallel.hpp>
#include <tglasso/random.hpp>
#include <tglasso/treelearn.hpp>

#include <sstream>

namespace tglasso {
namespace {

// Stream index for the fold shuffle of a replicate's cross-validation.
constexpr std::uint64_t kFoldStream = 0xF01D;

SimulationSpec spec_for(const StudyConfig& config, double signal, int replicate)
{
    SimulationSpec spec = config.base;
    spec.signal = signal;
    return replicate_spec(spec, replicate);
}

void report(const ProgressFn& progress, const std::string& msg)
{
    if (progress) progress(msg);
}

} // namespace

const char* method_name(Method m)
{
    switch (m) {
        case Method::kLasso: return "lasso";
        case Method::kL1L2: return "l1l2";
        case Method::kTree: return "tree";
        case Method::kLearned09: return "T0.9";
        case Method::kLearned07: return "T0.7";
    }
    return "?";
}

Method parse_method(const std::string& name)
{
    for (Method m : all_methods()) {
        if (name == method_name(m)) return m;
    }
    throw ConfigError("unknown method '" + name + "' (expected lasso, l1l2, tree, T0.9 or T0.7)");
}

std::vector<Method> all_methods()
{
    return {Method::kLasso, Method::kL1L2, Method::kTree, Method::kLearned09, Method::kLearned07};
}

OutputTree tree_for_method(Method m, const SimulatedData& data)
{
    const int k = static_cast<int>(data.train.num_outputs());
    switch (m) {
        case Method::kLasso: return make_lasso_tree(k);
        case Method::kL1L2: return make_l1l2_tree(k);
        case Method::kTree: return data.tree;
        case Method::kLearned09: return learn_output_tree(data.train.y, 0.9);
        case Method::kLearned07: return learn_output_tree(data.train.y, 0.7);
    }
    throw ConfigError("unknown method");
}

void StudyConfig::validate() const
{
    base.validate();
    if (signals.empty()) throw ConfigError("no signal levels");
    for (double s : signals) {
        if (!(s > 0.0)) throw ConfigError("signal levels must be > 0");
    }
    if (replicates < 1) throw ConfigError("replicates must be ≥ 1");
    if (methods.empty()) throw ConfigError("no methods selected");
    if (calibration_replicate < 0) throw ConfigError("calibration replicate must be ≥ 0");
    if (!fixed_lambda && lambda_grid.empty()) throw ConfigError("lambda grid is empty");
    if (fixed_lambda && !(*fixed_lambda >= 0.0)) throw ConfigError("lambda must be ≥ 0");
    solver.validate();
}

double StudyResult::lambda_for(Method m, double signal) const
{
    for (const auto& c : lambdas) {
        if (c.method == m && c.signal == signal) return c.lambda;
    }
    throw ConfigError(std::string("no lambda recorded for ") + method_name(m));
}

std::vector<const ReplicateOutcome*> StudyResult::select(Method m, double signal) const
{
    std::vector<const ReplicateOutcome*> out;
    for (const auto& o : outcomes) {
        if (o.method == m && o.signal == signal) out.push_back(&o);
    }
    return out;
}

ScalarSummary StudyResult::auc_summary(Method m, double signal) const
{
    std::vector<double> v;
    for (const auto* o : select(m, signal)) v.push_back(o->auc);
    return aggregate_scalars(v);
}

ScalarSummary StudyResult::mse_summary(Method m, double signal) const
{
    std::vector<double> v;
    for (const auto* o : select(m, signal)) v.push_back(o->mse);
    return aggregate_scalars(v);
}

MeanCurve StudyResult::mean_roc(Method m, double signal) const
{
    std::vector<RocCurve> curves;
    for (const auto* o : select(m, signal)) curves.push_back(o->roc);
    return aggregate_curves(curves);
}

std::vector<LambdaChoice> choose_lambdas(const StudyConfig& config, const ProgressFn& progress)
{
    config.validate();
    std::vector<LambdaChoice> out;
    for (double signal : config.signals) {
        for (Method m : config.methods) {
            LambdaChoice c{m, signal, 0.0, {}};
            if (config.fixed_lambda) {
                c.lambda = *config.fixed_lambda;
            } else {
                const SimulationSpec spec = spec_for(config, signal, config.calibration_replicate);
                const SimulatedData data = generate_dataset(spec);
                const OutputTree tree = tree_for_method(m, data);
                c.cv = cross_validate(data.train, tree, config.lambda_grid, config.folds, config.solver,
                                      split_seed(spec.seed, kFoldStream), config.jobs);
                c.lambda = c.cv.best_lambda;
            }
            std::ostringstream os;
            os << "signal " << signal << " " << method_name(m) << ": lambda " << c.lambda;
            report(progress, os.str());
            out.push_back(std::move(c));
        }
    }
    return out;
}

StudyResult run_study(const StudyConfig& config, const ProgressFn& progress)
{
    StudyResult result;
    result.lambdas = choose_lambdas(config, progress);

    struct Task
    {
        double signal;
        int replicate;
    };
    std::vector<Task> tasks;
    for (double signal : config.signals) {
        for (int r = 0; r < config.replicates; ++r) tasks.push_back({signal, r});
    }
    const std::size_t nm = config.methods.size();
    result.outcomes.resize(tasks.size() * nm);

    parallel_for(tasks.size(), config.jobs, [&](std::size_t t) {
        const Task task = tasks[t];
        const SimulatedData data = generate_dataset(spec_for(config, task.signal, task.replicate));
        for (std::size_t mi = 0; mi < nm; ++mi) {
            const Method m = config.methods[mi];
            SolverConfig solver = config.solver;
            solver.lambda = result.lambda_for(m, task.signal);
            const FitResult fitted = fit(data.train, tree_for_method(m, data), solver);

            ReplicateOutcome& o = result.outcomes[t * nm + mi];
            o.method = m;
            o.signal = task.signal;
            o.replicate = task.replicate;
            o.lambda = solver.lambda;
            o.roc = roc_by_threshold(fitted.b, data.b_true);
            o.auc = auc(o.roc);
            o.mse = test_mse(predict(data.test.x, fitted), data.test.y);
            o.converged = fitted.converged;
            o.iterations = fitted.iterations;
        }
        if (config.jobs <= 1) {
            std::ostringstream os;
            os << "signal " << task.signal << " replicate " << task.replicate << " done";
            report(progress, os.str());
        }
    });
    return result;
}

CoefficientSnapshot coefficient_snapshot(const StudyConfig& config, int replicate, const ProgressFn& progress)
{
    StudyConfig one = config;
    one.signals = {config.signals.front()};
    const auto lambdas = choose_lambdas(one, progress);

    CoefficientSnapshot snap;
    snap.signal = one.signals.front();
    snap.replicate = replicate;
    const SimulatedData data = generate_dataset(spec_for(one, snap.signal, replicate));
    snap.b_true = data.b_true;
    snap.tree = data.tree;
    for (const auto& choice : lambdas) {
        SolverConfig solver = config.solver;
        solver.lambda = choice.lambda;
        snap.estimates.emplace_back(choice.method, fit(data.train, tree_for_method(choice.method, data), solver).b);
    }
    return snap;
}

} // namespace tglasso
