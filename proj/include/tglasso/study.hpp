#pragma once
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <tglasso/eval.hpp>
#include <tglasso/simgen.hpp>
#include <tglasso/solver.hpp>

namespace tglasso {

/// Regression methods compared in the simulation study.
enum class Method
{
    kLasso,      ///< star tree, s = 1
    kL1L2,       ///< star tree, g = 1
    kTree,       ///< the generating tree, s = g = 0.5
    kLearned09,  ///< tree learned from training outputs, rho = 0.9
    kLearned07,  ///< tree learned from training outputs, rho = 0.7
};

const char* method_name(Method m);
/// Accepts lasso, l1l2, tree, T0.9, T0.7; ConfigError otherwise.
Method parse_method(const std::string& name);
std::vector<Method> all_methods();

/// Weighted tree a method fits with on this data set.
OutputTree tree_for_method(Method m, const SimulatedData& data);

/**
 * Replicated comparison of methods on simulated data.
 *
 * For each signal level and method, λ is chosen once by k-fold
 * cross-validation on the calibration replicate over `lambda_grid` (unless
 * `fixed_lambda` is set) and then used for every replicate. Each replicate
 * is scored by the AUC of the magnitude-threshold ROC curve against the true
 * support and by test-set MSE.
 */
struct StudyConfig
{
    SimulationSpec base;
    std::vector<double> signals{0.2, 0.4, 0.6};
    int replicates = 50;
    std::vector<Method> methods = all_methods();
    std::vector<double> lambda_grid = log_grid(1e-2, 1e2, 13);
    int folds = 5;
    int calibration_replicate = 0;
    std::optional<double> fixed_lambda;
    SolverConfig solver;
    int jobs = 1;

    void validate() const;
};

struct LambdaChoice
{
    Method method;
    double signal = 0.0;
    double lambda = 0.0;
    CvResult cv;
};

struct ReplicateOutcome
{
    Method method;
    double signal = 0.0;
    int replicate = 0;
    double lambda = 0.0;
    double auc = 0.0;
    double mse = 0.0;
    bool converged = false;
    int iterations = 0;
    RocCurve roc;
};

struct StudyResult
{
    std::vector<LambdaChoice> lambdas;
    std::vector<ReplicateOutcome> outcomes;

    double lambda_for(Method m, double signal) const;
    std::vector<const ReplicateOutcome*> select(Method m, double signal) const;
    ScalarSummary auc_summary(Method m, double signal) const;
    ScalarSummary mse_summary(Method m, double signal) const;
    MeanCurve mean_roc(Method m, double signal) const;
};

using ProgressFn = std::function<void(const std::string&)>;

/// λ for each (signal, method) pair, by cross-validation or the fixed value.
std::vector<LambdaChoice> choose_lambdas(const StudyConfig& config, const ProgressFn& progress = {});

StudyResult run_study(const StudyConfig& config, const ProgressFn& progress = {});

/// One replicate's true and estimated coefficient matrices.
struct CoefficientSnapshot
{
    double signal = 0.0;
    int replicate = 0;
    CoefficientMatrix b_true;
    OutputTree tree;
    std::vector<std::pair<Method, CoefficientMatrix>> estimates;
};

/// Fits every method on replicate `replicate` at the first configured signal.
CoefficientSnapshot coefficient_snapshot(const StudyConfig& config, int replicate = 0,
                                         const ProgressFn& progress = {});

} // namespace tglasso
