#pragma once
#include <cstdint>
#include <vector>

#include <tglasso/data.hpp>
#include <tglasso/tree.hpp>

namespace tglasso {

/// How the variational weights are refreshed from the coefficients.
/// kWeighted sets d_{j,v} ∝ w_v‖β^j_{G_v}‖₂, the exact minimizer of the
/// surrogate for fixed B. kUnweighted drops w_v (d ∝ ‖β^j_{G_v}‖₂) and is
/// kept only for comparison; it does not guarantee descent.
enum class DualUpdate
{
    kWeighted,
    kUnweighted,
};

struct SolverConfig
{
    double lambda = 1.0;
    double epsilon_floor = 1e-10;
    double tol = 1e-6;
    int max_iter = 1000;
    DualUpdate dual_update = DualUpdate::kWeighted;

    /// Throws ConfigError on λ < 0, ε ≤ 0, tol ≤ 0 or max_iter < 1.
    void validate() const;
};

/// d_{j,v} over inputs × tree nodes, summing to one.
struct DualWeights
{
    Matrix d;
    bool degenerate = false;
};

struct FitResult
{
    CoefficientMatrix b;
    std::vector<double> objective_trace;
    DualWeights duals;
    int iterations = 0;
    bool converged = false;
    double lambda = 0.0;
    Vector x_means;
    Vector y_means;

    double final_objective() const { return objective_trace.empty() ? 0.0 : objective_trace.back(); }
};

/// Σ_k ‖y_k − Xβ_k‖² + λ·(penalty_flat(B))², on centered data.
double objective(const DataSet& data, const CoefficientMatrix& b, const OutputTree& tree, double lambda);

/// Closed-form refresh of the variational weights for fixed B,
/// d_{j,v} = max(w_v‖β^j_{G_v}‖₂, ε) / Z. An all-zero B yields uniform
/// weights 1/(J·|V|) with `degenerate` set.
DualWeights update_duals(const CoefficientMatrix& b, const OutputTree& tree, double epsilon_floor = 1e-10,
                         DualUpdate mode = DualUpdate::kWeighted);

/// J×K matrix whose column k is the diagonal of D_k,
///   (D_k)_jj = Σ_{v : k ∈ G_v} w_v² / d_{j,v},
/// the curvature the surrogate Σ_{j,v} w_v²‖β^j_{G_v}‖²/d_{j,v} puts on β^j_k.
/// Only groups containing k touch β_k, so D_k differs between outputs
/// unless every weighted group spans all of them.
Matrix dual_diagonal(const DualWeights& duals, const OutputTree& tree);

/// β_k = (XᵀX + λD_k)⁻¹ Xᵀy_k for every output, by Cholesky factorization.
/// Outputs with identical D_k share one factorization. A singular system is
/// a SolverError.
CoefficientMatrix update_beta(const DataSet& data, const DualWeights& duals, const OutputTree& tree,
                              double lambda);

/**
 * Alternating minimization of the squared tree-guided group lasso objective.
 *
 * Starts from ridge regression with penalty λ·I (ordinary least squares at
 * λ = 0), then alternates update_duals and update_beta until the relative
 * objective change falls below tol or max_iter rounds have run. Uncentered
 * data are centered first and the means are kept on the result.
 */
FitResult fit(const DataSet& data, const OutputTree& tree, const SolverConfig& config);

/// Centers x_new by the training input means, applies B, adds back the
/// output means.
Matrix predict(const Matrix& x_new, const CoefficientMatrix& b, const Vector& x_means, const Vector& y_means);
inline Matrix predict(const Matrix& x_new, const FitResult& fit)
{
    return predict(x_new, fit.b, fit.x_means, fit.y_means);
}

// Cross-validation ----------------------------------------------------------

struct CvRow
{
    double lambda = 0.0;
    double mean_mse = 0.0;
    double se_mse = 0.0;
    std::vector<double> fold_mse;
};

struct CvResult
{
    double best_lambda = 0.0;
    std::vector<CvRow> table;
};

/// `count` points spaced evenly in log10 between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);

/// The default λ grid: 30 points from 1e-3 to 1e3.
std::vector<double> default_lambda_grid();

/// Row indices of each fold after a seeded shuffle; fold sizes differ by at
/// most one. Throws ConfigError if a fold would hold fewer than 2 rows.
std::vector<std::vector<Eigen::Index>> kfold_split(Eigen::Index num_rows, int folds, std::uint64_t seed);

/**
 * k-fold cross-validation of λ over `grid`.
 *
 * Each training split is centered on its own means and scored by the mean
 * squared error of its predictions on the held-out rows. The best λ has the
 * smallest mean error; exact ties go to the larger λ. Per-(λ, fold) fits run
 * on up to `jobs` threads with identical results for any thread count.
 */
CvResult cross_validate(const DataSet& data, const OutputTree& tree, const std::vector<double>& grid, int folds,
                        const SolverConfig& base, std::uint64_t seed, int jobs = 1);

} // namespace tglasso
