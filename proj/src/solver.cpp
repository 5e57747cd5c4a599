#include <tglasso/solver.hpp>
#include <tglasso/errors.hpp>
#include <tglasso/penalty.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace tglasso {
namespace {

void check_dims(const DataSet& data, const CoefficientMatrix& b)
{
    if (b.rows() != data.num_inputs() || b.cols() != data.num_outputs()) {
        throw DimensionError("coefficients are " + std::to_string(b.rows()) + "x" + std::to_string(b.cols())
                             + " but data have J=" + std::to_string(data.num_inputs())
                             + ", K=" + std::to_string(data.num_outputs()));
    }
}

// Column j counts as linearly dependent on earlier columns when L_jj² falls
// this far below A_jj.
constexpr double kPivotFloor = 1e-13;

Matrix solve_spd(const Matrix& a, const Matrix& rhs, const char* context)
{
    Eigen::LLT<Matrix> llt(a);
    bool singular = llt.info() != Eigen::Success;
    if (!singular) {
        const Vector pivots = llt.matrixLLT().diagonal();
        singular = !(pivots.array().square() > kPivotFloor * a.diagonal().array()).all();
    }
    if (singular) {
        throw SolverError(std::string(context)
                          + ": XᵀX + λD is singular (the input matrix is rank deficient; use λ > 0)");
    }
    return llt.solve(rhs);
}

struct Gram
{
    Matrix xtx;
    Matrix xty;
};

Gram make_gram(const DataSet& data)
{
    Gram g;
    g.xtx = Matrix::Zero(data.num_inputs(), data.num_inputs());
    g.xtx.selfadjointView<Eigen::Lower>().rankUpdate(data.x.transpose());
    g.xtx = g.xtx.selfadjointView<Eigen::Lower>();
    g.xty = data.x.transpose() * data.y;
    return g;
}

CoefficientMatrix solve_ridge(const Gram& gram, double lambda)
{
    Matrix a = gram.xtx;
    a.diagonal().array() += lambda;
    return solve_spd(a, gram.xty, "ridge initialization");
}

// One factorization per distinct column of `diag`; outputs whose diagonals
// coincide (all of them for the L1/L2 tree) share it.
CoefficientMatrix solve_weighted_ridge(const Gram& gram, const Matrix& diag, double lambda)
{
    const Eigen::Index num_outputs = diag.cols();
    CoefficientMatrix b(gram.xtx.rows(), num_outputs);
    std::vector<Eigen::Index> done;
    std::vector<char> solved(static_cast<std::size_t>(num_outputs), 0);
    for (Eigen::Index k = 0; k < num_outputs; ++k) {
        if (solved[static_cast<std::size_t>(k)]) continue;
        std::vector<Eigen::Index> same{k};
        for (Eigen::Index m = k + 1; m < num_outputs; ++m) {
            if (!solved[static_cast<std::size_t>(m)] && diag.col(m) == diag.col(k)) same.push_back(m);
        }
        Matrix a = gram.xtx;
        a.diagonal() += lambda * diag.col(k);
        Matrix rhs(gram.xty.rows(), static_cast<Eigen::Index>(same.size()));
        for (std::size_t i = 0; i < same.size(); ++i) rhs.col(static_cast<Eigen::Index>(i)) = gram.xty.col(same[i]);
        const Matrix sol = solve_spd(a, rhs, "beta update");
        for (std::size_t i = 0; i < same.size(); ++i) {
            b.col(same[i]) = sol.col(static_cast<Eigen::Index>(i));
            solved[static_cast<std::size_t>(same[i])] = 1;
        }
    }
    return b;
}

double residual_sum_of_squares(const DataSet& data, const CoefficientMatrix& b)
{
    return (data.y - data.x * b).squaredNorm();
}

} // namespace

void SolverConfig::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be a finite value ≥ 0");
    if (!(epsilon_floor > 0.0)) throw ConfigError("epsilon_floor must be > 0");
    if (!(tol > 0.0)) throw ConfigError("tol must be > 0");
    if (max_iter < 1) throw ConfigError("max_iter must be ≥ 1");
}

double objective(const DataSet& data, const CoefficientMatrix& b, const OutputTree& tree, double lambda)
{
    check_dims(data, b);
    const double pen = lambda == 0.0 ? 0.0 : penalty_flat(b, tree);
    return residual_sum_of_squares(data, b) + lambda * pen * pen;
}

DualWeights update_duals(const CoefficientMatrix& b, const OutputTree& tree, double epsilon_floor,
                         DualUpdate mode)
{
    tree.require_weights(b.cols());
    const Eigen::Index num_nodes = tree.num_nodes();
    DualWeights out;
    if (b.isZero(0.0)) {
        out.d = Matrix::Constant(b.rows(), num_nodes, 1.0 / static_cast<double>(b.rows() * num_nodes));
        out.degenerate = true;
        return out;
    }
    out.d = group_norms(b, tree);
    if (mode == DualUpdate::kWeighted) {
        for (Eigen::Index v = 0; v < num_nodes; ++v) out.d.col(v) *= tree.node(static_cast<int>(v)).w;
    }
    out.d = out.d.cwiseMax(epsilon_floor);
    out.d /= out.d.sum();
    return out;
}

Matrix dual_diagonal(const DualWeights& duals, const OutputTree& tree)
{
    const auto& order = tree.postorder();
    Matrix along_path = Matrix::Zero(duals.d.rows(), tree.num_nodes());
    Matrix diag(duals.d.rows(), tree.num_outputs());
    // Reverse postorder: a parent's running sum is final before its children.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        const auto& node = tree.node(v);
        if (node.w != 0.0) along_path.col(v).array() += (node.w * node.w) / duals.d.col(v).array();
        if (node.is_leaf()) {
            diag.col(v) = along_path.col(v);
        } else {
            for (int c : node.children) along_path.col(c) = along_path.col(v);
        }
    }
    return diag;
}

CoefficientMatrix update_beta(const DataSet& data, const DualWeights& duals, const OutputTree& tree,
                              double lambda)
{
    tree.require_weights(data.num_outputs());
    if (duals.d.rows() != data.num_inputs() || duals.d.cols() != tree.num_nodes()) {
        throw DimensionError("dual weights do not match the data and tree");
    }
    if ((duals.d.array() <= 0.0).any()) {
        throw ConfigError("dual weights must be strictly positive");
    }
    return solve_weighted_ridge(make_gram(data), dual_diagonal(duals, tree), lambda);
}

FitResult fit(const DataSet& input, const OutputTree& tree, const SolverConfig& config)
{
    config.validate();
    require_finite(input.x, "input matrix");
    require_finite(input.y, "output matrix");
    tree.require_weights(input.num_outputs());
    const DataSet data = ensure_centered(input);
    const double lambda = config.lambda;

    FitResult result;
    result.lambda = lambda;
    result.x_means = data.x_means;
    result.y_means = data.y_means;

    const Gram gram = make_gram(data);
    result.b = solve_ridge(gram, lambda);
    result.objective_trace.push_back(objective(data, result.b, tree, lambda));

    if (lambda == 0.0) {
        result.converged = true;
        result.duals = update_duals(result.b, tree, config.epsilon_floor, config.dual_update);
        return result;
    }

    for (int it = 1; it <= config.max_iter; ++it) {
        const DualWeights duals = update_duals(result.b, tree, config.epsilon_floor, config.dual_update);
        result.b = solve_weighted_ridge(gram, dual_diagonal(duals, tree), lambda);
        const double prev = result.objective_trace.back();
        const double cur = objective(data, result.b, tree, lambda);
        result.objective_trace.push_back(cur);
        result.iterations = it;
        const double change = std::abs(prev - cur);
        if (change <= config.tol * std::abs(prev)) {
            result.converged = true;
            break;
        }
    }
    result.duals = update_duals(result.b, tree, config.epsilon_floor, config.dual_update);
    return result;
}

Matrix predict(const Matrix& x_new, const CoefficientMatrix& b, const Vector& x_means, const Vector& y_means)
{
    if (x_new.cols() != b.rows() || x_means.size() != b.rows()) {
        throw DimensionError("x_new has " + std::to_string(x_new.cols()) + " columns but the model has "
                             + std::to_string(b.rows()) + " inputs");
    }
    if (y_means.size() != b.cols()) {
        throw DimensionError("output means do not match the coefficient matrix");
    }
    Matrix centered = x_new.rowwise() - x_means.transpose();
    Matrix out = centered * b;
    out.rowwise() += y_means.transpose();
    return out;
}

} // namespace tglasso
