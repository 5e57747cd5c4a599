#pragma once
// Helpers shared by the unit and acceptance tests. The oracle functions here
// recompute tree weights and penalties from the raw child lists, without
// going through the library's derived groups, weights, or recursion.

#include <tglasso/data.hpp>
#include <tglasso/random.hpp>
#include <tglasso/tree.hpp>

#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace tgtest {

using tglasso::Matrix;
using tglasso::OutputTree;
using tglasso::Rng;

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols, double scale = 1.0)
{
    Matrix m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
    }
    return m;
}

/// Random valid tree over k outputs. Internal nodes merge 1..4 random active
/// subtrees (a single child only when `allow_unary`) with s drawn uniformly,
/// occasionally exactly 0 or 1.
inline OutputTree random_tree(Rng& rng, int k, bool allow_unary = true)
{
    tglasso::TreeBuilder builder(k);
    std::vector<int> active(static_cast<std::size_t>(k));
    std::iota(active.begin(), active.end(), 0);
    const auto draw_s = [&]() {
        const auto r = rng.below(10);
        if (r == 0) return 0.0;
        if (r == 1) return 1.0;
        return rng.uniform();
    };
    while (active.size() > 1 || (allow_unary && rng.below(8) == 0)) {
        const std::size_t max_take = std::min<std::size_t>(4, active.size());
        const std::size_t min_take = (allow_unary || active.size() == 1) ? 1 : 2;
        const std::size_t take = min_take + rng.below(max_take - min_take + 1);
        std::vector<int> children;
        for (std::size_t t = 0; t < take; ++t) {
            const auto idx = static_cast<std::size_t>(rng.below(active.size()));
            children.push_back(active[idx]);
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(idx));
        }
        active.push_back(builder.add_internal(children, draw_s()));
    }
    if (k == 1 && active.front() == 0) active.front() = builder.add_internal({0}, draw_s());
    return builder.build(active.front());
}

struct OracleTree
{
    std::vector<int> parent;
    std::vector<std::vector<int>> leaves;
    std::vector<double> w;
};

/// Parent map, leaf sets and w_v from the child lists and (s, g) alone.
inline OracleTree oracle_tree(const OutputTree& tree)
{
    const auto& nodes = tree.nodes();
    const std::size_t n = nodes.size();
    OracleTree o;
    o.parent.assign(n, -1);
    for (const auto& node : nodes) {
        for (int c : node.children) o.parent[static_cast<std::size_t>(c)] = node.id;
    }
    o.leaves.resize(n);
    std::function<void(int, std::vector<int>&)> collect = [&](int v, std::vector<int>& out) {
        const auto& node = nodes[static_cast<std::size_t>(v)];
        if (node.children.empty()) out.push_back(v);
        for (int c : node.children) collect(c, out);
    };
    o.w.assign(n, 0.0);
    for (std::size_t v = 0; v < n; ++v) {
        collect(static_cast<int>(v), o.leaves[v]);
        double prod = 1.0;
        for (int a = o.parent[v]; a >= 0; a = o.parent[static_cast<std::size_t>(a)]) {
            prod *= nodes[static_cast<std::size_t>(a)].s;
        }
        o.w[v] = nodes[v].children.empty() ? prod : nodes[v].g * prod;
    }
    return o;
}

/// Σ_j Σ_v w_v ‖β^j over the leaves under v‖₂, straight from the definition.
inline double oracle_penalty(const Matrix& b, const OutputTree& tree)
{
    const OracleTree o = oracle_tree(tree);
    double total = 0.0;
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (std::size_t v = 0; v < o.w.size(); ++v) {
            double ss = 0.0;
            for (int k : o.leaves[v]) ss += b(j, k) * b(j, k);
            total += o.w[v] * std::sqrt(ss);
        }
    }
    return total;
}

/// Σ_k ‖y_k − X β_k‖² + λ·(oracle penalty)², on already-centered data.
inline double oracle_objective(const Matrix& x, const Matrix& y, const Matrix& b, const OutputTree& tree,
                               double lambda)
{
    const double p = oracle_penalty(b, tree);
    return (y - x * b).squaredNorm() + lambda * p * p;
}

/**
 * Brute-force minimizer of oracle_objective by nested grid refinement.
 *
 * Evaluates a full 5-point-per-coordinate grid around the current centre,
 * moves to the best point, and halves the grid width whenever the centre
 * itself is best. Practical for up to about six coefficients.
 */
inline Matrix grid_minimize(const Matrix& x, const Matrix& y, const OutputTree& tree, double lambda,
                            double min_width = 1e-9)
{
    const Eigen::Index rows = x.cols();
    const Eigen::Index cols = y.cols();
    const auto d = static_cast<std::size_t>(rows * cols);
    Matrix centre = Matrix::Zero(rows, cols);
    double width = 4.0 * (y.cwiseAbs().maxCoeff() + 1.0);
    double best = oracle_objective(x, y, centre, tree, lambda);
    std::size_t combos = 1;
    for (std::size_t i = 0; i < d; ++i) combos *= 5;

    while (width > min_width) {
        Matrix best_point = centre;
        Matrix trial(rows, cols);
        for (std::size_t c = 0; c < combos; ++c) {
            std::size_t code = c;
            for (std::size_t i = 0; i < d; ++i) {
                const double step = (static_cast<double>(code % 5) - 2.0) * 0.5 * width;
                code /= 5;
                trial.data()[i] = centre.data()[i] + step;
            }
            const double f = oracle_objective(x, y, trial, tree, lambda);
            if (f < best) {
                best = f;
                best_point = trial;
            }
        }
        if (best_point == centre) width *= 0.5;
        centre = best_point;
    }
    return centre;
}

} // namespace tgtest
