#include <tglasso/penalty.hpp>
#include <tglasso/errors.hpp>

#include <cmath>
#include <string>

namespace tglasso {
namespace {

void check_outputs(const CoefficientMatrix& b, const OutputTree& tree)
{
    if (b.cols() != tree.num_outputs()) {
        throw DimensionError("coefficient matrix has " + std::to_string(b.cols()) + " columns but the tree has "
                             + std::to_string(tree.num_outputs()) + " outputs");
    }
    if (!tree.topology_ok()) {
        throw InputError("malformed tree: " + tree.topology_issues().front().message);
    }
}

double group_norm(const CoefficientMatrix& b, Eigen::Index j, const std::vector<int>& group)
{
    double ss = 0.0;
    for (int k : group) ss += b(j, k) * b(j, k);
    return std::sqrt(ss);
}

} // namespace

double penalty_flat(const CoefficientMatrix& b, const OutputTree& tree)
{
    check_outputs(b, tree);
    tree.require_weights(b.cols());
    double total = 0.0;
    for (int v : tree.postorder()) {
        const auto& node = tree.node(v);
        if (node.w == 0.0) continue;
        double sum = 0.0;
        for (Eigen::Index j = 0; j < b.rows(); ++j) sum += group_norm(b, j, node.group);
        total += node.w * sum;
    }
    return total;
}

double penalty_recursive(const CoefficientMatrix& b, const OutputTree& tree)
{
    check_outputs(b, tree);
    for (const auto& node : tree.nodes()) {
        if (!node.is_leaf() && (std::isnan(node.s) || std::isnan(node.g))) {
            throw ConfigError("recursive penalty needs s/g on node " + std::to_string(node.id));
        }
    }
    std::vector<double> value(static_cast<std::size_t>(tree.num_nodes()));
    double total = 0.0;
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        for (int v : tree.postorder()) {
            const auto& node = tree.node(v);
            double wv = 0.0;
            if (node.is_leaf()) {
                for (int m : node.group) wv += std::abs(b(j, m));
            } else {
                double below = 0.0;
                for (int c : node.children) below += std::abs(value[static_cast<std::size_t>(c)]);
                wv = node.s * below + node.g * group_norm(b, j, node.group);
            }
            value[static_cast<std::size_t>(v)] = wv;
        }
        total += value[static_cast<std::size_t>(tree.root())];
    }
    return total;
}

Matrix group_norms(const CoefficientMatrix& b, const OutputTree& tree)
{
    check_outputs(b, tree);
    Matrix sq = Matrix::Zero(b.rows(), tree.num_nodes());
    for (int v : tree.postorder()) {
        const auto& node = tree.node(v);
        if (node.is_leaf()) {
            sq.col(v) = b.col(v).array().square().matrix();
        } else {
            for (int c : node.children) sq.col(v) += sq.col(c);
        }
    }
    return sq.cwiseSqrt();
}

} // namespace tglasso
