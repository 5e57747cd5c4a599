#include <tglasso/tree.hpp>
#include <tglasso/errors.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace tglasso {
namespace {

constexpr double kWeightTol = 1e-12;

void add_issue(std::vector<TreeIssue>& out, IssueKind kind, int node, std::string msg)
{
    out.push_back({kind, node, std::move(msg)});
}

std::string node_label(int id) { return "node " + std::to_string(id); }

} // namespace

const char* to_string(IssueKind kind)
{
    switch (kind) {
        case IssueKind::kBadRoot: return "bad root";
        case IssueKind::kBadChild: return "bad child id";
        case IssueKind::kMultipleParents: return "multiple parents";
        case IssueKind::kCycle: return "cycle";
        case IssueKind::kOrphan: return "orphan node";
        case IssueKind::kLeafId: return "leaf id";
        case IssueKind::kLeafGroup: return "leaf group";
        case IssueKind::kGroupMismatch: return "group mismatch";
        case IssueKind::kRootGroup: return "root group";
        case IssueKind::kUnsetWeights: return "unset s/g";
        case IssueKind::kWeightRange: return "s/g out of [0,1]";
        case IssueKind::kWeightConstraint: return "s+g≠1";
        case IssueKind::kWeightSum: return "weight-sum≠1";
    }
    return "unknown";
}

bool ValidationReport::has(IssueKind kind) const
{
    return std::any_of(issues.begin(), issues.end(),
                       [kind](const TreeIssue& i) { return i.kind == kind; });
}

std::string ValidationReport::summary() const
{
    std::ostringstream os;
    for (const auto& i : issues) {
        os << to_string(i.kind) << ": " << i.message << '\n';
    }
    for (const auto& i : warnings) {
        os << "warning: " << to_string(i.kind) << ": " << i.message << '\n';
    }
    return os.str();
}

OutputTree::OutputTree(std::vector<TreeNode> nodes, int root, int num_outputs)
    : nodes_(std::move(nodes)), root_(root), num_outputs_(num_outputs)
{
    if (num_outputs_ < 1) {
        throw DimensionError("an output tree needs at least one output");
    }
    std::sort(nodes_.begin(), nodes_.end(),
              [](const TreeNode& a, const TreeNode& b) { return a.id < b.id; });
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].id != static_cast<int>(i)) {
            throw InputError("tree node ids must be exactly 0.." + std::to_string(nodes_.size() - 1)
                             + " without duplicates");
        }
    }
    analyze();
}

void OutputTree::analyze()
{
    const int n = num_nodes();
    parent_.assign(static_cast<std::size_t>(n), -1);
    depth_.assign(static_cast<std::size_t>(n), -1);
    postorder_.clear();
    topology_issues_.clear();
    auto& issues = topology_issues_;

    for (const auto& node : nodes_) {
        for (int c : node.children) {
            if (c < 0 || c >= n) {
                add_issue(issues, IssueKind::kBadChild, node.id,
                          node_label(node.id) + " lists unknown child " + std::to_string(c));
            } else if (c == node.id) {
                add_issue(issues, IssueKind::kCycle, node.id, node_label(node.id) + " is its own child");
            } else if (parent_[static_cast<std::size_t>(c)] != -1) {
                add_issue(issues, IssueKind::kMultipleParents, c,
                          node_label(c) + " has parents " + std::to_string(parent_[static_cast<std::size_t>(c)])
                              + " and " + std::to_string(node.id));
            } else {
                parent_[static_cast<std::size_t>(c)] = node.id;
            }
        }
    }

    if (root_ < 0 || root_ >= n) {
        add_issue(issues, IssueKind::kBadRoot, root_, "root id " + std::to_string(root_) + " does not exist");
    } else {
        if (parent_[static_cast<std::size_t>(root_)] != -1) {
            add_issue(issues, IssueKind::kBadRoot, root_,
                      "root " + std::to_string(root_) + " has parent "
                          + std::to_string(parent_[static_cast<std::size_t>(root_)]));
        }
        // Iterative DFS following only accepted parent links, so nothing is
        // visited twice.
        std::vector<std::pair<int, std::size_t>> stack{{root_, 0}};
        depth_[static_cast<std::size_t>(root_)] = 0;
        while (!stack.empty()) {
            auto& [id, next] = stack.back();
            const auto& kids = nodes_[static_cast<std::size_t>(id)].children;
            if (next < kids.size()) {
                const int c = kids[next++];
                if (c >= 0 && c < n && parent_[static_cast<std::size_t>(c)] == id
                    && depth_[static_cast<std::size_t>(c)] < 0) {
                    depth_[static_cast<std::size_t>(c)] = depth_[static_cast<std::size_t>(id)] + 1;
                    stack.emplace_back(c, 0);
                }
            } else {
                postorder_.push_back(id);
                stack.pop_back();
            }
        }
    }

    for (const auto& node : nodes_) {
        if (depth_[static_cast<std::size_t>(node.id)] < 0 && node.id != root_) {
            add_issue(issues, IssueKind::kOrphan, node.id, node_label(node.id) + " is not reachable from the root");
        }
    }

    if (n < num_outputs_) {
        add_issue(issues, IssueKind::kLeafId, -1,
                  "tree has " + std::to_string(n) + " nodes but " + std::to_string(num_outputs_) + " outputs");
    }
    for (const auto& node : nodes_) {
        if (node.is_leaf() && node.id >= num_outputs_) {
            add_issue(issues, IssueKind::kLeafId, node.id,
                      "leaf " + std::to_string(node.id) + " is not an output index (< "
                          + std::to_string(num_outputs_) + ")");
        }
        if (!node.is_leaf() && node.id < num_outputs_) {
            add_issue(issues, IssueKind::kLeafId, node.id,
                      "output node " + std::to_string(node.id) + " has children");
        }
    }
}

int OutputTree::height() const
{
    int h = 0;
    for (int d : depth_) h = std::max(h, d);
    return h;
}

bool OutputTree::has_fixed_weights() const
{
    return std::any_of(nodes_.begin(), nodes_.end(), [](const TreeNode& v) { return v.fixed_w.has_value(); });
}

OutputTree OutputTree::with_derived_groups() const
{
    if (!topology_ok()) {
        throw InputError("cannot derive groups: " + topology_issues_.front().message);
    }
    OutputTree out = *this;
    for (int id : postorder_) {
        auto& node = out.nodes_[static_cast<std::size_t>(id)];
        if (node.is_leaf()) {
            node.group = {id};
            continue;
        }
        std::vector<int> merged;
        for (int c : node.children) {
            const auto& cg = out.nodes_[static_cast<std::size_t>(c)].group;
            merged.insert(merged.end(), cg.begin(), cg.end());
        }
        std::sort(merged.begin(), merged.end());
        node.group = std::move(merged);
    }
    out.weights_ready_ = false;
    return out;
}

void OutputTree::require_valid() const
{
    const auto report = validate_tree(*this);
    if (!report.ok()) {
        throw InputError("invalid output tree: " + report.issues.front().message);
    }
}

void OutputTree::require_weights(Eigen::Index num_outputs) const
{
    if (!weights_ready_) {
        throw ConfigError("group weights have not been computed for this tree");
    }
    if (num_outputs != num_outputs_) {
        throw DimensionError("coefficients have " + std::to_string(num_outputs) + " outputs but the tree has "
                             + std::to_string(num_outputs_));
    }
}

OutputTree compute_group_weights(const OutputTree& tree)
{
    if (!tree.topology_ok()) {
        throw InputError("cannot weight a malformed tree: " + tree.topology_issues().front().message);
    }
    OutputTree out = tree;
    const auto& order = tree.postorder();
    std::vector<double> ancestor_product(static_cast<std::size_t>(tree.num_nodes()), 1.0);
    // Reverse postorder visits parents before children.
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        auto& node = out.nodes_[static_cast<std::size_t>(*it)];
        const double above = ancestor_product[static_cast<std::size_t>(node.id)];
        double w = node.is_leaf() ? above : node.g * above;
        if (node.fixed_w) {
            w = *node.fixed_w;
        } else if (!node.is_leaf() && (std::isnan(node.s) || std::isnan(node.g))) {
            throw ConfigError("s/g not set on internal node " + std::to_string(node.id));
        } else if (std::isnan(w)) {
            throw ConfigError("weight of node " + std::to_string(node.id)
                              + " depends on an ancestor without s/g");
        }
        node.w = w;
        for (int c : node.children) {
            ancestor_product[static_cast<std::size_t>(c)] = above * node.s;
        }
    }
    out.weights_ready_ = true;
    return out;
}

Eigen::VectorXd weight_sum_per_leaf(const OutputTree& tree)
{
    if (!tree.weights_ready()) {
        throw ConfigError("group weights have not been computed for this tree");
    }
    Eigen::VectorXd sums = Eigen::VectorXd::Zero(tree.num_outputs());
    for (const auto& node : tree.nodes()) {
        for (int k : node.group) {
            if (k >= 0 && k < tree.num_outputs()) sums(k) += node.w;
        }
    }
    return sums;
}

ValidationReport validate_tree(const OutputTree& tree)
{
    ValidationReport report;
    report.issues = tree.topology_issues();
    auto& issues = report.issues;
    const int n = tree.num_nodes();
    const int num_outputs = tree.num_outputs();

    for (const auto& node : tree.nodes()) {
        if (node.is_leaf()) {
            if (node.id < num_outputs && node.group != std::vector<int>{node.id}) {
                add_issue(issues, IssueKind::kLeafGroup, node.id,
                          "leaf " + std::to_string(node.id) + " must have group {" + std::to_string(node.id) + "}");
            }
            continue;
        }
        std::vector<int> expected;
        bool children_ok = true;
        for (int c : node.children) {
            if (c < 0 || c >= n) {
                children_ok = false;
                continue;
            }
            const auto& cg = tree.node(c).group;
            expected.insert(expected.end(), cg.begin(), cg.end());
        }
        std::sort(expected.begin(), expected.end());
        const bool disjoint = std::adjacent_find(expected.begin(), expected.end()) == expected.end();
        if (children_ok && (!disjoint || expected != node.group)) {
            add_issue(issues, IssueKind::kGroupMismatch, node.id,
                      node_label(node.id) + " group is not the disjoint union of its children's groups");
        }

        if (node.fixed_w) {
            if (*node.fixed_w < 0 || !std::isfinite(*node.fixed_w)) {
                add_issue(issues, IssueKind::kWeightRange, node.id,
                          node_label(node.id) + " has a negative or non-finite weight");
            }
            continue;
        }
        if (std::isnan(node.s) || std::isnan(node.g)) {
            add_issue(issues, IssueKind::kUnsetWeights, node.id, node_label(node.id) + " has no s/g");
            continue;
        }
        if (node.s < 0 || node.s > 1 || node.g < 0 || node.g > 1) {
            add_issue(issues, IssueKind::kWeightRange, node.id, node_label(node.id) + " has s or g outside [0,1]");
        }
        if (std::abs(node.s + node.g - 1.0) > kWeightTol) {
            std::ostringstream os;
            os << node_label(node.id) << " has s+g≠1 (s=" << node.s << ", g=" << node.g << ")";
            add_issue(issues, IssueKind::kWeightConstraint, node.id, os.str());
        }
    }

    if (tree.root() >= 0 && tree.root() < n) {
        std::vector<int> all(static_cast<std::size_t>(num_outputs));
        std::iota(all.begin(), all.end(), 0);
        if (tree.node(tree.root()).group != all) {
            add_issue(issues, IssueKind::kRootGroup, tree.root(), "root group is not {0..K-1}");
        }
    }

    if (!issues.empty()) return report;

    const OutputTree weighted = tree.weights_ready() ? tree : compute_group_weights(tree);
    const Eigen::VectorXd sums = weight_sum_per_leaf(weighted);
    const bool advisory = tree.has_fixed_weights();
    for (int k = 0; k < num_outputs; ++k) {
        if (std::abs(sums(k) - 1.0) > kWeightTol) {
            std::ostringstream os;
            os.precision(17);
            os << "weights containing output " << k << " sum to " << sums(k);
            add_issue(advisory ? report.warnings : issues, IssueKind::kWeightSum, k, os.str());
        }
    }
    return report;
}

TreeBuilder::TreeBuilder(int num_outputs) : num_outputs_(num_outputs)
{
    if (num_outputs < 1) {
        throw DimensionError("an output tree needs at least one output");
    }
    nodes_.reserve(static_cast<std::size_t>(2 * num_outputs));
    for (int k = 0; k < num_outputs; ++k) {
        TreeNode leaf;
        leaf.id = k;
        leaf.group = {k};
        leaf.s = 1.0;
        leaf.g = 0.0;
        nodes_.push_back(std::move(leaf));
    }
}

int TreeBuilder::add_internal(std::vector<int> children, double s)
{
    if (!(s >= 0.0 && s <= 1.0)) {
        throw ConfigError("s must lie in [0,1]");
    }
    if (children.empty()) {
        throw ConfigError("an internal node needs at least one child");
    }
    for (int c : children) {
        if (c < 0 || c >= static_cast<int>(nodes_.size())) {
            throw ConfigError("unknown child id " + std::to_string(c));
        }
    }
    TreeNode node;
    node.id = static_cast<int>(nodes_.size());
    node.children = std::move(children);
    node.s = s;
    node.g = 1.0 - s;
    nodes_.push_back(std::move(node));
    return nodes_.back().id;
}

OutputTree TreeBuilder::build(std::optional<int> root) const
{
    const int r = root.value_or(static_cast<int>(nodes_.size()) - 1);
    OutputTree tree = OutputTree(nodes_, r, num_outputs_).with_derived_groups();
    return compute_group_weights(tree);
}

OutputTree make_star_tree(int num_outputs, double s_root)
{
    if (num_outputs < 1) {
        throw DimensionError("K must be at least 1");
    }
    TreeBuilder builder(num_outputs);
    std::vector<int> leaves(static_cast<std::size_t>(num_outputs));
    std::iota(leaves.begin(), leaves.end(), 0);
    builder.add_internal(std::move(leaves), s_root);
    return builder.build();
}

OutputTree make_lasso_tree(int num_outputs) { return make_star_tree(num_outputs, 1.0); }

OutputTree make_l1l2_tree(int num_outputs) { return make_star_tree(num_outputs, 0.0); }

OutputTree make_balanced_tree(const std::vector<int>& branching, double s)
{
    int num_outputs = 1;
    for (int b : branching) {
        if (b < 1) throw ConfigError("branching factors must be positive");
        num_outputs *= b;
    }
    TreeBuilder builder(num_outputs);
    int next_leaf = 0;
    std::function<int(std::size_t)> grow = [&](std::size_t level) -> int {
        if (level == branching.size()) return next_leaf++;
        std::vector<int> kids;
        for (int i = 0; i < branching[level]; ++i) kids.push_back(grow(level + 1));
        return builder.add_internal(std::move(kids), s);
    };
    const int root = grow(0);
    return builder.build(root);
}

} // namespace tglasso
