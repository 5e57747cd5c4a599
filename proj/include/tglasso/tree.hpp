#pragma once
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tglasso {

inline constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

/**
 * One node of an output tree.
 *
 * Leaves carry the output index as their id (ids 0..K-1); internal nodes use
 * ids K..|V|-1. `group` is the sorted set of outputs under the node. For an
 * internal node, s weights separate selection of the children and g joint
 * selection of the whole group, with s + g = 1. `fixed_w`, when present,
 * overrides the weight derived from (s, g).
 */
struct TreeNode
{
    int id = -1;
    std::vector<int> children;
    std::vector<int> group;
    double s = kUnset;
    double g = kUnset;
    std::optional<double> fixed_w;
    double w = 0.0;

    bool is_leaf() const { return children.empty(); }
};

enum class IssueKind
{
    kBadRoot,
    kBadChild,
    kMultipleParents,
    kCycle,
    kOrphan,
    kLeafId,
    kLeafGroup,
    kGroupMismatch,
    kRootGroup,
    kUnsetWeights,
    kWeightRange,
    kWeightConstraint,
    kWeightSum,
};

const char* to_string(IssueKind kind);

struct TreeIssue
{
    IssueKind kind;
    int node;
    std::string message;
};

/// Result of validate_tree. Warnings are advisory checks (the weight sums of
/// trees with directly supplied weights) and do not make the tree invalid.
struct ValidationReport
{
    std::vector<TreeIssue> issues;
    std::vector<TreeIssue> warnings;

    bool ok() const { return issues.empty(); }
    bool has(IssueKind kind) const;
    std::string summary() const;
};

/**
 * Rooted tree over K outputs. Immutable once built.
 *
 * Construction only requires node ids to be exactly 0..|V|-1; any other
 * structural defect is recorded and surfaces through validate_tree, so that
 * hand-edited tree files can be diagnosed instead of rejected wholesale.
 */
class OutputTree
{
public:
    OutputTree() = default;
    OutputTree(std::vector<TreeNode> nodes, int root, int num_outputs);

    const std::vector<TreeNode>& nodes() const { return nodes_; }
    const TreeNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
    int root() const { return root_; }
    int num_outputs() const { return num_outputs_; }
    int num_nodes() const { return static_cast<int>(nodes_.size()); }

    /// Parent id, or -1 for the root and for unattached nodes.
    int parent(int id) const { return parent_[static_cast<std::size_t>(id)]; }
    /// Depth below the root (root = 0); -1 if unreachable.
    int depth(int id) const { return depth_[static_cast<std::size_t>(id)]; }
    /// Nodes reachable from the root, children before parents.
    const std::vector<int>& postorder() const { return postorder_; }
    /// Longest root-to-leaf path length.
    int height() const;

    bool topology_ok() const { return topology_issues_.empty(); }
    const std::vector<TreeIssue>& topology_issues() const { return topology_issues_; }
    bool weights_ready() const { return weights_ready_; }
    bool has_fixed_weights() const;

    /// Copy with every group recomputed from the child lists.
    OutputTree with_derived_groups() const;

    /// Throws InputError describing the first defect unless validate_tree
    /// reports no issues.
    void require_valid() const;
    /// Throws if weights are not derived or K differs from `num_outputs`.
    void require_weights(Eigen::Index num_outputs) const;

private:
    friend OutputTree compute_group_weights(const OutputTree& tree);

    void analyze();

    std::vector<TreeNode> nodes_;
    int root_ = -1;
    int num_outputs_ = 0;
    std::vector<int> parent_;
    std::vector<int> depth_;
    std::vector<int> postorder_;
    std::vector<TreeIssue> topology_issues_;
    bool weights_ready_ = false;
};

/// Reports every violated tree invariant; an empty report means valid.
ValidationReport validate_tree(const OutputTree& tree);

/// Fills w on every node: g_v·∏ s over ancestors for internal nodes and the
/// bare ancestor product for leaves. Nodes with fixed_w keep that value.
/// Unset s or g on an internal node is a ConfigError.
OutputTree compute_group_weights(const OutputTree& tree);

/// Entry k is the sum of w_v over nodes whose group contains output k.
Eigen::VectorXd weight_sum_per_leaf(const OutputTree& tree);

/**
 * Incremental construction of trees that satisfy s + g = 1 by construction.
 * Leaves 0..K-1 exist from the start.
 */
class TreeBuilder
{
public:
    explicit TreeBuilder(int num_outputs);

    /// Adds an internal node over `children` with separate-selection weight
    /// s (g = 1 - s) and returns its id.
    int add_internal(std::vector<int> children, double s);

    /// Groups derived, weights computed. The last added node is the root
    /// unless `root` is given.
    OutputTree build(std::optional<int> root = std::nullopt) const;

private:
    int num_outputs_;
    std::vector<TreeNode> nodes_;
};

/// Star tree with s_root = 1, g_root = 0: the penalty is Σ|β^j_k|.
OutputTree make_lasso_tree(int num_outputs);
/// Star tree with s_root = 0, g_root = 1: the penalty is Σ_j ‖β^j‖₂.
OutputTree make_l1l2_tree(int num_outputs);
/// Star tree with arbitrary root weight s (elastic-net form).
OutputTree make_star_tree(int num_outputs, double s_root);

/// Balanced tree with `branching[d]` children per node at depth d; every
/// internal node gets weight s. Leaves are numbered left to right and
/// internal ids are assigned bottom-up, so the root has the largest id.
OutputTree make_balanced_tree(const std::vector<int>& branching, double s);

} // namespace tglasso
