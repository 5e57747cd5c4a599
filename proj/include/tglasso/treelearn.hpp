#pragma once
#include <vector>

#include <tglasso/data.hpp>
#include <tglasso/tree.hpp>

namespace tglasso {

/// Cluster-to-cluster distance rule. Only average linkage is implemented.
enum class Linkage
{
    kAverage,
};

/// One agglomeration step. Leaves are clusters 0..K-1 and step i creates
/// cluster K+i; `left` < `right`.
struct Merge
{
    int left = 0;
    int right = 0;
    double height = 0.0;
    int size = 0;
};

struct Dendrogram
{
    int num_leaves = 0;
    std::vector<Merge> merges;
    /// h' per merge once normalized (root at 1); empty before.
    std::vector<double> normalized_heights;
};

/// K×K Pearson correlations of the columns of y. N ≥ 2 is required, and a
/// constant column is an InputError naming the column.
Matrix correlation_matrix(const Matrix& y);

/// 1 − r, clipped at zero, with an exact zero diagonal.
Matrix correlation_distance(const Matrix& correlation);

/**
 * Average-linkage (UPGMA) agglomerative clustering of a distance matrix.
 *
 * Always merges the closest pair of active clusters; among equal distances
 * the pair with the lexicographically smallest (smaller id, larger id) wins.
 * Each row caches its nearest neighbour, so typical cost is O(K²).
 * The input must be symmetric with a zero diagonal and non-negative finite
 * entries (InputError otherwise).
 */
Dendrogram agglomerative_cluster(const Matrix& dist, Linkage linkage = Linkage::kAverage);

/// Fills normalized_heights = height / root height. A dendrogram whose root
/// height is zero gets h' = 1 everywhere.
Dendrogram normalize_heights(Dendrogram dend);

/**
 * Output tree from a dendrogram: merge i becomes internal node K+i with
 * g = h', s = 1 − h'. Nodes with h' > rho are neutralized (s = 1, g = 0), which
 * removes their joint-selection group from the penalty while keeping every
 * leaf's weight sum at one. rho ≤ 0 is a ConfigError.
 */
OutputTree normalize_and_assign(const Dendrogram& dend, double rho);

/// Node ids (K+i) whose normalized height exceeds rho.
std::vector<int> pruned_nodes(const Dendrogram& dend, double rho);

/// correlation → 1 − r → UPGMA → normalize_and_assign.
OutputTree learn_output_tree(const Matrix& y, double rho);

} // namespace tglasso
