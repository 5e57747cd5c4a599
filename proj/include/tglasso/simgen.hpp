#pragma once
#include <cstdint>
#include <vector>

#include <tglasso/data.hpp>
#include <tglasso/tree.hpp>

namespace tglasso {

/**
 * Synthetic multi-output association study.
 *
 * Outputs sit at the leaves of a balanced tree with the given branching
 * factors (height = branching.size()). Every node whose depth is listed in
 * active_levels (root = 0, leaves = height) owns its own block of
 * causal_inputs_per_group inputs; those inputs affect exactly the outputs in
 * the node's group with coefficient `signal`.
 */
struct SimulationSpec
{
    int n_train = 150;
    int n_test = 50;
    int j_inputs = 200;
    int k_outputs = 60;
    std::vector<int> branching{3, 2, 5, 2};
    double signal = 0.4;
    double noise_sd = 1.0;
    int causal_inputs_per_group = 2;
    std::vector<int> active_levels{1, 2, 3};
    /// s = g = 0.5 on every internal node of the true tree.
    double tree_s = 0.5;
    std::uint64_t seed = 1;

    /// Throws ConfigError on any inconsistency.
    void validate() const;
};

struct TrueStructure
{
    OutputTree tree;
    CoefficientMatrix b_true;
    /// Selected nodes in order of input assignment.
    std::vector<int> causal_groups;
};

struct SimulatedData
{
    DataSet train;
    DataSet test;
    CoefficientMatrix b_true;
    OutputTree tree;
};

/// n×j genotype matrix, entries i.i.d. uniform on {0, 1, 2}, row by row.
Matrix generate_genotypes(int n, int j, std::uint64_t seed);

/// Tree and coefficients; the same for every seed.
TrueStructure generate_true_structure(const SimulationSpec& spec);

/// Training and test sets drawn from one stream seeded by spec.seed, in the
/// order: training genotypes, training noise, test genotypes, test noise.
/// Y = X·B_true + noise, noise ~ N(0, noise_sd²). Both sets are uncentered.
SimulatedData generate_dataset(const SimulationSpec& spec);

/// Spec for replicate r: same settings, seed split_seed(spec.seed, r).
SimulationSpec replicate_spec(const SimulationSpec& spec, int replicate);

} // namespace tglasso
