#include <tglasso/simgen.hpp>
#include <tglasso/errors.hpp>
#include <tglasso/random.hpp>

#include <algorithm>
#include <string>

namespace tglasso {
namespace {

Matrix draw_genotypes(int n, int j, Rng& rng)
{
    Matrix x(n, j);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < j; ++c) x(i, c) = static_cast<double>(rng.below(3));
    }
    return x;
}

Matrix draw_noise(int n, int k, double sd, Rng& rng)
{
    Matrix e(n, k);
    for (int i = 0; i < n; ++i) {
        for (int c = 0; c < k; ++c) e(i, c) = sd * rng.normal();
    }
    return e;
}

} // namespace

void SimulationSpec::validate() const
{
    if (n_train < 2) throw ConfigError("n_train must be at least 2");
    if (n_test < 1) throw ConfigError("n_test must be at least 1");
    if (j_inputs < 1) throw ConfigError("j_inputs must be at least 1");
    if (k_outputs < 1) throw ConfigError("k_outputs must be at least 1");
    long product = 1;
    for (int b : branching) {
        if (b < 1) throw ConfigError("branching factors must be positive");
        product *= b;
    }
    if (product != k_outputs) {
        throw ConfigError("product of branching factors (" + std::to_string(product) + ") must equal k_outputs ("
                          + std::to_string(k_outputs) + ")");
    }
    if (!(signal > 0.0)) throw ConfigError("signal must be > 0");
    if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be ≥ 0");
    if (causal_inputs_per_group < 1) throw ConfigError("causal_inputs_per_group must be ≥ 1");
    const int height = static_cast<int>(branching.size());
    for (int level : active_levels) {
        if (level < 0 || level > height) {
            throw ConfigError("active level " + std::to_string(level) + " outside 0.." + std::to_string(height));
        }
    }
    if (!(tree_s >= 0.0 && tree_s <= 1.0)) throw ConfigError("tree_s must lie in [0,1]");
}

Matrix generate_genotypes(int n, int j, std::uint64_t seed)
{
    if (n < 1 || j < 1) throw ConfigError("genotype matrix needs n, j ≥ 1");
    Rng rng(seed);
    return draw_genotypes(n, j, rng);
}

TrueStructure generate_true_structure(const SimulationSpec& spec)
{
    spec.validate();
    TrueStructure out;
    out.tree = make_balanced_tree(spec.branching, spec.tree_s);

    std::vector<int> levels = spec.active_levels;
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

    // Within a level, groups are taken left to right by their first output.
    for (int level : levels) {
        std::vector<int> at_level;
        for (int v : out.tree.postorder()) {
            if (out.tree.depth(v) == level) at_level.push_back(v);
        }
        std::sort(at_level.begin(), at_level.end(), [&](int a, int b) {
            return out.tree.node(a).group.front() < out.tree.node(b).group.front();
        });
        out.causal_groups.insert(out.causal_groups.end(), at_level.begin(), at_level.end());
    }

    const long needed = static_cast<long>(out.causal_groups.size()) * spec.causal_inputs_per_group;
    if (needed > spec.j_inputs) {
        throw ConfigError("the selected groups need " + std::to_string(needed) + " causal inputs but j_inputs is "
                          + std::to_string(spec.j_inputs));
    }

    out.b_true = CoefficientMatrix::Zero(spec.j_inputs, spec.k_outputs);
    int next_input = 0;
    for (int v : out.causal_groups) {
        for (int c = 0; c < spec.causal_inputs_per_group; ++c, ++next_input) {
            for (int k : out.tree.node(v).group) out.b_true(next_input, k) = spec.signal;
        }
    }
    return out;
}

SimulatedData generate_dataset(const SimulationSpec& spec)
{
    TrueStructure truth = generate_true_structure(spec);
    Rng rng(spec.seed);
    Matrix x_train = draw_genotypes(spec.n_train, spec.j_inputs, rng);
    Matrix e_train = draw_noise(spec.n_train, spec.k_outputs, spec.noise_sd, rng);
    Matrix x_test = draw_genotypes(spec.n_test, spec.j_inputs, rng);
    Matrix e_test = draw_noise(spec.n_test, spec.k_outputs, spec.noise_sd, rng);

    Matrix y_train = x_train * truth.b_true + e_train;
    Matrix y_test = x_test * truth.b_true + e_test;

    SimulatedData out;
    out.train.x = std::move(x_train);
    out.train.y = std::move(y_train);
    out.train.x_means = Vector::Zero(spec.j_inputs);
    out.train.y_means = Vector::Zero(spec.k_outputs);
    out.test.x = std::move(x_test);
    out.test.y = std::move(y_test);
    out.test.x_means = Vector::Zero(spec.j_inputs);
    out.test.y_means = Vector::Zero(spec.k_outputs);
    out.b_true = std::move(truth.b_true);
    out.tree = std::move(truth.tree);
    return out;
}

SimulationSpec replicate_spec(const SimulationSpec& spec, int replicate)
{
    SimulationSpec out = spec;
    out.seed = split_seed(spec.seed, static_cast<std::uint64_t>(replicate));
    return out;
}

} // namespace tglasso
