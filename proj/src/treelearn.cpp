#include <tglasso/treelearn.hpp>
#include <tglasso/errors.hpp>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace tglasso {
namespace {

using PairKey = std::pair<int, int>;

PairKey pair_key(int a, int b) { return a < b ? PairKey{a, b} : PairKey{b, a}; }

bool better(double d1, PairKey k1, double d2, PairKey k2)
{
    return d1 < d2 || (d1 == d2 && k1 < k2);
}

void check_distance_matrix(const Matrix& dist)
{
    if (dist.rows() != dist.cols()) throw InputError("distance matrix must be square");
    if (dist.rows() < 1) throw InputError("distance matrix is empty");
    if (!dist.allFinite()) throw InputError("distance matrix contains non-finite values");
    const Eigen::Index n = dist.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(dist(i, i)) > 1e-12) {
            throw InputError("distance matrix diagonal entry " + std::to_string(i) + " is not zero");
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (dist(i, j) < 0.0) {
                throw InputError("negative distance at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
            }
            if (std::abs(dist(i, j) - dist(j, i)) > 1e-12 * std::max(1.0, std::abs(dist(i, j)))) {
                throw InputError("distance matrix is not symmetric at (" + std::to_string(i) + ", "
                                 + std::to_string(j) + ")");
            }
        }
    }
}

} // namespace

Matrix correlation_matrix(const Matrix& y)
{
    if (y.rows() < 2) throw DimensionError("correlation needs at least 2 samples");
    require_finite(y, "output matrix");
    Matrix centered = y.rowwise() - y.colwise().mean();
    Vector norms = centered.colwise().norm().transpose();
    for (Eigen::Index k = 0; k < norms.size(); ++k) {
        if (norms(k) == 0.0) {
            throw InputError("output column " + std::to_string(k) + " is constant; its correlation is undefined");
        }
    }
    for (Eigen::Index k = 0; k < centered.cols(); ++k) centered.col(k) /= norms(k);
    Matrix r = centered.transpose() * centered;
    r = r.cwiseMax(-1.0).cwiseMin(1.0);
    r.diagonal().setOnes();
    return (r + r.transpose()) * 0.5;
}

Matrix correlation_distance(const Matrix& correlation)
{
    Matrix d = (1.0 - correlation.array()).cwiseMax(0.0).matrix();
    d.diagonal().setZero();
    return d;
}

Dendrogram agglomerative_cluster(const Matrix& dist, Linkage linkage)
{
    (void)linkage;
    check_distance_matrix(dist);
    const int n = static_cast<int>(dist.rows());
    Dendrogram out;
    out.num_leaves = n;
    if (n == 1) return out;

    Matrix d = dist;
    std::vector<int> cluster(static_cast<std::size_t>(n));
    std::vector<int> size(static_cast<std::size_t>(n), 1);
    std::vector<char> active(static_cast<std::size_t>(n), 1);
    std::vector<int> nn(static_cast<std::size_t>(n), -1);
    std::vector<double> nn_dist(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) cluster[static_cast<std::size_t>(i)] = i;

    auto refresh = [&](int i) {
        int best = -1;
        double best_d = 0.0;
        PairKey best_key{};
        for (int j = 0; j < n; ++j) {
            if (j == i || !active[static_cast<std::size_t>(j)]) continue;
            const PairKey key = pair_key(cluster[static_cast<std::size_t>(i)], cluster[static_cast<std::size_t>(j)]);
            if (best < 0 || better(d(i, j), key, best_d, best_key)) {
                best = j;
                best_d = d(i, j);
                best_key = key;
            }
        }
        nn[static_cast<std::size_t>(i)] = best;
        nn_dist[static_cast<std::size_t>(i)] = best_d;
    };
    for (int i = 0; i < n; ++i) refresh(i);

    double last_height = 0.0;
    for (int step = 0; step < n - 1; ++step) {
        int a = -1;
        PairKey a_key{};
        for (int i = 0; i < n; ++i) {
            if (!active[static_cast<std::size_t>(i)] || nn[static_cast<std::size_t>(i)] < 0) continue;
            const PairKey key = pair_key(cluster[static_cast<std::size_t>(i)],
                                         cluster[static_cast<std::size_t>(nn[static_cast<std::size_t>(i)])]);
            if (a < 0 || better(nn_dist[static_cast<std::size_t>(i)], key, nn_dist[static_cast<std::size_t>(a)], a_key)) {
                a = i;
                a_key = key;
            }
        }
        int b = nn[static_cast<std::size_t>(a)];
        if (b < a) std::swap(a, b);

        const double height = std::max(d(a, b), last_height);
        last_height = height;
        const int na = size[static_cast<std::size_t>(a)];
        const int nb = size[static_cast<std::size_t>(b)];
        out.merges.push_back({a_key.first, a_key.second, height, na + nb});

        active[static_cast<std::size_t>(b)] = 0;
        for (int k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == a) continue;
            const double merged = (na * d(a, k) + nb * d(b, k)) / static_cast<double>(na + nb);
            d(a, k) = merged;
            d(k, a) = merged;
        }
        cluster[static_cast<std::size_t>(a)] = n + step;
        size[static_cast<std::size_t>(a)] = na + nb;

        refresh(a);
        for (int k = 0; k < n; ++k) {
            if (!active[static_cast<std::size_t>(k)] || k == a) continue;
            const int cur = nn[static_cast<std::size_t>(k)];
            if (cur == a || cur == b) {
                refresh(k);
                continue;
            }
            const PairKey cur_key = pair_key(cluster[static_cast<std::size_t>(k)], cluster[static_cast<std::size_t>(cur)]);
            const PairKey new_key = pair_key(cluster[static_cast<std::size_t>(k)], n + step);
            if (better(d(k, a), new_key, nn_dist[static_cast<std::size_t>(k)], cur_key)) {
                nn[static_cast<std::size_t>(k)] = a;
                nn_dist[static_cast<std::size_t>(k)] = d(k, a);
            }
        }
    }
    return out;
}

Dendrogram normalize_heights(Dendrogram dend)
{
    dend.normalized_heights.clear();
    if (dend.merges.empty()) return dend;
    const double root = dend.merges.back().height;
    for (const auto& m : dend.merges) {
        dend.normalized_heights.push_back(root > 0.0 ? m.height / root : 1.0);
    }
    return dend;
}

std::vector<int> pruned_nodes(const Dendrogram& dend, double rho)
{
    const Dendrogram normalized = dend.normalized_heights.empty() ? normalize_heights(dend) : dend;
    std::vector<int> out;
    for (std::size_t i = 0; i < normalized.normalized_heights.size(); ++i) {
        if (normalized.normalized_heights[i] > rho) out.push_back(dend.num_leaves + static_cast<int>(i));
    }
    return out;
}

OutputTree normalize_and_assign(const Dendrogram& dend, double rho)
{
    if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
    if (dend.num_leaves < 1) throw InputError("dendrogram has no leaves");
    if (static_cast<int>(dend.merges.size()) != dend.num_leaves - 1) {
        throw InputError("dendrogram over " + std::to_string(dend.num_leaves) + " leaves needs "
                         + std::to_string(dend.num_leaves - 1) + " merges");
    }
    const Dendrogram normalized = dend.normalized_heights.empty() ? normalize_heights(dend) : dend;
    TreeBuilder builder(dend.num_leaves);
    for (std::size_t i = 0; i < normalized.merges.size(); ++i) {
        const auto& m = normalized.merges[i];
        const double h = normalized.normalized_heights[i];
        const int id = dend.num_leaves + static_cast<int>(i);
        if (m.left < 0 || m.right < 0 || m.left >= id || m.right >= id || m.left == m.right) {
            throw InputError("merge " + std::to_string(i) + " refers to clusters that do not exist yet");
        }
        builder.add_internal({m.left, m.right}, h > rho ? 1.0 : 1.0 - h);
    }
    return builder.build();
}

OutputTree learn_output_tree(const Matrix& y, double rho)
{
    if (!(rho > 0.0)) throw ConfigError("rho must be > 0");
    return normalize_and_assign(agglomerative_cluster(correlation_distance(correlation_matrix(y))), rho);
}

} // namespace tglasso
