#include <tglasso/errors.hpp>
#include <tglasso/parallel.hpp>
#include <tglasso/random.hpp>
#include <tglasso/solver.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace tglasso {

std::vector<double> log_grid(double lo, double hi, int count)
{
    if (!(lo > 0.0) || !(hi >= lo) || count < 1) {
        throw ConfigError("log grid needs 0 < lo ≤ hi and at least one point");
    }
    if (count == 1) return {lo};
    std::vector<double> grid(static_cast<std::size_t>(count));
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (int i = 0; i < count; ++i) {
        grid[static_cast<std::size_t>(i)] = std::pow(10.0, a + (b - a) * i / (count - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<double> default_lambda_grid() { return log_grid(1e-3, 1e3, 30); }

std::vector<std::vector<Eigen::Index>> kfold_split(Eigen::Index num_rows, int folds, std::uint64_t seed)
{
    if (folds < 2) throw ConfigError("cross-validation needs at least 2 folds");
    if (num_rows / folds < 2) {
        throw ConfigError("fold size below 2 rows (" + std::to_string(num_rows) + " rows, "
                          + std::to_string(folds) + " folds)");
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(num_rows));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        std::swap(order[i], order[rng.below(i + 1)]);
    }
    std::vector<std::vector<Eigen::Index>> out(static_cast<std::size_t>(folds));
    const auto base = static_cast<std::size_t>(num_rows / folds);
    const auto extra = static_cast<std::size_t>(num_rows % folds);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < out.size(); ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        out[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                      order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(out[f].begin(), out[f].end());
        pos += size;
    }
    return out;
}

CvResult cross_validate(const DataSet& data, const OutputTree& tree, const std::vector<double>& grid, int folds,
                        const SolverConfig& base, std::uint64_t seed, int jobs)
{
    if (grid.empty()) throw ConfigError("lambda grid is empty");
    for (double l : grid) {
        if (!(l >= 0.0)) throw ConfigError("lambda grid values must be ≥ 0");
    }
    const auto splits = kfold_split(data.num_samples(), folds, seed);

    std::vector<DataSet> train(splits.size());
    std::vector<DataSet> held_out(splits.size());
    for (std::size_t f = 0; f < splits.size(); ++f) {
        std::vector<char> in_fold(static_cast<std::size_t>(data.num_samples()), 0);
        for (auto r : splits[f]) in_fold[static_cast<std::size_t>(r)] = 1;
        std::vector<Eigen::Index> rest;
        for (Eigen::Index r = 0; r < data.num_samples(); ++r) {
            if (!in_fold[static_cast<std::size_t>(r)]) rest.push_back(r);
        }
        train[f] = center_columns(data.subset(rest));
        held_out[f] = data.subset(splits[f]);
    }

    const std::size_t nf = splits.size();
    std::vector<double> mse(grid.size() * nf);
    parallel_for(mse.size(), jobs, [&](std::size_t task) {
        const std::size_t li = task / nf;
        const std::size_t f = task % nf;
        SolverConfig config = base;
        config.lambda = grid[li];
        const FitResult r = fit(train[f], tree, config);
        const Matrix pred = predict(held_out[f].x, r);
        mse[task] = (pred - held_out[f].y).squaredNorm() / static_cast<double>(pred.size());
    });

    CvResult out;
    out.table.resize(grid.size());
    for (std::size_t li = 0; li < grid.size(); ++li) {
        auto& row = out.table[li];
        row.lambda = grid[li];
        row.fold_mse.assign(mse.begin() + static_cast<std::ptrdiff_t>(li * nf),
                            mse.begin() + static_cast<std::ptrdiff_t>((li + 1) * nf));
        const double mean = std::accumulate(row.fold_mse.begin(), row.fold_mse.end(), 0.0) / nf;
        double ss = 0.0;
        for (double m : row.fold_mse) ss += (m - mean) * (m - mean);
        row.mean_mse = mean;
        row.se_mse = std::sqrt(ss / static_cast<double>(nf - 1) / static_cast<double>(nf));
    }
    std::size_t best = 0;
    for (std::size_t li = 1; li < out.table.size(); ++li) {
        const auto& cand = out.table[li];
        const auto& cur = out.table[best];
        if (cand.mean_mse < cur.mean_mse || (cand.mean_mse == cur.mean_mse && cand.lambda > cur.lambda)) {
            best = li;
        }
    }
    out.best_lambda = out.table[best].lambda;
    return out;
}

} // namespace tglasso
