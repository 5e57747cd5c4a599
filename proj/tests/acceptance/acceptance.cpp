#include "test_support.hpp"

#include <tglasso/eval.hpp>
#include <tglasso/io.hpp>
#include <tglasso/penalty.hpp>
#include <tglasso/simgen.hpp>
#include <tglasso/solver.hpp>
#include <tglasso/study.hpp>
#include <tglasso/treelearn.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <random>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <thread>
#include <vector>

using namespace tglasso;
namespace fs = std::filesystem;

namespace {

struct Verdict
{
    bool pass = false;
    std::string detail;
};

struct Options
{
    int jobs = 1;
    int study_replicates = 50;
};

class Stopwatch
{
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(double v, int precision = 4)
{
    std::ostringstream os;
    os.precision(precision);
    os << v;
    return os.str();
}

// Sum of w over every group containing each leaf; worst deviation from 1.
double worst_leaf_sum_error(const OutputTree& tree)
{
    double worst = 0.0;
    for (int leaf = 0; leaf < tree.num_outputs(); ++leaf) {
        double sum = 0.0;
        for (int v = leaf; v != -1; v = tree.parent(v)) sum += tree.node(v).w;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    return worst;
}

double log_uniform(Rng& rng, double lo, double hi)
{
    return std::exp(std::log(lo) + rng.uniform() * (std::log(hi) - std::log(lo)));
}

DataSet noisy_data(Rng& rng, Eigen::Index n, Eigen::Index j, Eigen::Index k)
{
    const Matrix x = tgtest::random_matrix(rng, n, j);
    const Matrix b = tgtest::random_matrix(rng, j, k);
    const Matrix y = x * b + 0.5 * tgtest::random_matrix(rng, n, k);
    return center_columns(DataSet::from_raw(x, y));
}

Verdict weight_sum_suite(const Options&)
{
    Stopwatch clock;
    Rng rng(101);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(64));
        worst = std::max(worst, worst_leaf_sum_error(tgtest::random_tree(rng, k)));
    }
    const double t = clock.seconds();
    return {worst <= 1e-12 && t < 5.0, "1000 trees, max |leaf sum - 1| = " + fmt(worst) + ", " + fmt(t, 3) + " s"};
}

Verdict penalty_equivalence(const Options&)
{
    Rng rng(202);
    double worst_rel = 0.0;
    double worst_closed = 0.0;
    for (int trial = 0; trial < 500; ++trial) {
        const int k = 1 + static_cast<int>(rng.below(40));
        const Eigen::Index j = 1 + static_cast<Eigen::Index>(rng.below(20));
        const OutputTree tree = tgtest::random_tree(rng, k);
        Matrix b = tgtest::random_matrix(rng, j, k);
        for (Eigen::Index i = 0; i < b.size(); ++i) {
            if (rng.below(3) == 0) b.data()[i] = 0.0;
        }
        const double flat = penalty_flat(b, tree);
        worst_rel = std::max(worst_rel, std::abs(flat - penalty_recursive(b, tree)) / (1.0 + flat));

        const double l1 = b.cwiseAbs().sum();
        const double l12 = b.rowwise().norm().sum();
        worst_closed = std::max(worst_closed, std::abs(penalty_flat(b, make_lasso_tree(k)) - l1) / (1.0 + l1));
        worst_closed = std::max(worst_closed, std::abs(penalty_flat(b, make_l1l2_tree(k)) - l12) / (1.0 + l12));
    }
    return {worst_rel <= 1e-12 && worst_closed <= 1e-12,
            "500 pairs, flat vs recursive " + fmt(worst_rel) + ", closed forms " + fmt(worst_closed)};
}

Verdict oracle_equivalence(const Options&)
{
    Stopwatch clock;
    Rng rng(303);
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        Eigen::Index j = 0;
        Eigen::Index k = 0;
        do {
            j = 1 + static_cast<Eigen::Index>(rng.below(3));
            k = 1 + static_cast<Eigen::Index>(rng.below(3));
        } while (j * k > 6);
        const Eigen::Index n = 8 + static_cast<Eigen::Index>(rng.below(18));
        const DataSet d = noisy_data(rng, n, j, k);
        const OutputTree tree = tgtest::random_tree(rng, static_cast<int>(k));
        SolverConfig c;
        c.lambda = log_uniform(rng, 0.1, 30.0);
        c.tol = 1e-13;
        c.max_iter = 200000;
        const FitResult f = fit(d, tree, c);
        const double solver = tgtest::oracle_objective(d.x, d.y, f.b, tree, c.lambda);
        const double brute =
            tgtest::oracle_objective(d.x, d.y, tgtest::grid_minimize(d.x, d.y, tree, c.lambda, 1e-8), tree, c.lambda);
        worst = std::max(worst, std::abs(solver - brute) / brute);
    }
    const double t = clock.seconds();
    return {worst <= 1e-4 && t < 120.0, "20 instances, max relative gap " + fmt(worst) + ", " + fmt(t, 3) + " s"};
}

Verdict descent(const Options&)
{
    Rng rng(404);
    double worst_rise = -std::numeric_limits<double>::infinity();
    int unconverged = 0;
    int max_iters = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const int k = 2 + static_cast<int>(rng.below(15));
        const OutputTree tree = tgtest::random_tree(rng, k);
        const DataSet d = noisy_data(rng, 60, 20, k);
        SolverConfig c;
        c.lambda = log_uniform(rng, 1e-2, 1e2);
        c.tol = 1e-6;
        const FitResult f = fit(d, tree, c);
        for (std::size_t i = 1; i < f.objective_trace.size(); ++i) {
            worst_rise = std::max(worst_rise, f.objective_trace[i] - f.objective_trace[i - 1]);
        }
        if (!f.converged || f.iterations >= c.max_iter) ++unconverged;
        max_iters = std::max(max_iters, f.iterations);
    }
    return {worst_rise <= 1e-10 && unconverged == 0,
            "50 fits, largest step change " + fmt(worst_rise) + ", unconverged " + std::to_string(unconverged)
                + ", max iterations " + std::to_string(max_iters)};
}

// Criteria 5 and 6 read the same study.
const StudyResult& figure_study(const Options& opt)
{
    static std::optional<StudyResult> cached;
    if (!cached) {
        StudyConfig c;
        c.replicates = opt.study_replicates;
        c.jobs = opt.jobs;
        Stopwatch clock;
        cached = run_study(c, [](const std::string& msg) { std::cerr << "  [study] " << msg << '\n'; });
        std::cerr << "  [study] finished in " << fmt(clock.seconds(), 4) << " s\n";
    }
    return *cached;
}

Verdict figure4(const Options& opt)
{
    const StudyResult& r = figure_study(opt);
    const std::vector<double> signals{0.2, 0.4, 0.6};
    bool pass = true;
    std::vector<double> margins;
    std::ostringstream os;
    for (double s : signals) {
        const double tree = r.auc_summary(Method::kTree, s).mean;
        const double lasso = r.auc_summary(Method::kLasso, s).mean;
        const double l1l2 = r.auc_summary(Method::kL1L2, s).mean;
        const double margin = std::min(tree - lasso, tree - l1l2);
        margins.push_back(margin);
        pass = pass && margin >= 0.02;
        os << "s=" << s << " AUC tree " << fmt(tree) << " lasso " << fmt(lasso) << " l1l2 " << fmt(l1l2)
           << " margin " << fmt(margin) << "; ";
    }
    const bool largest_weak = margins[0] >= margins[1] && margins[0] >= margins[2];
    os << "largest margin at 0.2: " << (largest_weak ? "yes" : "no");
    return {pass && largest_weak, os.str()};
}

Verdict figure5(const Options& opt)
{
    const StudyResult& r = figure_study(opt);
    const double s = 0.4;
    const double tree = r.mse_summary(Method::kTree, s).mean;
    const double lasso = r.mse_summary(Method::kLasso, s).mean;
    const double l1l2 = r.mse_summary(Method::kL1L2, s).mean;
    const double t09 = r.mse_summary(Method::kLearned09, s).mean;
    const double t07 = r.mse_summary(Method::kLearned07, s).mean;
    const bool pass = tree < lasso && tree < l1l2 && t09 < lasso && t07 < lasso;
    return {pass, "s=0.4 test MSE tree " + fmt(tree) + " lasso " + fmt(lasso) + " l1l2 " + fmt(l1l2) + " T0.9 "
                      + fmt(t09) + " T0.7 " + fmt(t07)};
}

// Y with two planted blocks of outputs, within-block correlation about r.
Matrix two_block_outputs(Rng& rng, int n, int k, double r)
{
    Matrix y(n, k);
    const double a = std::sqrt(r);
    const double b = std::sqrt(1.0 - r);
    for (int i = 0; i < n; ++i) {
        const double f0 = rng.normal();
        const double f1 = rng.normal();
        for (int c = 0; c < k; ++c) y(i, c) = a * (c < k / 2 ? f0 : f1) + b * rng.normal();
    }
    return y;
}

bool within_blocks_first(const Dendrogram& d, int k)
{
    std::vector<int> block(static_cast<std::size_t>(2 * k), -1);
    for (int i = 0; i < k; ++i) block[static_cast<std::size_t>(i)] = i < k / 2 ? 0 : 1;
    bool crossed = false;
    for (std::size_t i = 0; i < d.merges.size(); ++i) {
        const int bl = block[static_cast<std::size_t>(d.merges[i].left)];
        const int br = block[static_cast<std::size_t>(d.merges[i].right)];
        const auto id = static_cast<std::size_t>(k) + i;
        if (bl == br && bl != 2) {
            if (crossed) return false;
            block[id] = bl;
        } else {
            crossed = true;
            block[id] = 2;
        }
    }
    return true;
}

Verdict tree_learning(const Options&)
{
    const int k = 20;
    int ordered = 0;
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Rng rng(split_seed(707, static_cast<std::uint64_t>(trial)));
        const Dendrogram d = normalize_heights(
            agglomerative_cluster(correlation_distance(correlation_matrix(two_block_outputs(rng, 150, k, 0.8)))));
        if (within_blocks_first(d, k)) ++ordered;
        for (double rho : {0.7, 0.9, 1.0}) worst = std::max(worst, worst_leaf_sum_error(normalize_and_assign(d, rho)));
    }
    return {ordered >= 95 && worst <= 1e-12,
            std::to_string(ordered) + "/100 trials merge within blocks first, max |leaf sum - 1| = " + fmt(worst)};
}

Verdict cv_sanity(const Options& opt)
{
    SimulationSpec base;
    base.signal = 0.4;
    const std::vector<double> grid = log_grid(1e-2, 1e2, 9);
    double cv_total = 0.0;
    double best_total = 0.0;
    double worst_ratio = 0.0;
    for (int r = 0; r < 10; ++r) {
        const SimulatedData sim = generate_dataset(replicate_spec(base, r));
        SolverConfig c;
        const CvResult cv = cross_validate(sim.train, sim.tree, grid, 5, c, split_seed(base.seed, 0xC5 + r), opt.jobs);
        double best = std::numeric_limits<double>::infinity();
        double chosen = 0.0;
        for (double lambda : grid) {
            c.lambda = lambda;
            const double mse = test_mse(predict(sim.test.raw_x(), fit(sim.train, sim.tree, c)), sim.test.raw_y());
            best = std::min(best, mse);
            if (lambda == cv.best_lambda) chosen = mse;
        }
        cv_total += chosen;
        best_total += best;
        worst_ratio = std::max(worst_ratio, chosen / best);
        std::cerr << "  [cv] replicate " << r << " ratio " << fmt(chosen / best) << '\n';
    }
    const double ratio = cv_total / best_total;
    return {ratio <= 1.05, "10 replicates, mean CV-choice MSE / mean best-grid MSE = " + fmt(ratio)
                               + ", worst single replicate " + fmt(worst_ratio)};
}

Verdict round_trip(const Options&)
{
    SimulationSpec spec;
    spec.n_train = 250;
    spec.noise_sd = 0.0;
    const SimulatedData sim = generate_dataset(spec);
    SolverConfig c;
    c.lambda = 0.0;
    const FitResult f = fit(sim.train, sim.tree, c);
    const double err = (f.b - sim.b_true).cwiseAbs().maxCoeff();
    return {err <= 1e-6, "max |B_hat - B_true| = " + fmt(err)};
}

std::size_t data_rows(const fs::path& path)
{
    const std::string text = io::read_text(path);
    const auto lines = static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
    return lines == 0 ? 0 : lines - 1;
}

int run_cli(const fs::path& dir, const std::string& args)
{
    const std::string cmd = "cd '" + dir.string() + "' && '" + TGLASSO_CLI_PATH + "' " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict cli_end_to_end(const Options&)
{
    const fs::path dir = fs::temp_directory_path() / ("tglasso_accept_" + std::to_string(Rng(std::random_device{}()).next()));
    fs::create_directories(dir);
    const std::string spec = "--n-train 60 --n-test 20 --j-inputs 40 --k-outputs 12 --branching 2,3,2 "
                             "--active-levels 1,2 --signals 0.2,0.6 --replicates 2 --grid-points 3";
    std::vector<std::string> problems;
    if (run_cli(dir, "reproduce fig4 fig5 " + spec + " --out first") != 0) problems.push_back("reproduce failed");
    if (problems.empty() && run_cli(dir, "rerun first/manifest.json --out second") != 0) {
        problems.push_back("rerun failed");
    }
    const std::vector<std::string> files{"lambdas.csv",  "fig4_roc.csv",        "fig4_auc.csv",
                                         "fig4_summary.csv", "fig5_mse.csv", "fig5_replicates.csv"};
    if (problems.empty()) {
        for (const auto& f : files) {
            if (!fs::exists(dir / "first" / f)) {
                problems.push_back("missing " + f);
            } else if (io::read_text(dir / "first" / f) != io::read_text(dir / "second" / f)) {
                problems.push_back(f + " differs on rerun");
            }
        }
        if (!fs::exists(dir / "first/manifest.json")) problems.push_back("missing manifest");
    }
    if (problems.empty()) {
        const std::size_t curves = 5 * 2;
        if (data_rows(dir / "first/fig4_roc.csv") != curves * 101) problems.push_back("fig4_roc.csv incomplete");
        if (data_rows(dir / "first/fig4_auc.csv") != curves * 2) problems.push_back("fig4_auc.csv incomplete");
        if (data_rows(dir / "first/fig4_summary.csv") != curves) problems.push_back("fig4_summary.csv incomplete");
        if (data_rows(dir / "first/fig5_mse.csv") != curves) problems.push_back("fig5_mse.csv incomplete");
        if (data_rows(dir / "first/fig5_replicates.csv") != curves * 2) {
            problems.push_back("fig5_replicates.csv incomplete");
        }
    }
    std::error_code ec;
    fs::remove_all(dir, ec);
    std::string detail = "fig4/fig5 tables complete and rerun byte-identical";
    if (!problems.empty()) {
        detail.clear();
        for (const auto& p : problems) detail += (detail.empty() ? "" : "; ") + p;
    }
    return {problems.empty(), detail};
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Acceptance criteria for tree-guided group lasso"};
    std::vector<int> only;
    Options opt;
    opt.jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    app.add_option("--only", only, "Run only these criteria")->delimiter(',');
    app.add_option("--jobs", opt.jobs, "Parallel workers");
    app.add_option("--study-replicates", opt.study_replicates, "Replicates for criteria 5 and 6");
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<const char*, std::function<Verdict(const Options&)>>> criteria{
        {"leaf weight sums", weight_sum_suite},
        {"penalty equivalence", penalty_equivalence},
        {"oracle equivalence", oracle_equivalence},
        {"descent", descent},
        {"figure-4 AUC ordering", figure4},
        {"figure-5 MSE ordering", figure5},
        {"tree learning", tree_learning},
        {"cross-validation sanity", cv_sanity},
        {"round-trip", round_trip},
        {"CLI end-to-end", cli_end_to_end},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        Verdict v;
        Stopwatch clock;
        try {
            v = criteria[i].second(opt);
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        if (!v.pass) ++failures;
        std::cout << "criterion " << id << " [" << criteria[i].first << "]: " << (v.pass ? "PASS" : "FAIL") << " ("
                  << v.detail << ") " << fmt(clock.seconds(), 3) << " s" << std::endl;
    }
    return failures == 0 ? 0 : 1;
}
