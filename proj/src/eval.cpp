#include <tglasso/eval.hpp>
#include <tglasso/errors.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace tglasso {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* what)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(what) + ": shapes " + std::to_string(a.rows()) + "x"
                             + std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x"
                             + std::to_string(b.cols()) + " differ");
    }
}

struct Counts
{
    long positives = 0;
    long negatives = 0;
};

Counts count_truth(const CoefficientMatrix& b_true)
{
    Counts c;
    c.positives = static_cast<long>((b_true.array() != 0.0).count());
    c.negatives = static_cast<long>(b_true.size()) - c.positives;
    if (c.positives == 0 || c.negatives == 0) {
        throw InputError("true coefficients need both zero and nonzero entries for ROC rates to be defined");
    }
    return c;
}

} // namespace

BoolMatrix support_from_coefficients(const CoefficientMatrix& b, double tau)
{
    if (!(tau >= 0.0)) throw ConfigError("support threshold must be ≥ 0");
    return (b.array().abs() > tau).matrix();
}

double default_support_threshold(const CoefficientMatrix& b_hat)
{
    return b_hat.size() == 0 ? 0.0 : 1e-4 * b_hat.cwiseAbs().maxCoeff();
}

SupportMetrics support_metrics(const BoolMatrix& predicted, const CoefficientMatrix& b_true)
{
    if (predicted.rows() != b_true.rows() || predicted.cols() != b_true.cols()) {
        throw DimensionError("support and true coefficients differ in shape");
    }
    SupportMetrics m;
    for (Eigen::Index j = 0; j < b_true.rows(); ++j) {
        for (Eigen::Index k = 0; k < b_true.cols(); ++k) {
            const bool truth = b_true(j, k) != 0.0;
            const bool hit = predicted(j, k);
            if (truth && hit) ++m.true_positives;
            else if (truth) ++m.false_negatives;
            else if (hit) ++m.false_positives;
            else ++m.true_negatives;
        }
    }
    const long p = m.true_positives + m.false_negatives;
    const long n = m.true_negatives + m.false_positives;
    m.sensitivity = p > 0 ? static_cast<double>(m.true_positives) / static_cast<double>(p) : 0.0;
    m.specificity = n > 0 ? static_cast<double>(m.true_negatives) / static_cast<double>(n) : 0.0;
    return m;
}

RocCurve roc_by_threshold(const CoefficientMatrix& b_hat, const CoefficientMatrix& b_true)
{
    require_same_shape(b_hat, b_true, "roc_by_threshold");
    const Counts totals = count_truth(b_true);

    const auto n = static_cast<std::size_t>(b_hat.size());
    std::vector<double> mag(n);
    std::vector<char> truth(n);
    for (std::size_t i = 0; i < n; ++i) {
        mag[i] = std::abs(b_hat.data()[i]);
        truth[i] = b_true.data()[i] != 0.0;
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    RocCurve curve;
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    curve.thresholds.push_back(mag[order.front()]);
    long tp = 0;
    long fp = 0;
    for (std::size_t i = 0; i < n;) {
        const double value = mag[order[i]];
        while (i < n && mag[order[i]] == value) {
            (truth[order[i]] ? tp : fp) += 1;
            ++i;
        }
        curve.fpr.push_back(static_cast<double>(fp) / static_cast<double>(totals.negatives));
        curve.tpr.push_back(static_cast<double>(tp) / static_cast<double>(totals.positives));
        curve.thresholds.push_back(i < n ? mag[order[i]] : -1.0);
    }
    return curve;
}

RocCurve roc_by_lambda(const std::vector<CoefficientMatrix>& path, const CoefficientMatrix& b_true)
{
    count_truth(b_true);
    std::vector<std::pair<double, double>> pts{{0.0, 0.0}, {1.0, 1.0}};
    std::vector<double> cut{std::numeric_limits<double>::infinity(), -1.0};
    for (const auto& b : path) {
        require_same_shape(b, b_true, "roc_by_lambda");
        const double tau = default_support_threshold(b);
        const SupportMetrics m = support_metrics(support_from_coefficients(b, tau), b_true);
        pts.emplace_back(1.0 - m.specificity, m.sensitivity);
        cut.push_back(tau);
    }
    std::vector<std::size_t> order(pts.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return pts[a] < pts[b]; });
    RocCurve curve;
    for (std::size_t i : order) {
        curve.fpr.push_back(pts[i].first);
        curve.tpr.push_back(pts[i].second);
        curve.thresholds.push_back(cut[i]);
    }
    return curve;
}

double auc(const RocCurve& curve)
{
    double area = 0.0;
    for (std::size_t i = 1; i < curve.fpr.size(); ++i) {
        area += (curve.fpr[i] - curve.fpr[i - 1]) * (curve.tpr[i] + curve.tpr[i - 1]) * 0.5;
    }
    return area;
}

double test_mse(const Matrix& y_pred, const Matrix& y_test)
{
    require_same_shape(y_pred, y_test, "test_mse");
    if (y_pred.size() == 0) throw DimensionError("test_mse of empty matrices");
    return (y_pred - y_test).squaredNorm() / static_cast<double>(y_pred.size());
}

std::vector<double> resample_tpr(const RocCurve& curve, const std::vector<double>& grid)
{
    std::vector<double> out;
    out.reserve(grid.size());
    const auto& f = curve.fpr;
    for (double x : grid) {
        // First point with fpr > x; everything before has fpr ≤ x.
        const auto hi = static_cast<std::size_t>(std::upper_bound(f.begin(), f.end(), x) - f.begin());
        if (hi == 0) {
            out.push_back(curve.tpr.front());
        } else if (f[hi - 1] == x || hi == f.size()) {
            out.push_back(curve.tpr[hi - 1]);
        } else {
            const std::size_t lo = hi - 1;
            const double t = (x - f[lo]) / (f[hi] - f[lo]);
            out.push_back(curve.tpr[lo] + t * (curve.tpr[hi] - curve.tpr[lo]));
        }
    }
    return out;
}

MeanCurve aggregate_curves(const std::vector<RocCurve>& curves, int grid_points)
{
    if (curves.empty()) throw InputError("no replicate curves to aggregate");
    if (grid_points < 2) throw ConfigError("FPR grid needs at least 2 points");
    MeanCurve mean;
    for (int i = 0; i < grid_points; ++i) {
        mean.fpr.push_back(static_cast<double>(i) / static_cast<double>(grid_points - 1));
    }
    std::vector<std::vector<double>> columns(mean.fpr.size());
    for (const auto& c : curves) {
        const auto tpr = resample_tpr(c, mean.fpr);
        for (std::size_t i = 0; i < tpr.size(); ++i) columns[i].push_back(tpr[i]);
    }
    for (const auto& col : columns) {
        const ScalarSummary s = aggregate_scalars(col);
        mean.tpr_mean.push_back(s.mean);
        mean.tpr_se.push_back(s.se);
    }
    return mean;
}

ScalarSummary aggregate_scalars(const std::vector<double>& values)
{
    if (values.empty()) throw InputError("no replicate values to aggregate");
    ScalarSummary s;
    s.count = static_cast<int>(values.size());
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*lo == *hi) {
        s.mean = *lo;
        return s;
    }
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.count;
    if (s.count > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.se = std::sqrt(ss / (s.count - 1)) / std::sqrt(static_cast<double>(s.count));
    }
    return s;
}

} // namespace tglasso
