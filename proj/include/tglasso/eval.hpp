#pragma once
#include <vector>

#include <tglasso/data.hpp>

namespace tglasso {

struct SupportMetrics
{
    double sensitivity = 0.0;
    double specificity = 0.0;
    long true_positives = 0;
    long false_positives = 0;
    long true_negatives = 0;
    long false_negatives = 0;
};

/// (FPR, TPR) points from (0, 0) to (1, 1); thresholds[i] is the magnitude
/// cutoff that produced point i.
struct RocCurve
{
    std::vector<double> fpr;
    std::vector<double> tpr;
    std::vector<double> thresholds;
};

/// Replicate-averaged ROC curve on a fixed FPR grid.
struct MeanCurve
{
    std::vector<double> fpr;
    std::vector<double> tpr_mean;
    std::vector<double> tpr_se;
};

struct ScalarSummary
{
    double mean = 0.0;
    double se = 0.0;
    int count = 0;
};

/// Entry true iff |β^j_k| > tau.
BoolMatrix support_from_coefficients(const CoefficientMatrix& b, double tau);

/// 1e-4 · max|β̂|, the scale-free cutoff for a single operating point.
double default_support_threshold(const CoefficientMatrix& b_hat);

/// Confusion counts of `predicted` against the nonzero pattern of b_true.
SupportMetrics support_metrics(const BoolMatrix& predicted, const CoefficientMatrix& b_true);

/// Sweeps tau over the distinct values of |b_hat| from the top, plus a
/// sentinel below zero, giving one (FPR, TPR) point per cutoff. b_true must
/// contain at least one zero and one nonzero entry.
RocCurve roc_by_threshold(const CoefficientMatrix& b_hat, const CoefficientMatrix& b_true);

/// One point per fitted model along a λ path, each read at its default
/// support threshold, sorted by FPR and closed with (0,0) and (1,1).
RocCurve roc_by_lambda(const std::vector<CoefficientMatrix>& path, const CoefficientMatrix& b_true);

/// Trapezoidal area under the curve.
double auc(const RocCurve& curve);

/// Mean squared error over all entries.
double test_mse(const Matrix& y_pred, const Matrix& y_test);

/// TPR of `curve` at each FPR in `grid`: the highest TPR reached at exactly
/// that FPR, else linear interpolation between the neighbouring points.
std::vector<double> resample_tpr(const RocCurve& curve, const std::vector<double>& grid);

/// Vertical averaging on `grid_points` evenly spaced FPR values in [0, 1].
MeanCurve aggregate_curves(const std::vector<RocCurve>& curves, int grid_points = 101);

/// Mean and standard error (sample sd / √R; zero for R = 1).
ScalarSummary aggregate_scalars(const std::vector<double>& values);

} // namespace tglasso
