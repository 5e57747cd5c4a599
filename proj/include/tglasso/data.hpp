#pragma once
#include <Eigen/Dense>

#include <vector>

namespace tglasso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// J×K regression coefficients. Row j is β^j (input j across all outputs),
/// column k is β_k.
using CoefficientMatrix = Eigen::MatrixXd;

/**
 * Paired input/output samples.
 *
 * x is N×J, y is N×K. When `centered` is set, x and y hold the centered
 * columns and x_means / y_means the column means that were removed.
 * Otherwise the means are zero and the matrices are raw.
 */
struct DataSet
{
    Matrix x;
    Matrix y;
    Vector x_means;
    Vector y_means;
    bool centered = false;

    Eigen::Index num_samples() const { return x.rows(); }
    Eigen::Index num_inputs() const { return x.cols(); }
    Eigen::Index num_outputs() const { return y.cols(); }

    /// Raw, uncentered data set. Requires N ≥ 2, J ≥ 1, K ≥ 1 and matching
    /// row counts; throws DimensionError otherwise.
    static DataSet from_raw(Matrix x, Matrix y);

    /// The uncentered matrices (adds the stored means back if centered).
    Matrix raw_x() const;
    Matrix raw_y() const;

    /// Rows `rows` of the raw data as a new uncentered data set.
    DataSet subset(const std::vector<Eigen::Index>& rows) const;
};

/// Removes column means from x and y and records them. The data must not be
/// centered already (InputError); a zero-row matrix is a DimensionError.
DataSet center_columns(const DataSet& data);

/// Centered copy of `data`, or `data` itself if it is already centered.
DataSet ensure_centered(const DataSet& data);

/// Throws InputError naming `what` if any entry is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

} // namespace tglasso
