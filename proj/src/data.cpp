#include <tglasso/data.hpp>
#include <tglasso/errors.hpp>

#include <string>

namespace tglasso {

DataSet DataSet::from_raw(Matrix x, Matrix y)
{
    if (x.rows() != y.rows()) {
        throw DimensionError("x has " + std::to_string(x.rows()) + " rows but y has "
                             + std::to_string(y.rows()));
    }
    if (x.rows() < 2) {
        throw DimensionError("need at least 2 samples, got " + std::to_string(x.rows()));
    }
    if (x.cols() < 1 || y.cols() < 1) {
        throw DimensionError("need at least one input and one output column");
    }
    DataSet d;
    d.x_means = Vector::Zero(x.cols());
    d.y_means = Vector::Zero(y.cols());
    d.x = std::move(x);
    d.y = std::move(y);
    return d;
}

Matrix DataSet::raw_x() const
{
    if (!centered) return x;
    return x.rowwise() + x_means.transpose();
}

Matrix DataSet::raw_y() const
{
    if (!centered) return y;
    return y.rowwise() + y_means.transpose();
}

DataSet DataSet::subset(const std::vector<Eigen::Index>& rows) const
{
    Matrix rx = raw_x();
    Matrix ry = raw_y();
    Matrix sx(static_cast<Eigen::Index>(rows.size()), rx.cols());
    Matrix sy(static_cast<Eigen::Index>(rows.size()), ry.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        sx.row(static_cast<Eigen::Index>(i)) = rx.row(rows[i]);
        sy.row(static_cast<Eigen::Index>(i)) = ry.row(rows[i]);
    }
    return from_raw(std::move(sx), std::move(sy));
}

DataSet center_columns(const DataSet& data)
{
    if (data.centered) {
        throw InputError("data set is already centered");
    }
    if (data.x.rows() == 0 || data.y.rows() == 0) {
        throw DimensionError("cannot center a zero-row matrix");
    }
    if (data.x.rows() != data.y.rows()) {
        throw DimensionError("x and y row counts differ");
    }
    DataSet out;
    out.x_means = data.x.colwise().mean().transpose();
    out.y_means = data.y.colwise().mean().transpose();
    out.x = data.x.rowwise() - out.x_means.transpose();
    out.y = data.y.rowwise() - out.y_means.transpose();
    out.centered = true;
    return out;
}

DataSet ensure_centered(const DataSet& data)
{
    return data.centered ? data : center_columns(data);
}

void require_finite(const Matrix& m, const char* what)
{
    if (!m.allFinite()) {
        throw InputError(std::string(what) + " contains non-finite values");
    }
}

} // namespace tglasso
