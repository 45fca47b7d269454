#include "sparsereg/data.hpp"

#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "sparsereg/common.hpp"

namespace sparsereg {

void EncodedDataset::validate() const {
    if (x.rows() < 1 || x.cols() < 1)
        throw std::invalid_argument("dataset must have at least one row and one feature");
    if (y.size() != x.rows())
        throw std::invalid_argument("response length " + std::to_string(y.size()) +
                                    " does not match row count " + std::to_string(x.rows()));
    if (static_cast<Eigen::Index>(feature_names.size()) != x.cols())
        throw std::invalid_argument("feature_names length " + std::to_string(feature_names.size()) +
                                    " does not match column count " + std::to_string(x.cols()));
    if (!row_ids.empty() && static_cast<Eigen::Index>(row_ids.size()) != x.rows())
        throw std::invalid_argument("row_ids length does not match row count");
    if (!x.allFinite()) {
        for (Eigen::Index j = 0; j < x.cols(); ++j)
            for (Eigen::Index i = 0; i < x.rows(); ++i)
                if (!std::isfinite(x(i, j)))
                    throw std::invalid_argument("non-finite value in column '" + feature_names[j] +
                                                "', row " + std::to_string(i));
    }
    if (!y.allFinite()) throw std::invalid_argument("non-finite value in response");
    std::unordered_set<std::string> seen;
    for (const auto& name : feature_names)
        if (!seen.insert(name).second)
            throw std::invalid_argument("duplicate feature name '" + name + "'");
}

bool EncodedDataset::binary_target() const {
    for (Eigen::Index i = 0; i < y.size(); ++i)
        if (y(i) != 0.0 && y(i) != 1.0) return false;
    return true;
}

EncodedDataset EncodedDataset::subset(const std::vector<Eigen::Index>& rows) const {
    EncodedDataset out;
    out.x.resize(static_cast<Eigen::Index>(rows.size()), x.cols());
    out.y.resize(static_cast<Eigen::Index>(rows.size()));
    out.feature_names = feature_names;
    out.row_ids.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Eigen::Index r = rows[i];
        if (r < 0 || r >= x.rows()) throw std::invalid_argument("row index out of range");
        out.x.row(static_cast<Eigen::Index>(i)) = x.row(r);
        out.y(static_cast<Eigen::Index>(i)) = y(r);
        if (!row_ids.empty()) out.row_ids.push_back(row_ids[static_cast<std::size_t>(r)]);
    }
    return out;
}

static void check_dims(Eigen::Index model_p, Eigen::Index x_cols) {
    if (model_p != x_cols)
        throw std::invalid_argument("dimension mismatch: model has " + std::to_string(model_p) +
                                    " coefficients, matrix has " + std::to_string(x_cols) +
                                    " columns");
}

Vector predict_linear(const LinearModel& model, const Matrix& x) {
    check_dims(model.coefficients.size(), x.cols());
    Vector out = x * model.coefficients;
    out.array() += model.intercept;
    return out;
}

Vector predict_proba(const LogisticModel& model, const Matrix& x) {
    check_dims(model.coefficients.size(), x.cols());
    Vector eta = x * model.coefficients;
    eta.array() += model.intercept;
    Vector out(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) out(i) = sigmoid(eta(i));
    return out;
}

}  // namespace sparsereg
