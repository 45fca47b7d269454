#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sparsereg {

using Matrix = Eigen::MatrixXd;  // column-major
using Vector = Eigen::VectorXd;

// Dense design matrix plus response, feature names and row identifiers.
// Immutable after construction by convention; all fitting routines take it
// by const reference.
struct EncodedDataset {
    Matrix x;
    Vector y;
    std::vector<std::string> feature_names;
    std::vector<std::string> row_ids;

    Eigen::Index n_rows() const { return x.rows(); }
    Eigen::Index n_features() const { return x.cols(); }

    // Throws std::invalid_argument on any violated invariant: empty data,
    // non-finite entries, mismatched lengths, duplicate feature names.
    void validate() const;

    // Additional check for classification use: every y must be exactly 0 or 1.
    bool binary_target() const;

    EncodedDataset subset(const std::vector<Eigen::Index>& rows) const;
};

struct LinearModel {
    double intercept = 0.0;
    Vector coefficients;
    double alpha = 0.0;
    std::vector<std::string> feature_names;
    int n_iterations = 0;
    bool converged = false;
    // Objective value after each full sweep, filled when requested in the
    // solver config.
    std::vector<double> objective_trace;
};

struct LogisticModel {
    double intercept = 0.0;
    Vector coefficients;
    double lambda = 0.0;
    std::vector<std::string> feature_names;
    int n_outer_iterations = 0;
    bool converged = false;
    // Penalized log-likelihood after each outer iteration.
    std::vector<double> objective_trace;
};

// Quadratic-approximation quantities for one IRLS step: working response z,
// working weights w = p(1-p), and the clamped fitted probabilities.
struct WorkingSet {
    Vector z;
    Vector w;
    Vector p_hat;
};

Vector predict_linear(const LinearModel& model, const Matrix& x);

// Fitted probabilities 1/(1+exp(-(b0 + x.b))); strictly inside (0,1).
Vector predict_proba(const LogisticModel& model, const Matrix& x);

}  // namespace sparsereg
