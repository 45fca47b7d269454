#pragma once

#include <optional>

#include "sparsereg/data.hpp"

namespace sparsereg {

struct LassoConfig {
    double alpha = 0.0;
    int max_sweeps = 10000;
    double tol = 1e-7;
    // Observation weights, all 1 when absent. Length must equal the row count.
    std::optional<Vector> weights;
    // Warm start. Both fields must be set together.
    std::optional<double> init_intercept;
    std::optional<Vector> init_coefficients;
    bool track_objective = false;
};

// sign(z) * max(|z| - gamma, 0)
double soft_threshold(double z, double gamma);

// (1/2N) sum_i w_i (y_i - b0 - x_i.b)^2 + alpha * ||b||_1
double objective(const EncodedDataset& ds, const LinearModel& model, const Vector& weights);
double objective(const EncodedDataset& ds, const LinearModel& model);

// Cyclic coordinate descent with soft-thresholding. The intercept is
// unpenalized and refreshed at the start of every sweep as the weighted mean
// of the residual taken without the intercept term. Converged means the max
// coefficient change fell to tol AND the KKT residual fell to 10*tol within
// the sweep budget.
LinearModel fit(const EncodedDataset& ds, const LassoConfig& cfg);

// Max stationarity violation: |g_j - alpha*sign(b_j)| on active coordinates,
// max(|g_j| - alpha, 0) on inactive ones, g_j = (1/N) sum_i w_i x_ij r_i.
double kkt_residual(const EncodedDataset& ds, const LinearModel& model, const Vector& weights);
double kkt_residual(const EncodedDataset& ds, const LinearModel& model);

// Smallest penalty at which the fit is fully shrunk: max_j |(1/N) sum_i
// w_i x_ij (y_i - weighted mean y)|.
double alpha_max(const EncodedDataset& ds, const Vector& weights);
double alpha_max(const EncodedDataset& ds);

}  // namespace sparsereg
