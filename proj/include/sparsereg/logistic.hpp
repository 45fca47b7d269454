#pragma once

#include "sparsereg/data.hpp"
#include "sparsereg/lasso.hpp"

namespace sparsereg {

struct LogRegConfig {
    double lambda = 0.0;
    int max_outer = 100;
    double outer_tol = 1e-6;
    // Fitted probabilities are clamped to [prob_clamp, 1 - prob_clamp] before
    // forming working weights, keeping w_i bounded away from zero.
    double prob_clamp = 1e-5;
    // Template for the weighted least-squares subproblem. alpha, weights and
    // warm-start fields are overwritten on every outer iteration.
    LassoConfig inner;
    bool track_objective = false;
};

// (1/N) sum_i [y_i eta_i - log(1 + exp(eta_i))], eta = b0 + x.b
double log_likelihood(const EncodedDataset& ds, const LogisticModel& model);

// log_likelihood minus lambda * ||b||_1, the quantity the solver ascends.
double penalized_log_likelihood(const EncodedDataset& ds, const LogisticModel& model);

WorkingSet working_set(const EncodedDataset& ds, const LogisticModel& model, double epsilon);

// Outer IRLS loop: quadratic approximation at the current estimate, weighted
// lasso on the working response, step-halving toward the previous iterate
// when the penalized log-likelihood would drop.
LogisticModel fit(const EncodedDataset& ds, const LogRegConfig& cfg);

// Smallest penalty that forces every coefficient to zero.
double lambda_max(const EncodedDataset& ds);

}  // namespace sparsereg
