#pragma once

#include <cstdint>

#include "sparsereg/data.hpp"

namespace sparsereg {

enum class TaskKind { linear, logistic };

// Recipe for a synthetic regression or classification dataset with a known
// sparse ground-truth model.
struct SyntheticSpec {
    Eigen::Index n = 100;
    Eigen::Index p = 10;
    Eigen::Index sparsity = 5;   // nonzero entries in the true coefficient vector
    double noise = 1.0;          // gaussian noise sd, linear kind only
    double imbalance = 0.5;      // target positive rate, logistic kind only
    TaskKind kind = TaskKind::linear;
};

struct SyntheticData {
    EncodedDataset dataset;
    Vector true_coefficients;
    double true_intercept = 0.0;
};

// Features are iid standard normal. The true model has `sparsity` nonzero
// coefficients with magnitudes in [1,2] and random signs on a random support.
// Linear kind adds gaussian noise; logistic kind draws Bernoulli labels with
// the intercept tuned so the mean fitted probability equals `imbalance`.
SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace sparsereg
