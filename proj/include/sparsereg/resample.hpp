#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsereg/data.hpp"

namespace sparsereg {

enum class SamplingScheme { original, oversample_minority, undersample_majority };

std::string scheme_name(SamplingScheme scheme);
SamplingScheme scheme_from_name(const std::string& name);

struct SamplingConfig {
    SamplingScheme scheme = SamplingScheme::original;
    // 0 keeps the original class balance, 1 targets a 50/50 split; the
    // minority proportion interpolates linearly in between.
    double gamma = 1.0;
    std::uint64_t seed = 0;
};

// Rebalances a binary-target dataset by row multiplicity only. Oversampling
// keeps every row and appends minority draws with replacement; undersampling
// keeps all minority rows and a without-replacement subset of the majority,
// both preserving original row order.
EncodedDataset resample(const EncodedDataset& ds, const SamplingConfig& cfg);

struct SweepCell {
    double lambda = 0.0;
    double gamma = 0.0;
    SamplingScheme scheme = SamplingScheme::original;
    double auc = 0.0;
};

struct SamplingSweepReport {
    std::vector<SweepCell> cells;
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

// Single train/test split, then one penalized logistic fit per
// (lambda, gamma, scheme) cell on the resampled training rows, scored by AUC
// on the untouched test rows. The original scheme ignores gamma, so its fit
// runs once per lambda and the score is replicated across the gamma grid.
SamplingSweepReport sweep(const EncodedDataset& ds, const std::vector<double>& lambda_set,
                          const std::vector<double>& gamma_grid,
                          const std::vector<SamplingScheme>& schemes, double test_fraction,
                          std::uint64_t seed);

}  // namespace sparsereg
