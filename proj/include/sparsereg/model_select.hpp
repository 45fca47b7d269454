#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sparsereg/data.hpp"

namespace sparsereg {

// One held-out evaluation: grid point x fold, plus the sampling scheme for
// classification (empty for mse scoring).
struct CvCell {
    std::size_t grid_index = 0;
    int fold = 0;
    std::string scheme;
    double score = 0.0;
};

struct CvReport {
    std::vector<double> grid;
    std::vector<double> mean_score;
    std::vector<double> std_error;
    double selected = 0.0;
    std::string score_kind;  // "mse" or "auc"
    std::string folding;     // "random" or "stratified"
    int k = 0;
    std::uint64_t seed = 0;
    std::vector<CvCell> cells;
};

// Random partition into k folds whose sizes differ by at most one.
std::vector<std::vector<Eigen::Index>> kfold_indices(Eigen::Index n, int k, std::uint64_t seed);

// Folds drawn per class, so every class keeps proportional representation.
std::vector<std::vector<Eigen::Index>> stratified_kfold_indices(const Vector& y, int k,
                                                                std::uint64_t seed);

// Mean squared held-out prediction error per grid point, pooled over all n
// rows. Selection takes the minimum, ties resolved toward the larger penalty.
// Fold fits standardize features within the training portion unless disabled.
CvReport cv_lasso(const EncodedDataset& ds, const std::vector<double>& grid, int k,
                  std::uint64_t seed, bool standardize_features = true);

// Per grid point and fold, fits on an oversampled, an undersampled and the
// original training portion, scores each by AUC on the held-out rows of the
// original distribution, and averages. Selection takes the maximum, ties
// toward the larger penalty.
CvReport cv_logreg(const EncodedDataset& ds, const std::vector<double>& grid, int k,
                   std::uint64_t seed, bool standardize_features = true);

// Squared sample correlation between predictions and outcomes.
double r2_out_of_sample(const Vector& y, const Vector& y_hat);

// 1 - residual sum of squares / total sum of squares.
double r2_in_sample(const Vector& y, const Vector& y_hat);

// Standardize, fit, map coefficients back to the original feature scale.
LinearModel train_lasso(const EncodedDataset& ds, double alpha,
                        bool standardize_features = true);
LogisticModel train_logreg(const EncodedDataset& ds, double lambda,
                           bool standardize_features = true);

}  // namespace sparsereg
