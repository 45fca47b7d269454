#include "sparsereg/model_select.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sparsereg/common.hpp"
#include "sparsereg/encode.hpp"
#include "sparsereg/lasso.hpp"
#include "sparsereg/logistic.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/resample.hpp"

namespace sparsereg {

std::vector<std::vector<Eigen::Index>> kfold_indices(Eigen::Index n, int k, std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (static_cast<Eigen::Index>(k) > n)
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds row count " +
                                    std::to_string(n));
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto rng = make_rng(derive_seed(seed, 0xF01D5ULL));
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
    const std::size_t base = static_cast<std::size_t>(n) / static_cast<std::size_t>(k);
    const std::size_t extra = static_cast<std::size_t>(n) % static_cast<std::size_t>(k);
    std::size_t pos = 0;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const std::size_t size = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                        order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        std::sort(folds[f].begin(), folds[f].end());
        pos += size;
    }
    return folds;
}

std::vector<std::vector<Eigen::Index>> stratified_kfold_indices(const Vector& y, int k,
                                                                std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("k must be >= 2");
    if (static_cast<Eigen::Index>(k) > y.size())
        throw std::invalid_argument("k = " + std::to_string(k) + " exceeds row count " +
                                    std::to_string(y.size()));
    std::vector<Eigen::Index> zeros, ones;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y(i) == 0.0) {
            zeros.push_back(i);
        } else if (y(i) == 1.0) {
            ones.push_back(i);
        } else {
            throw std::invalid_argument("stratified folds require a 0/1 response");
        }
    }
    auto rng = make_rng(derive_seed(seed, 0x57247ULL));
    std::shuffle(zeros.begin(), zeros.end(), rng);
    std::shuffle(ones.begin(), ones.end(), rng);

    // Round-robin per class, remainders piling on opposite ends so overall
    // fold sizes still differ by at most one.
    std::vector<std::vector<Eigen::Index>> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < zeros.size(); ++i)
        folds[i % static_cast<std::size_t>(k)].push_back(zeros[i]);
    for (std::size_t i = 0; i < ones.size(); ++i)
        folds[static_cast<std::size_t>(k) - 1 - i % static_cast<std::size_t>(k)].push_back(
            ones[i]);
    for (auto& fold : folds) std::sort(fold.begin(), fold.end());
    return folds;
}

static std::vector<Eigen::Index> complement_rows(
    const std::vector<std::vector<Eigen::Index>>& folds, std::size_t held_out) {
    std::vector<Eigen::Index> rows;
    for (std::size_t f = 0; f < folds.size(); ++f)
        if (f != held_out) rows.insert(rows.end(), folds[f].begin(), folds[f].end());
    std::sort(rows.begin(), rows.end());
    return rows;
}

// Selection scans mean scores in grid order; on ties the larger penalty wins.
static std::size_t select_index(const std::vector<double>& grid,
                                const std::vector<double>& mean_score, bool minimize) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const bool better = minimize ? mean_score[i] < mean_score[best]
                                     : mean_score[i] > mean_score[best];
        if (better || (mean_score[i] == mean_score[best] && grid[i] > grid[best])) best = i;
    }
    return best;
}

static std::vector<double> fold_standard_errors(const std::vector<std::vector<double>>& fold_means,
                                                std::size_t n_grid) {
    const std::size_t k = fold_means.size();
    std::vector<double> se(n_grid, 0.0);
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        double mean = 0.0;
        for (std::size_t f = 0; f < k; ++f) mean += fold_means[f][gi];
        mean /= static_cast<double>(k);
        double ss = 0.0;
        for (std::size_t f = 0; f < k; ++f) {
            const double d = fold_means[f][gi] - mean;
            ss += d * d;
        }
        const double var = ss / static_cast<double>(k - 1);
        se[gi] = std::sqrt(var / static_cast<double>(k));
    }
    return se;
}

CvReport cv_lasso(const EncodedDataset& ds, const std::vector<double>& grid, int k,
                  std::uint64_t seed, bool standardize_features) {
    ds.validate();
    if (grid.empty()) throw std::invalid_argument("alpha grid is empty");
    for (const double alpha : grid)
        if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");

    const auto folds = kfold_indices(ds.n_rows(), k, seed);
    const std::size_t n_grid = grid.size();

    // Solve each fold's path from the largest alpha down, warm-starting, so
    // the report does not depend on the order of the input grid.
    std::vector<std::size_t> path(n_grid);
    std::iota(path.begin(), path.end(), std::size_t{0});
    std::sort(path.begin(), path.end(),
              [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });

    std::vector<double> pooled_sq(n_grid, 0.0);
    std::vector<std::vector<double>> fold_means(folds.size(), std::vector<double>(n_grid, 0.0));
    CvReport report;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        EncodedDataset train = ds.subset(complement_rows(folds, f));
        const EncodedDataset test = ds.subset(folds[f]);
        Standardization scaling;
        if (standardize_features) {
            auto scaled = standardize(train);
            train = std::move(scaled.first);
            scaling = std::move(scaled.second);
        }

        LassoConfig cfg;
        for (const std::size_t gi : path) {
            try {
                cfg.alpha = grid[gi];
                LinearModel fitted = fit(train, cfg);
                cfg.init_intercept = fitted.intercept;
                cfg.init_coefficients = fitted.coefficients;
                const LinearModel on_raw =
                    standardize_features ? destandardize(fitted, scaling) : fitted;
                const Vector pred = predict_linear(on_raw, test.x);
                double sq = 0.0;
                for (Eigen::Index i = 0; i < test.y.size(); ++i) {
                    const double r = test.y(i) - pred(i);
                    sq += r * r;
                }
                pooled_sq[gi] += sq;
                fold_means[f][gi] = sq / static_cast<double>(test.y.size());
            } catch (const std::exception& e) {
                throw std::runtime_error("cv fold " + std::to_string(f) + ", alpha=" +
                                         std::to_string(grid[gi]) + ": " + e.what());
            }
        }
    }

    report.grid = grid;
    report.score_kind = "mse";
    report.folding = "random";
    report.k = k;
    report.seed = seed;
    report.mean_score.resize(n_grid);
    for (std::size_t gi = 0; gi < n_grid; ++gi)
        report.mean_score[gi] = pooled_sq[gi] / static_cast<double>(ds.n_rows());
    report.std_error = fold_standard_errors(fold_means, n_grid);
    report.selected = grid[select_index(grid, report.mean_score, true)];
    for (std::size_t f = 0; f < folds.size(); ++f)
        for (std::size_t gi = 0; gi < n_grid; ++gi)
            report.cells.push_back({gi, static_cast<int>(f), "", fold_means[f][gi]});
    return report;
}

CvReport cv_logreg(const EncodedDataset& ds, const std::vector<double>& grid, int k,
                   std::uint64_t seed, bool standardize_features) {
    ds.validate();
    if (grid.empty()) throw std::invalid_argument("lambda grid is empty");
    for (const double lambda : grid)
        if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (!ds.binary_target())
        throw std::invalid_argument("classification cv requires a 0/1 response");

    const auto folds = stratified_kfold_indices(ds.y, k, seed);
    const std::size_t n_grid = grid.size();
    constexpr SamplingScheme kSchemes[] = {SamplingScheme::oversample_minority,
                                           SamplingScheme::undersample_majority,
                                           SamplingScheme::original};

    std::vector<std::vector<double>> fold_means(folds.size(), std::vector<double>(n_grid, 0.0));
    CvReport report;
    for (std::size_t f = 0; f < folds.size(); ++f) {
        const EncodedDataset train = ds.subset(complement_rows(folds, f));
        const EncodedDataset test = ds.subset(folds[f]);
        for (std::size_t gi = 0; gi < n_grid; ++gi) {
            double scheme_sum = 0.0;
            for (const SamplingScheme scheme : kSchemes) {
                try {
                    SamplingConfig cfg;
                    cfg.scheme = scheme;
                    cfg.gamma = 1.0;
                    cfg.seed = derive_seed(seed, static_cast<std::uint64_t>(f),
                                           double_bits(grid[gi]),
                                           static_cast<std::uint64_t>(scheme) + 1);
                    const EncodedDataset sample = resample(train, cfg);
                    const LogisticModel model =
                        train_logreg(sample, grid[gi], standardize_features);
                    const double auc = roc(test.y, predict_proba(model, test.x)).auc;
                    scheme_sum += auc;
                    report.cells.push_back(
                        {gi, static_cast<int>(f), scheme_name(scheme), auc});
                } catch (const std::exception& e) {
                    throw std::runtime_error("cv fold " + std::to_string(f) + ", lambda=" +
                                             std::to_string(grid[gi]) + ", scheme " +
                                             scheme_name(scheme) + ": " + e.what());
                }
            }
            fold_means[f][gi] = scheme_sum / 3.0;
        }
    }

    report.grid = grid;
    report.score_kind = "auc";
    report.folding = "stratified";
    report.k = k;
    report.seed = seed;
    report.mean_score.assign(n_grid, 0.0);
    for (std::size_t gi = 0; gi < n_grid; ++gi) {
        for (std::size_t f = 0; f < folds.size(); ++f)
            report.mean_score[gi] += fold_means[f][gi];
        report.mean_score[gi] /= static_cast<double>(folds.size());
    }
    report.std_error = fold_standard_errors(fold_means, n_grid);
    report.selected = grid[select_index(grid, report.mean_score, false)];
    return report;
}

double r2_out_of_sample(const Vector& y, const Vector& y_hat) {
    if (y.size() != y_hat.size()) throw std::invalid_argument("length mismatch");
    if (y.size() < 2) throw std::invalid_argument("need at least 2 observations");
    const auto n = static_cast<double>(y.size());
    double my = 0.0, mh = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        my += y(i);
        mh += y_hat(i);
    }
    my /= n;
    mh /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double dy = y(i) - my;
        const double dh = y_hat(i) - mh;
        sxy += dy * dh;
        sxx += dh * dh;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw std::invalid_argument("undefined correlation for constant input");
    return std::min(1.0, (sxy * sxy) / (sxx * syy));
}

double r2_in_sample(const Vector& y, const Vector& y_hat) {
    if (y.size() != y_hat.size()) throw std::invalid_argument("length mismatch");
    if (y.size() < 2) throw std::invalid_argument("need at least 2 observations");
    double mean = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) mean += y(i);
    mean /= static_cast<double>(y.size());
    double rss = 0.0, tss = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double e = y(i) - y_hat(i);
        const double d = y(i) - mean;
        rss += e * e;
        tss += d * d;
    }
    if (tss == 0.0) throw std::invalid_argument("constant response");
    return 1.0 - rss / tss;
}

LinearModel train_lasso(const EncodedDataset& ds, double alpha, bool standardize_features) {
    LassoConfig cfg;
    cfg.alpha = alpha;
    if (!standardize_features) return fit(ds, cfg);
    const auto [sds, scaling] = standardize(ds);
    return destandardize(fit(sds, cfg), scaling);
}

LogisticModel train_logreg(const EncodedDataset& ds, double lambda, bool standardize_features) {
    LogRegConfig cfg;
    cfg.lambda = lambda;
    if (!standardize_features) return fit(ds, cfg);
    const auto [sds, scaling] = standardize(ds);
    return destandardize(fit(sds, cfg), scaling);
}

}  // namespace sparsereg
