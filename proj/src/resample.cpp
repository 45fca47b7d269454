#include "sparsereg/resample.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sparsereg/common.hpp"
#include "sparsereg/data.hpp"
#include "sparsereg/encode.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/model_select.hpp"

namespace sparsereg {

std::string scheme_name(SamplingScheme scheme) {
    switch (scheme) {
        case SamplingScheme::original: return "original";
        case SamplingScheme::oversample_minority: return "oversample_minority";
        case SamplingScheme::undersample_majority: return "undersample_majority";
    }
    throw std::logic_error("unknown sampling scheme");
}

SamplingScheme scheme_from_name(const std::string& name) {
    if (name == "original") return SamplingScheme::original;
    if (name == "oversample_minority") return SamplingScheme::oversample_minority;
    if (name == "undersample_majority") return SamplingScheme::undersample_majority;
    throw std::invalid_argument("unknown sampling scheme '" + name + "'");
}

EncodedDataset resample(const EncodedDataset& ds, const SamplingConfig& cfg) {
    if (!(cfg.gamma >= 0.0 && cfg.gamma <= 1.0))
        throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!ds.binary_target()) throw std::invalid_argument("resample requires a 0/1 target");

    std::vector<Eigen::Index> ones, zeros;
    for (Eigen::Index i = 0; i < ds.n_rows(); ++i)
        (ds.y(i) == 1.0 ? ones : zeros).push_back(i);
    if (ones.empty() || zeros.empty())
        throw std::invalid_argument("resample requires both classes present");

    if (cfg.scheme == SamplingScheme::original || cfg.gamma == 0.0) return ds;

    // Count ties make class 1 the minority.
    const bool minority_is_one = ones.size() <= zeros.size();
    const auto& minority = minority_is_one ? ones : zeros;
    const auto& majority = minority_is_one ? zeros : ones;
    const double m = static_cast<double>(minority.size());
    const double total = static_cast<double>(ds.n_rows());
    const double pi0 = m / total;
    const double pi = pi0 + cfg.gamma * (0.5 - pi0);

    auto rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(cfg.scheme) + 1,
                                    double_bits(cfg.gamma)));

    if (cfg.scheme == SamplingScheme::oversample_minority) {
        const double extra_real = (pi * total - m) / (1.0 - pi);
        const auto extra =
            static_cast<Eigen::Index>(std::max(0.0, std::ceil(extra_real - 1e-12)));
        std::vector<Eigen::Index> rows(static_cast<std::size_t>(ds.n_rows()));
        std::iota(rows.begin(), rows.end(), Eigen::Index{0});
        std::uniform_int_distribution<std::size_t> pick(0, minority.size() - 1);
        for (Eigen::Index t = 0; t < extra; ++t) rows.push_back(minority[pick(rng)]);
        return ds.subset(rows);
    }

    // undersample_majority
    const double keep_real = m * (1.0 - pi) / pi;
    auto keep = static_cast<std::size_t>(std::floor(keep_real + 0.5));
    keep = std::min(keep, majority.size());
    std::vector<Eigen::Index> shuffled = majority;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    std::vector<Eigen::Index> rows(minority.begin(), minority.end());
    rows.insert(rows.end(), shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(keep));
    std::sort(rows.begin(), rows.end());
    return ds.subset(rows);
}

SamplingSweepReport sweep(const EncodedDataset& ds, const std::vector<double>& lambda_set,
                          const std::vector<double>& gamma_grid,
                          const std::vector<SamplingScheme>& schemes, double test_fraction,
                          std::uint64_t seed) {
    if (lambda_set.empty()) throw std::invalid_argument("lambda set is empty");
    if (gamma_grid.empty()) throw std::invalid_argument("gamma grid is empty");
    if (schemes.empty()) throw std::invalid_argument("scheme list is empty");
    for (const double lambda : lambda_set)
        if (lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    for (const double gamma : gamma_grid)
        if (!(gamma >= 0.0 && gamma <= 1.0))
            throw std::invalid_argument("gamma must lie in [0, 1]");
    if (!ds.binary_target()) throw std::invalid_argument("sweep requires a 0/1 target");

    const SplitIndices sp = split(ds.n_rows(), test_fraction, seed);
    const EncodedDataset train = ds.subset(sp.train_rows);
    const EncodedDataset test = ds.subset(sp.test_rows);

    SamplingSweepReport report;
    report.test_fraction = test_fraction;
    report.seed = seed;

    auto cell_auc = [&](double lambda, double gamma, SamplingScheme scheme) {
        try {
            SamplingConfig cfg;
            cfg.scheme = scheme;
            cfg.gamma = gamma;
            cfg.seed = derive_seed(seed, double_bits(lambda), double_bits(gamma),
                                   static_cast<std::uint64_t>(scheme) + 1);
            const EncodedDataset sample = resample(train, cfg);
            const LogisticModel model = train_logreg(sample, lambda);
            return roc(test.y, predict_proba(model, test.x)).auc;
        } catch (const std::exception& e) {
            throw std::runtime_error("sweep cell failed (lambda=" + std::to_string(lambda) +
                                     ", gamma=" + std::to_string(gamma) + ", scheme=" +
                                     scheme_name(scheme) + "): " + e.what());
        }
    };

    for (const double lambda : lambda_set) {
        // The original scheme does not depend on gamma.
        double original_auc = 0.0;
        bool have_original = false;
        for (const double gamma : gamma_grid) {
            for (const SamplingScheme scheme : schemes) {
                SweepCell cell;
                cell.lambda = lambda;
                cell.gamma = gamma;
                cell.scheme = scheme;
                if (scheme == SamplingScheme::original) {
                    if (!have_original) {
                        original_auc = cell_auc(lambda, 0.0, SamplingScheme::original);
                        have_original = true;
                    }
                    cell.auc = original_auc;
                } else {
                    cell.auc = cell_auc(lambda, gamma, scheme);
                }
                report.cells.push_back(cell);
            }
        }
    }
    return report;
}

}  // namespace sparsereg
