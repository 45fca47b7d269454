#include "sparsereg/synthetic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "sparsereg/common.hpp"

namespace sparsereg {

static void validate_spec(const SyntheticSpec& spec) {
    if (spec.n < 1) throw std::invalid_argument("synthetic spec: n must be >= 1");
    if (spec.p < 1) throw std::invalid_argument("synthetic spec: p must be >= 1");
    if (spec.sparsity < 0 || spec.sparsity > spec.p)
        throw std::invalid_argument("synthetic spec: sparsity must lie in [0, p]");
    if (spec.noise < 0.0) throw std::invalid_argument("synthetic spec: noise must be >= 0");
    if (spec.kind == TaskKind::logistic && !(spec.imbalance > 0.0 && spec.imbalance < 1.0))
        throw std::invalid_argument("synthetic spec: imbalance must lie in (0, 1)");
}

// Intercept for which the mean of sigmoid(b0 + eta_i) over the sample equals
// the requested positive rate. The mean is strictly increasing in b0, so
// bisection converges.
static double intercept_for_rate(const Vector& eta, double rate) {
    auto mean_prob = [&](double b0) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < eta.size(); ++i) acc += sigmoid(b0 + eta(i));
        return acc / static_cast<double>(eta.size());
    };
    double lo = -60.0, hi = 60.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-13; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (mean_prob(mid) < rate ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SyntheticData generate_synthetic(const SyntheticSpec& spec, std::uint64_t seed) {
    validate_spec(spec);
    auto rng = make_rng(derive_seed(seed, 0x5AB1E7ULL));
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> magnitude(1.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    SyntheticData out;
    out.dataset.x.resize(spec.n, spec.p);
    for (Eigen::Index i = 0; i < spec.n; ++i)
        for (Eigen::Index j = 0; j < spec.p; ++j) out.dataset.x(i, j) = gauss(rng);

    std::vector<Eigen::Index> support(static_cast<std::size_t>(spec.p));
    std::iota(support.begin(), support.end(), Eigen::Index{0});
    std::shuffle(support.begin(), support.end(), rng);
    support.resize(static_cast<std::size_t>(spec.sparsity));

    out.true_coefficients = Vector::Zero(spec.p);
    for (const Eigen::Index j : support) {
        const double sign = unit(rng) < 0.5 ? -1.0 : 1.0;
        out.true_coefficients(j) = sign * magnitude(rng);
    }

    const Vector eta = out.dataset.x * out.true_coefficients;
    out.dataset.y.resize(spec.n);
    if (spec.kind == TaskKind::linear) {
        out.true_intercept = gauss(rng);
        for (Eigen::Index i = 0; i < spec.n; ++i)
            out.dataset.y(i) = out.true_intercept + eta(i) + spec.noise * gauss(rng);
    } else {
        out.true_intercept = intercept_for_rate(eta, spec.imbalance);
        for (Eigen::Index i = 0; i < spec.n; ++i) {
            const double p = sigmoid(out.true_intercept + eta(i));
            out.dataset.y(i) = unit(rng) < p ? 1.0 : 0.0;
        }
    }

    out.dataset.feature_names.reserve(static_cast<std::size_t>(spec.p));
    for (Eigen::Index j = 0; j < spec.p; ++j)
        out.dataset.feature_names.push_back("f" + std::to_string(j + 1));
    out.dataset.row_ids.reserve(static_cast<std::size_t>(spec.n));
    for (Eigen::Index i = 0; i < spec.n; ++i)
        out.dataset.row_ids.push_back(std::to_string(i + 1));
    out.dataset.validate();
    return out;
}

}  // namespace sparsereg
