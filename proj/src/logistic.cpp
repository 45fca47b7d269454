#include "sparsereg/logistic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "sparsereg/common.hpp"

namespace sparsereg {

static void check_binary(const EncodedDataset& ds) {
    if (!ds.binary_target())
        throw std::invalid_argument("logistic regression requires a 0/1 response");
}

double log_likelihood(const EncodedDataset& ds, const LogisticModel& model) {
    check_binary(ds);
    if (model.coefficients.size() != ds.n_features())
        throw std::invalid_argument("model dimension does not match dataset");
    const Vector eta = ds.x * model.coefficients;
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < ds.n_rows(); ++i) {
        const double e = model.intercept + eta(i);
        acc += static_cast<long double>(ds.y(i) * e - softplus(e));
    }
    return static_cast<double>(acc / static_cast<long double>(ds.n_rows()));
}

double penalized_log_likelihood(const EncodedDataset& ds, const LogisticModel& model) {
    return log_likelihood(ds, model) - model.lambda * model.coefficients.lpNorm<1>();
}

WorkingSet working_set(const EncodedDataset& ds, const LogisticModel& model, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 0.5))
        throw std::invalid_argument("probability clamp must lie in (0, 0.5)");
    if (model.coefficients.size() != ds.n_features())
        throw std::invalid_argument("model dimension does not match dataset");
    const Eigen::Index n = ds.n_rows();
    const Vector eta_x = ds.x * model.coefficients;
    WorkingSet ws;
    ws.z.resize(n);
    ws.w.resize(n);
    ws.p_hat.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double eta = model.intercept + eta_x(i);
        double p = sigmoid(eta);
        if (p < epsilon) p = epsilon;
        if (p > 1.0 - epsilon) p = 1.0 - epsilon;
        const double w = p * (1.0 - p);
        ws.p_hat(i) = p;
        ws.w(i) = w;
        ws.z(i) = eta + (ds.y(i) - p) / w;
    }
    return ws;
}

double lambda_max(const EncodedDataset& ds) {
    check_binary(ds);
    return alpha_max(ds);
}

LogisticModel fit(const EncodedDataset& ds, const LogRegConfig& cfg) {
    ds.validate();
    check_binary(ds);
    if (cfg.lambda < 0.0) throw std::invalid_argument("lambda must be >= 0");
    if (cfg.max_outer < 1) throw std::invalid_argument("max_outer must be >= 1");
    if (!(cfg.outer_tol > 0.0)) throw std::invalid_argument("outer_tol must be > 0");

    const double ybar = ds.y.mean();
    if (ybar == 0.0 || ybar == 1.0) throw std::invalid_argument("degenerate labels: single class");

    LogisticModel model;
    model.lambda = cfg.lambda;
    model.feature_names = ds.feature_names;
    model.coefficients = Vector::Zero(ds.n_features());
    model.intercept = logit(ybar);

    // Subproblem dataset shares the design matrix; only the working response
    // changes between outer iterations.
    EncodedDataset sub = ds;
    double pll = penalized_log_likelihood(ds, model);

    int outer = 0;
    for (; outer < cfg.max_outer; ++outer) {
        const WorkingSet ws = working_set(ds, model, cfg.prob_clamp);
        sub.y = ws.z;

        LassoConfig inner = cfg.inner;
        inner.alpha = cfg.lambda;
        inner.weights = ws.w;
        inner.init_intercept = model.intercept;
        inner.init_coefficients = model.coefficients;
        inner.track_objective = false;
        const LinearModel step = sparsereg::fit(sub, inner);

        LogisticModel candidate = model;
        candidate.intercept = step.intercept;
        candidate.coefficients = step.coefficients;
        double pll_new = penalized_log_likelihood(ds, candidate);
        if (std::isnan(pll_new))
            throw std::runtime_error("logistic fit diverged at outer iteration " +
                                     std::to_string(outer + 1));

        // The quadratic model can overshoot; haul the iterate back toward the
        // previous point until the penalized log-likelihood stops dropping.
        int halvings = 0;
        while (pll_new < pll - 1e-9 && halvings < 10) {
            candidate.intercept = 0.5 * (candidate.intercept + model.intercept);
            candidate.coefficients = 0.5 * (candidate.coefficients + model.coefficients);
            pll_new = penalized_log_likelihood(ds, candidate);
            ++halvings;
        }
        if (pll_new < pll - 1e-9) {
            candidate = model;  // no acceptable step along this direction
            pll_new = pll;
        }

        double max_delta = std::abs(candidate.intercept - model.intercept);
        for (Eigen::Index j = 0; j < model.coefficients.size(); ++j)
            max_delta =
                std::max(max_delta, std::abs(candidate.coefficients(j) - model.coefficients(j)));

        model.intercept = candidate.intercept;
        model.coefficients = candidate.coefficients;
        pll = pll_new;
        if (cfg.track_objective) model.objective_trace.push_back(pll);

        if (max_delta <= cfg.outer_tol) {
            model.converged = true;
            ++outer;
            break;
        }
    }
    model.n_outer_iterations = outer;
    return model;
}

}  // namespace sparsereg
