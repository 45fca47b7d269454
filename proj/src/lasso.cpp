#include "sparsereg/lasso.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sparsereg {

double soft_threshold(double z, double gamma) {
    if (gamma < 0.0) throw std::invalid_argument("soft_threshold: gamma must be >= 0");
    const double mag = std::abs(z) - gamma;
    if (mag <= 0.0) return 0.0;
    return z < 0.0 ? -mag : mag;
}

static Vector ones_weights(Eigen::Index n) { return Vector::Ones(n); }

static void check_weights(const Vector& w, Eigen::Index n) {
    if (w.size() != n)
        throw std::invalid_argument("weights length " + std::to_string(w.size()) +
                                    " does not match row count " + std::to_string(n));
    double total = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!(w(i) >= 0.0) || !std::isfinite(w(i)))
            throw std::invalid_argument("weights must be finite and >= 0");
        total += w(i);
    }
    if (total <= 0.0) throw std::invalid_argument("weights sum to zero");
}

double objective(const EncodedDataset& ds, const LinearModel& model, const Vector& weights) {
    const Eigen::Index n = ds.n_rows();
    check_weights(weights, n);
    if (model.coefficients.size() != ds.n_features())
        throw std::invalid_argument("model dimension does not match dataset");
    const Vector eta = ds.x * model.coefficients;
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < n; ++i) {
        const long double r = ds.y(i) - model.intercept - eta(i);
        acc += static_cast<long double>(weights(i)) * r * r;
    }
    long double l1 = 0.0L;
    for (Eigen::Index j = 0; j < model.coefficients.size(); ++j)
        l1 += std::abs(static_cast<long double>(model.coefficients(j)));
    return static_cast<double>(acc / (2.0L * static_cast<long double>(n)) +
                               static_cast<long double>(model.alpha) * l1);
}

double objective(const EncodedDataset& ds, const LinearModel& model) {
    return objective(ds, model, ones_weights(ds.n_rows()));
}

// Objective from the residual-without-intercept vector, same accumulation
// order as objective() up to the eta subtraction.
static double objective_from_residual(const Vector& u, double intercept, const Vector& beta,
                                      double alpha, const Vector& w) {
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const long double r = u(i) - intercept;
        acc += static_cast<long double>(w(i)) * r * r;
    }
    long double l1 = 0.0L;
    for (Eigen::Index j = 0; j < beta.size(); ++j)
        l1 += std::abs(static_cast<long double>(beta(j)));
    return static_cast<double>(acc / (2.0L * static_cast<long double>(u.size())) +
                               static_cast<long double>(alpha) * l1);
}

static double kkt_from_residual(const Matrix& x, const Vector& u, double intercept,
                                const Vector& beta, double alpha, const Vector& w) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    double worst = 0.0;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double* xj = x.col(j).data();
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += w(i) * xj[i] * (u(i) - intercept);
        const double g = s / static_cast<double>(n);
        double violation;
        if (beta(j) != 0.0) {
            violation = std::abs(g - alpha * (beta(j) > 0.0 ? 1.0 : -1.0));
        } else {
            violation = std::max(std::abs(g) - alpha, 0.0);
        }
        worst = std::max(worst, violation);
    }
    return worst;
}

double kkt_residual(const EncodedDataset& ds, const LinearModel& model, const Vector& weights) {
    check_weights(weights, ds.n_rows());
    if (model.coefficients.size() != ds.n_features())
        throw std::invalid_argument("model dimension does not match dataset");
    const Vector u = ds.y - ds.x * model.coefficients;
    return kkt_from_residual(ds.x, u, model.intercept, model.coefficients, model.alpha, weights);
}

double kkt_residual(const EncodedDataset& ds, const LinearModel& model) {
    return kkt_residual(ds, model, ones_weights(ds.n_rows()));
}

double alpha_max(const EncodedDataset& ds, const Vector& weights) {
    const Eigen::Index n = ds.n_rows();
    check_weights(weights, n);
    double wsum = 0.0, wy = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        wsum += weights(i);
        wy += weights(i) * ds.y(i);
    }
    const double ybar = wy / wsum;
    double worst = 0.0;
    for (Eigen::Index j = 0; j < ds.n_features(); ++j) {
        const double* xj = ds.x.col(j).data();
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += weights(i) * xj[i] * (ds.y(i) - ybar);
        worst = std::max(worst, std::abs(s / static_cast<double>(n)));
    }
    return worst;
}

double alpha_max(const EncodedDataset& ds) { return alpha_max(ds, ones_weights(ds.n_rows())); }

LinearModel fit(const EncodedDataset& ds, const LassoConfig& cfg) {
    ds.validate();
    if (cfg.alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (cfg.max_sweeps < 1) throw std::invalid_argument("max_sweeps must be >= 1");
    if (!(cfg.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
    if (cfg.init_intercept.has_value() != cfg.init_coefficients.has_value())
        throw std::invalid_argument("warm start needs both intercept and coefficients");

    const Eigen::Index n = ds.n_rows();
    const Eigen::Index p = ds.n_features();
    const Vector w = cfg.weights.value_or(ones_weights(n));
    check_weights(w, n);

    LinearModel model;
    model.alpha = cfg.alpha;
    model.feature_names = ds.feature_names;
    if (cfg.init_coefficients) {
        if (cfg.init_coefficients->size() != p)
            throw std::invalid_argument("warm start dimension does not match dataset");
        model.coefficients = *cfg.init_coefficients;
        model.intercept = *cfg.init_intercept;
    } else {
        model.coefficients = Vector::Zero(p);
        model.intercept = 0.0;
    }
    Vector& beta = model.coefficients;

    double wsum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) wsum += w(i);
    // c_j = (1/N) sum_i w_i x_ij^2; a zero c_j pins the coordinate at 0.
    Vector c(p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const double* xj = ds.x.col(j).data();
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) s += w(i) * xj[i] * xj[i];
        c(j) = s / static_cast<double>(n);
    }

    // Residual without the intercept term: u_i = y_i - x_i.b.
    Vector u = ds.y;
    for (Eigen::Index j = 0; j < p; ++j) {
        if (c(j) == 0.0 && beta(j) != 0.0) beta(j) = 0.0;
        if (beta(j) != 0.0) u -= beta(j) * ds.x.col(j);
    }

    int sweep = 0;
    for (; sweep < cfg.max_sweeps; ++sweep) {
        double wu = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) wu += w(i) * u(i);
        const double intercept_new = wu / wsum;
        double max_delta = std::abs(intercept_new - model.intercept);
        model.intercept = intercept_new;

        for (Eigen::Index j = 0; j < p; ++j) {
            if (c(j) == 0.0) continue;
            const double* xj = ds.x.col(j).data();
            double s = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                s += w(i) * xj[i] * (u(i) - model.intercept);
            const double g = s / static_cast<double>(n) + c(j) * beta(j);
            const double updated = soft_threshold(g, cfg.alpha) / c(j);
            if (!std::isfinite(updated))
                throw std::runtime_error("non-finite coefficient at sweep " +
                                         std::to_string(sweep + 1) + ", coordinate " +
                                         std::to_string(j));
            const double delta = updated - beta(j);
            if (delta != 0.0) {
                beta(j) = updated;
                for (Eigen::Index i = 0; i < n; ++i) u(i) -= delta * xj[i];
            }
            max_delta = std::max(max_delta, std::abs(delta));
        }

        if (cfg.track_objective)
            model.objective_trace.push_back(
                objective_from_residual(u, model.intercept, beta, cfg.alpha, w));

        if (max_delta <= cfg.tol &&
            kkt_from_residual(ds.x, u, model.intercept, beta, cfg.alpha, w) <= 10.0 * cfg.tol) {
            model.converged = true;
            ++sweep;
            break;
        }
    }
    model.n_iterations = sweep;
    return model;
}

}  // namespace sparsereg
