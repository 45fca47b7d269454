#include "sparsereg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace sparsereg {

static void check_inputs(const Vector& labels, const Vector& scores, bool need_both_classes) {
    if (labels.size() != scores.size())
        throw std::invalid_argument("labels and scores differ in length");
    if (labels.size() == 0) throw std::invalid_argument("empty label vector");
    Eigen::Index positives = 0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels(i) != 0.0 && labels(i) != 1.0)
            throw std::invalid_argument("labels must be 0 or 1");
        if (!std::isfinite(scores(i))) throw std::invalid_argument("scores must be finite");
        if (labels(i) == 1.0) ++positives;
    }
    if (positives == 0) throw std::invalid_argument("no positive labels");
    if (need_both_classes && positives == labels.size())
        throw std::invalid_argument("single-class labels");
}

RocCurve roc(const Vector& labels, const Vector& scores) {
    check_inputs(labels, scores, true);
    const Eigen::Index n = labels.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores(a) < scores(b); });

    double n_pos = 0.0, n_neg = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) (labels(i) == 1.0 ? n_pos : n_neg) += 1.0;

    // Midranks: tied scores share the average of the ranks they span. Ranks,
    // tie counts and the positive-rank sum are all exact half-integers.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores(order[j]) == scores(order[i])) ++j;
        const double midrank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
        for (std::size_t k = i; k < j; ++k)
            if (labels(order[k]) == 1.0) rank_sum_pos += midrank;
        i = j;
    }

    RocCurve curve;
    curve.auc = (rank_sum_pos - n_pos * (n_pos + 1.0) / 2.0) / (n_pos * n_neg);

    const double inf = std::numeric_limits<double>::infinity();
    curve.thresholds.push_back(inf);
    curve.fpr.push_back(0.0);
    curve.tpr.push_back(0.0);
    double tp = 0.0, fp = 0.0;
    // Walk distinct scores from high to low; predicted positive means
    // score >= threshold.
    std::size_t hi = order.size();
    while (hi > 0) {
        std::size_t lo = hi;
        while (lo > 0 && scores(order[lo - 1]) == scores(order[hi - 1])) --lo;
        for (std::size_t k = lo; k < hi; ++k) (labels(order[k]) == 1.0 ? tp : fp) += 1.0;
        curve.thresholds.push_back(scores(order[hi - 1]));
        curve.tpr.push_back(tp / n_pos);
        curve.fpr.push_back(fp / n_neg);
        hi = lo;
    }
    curve.thresholds.push_back(-inf);
    curve.fpr.push_back(1.0);
    curve.tpr.push_back(1.0);

    double area = 0.0;
    for (std::size_t k = 1; k < curve.fpr.size(); ++k)
        area += 0.5 * (curve.fpr[k] - curve.fpr[k - 1]) * (curve.tpr[k] + curve.tpr[k - 1]);
    curve.auc_trapezoid = area;
    return curve;
}

PrCurve pr_curve(const Vector& labels, const Vector& scores) {
    check_inputs(labels, scores, false);
    const Eigen::Index n = labels.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return scores(a) > scores(b); });

    double n_pos = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        if (labels(i) == 1.0) n_pos += 1.0;

    PrCurve curve;
    double tp = 0.0, fp = 0.0, prev_recall = 0.0, ap = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores(order[j]) == scores(order[i])) ++j;
        for (std::size_t k = i; k < j; ++k) (labels(order[k]) == 1.0 ? tp : fp) += 1.0;
        const double recall = tp / n_pos;
        const double precision = tp / (tp + fp);
        curve.thresholds.push_back(scores(order[i]));
        curve.recall.push_back(recall);
        curve.precision.push_back(precision);
        ap += (recall - prev_recall) * precision;
        prev_recall = recall;
        i = j;
    }
    curve.average_precision = ap;
    return curve;
}

}  // namespace sparsereg
