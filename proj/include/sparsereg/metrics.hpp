#pragma once

#include <vector>

#include "sparsereg/data.hpp"

namespace sparsereg {

// One point per distinct score threshold, anchored at (0,0) and (1,1) by
// sentinel thresholds at +inf and -inf. auc is the tie-aware rank statistic;
// auc_trapezoid integrates the curve and must agree to 1e-12.
struct RocCurve {
    std::vector<double> thresholds;
    std::vector<double> fpr;
    std::vector<double> tpr;
    double auc = 0.0;
    double auc_trapezoid = 0.0;
};

struct PrCurve {
    std::vector<double> thresholds;
    std::vector<double> recall;
    std::vector<double> precision;
    double average_precision = 0.0;
};

RocCurve roc(const Vector& labels, const Vector& scores);

PrCurve pr_curve(const Vector& labels, const Vector& scores);

}  // namespace sparsereg
