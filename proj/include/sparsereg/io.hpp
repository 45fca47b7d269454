#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "sparsereg/data.hpp"
#include "sparsereg/encode.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/model_select.hpp"
#include "sparsereg/resample.hpp"

namespace sparsereg {

// Model files round-trip finite doubles bit-exactly.
void write_linear_model(const std::filesystem::path& path, const LinearModel& model);
void write_logistic_model(const std::filesystem::path& path, const LogisticModel& model);
std::string model_kind(const std::filesystem::path& path);
LinearModel read_linear_model(const std::filesystem::path& path);
LogisticModel read_logistic_model(const std::filesystem::path& path);

void write_dataset(const std::filesystem::path& path, const EncodedDataset& ds);
EncodedDataset read_dataset(const std::filesystem::path& path);

void write_vocabulary(const std::filesystem::path& path, const FeatureVocabulary& vocab);
FeatureVocabulary read_vocabulary(const std::filesystem::path& path);

Schema read_schema(const std::filesystem::path& path);

void write_cv_report_json(const std::filesystem::path& path, const CvReport& report);
void write_cv_report_csv(const std::filesystem::path& path, const CvReport& report);
CvReport read_cv_report(const std::filesystem::path& path);

void write_sweep_csv(const std::filesystem::path& path, const SamplingSweepReport& report);
void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve);
void write_pr_csv(const std::filesystem::path& path, const PrCurve& curve);

struct ImportanceEntry {
    std::string feature;
    double coefficient = 0.0;
};

// Nonzero coefficients split by sign: positive sorted descending, negative
// ascending, each truncated to top_n.
struct ImportanceReport {
    std::string model_kind;
    double hyperparameter = 0.0;
    std::vector<ImportanceEntry> positive;
    std::vector<ImportanceEntry> negative;
};

ImportanceReport rank_importance(const std::string& kind, double hyperparameter,
                                 const std::vector<std::string>& feature_names,
                                 const Vector& coefficients, int top_n);

void write_importance_json(const std::filesystem::path& path, const ImportanceReport& report);
void write_importance_csv(const std::filesystem::path& path, const ImportanceReport& report);

// 17 significant digits, enough to reproduce the double exactly.
std::string format_double(double v);

}  // namespace sparsereg
