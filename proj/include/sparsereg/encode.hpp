#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sparsereg/csv.hpp"
#include "sparsereg/data.hpp"

namespace sparsereg {

enum class ColumnKind { numeric, categorical, target_numeric, target_binary, ignore };

std::string column_kind_name(ColumnKind kind);
ColumnKind column_kind_from_name(const std::string& name);

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::numeric;
    // For target_binary only: raw strings mapped to 1 and 0. When both lists
    // are empty the cell must parse as a literal 0 or 1.
    std::vector<std::string> positive_values;
    std::vector<std::string> negative_values;
};

using Schema = std::vector<ColumnSpec>;

// Throws unless the schema has unique column names and exactly one target.
void validate_schema(const Schema& schema);

// Missing categorical cells become this category and compete for top-K
// retention like any other value.
inline constexpr const char* kMissingCategory = "<NA>";

struct VocabColumn {
    std::string name;
    bool categorical = false;
    // Retained categories in retention order: descending frequency, ties
    // broken by ascending lexicographic order. Empty for numeric columns.
    std::vector<std::string> categories;
    // First encoded column index for this source column.
    Eigen::Index offset = 0;
};

// Top-K one-hot scheme plus the target mapping, built once on training data
// and persisted so later datasets encode into an identical feature space.
struct FeatureVocabulary {
    int k = 100;
    std::vector<VocabColumn> columns;
    std::string target_name;
    bool target_is_binary = false;
    std::vector<std::string> positive_values;
    std::vector<std::string> negative_values;
    std::vector<std::string> feature_names;

    Eigen::Index n_features() const { return static_cast<Eigen::Index>(feature_names.size()); }

    // Recomputes column offsets and the global feature name list from
    // `columns`. Called after construction or deserialization.
    void rebuild_layout();
};

FeatureVocabulary build_vocabulary(const Table& table, const Schema& schema, int k);

EncodedDataset encode(const Table& table, const FeatureVocabulary& vocab);

// Per-column centering/scaling record. scale is the population standard
// deviation sqrt((1/N) sum (x - mean)^2); constant columns keep scale 0 and
// encode as all zeros.
struct Standardization {
    Vector mean;
    Vector scale;
    std::vector<bool> is_constant;
};

// Returns a dataset whose columns have sample mean 0 and (1/N) sum x^2 = 1,
// except constant columns which become all-zero and are flagged.
std::pair<EncodedDataset, Standardization> standardize(const EncodedDataset& ds);

// Maps a model fitted on standardized features back to the original scale so
// its predictions on raw data match predictions of the standardized model on
// standardized data.
LinearModel destandardize(const LinearModel& model, const Standardization& sc);
LogisticModel destandardize(const LogisticModel& model, const Standardization& sc);

struct SplitIndices {
    std::vector<Eigen::Index> train_rows;
    std::vector<Eigen::Index> test_rows;
    std::uint64_t seed = 0;
};

// Uniform random partition with |test| = round(test_fraction * n),
// deterministic given seed. Both index lists are sorted ascending.
SplitIndices split(Eigen::Index n, double test_fraction, std::uint64_t seed);

}  // namespace sparsereg
