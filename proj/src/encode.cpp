#include "sparsereg/encode.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "sparsereg/common.hpp"

namespace sparsereg {

std::string column_kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::numeric: return "numeric";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::target_numeric: return "target_numeric";
        case ColumnKind::target_binary: return "target_binary";
        case ColumnKind::ignore: return "ignore";
    }
    throw std::logic_error("unknown column kind");
}

ColumnKind column_kind_from_name(const std::string& name) {
    if (name == "numeric") return ColumnKind::numeric;
    if (name == "categorical") return ColumnKind::categorical;
    if (name == "target_numeric") return ColumnKind::target_numeric;
    if (name == "target_binary") return ColumnKind::target_binary;
    if (name == "ignore") return ColumnKind::ignore;
    throw std::invalid_argument("unknown column kind '" + name + "'");
}

void validate_schema(const Schema& schema) {
    if (schema.empty()) throw std::invalid_argument("schema is empty");
    std::unordered_set<std::string> names;
    int n_targets = 0;
    for (const auto& col : schema) {
        if (!names.insert(col.name).second)
            throw std::invalid_argument("duplicate schema column '" + col.name + "'");
        if (col.kind == ColumnKind::target_numeric || col.kind == ColumnKind::target_binary)
            ++n_targets;
    }
    if (n_targets != 1)
        throw std::invalid_argument("schema must declare exactly one target column, found " +
                                    std::to_string(n_targets));
}

static double parse_numeric_cell(const std::string& cell, std::size_t row, const std::string& col) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading '+'
    double value = 0.0;
    const auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc() || res.ptr != end || begin == end)
        throw std::invalid_argument("row " + std::to_string(row) + ", column '" + col +
                                    "': cannot parse '" + cell + "' as numeric");
    if (!std::isfinite(value))
        throw std::invalid_argument("row " + std::to_string(row) + ", column '" + col +
                                    "': non-finite numeric value '" + cell + "'");
    return value;
}

void FeatureVocabulary::rebuild_layout() {
    feature_names.clear();
    Eigen::Index offset = 0;
    for (auto& col : columns) {
        col.offset = offset;
        if (col.categorical) {
            for (const auto& category : col.categories)
                feature_names.push_back(col.name + "=" + category);
            offset += static_cast<Eigen::Index>(col.categories.size());
        } else {
            feature_names.push_back(col.name);
            offset += 1;
        }
    }
    std::unordered_set<std::string> unique(feature_names.begin(), feature_names.end());
    if (unique.size() != feature_names.size())
        throw std::invalid_argument("one-hot feature names collide; rename input columns");
    if (target_name.empty()) throw std::invalid_argument("schema has no target column");
    if (feature_names.empty()) throw std::invalid_argument("schema has no feature columns");
}

FeatureVocabulary build_vocabulary(const Table& table, const Schema& schema, int k) {
    validate_schema(schema);
    if (k < 1) throw std::invalid_argument("top-K cap must be >= 1");
    if (table.rows.empty()) throw std::invalid_argument("table has no data rows");

    FeatureVocabulary vocab;
    vocab.k = k;
    for (const auto& spec : schema) {
        const std::size_t ci = table.column_index(spec.name);  // throws on unknown column
        switch (spec.kind) {
            case ColumnKind::ignore:
                break;
            case ColumnKind::target_numeric:
            case ColumnKind::target_binary:
                vocab.target_name = spec.name;
                vocab.target_is_binary = (spec.kind == ColumnKind::target_binary);
                vocab.positive_values = spec.positive_values;
                vocab.negative_values = spec.negative_values;
                break;
            case ColumnKind::numeric: {
                VocabColumn col;
                col.name = spec.name;
                col.categorical = false;
                vocab.columns.push_back(std::move(col));
                break;
            }
            case ColumnKind::categorical: {
                std::unordered_map<std::string, std::size_t> counts;
                for (const auto& row : table.rows) {
                    const std::string& cell = row[ci];
                    counts[cell.empty() ? kMissingCategory : cell]++;
                }
                // Descending frequency, frequency ties by ascending
                // lexicographic order.
                std::vector<std::pair<std::string, std::size_t>> ordered(counts.begin(),
                                                                         counts.end());
                std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
                    if (a.second != b.second) return a.second > b.second;
                    return a.first < b.first;
                });
                if (ordered.size() > static_cast<std::size_t>(k)) ordered.resize(k);

                VocabColumn col;
                col.name = spec.name;
                col.categorical = true;
                for (const auto& [category, count] : ordered) col.categories.push_back(category);
                vocab.columns.push_back(std::move(col));
                break;
            }
        }
    }
    vocab.rebuild_layout();
    return vocab;
}

static double encode_target_cell(const FeatureVocabulary& vocab, const std::string& cell,
                                 std::size_t row) {
    if (cell.empty())
        throw std::invalid_argument("row " + std::to_string(row) + ": missing target value in '" +
                                    vocab.target_name + "'");
    if (!vocab.target_is_binary) return parse_numeric_cell(cell, row, vocab.target_name);

    if (vocab.positive_values.empty() && vocab.negative_values.empty()) {
        const double v = parse_numeric_cell(cell, row, vocab.target_name);
        if (v != 0.0 && v != 1.0)
            throw std::invalid_argument("row " + std::to_string(row) + ", column '" +
                                        vocab.target_name + "': binary target must be 0 or 1, got '" +
                                        cell + "'");
        return v;
    }
    for (const auto& v : vocab.positive_values)
        if (cell == v) return 1.0;
    for (const auto& v : vocab.negative_values)
        if (cell == v) return 0.0;
    throw std::invalid_argument("row " + std::to_string(row) + ", column '" + vocab.target_name +
                                "': value '" + cell + "' is neither a positive nor a negative class label");
}

EncodedDataset encode(const Table& table, const FeatureVocabulary& vocab) {
    if (table.rows.empty()) throw std::invalid_argument("table has no data rows");
    const std::size_t target_ci = table.column_index(vocab.target_name);

    struct ColPlan {
        std::size_t table_col;
        const VocabColumn* vocab_col;
        std::unordered_map<std::string, Eigen::Index> category_index;
    };
    std::vector<ColPlan> plan;
    plan.reserve(vocab.columns.size());
    for (const auto& col : vocab.columns) {
        ColPlan p;
        p.table_col = table.column_index(col.name);
        p.vocab_col = &col;
        for (std::size_t i = 0; i < col.categories.size(); ++i)
            p.category_index.emplace(col.categories[i], static_cast<Eigen::Index>(i));
        plan.push_back(std::move(p));
    }

    const Eigen::Index n = static_cast<Eigen::Index>(table.rows.size());
    const Eigen::Index p = vocab.n_features();
    EncodedDataset ds;
    ds.x = Matrix::Zero(n, p);
    ds.y.resize(n);
    ds.feature_names = vocab.feature_names;
    ds.row_ids.reserve(static_cast<std::size_t>(n));

    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = table.rows[static_cast<std::size_t>(i)];
        const std::size_t row_number = static_cast<std::size_t>(i) + 1;  // 1-based data row
        for (const auto& cp : plan) {
            const std::string& cell = row[cp.table_col];
            if (cp.vocab_col->categorical) {
                const std::string& category = cell.empty() ? kMissingCategory : cell;
                const auto it = cp.category_index.find(category);
                // Categories outside the retained top-K encode as all zeros.
                if (it != cp.category_index.end()) ds.x(i, cp.vocab_col->offset + it->second) = 1.0;
            } else {
                ds.x(i, cp.vocab_col->offset) =
                    parse_numeric_cell(cell, row_number, cp.vocab_col->name);
            }
        }
        ds.y(i) = encode_target_cell(vocab, row[target_ci], row_number);
        ds.row_ids.push_back(std::to_string(row_number));
    }
    ds.validate();
    return ds;
}

std::pair<EncodedDataset, Standardization> standardize(const EncodedDataset& ds) {
    const Eigen::Index n = ds.n_rows();
    const Eigen::Index p = ds.n_features();
    if (n < 2) throw std::invalid_argument("standardize requires at least 2 rows");

    Standardization sc;
    sc.mean.resize(p);
    sc.scale.resize(p);
    sc.is_constant.assign(static_cast<std::size_t>(p), false);

    EncodedDataset out = ds;
    for (Eigen::Index j = 0; j < p; ++j) {
        const double mean = ds.x.col(j).mean();
        Vector centered = ds.x.col(j).array() - mean;
        const double scale = std::sqrt(centered.squaredNorm() / static_cast<double>(n));
        sc.mean(j) = mean;
        if (scale == 0.0) {
            sc.scale(j) = 0.0;
            sc.is_constant[static_cast<std::size_t>(j)] = true;
            out.x.col(j).setZero();
        } else {
            sc.scale(j) = scale;
            out.x.col(j) = centered / scale;
        }
    }
    return {std::move(out), std::move(sc)};
}

static void destandardize_coefficients(double& intercept, Vector& beta, const Standardization& sc) {
    if (beta.size() != sc.mean.size())
        throw std::invalid_argument("scaling record does not match model dimension");
    double shift = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        if (sc.is_constant[static_cast<std::size_t>(j)]) {
            beta(j) = 0.0;
            continue;
        }
        beta(j) /= sc.scale(j);
        shift += sc.mean(j) * beta(j);
    }
    intercept -= shift;
}

LinearModel destandardize(const LinearModel& model, const Standardization& sc) {
    LinearModel out = model;
    destandardize_coefficients(out.intercept, out.coefficients, sc);
    return out;
}

LogisticModel destandardize(const LogisticModel& model, const Standardization& sc) {
    LogisticModel out = model;
    destandardize_coefficients(out.intercept, out.coefficients, sc);
    return out;
}

SplitIndices split(Eigen::Index n, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test fraction must lie strictly between 0 and 1");
    if (n < 1) throw std::invalid_argument("cannot split an empty dataset");

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    auto rng = make_rng(derive_seed(seed, 0x5EED5EEDULL));
    std::shuffle(order.begin(), order.end(), rng);

    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(n)));
    if (n_test == 0 || n_test == static_cast<std::size_t>(n))
        throw std::invalid_argument("split leaves an empty train or test set");
    SplitIndices out;
    out.seed = seed;
    out.test_rows.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_test));
    out.train_rows.assign(order.begin() + static_cast<std::ptrdiff_t>(n_test), order.end());
    std::sort(out.test_rows.begin(), out.test_rows.end());
    std::sort(out.train_rows.begin(), out.train_rows.end());
    return out;
}

}  // namespace sparsereg
