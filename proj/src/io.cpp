#include "sparsereg/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "sparsereg/csv.hpp"

namespace sparsereg {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

static void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

static void write_json_file(const std::filesystem::path& path, const json& j) {
    write_text(path, j.dump(2) + "\n");
}

static json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::runtime_error("invalid JSON in '" + path.string() + "': " + e.what());
    }
}

static std::vector<double> to_doubles(const json& j, const std::string& field,
                                      const std::filesystem::path& path) {
    if (!j.is_array())
        throw std::runtime_error("'" + path.string() + "': field '" + field +
                                 "' must be an array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_number())
            throw std::runtime_error("'" + path.string() + "': field '" + field +
                                     "' must be an array of numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

static Vector to_vector(const json& j, const std::string& field,
                        const std::filesystem::path& path) {
    const auto vals = to_doubles(j, field, path);
    Vector v(static_cast<Eigen::Index>(vals.size()));
    for (std::size_t i = 0; i < vals.size(); ++i) v(static_cast<Eigen::Index>(i)) = vals[i];
    return v;
}

static json vector_to_json(const Vector& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

template <typename Model>
static json model_to_json(const Model& model, const std::string& kind, double hyperparameter,
                          int n_iterations) {
    json j;
    j["kind"] = kind;
    j["intercept"] = model.intercept;
    j["coefficients"] = vector_to_json(model.coefficients);
    j["feature_names"] = model.feature_names;
    j["hyperparameter"] = hyperparameter;
    j["converged"] = model.converged;
    j["n_iterations"] = n_iterations;
    return j;
}

void write_linear_model(const std::filesystem::path& path, const LinearModel& model) {
    write_json_file(path, model_to_json(model, "linear", model.alpha, model.n_iterations));
}

void write_logistic_model(const std::filesystem::path& path, const LogisticModel& model) {
    write_json_file(path,
                    model_to_json(model, "logistic", model.lambda, model.n_outer_iterations));
}

std::string model_kind(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.contains("kind") || !j["kind"].is_string())
        throw std::runtime_error("'" + path.string() + "' is not a model file (no kind)");
    const auto kind = j["kind"].get<std::string>();
    if (kind != "linear" && kind != "logistic")
        throw std::runtime_error("'" + path.string() + "': unknown model kind '" + kind + "'");
    return kind;
}

template <typename Model>
static Model model_from_json(const json& j, const std::string& expected_kind,
                             const std::filesystem::path& path) {
    try {
        if (j.at("kind").get<std::string>() != expected_kind)
            throw std::runtime_error("model kind is not " + expected_kind);
        Model model;
        model.intercept = j.at("intercept").get<double>();
        model.coefficients = to_vector(j.at("coefficients"), "coefficients", path);
        model.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        model.converged = j.at("converged").get<bool>();
        if (j.contains("n_iterations")) {
            const int iters = j["n_iterations"].get<int>();
            if constexpr (std::is_same_v<Model, LinearModel>) {
                model.n_iterations = iters;
            } else {
                model.n_outer_iterations = iters;
            }
        }
        const double hyper = j.at("hyperparameter").get<double>();
        if constexpr (std::is_same_v<Model, LinearModel>) {
            model.alpha = hyper;
        } else {
            model.lambda = hyper;
        }
        if (model.coefficients.size() !=
            static_cast<Eigen::Index>(model.feature_names.size()))
            throw std::runtime_error("coefficients and feature_names differ in length");
        return model;
    } catch (const json::exception& e) {
        throw std::runtime_error("'" + path.string() + "': malformed model file: " + e.what());
    }
}

LinearModel read_linear_model(const std::filesystem::path& path) {
    return model_from_json<LinearModel>(read_json_file(path), "linear", path);
}

LogisticModel read_logistic_model(const std::filesystem::path& path) {
    return model_from_json<LogisticModel>(read_json_file(path), "logistic", path);
}

void write_dataset(const std::filesystem::path& path, const EncodedDataset& ds) {
    json j;
    j["feature_names"] = ds.feature_names;
    j["row_ids"] = ds.row_ids;
    j["y"] = vector_to_json(ds.y);
    json rows = json::array();
    for (Eigen::Index i = 0; i < ds.n_rows(); ++i) {
        json row = json::array();
        for (Eigen::Index c = 0; c < ds.n_features(); ++c) row.push_back(ds.x(i, c));
        rows.push_back(std::move(row));
    }
    j["x"] = std::move(rows);
    write_json_file(path, j);
}

EncodedDataset read_dataset(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        EncodedDataset ds;
        ds.feature_names = j.at("feature_names").get<std::vector<std::string>>();
        ds.row_ids = j.at("row_ids").get<std::vector<std::string>>();
        ds.y = to_vector(j.at("y"), "y", path);
        const json& rows = j.at("x");
        if (!rows.is_array() || rows.empty())
            throw std::runtime_error("field 'x' must be a non-empty array of rows");
        const auto n = static_cast<Eigen::Index>(rows.size());
        const auto p = static_cast<Eigen::Index>(ds.feature_names.size());
        ds.x.resize(n, p);
        for (Eigen::Index i = 0; i < n; ++i) {
            const json& row = rows[static_cast<std::size_t>(i)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != p)
                throw std::runtime_error("row " + std::to_string(i + 1) +
                                         " does not match feature count");
            for (Eigen::Index c = 0; c < p; ++c)
                ds.x(i, c) = row[static_cast<std::size_t>(c)].get<double>();
        }
        ds.validate();
        return ds;
    } catch (const json::exception& e) {
        throw std::runtime_error("'" + path.string() + "': malformed dataset file: " + e.what());
    }
}

void write_vocabulary(const std::filesystem::path& path, const FeatureVocabulary& vocab) {
    json j;
    j["k"] = vocab.k;
    json target;
    target["name"] = vocab.target_name;
    target["binary"] = vocab.target_is_binary;
    target["positive_values"] = vocab.positive_values;
    target["negative_values"] = vocab.negative_values;
    j["target"] = std::move(target);
    json cols = json::array();
    for (const auto& col : vocab.columns) {
        json c;
        c["name"] = col.name;
        c["categorical"] = col.categorical;
        if (col.categorical) c["categories"] = col.categories;
        cols.push_back(std::move(c));
    }
    j["columns"] = std::move(cols);
    write_json_file(path, j);
}

FeatureVocabulary read_vocabulary(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        FeatureVocabulary vocab;
        vocab.k = j.at("k").get<int>();
        const json& target = j.at("target");
        vocab.target_name = target.at("name").get<std::string>();
        vocab.target_is_binary = target.at("binary").get<bool>();
        vocab.positive_values = target.at("positive_values").get<std::vector<std::string>>();
        vocab.negative_values = target.at("negative_values").get<std::vector<std::string>>();
        for (const json& c : j.at("columns")) {
            VocabColumn col;
            col.name = c.at("name").get<std::string>();
            col.categorical = c.at("categorical").get<bool>();
            if (col.categorical)
                col.categories = c.at("categories").get<std::vector<std::string>>();
            vocab.columns.push_back(std::move(col));
        }
        vocab.rebuild_layout();
        return vocab;
    } catch (const json::exception& e) {
        throw std::runtime_error("'" + path.string() +
                                 "': malformed vocabulary file: " + e.what());
    }
}

Schema read_schema(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    if (!j.is_array()) throw std::runtime_error("'" + path.string() + "': schema must be a list");
    Schema schema;
    try {
        for (const json& c : j) {
            ColumnSpec spec;
            spec.name = c.at("name").get<std::string>();
            spec.kind = column_kind_from_name(c.at("kind").get<std::string>());
            if (c.contains("positive_values"))
                spec.positive_values = c["positive_values"].get<std::vector<std::string>>();
            if (c.contains("negative_values"))
                spec.negative_values = c["negative_values"].get<std::vector<std::string>>();
            schema.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw std::runtime_error("'" + path.string() + "': malformed schema file: " + e.what());
    }
    validate_schema(schema);
    return schema;
}

void write_cv_report_json(const std::filesystem::path& path, const CvReport& report) {
    json j;
    j["score_kind"] = report.score_kind;
    j["folding"] = report.folding;
    j["k"] = report.k;
    j["seed"] = report.seed;
    j["grid"] = report.grid;
    j["mean_score"] = report.mean_score;
    j["std_error"] = report.std_error;
    j["selected"] = report.selected;
    json cells = json::array();
    for (const auto& cell : report.cells) {
        json c;
        c["grid_index"] = cell.grid_index;
        c["fold"] = cell.fold;
        c["scheme"] = cell.scheme;
        c["score"] = cell.score;
        cells.push_back(std::move(c));
    }
    j["cells"] = std::move(cells);
    write_json_file(path, j);
}

void write_cv_report_csv(const std::filesystem::path& path, const CvReport& report) {
    std::string out = "hyperparameter,mean_score,std_error\n";
    for (std::size_t i = 0; i < report.grid.size(); ++i)
        out += format_double(report.grid[i]) + "," + format_double(report.mean_score[i]) + "," +
               format_double(report.std_error[i]) + "\n";
    write_text(path, out);
}

CvReport read_cv_report(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    try {
        CvReport report;
        report.score_kind = j.at("score_kind").get<std::string>();
        report.folding = j.at("folding").get<std::string>();
        report.k = j.at("k").get<int>();
        report.seed = j.at("seed").get<std::uint64_t>();
        report.grid = to_doubles(j.at("grid"), "grid", path);
        report.mean_score = to_doubles(j.at("mean_score"), "mean_score", path);
        report.std_error = to_doubles(j.at("std_error"), "std_error", path);
        report.selected = j.at("selected").get<double>();
        for (const json& c : j.at("cells")) {
            CvCell cell;
            cell.grid_index = c.at("grid_index").get<std::size_t>();
            cell.fold = c.at("fold").get<int>();
            cell.scheme = c.at("scheme").get<std::string>();
            cell.score = c.at("score").get<double>();
            report.cells.push_back(std::move(cell));
        }
        return report;
    } catch (const json::exception& e) {
        throw std::runtime_error("'" + path.string() +
                                 "': malformed cv report file: " + e.what());
    }
}

void write_sweep_csv(const std::filesystem::path& path, const SamplingSweepReport& report) {
    std::string out = "lambda,gamma,scheme,auc\n";
    for (const auto& cell : report.cells)
        out += format_double(cell.lambda) + "," + format_double(cell.gamma) + "," +
               scheme_name(cell.scheme) + "," + format_double(cell.auc) + "\n";
    write_text(path, out);
}

void write_roc_csv(const std::filesystem::path& path, const RocCurve& curve) {
    std::string out = "threshold,fpr,tpr\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
        out += format_double(curve.thresholds[i]) + "," + format_double(curve.fpr[i]) + "," +
               format_double(curve.tpr[i]) + "\n";
    write_text(path, out);
}

void write_pr_csv(const std::filesystem::path& path, const PrCurve& curve) {
    std::string out = "threshold,recall,precision\n";
    for (std::size_t i = 0; i < curve.thresholds.size(); ++i)
        out += format_double(curve.thresholds[i]) + "," + format_double(curve.recall[i]) + "," +
               format_double(curve.precision[i]) + "\n";
    write_text(path, out);
}

ImportanceReport rank_importance(const std::string& kind, double hyperparameter,
                                 const std::vector<std::string>& feature_names,
                                 const Vector& coefficients, int top_n) {
    if (top_n < 0) throw std::invalid_argument("top_n must be >= 0");
    if (coefficients.size() != static_cast<Eigen::Index>(feature_names.size()))
        throw std::invalid_argument("coefficients and feature_names differ in length");
    ImportanceReport report;
    report.model_kind = kind;
    report.hyperparameter = hyperparameter;
    for (Eigen::Index j = 0; j < coefficients.size(); ++j) {
        if (coefficients(j) > 0.0) {
            report.positive.push_back({feature_names[static_cast<std::size_t>(j)],
                                       coefficients(j)});
        } else if (coefficients(j) < 0.0) {
            report.negative.push_back({feature_names[static_cast<std::size_t>(j)],
                                       coefficients(j)});
        }
    }
    // Stable sort keeps feature order deterministic for equal magnitudes.
    std::stable_sort(report.positive.begin(), report.positive.end(),
                     [](const auto& a, const auto& b) { return a.coefficient > b.coefficient; });
    std::stable_sort(report.negative.begin(), report.negative.end(),
                     [](const auto& a, const auto& b) { return a.coefficient < b.coefficient; });
    if (report.positive.size() > static_cast<std::size_t>(top_n))
        report.positive.resize(static_cast<std::size_t>(top_n));
    if (report.negative.size() > static_cast<std::size_t>(top_n))
        report.negative.resize(static_cast<std::size_t>(top_n));
    return report;
}

void write_importance_json(const std::filesystem::path& path, const ImportanceReport& report) {
    json j;
    j["model_kind"] = report.model_kind;
    j["hyperparameter"] = report.hyperparameter;
    json pos = json::array(), neg = json::array();
    for (const auto& e : report.positive)
        pos.push_back(json{{"feature", e.feature}, {"coefficient", e.coefficient}});
    for (const auto& e : report.negative)
        neg.push_back(json{{"feature", e.feature}, {"coefficient", e.coefficient}});
    j["positive"] = std::move(pos);
    j["negative"] = std::move(neg);
    write_json_file(path, j);
}

void write_importance_csv(const std::filesystem::path& path, const ImportanceReport& report) {
    std::string out = "direction,feature,coefficient\n";
    for (const auto& e : report.positive)
        out += "positive," + csv_escape(e.feature) + "," + format_double(e.coefficient) + "\n";
    for (const auto& e : report.negative)
        out += "negative," + csv_escape(e.feature) + "," + format_double(e.coefficient) + "\n";
    write_text(path, out);
}

}  // namespace sparsereg
