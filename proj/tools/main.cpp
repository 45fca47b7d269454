#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sparsereg/csv.hpp"
#include "sparsereg/data.hpp"
#include "sparsereg/encode.hpp"
#include "sparsereg/io.hpp"
#include "sparsereg/metrics.hpp"
#include "sparsereg/model_select.hpp"
#include "sparsereg/resample.hpp"
#include "sparsereg/synthetic.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Reads a JSON object as CLI11 config items: top-level keys fill the main
// app's options, nested objects fill the matching subcommand's options.
// Command-line values take precedence because CLI11 applies config values
// only to options still unset after parsing argv.
class JsonConfig : public CLI::Config {
  public:
    std::string to_config(const CLI::App*, bool, bool, std::string) const override {
        return "{}\n";
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        json j;
        try {
            j = json::parse(input);
        } catch (const json::exception& e) {
            throw CLI::FileError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!j.is_object()) throw CLI::FileError("config root must be a JSON object");
        std::vector<CLI::ConfigItem> items;
        collect(j, "", {}, items);
        return items;
    }

  private:
    static void collect(const json& j, const std::string& name,
                        std::vector<std::string> parents, std::vector<CLI::ConfigItem>& out) {
        if (j.is_object()) {
            if (!name.empty()) parents.push_back(name);
            for (auto it = j.begin(); it != j.end(); ++it)
                collect(it.value(), it.key(), parents, out);
            return;
        }
        CLI::ConfigItem item;
        item.parents = std::move(parents);
        item.name = name;
        if (j.is_array()) {
            for (const json& v : j) item.inputs.push_back(scalar(v, name));
        } else {
            item.inputs.push_back(scalar(j, name));
        }
        out.push_back(std::move(item));
    }

    static std::string scalar(const json& v, const std::string& name) {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_boolean() || v.is_number()) return v.dump();
        throw CLI::FileError("config key '" + name + "' must be a scalar or array of scalars");
    }
};

fs::path ensure_out_dir(const std::string& dir) {
    fs::path path(dir);
    std::error_code ec;
    fs::create_directories(path, ec);
    if (ec)
        throw std::runtime_error("cannot create output directory '" + dir +
                                 "': " + ec.message());
    return path;
}

void note_written(const fs::path& path) { std::cout << "wrote " << path.string() << "\n"; }

std::vector<double> default_alpha_grid() {
    return {1e-8, 1e-7, 1e-6, 1e-5, 1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0};
}

std::vector<double> default_lambda_grid() { return {1e-4, 1e-2, 1e-1, 1.0, 10.0, 100.0}; }

struct EncodeOpts {
    std::string csv_path;
    std::string schema_path;
    std::string out_dir;
    int top_k = 100;
};

void cmd_encode(const EncodeOpts& o) {
    const sparsereg::Table table = sparsereg::read_csv_file(o.csv_path);
    const sparsereg::Schema schema = sparsereg::read_schema(o.schema_path);
    const auto vocab = sparsereg::build_vocabulary(table, schema, o.top_k);
    const auto ds = sparsereg::encode(table, vocab);
    const fs::path out = ensure_out_dir(o.out_dir);
    sparsereg::write_vocabulary(out / "vocabulary.json", vocab);
    sparsereg::write_dataset(out / "dataset.json", ds);
    std::cout << "encoded " << ds.n_rows() << " rows into " << ds.n_features()
              << " features\n";
    note_written(out / "vocabulary.json");
    note_written(out / "dataset.json");
}

struct CvFitOpts {
    std::string task;
    std::string data_path;
    std::string out_dir;
    std::vector<double> grid;
    int k = 10;
    std::uint64_t seed = 0;
    double test_fraction = 0.2;
    bool standardize = true;
};

void cmd_cv_fit(const CvFitOpts& o) {
    const auto ds = sparsereg::read_dataset(o.data_path);
    const auto sp = sparsereg::split(ds.n_rows(), o.test_fraction, o.seed);
    const auto train = ds.subset(sp.train_rows);
    const auto test = ds.subset(sp.test_rows);
    std::vector<double> grid = o.grid;
    if (grid.empty())
        grid = (o.task == "lasso") ? default_alpha_grid() : default_lambda_grid();

    sparsereg::CvReport report;
    double test_score = 0.0;
    std::string score_kind;
    const fs::path out = ensure_out_dir(o.out_dir);
    if (o.task == "lasso") {
        report = sparsereg::cv_lasso(train, grid, o.k, o.seed, o.standardize);
        const auto model = sparsereg::train_lasso(train, report.selected, o.standardize);
        test_score = sparsereg::r2_out_of_sample(test.y,
                                                 sparsereg::predict_linear(model, test.x));
        score_kind = "r2_out_of_sample";
        sparsereg::write_linear_model(out / "model.json", model);
    } else {
        report = sparsereg::cv_logreg(train, grid, o.k, o.seed, o.standardize);
        const auto model = sparsereg::train_logreg(train, report.selected, o.standardize);
        test_score = sparsereg::roc(test.y, sparsereg::predict_proba(model, test.x)).auc;
        score_kind = "auc";
        sparsereg::write_logistic_model(out / "model.json", model);
    }

    sparsereg::write_cv_report_json(out / "cv_report.json", report);
    sparsereg::write_cv_report_csv(out / "cv_report.csv", report);
    json eval;
    eval["task"] = o.task;
    eval["score_kind"] = score_kind;
    eval["test_score"] = test_score;
    eval["selected"] = report.selected;
    eval["k"] = o.k;
    eval["n_train"] = train.n_rows();
    eval["n_test"] = test.n_rows();
    eval["test_fraction"] = o.test_fraction;
    eval["seed"] = o.seed;
    eval["standardized"] = o.standardize;
    std::ofstream evs(out / "evaluation.json", std::ios::binary);
    if (!evs) throw std::runtime_error("cannot open evaluation.json for writing");
    evs << eval.dump(2) << "\n";

    std::cout << "selected hyperparameter: " << sparsereg::format_double(report.selected)
              << "\n";
    std::cout << "test " << score_kind << ": " << sparsereg::format_double(test_score) << "\n";
    note_written(out / "model.json");
    note_written(out / "cv_report.json");
    note_written(out / "cv_report.csv");
    note_written(out / "evaluation.json");
}

struct ImportanceOpts {
    std::string model_path;
    std::string out_dir;
    int top_n = 20;
};

void cmd_importance(const ImportanceOpts& o) {
    const std::string kind = sparsereg::model_kind(o.model_path);
    sparsereg::ImportanceReport report;
    if (kind == "linear") {
        const auto model = sparsereg::read_linear_model(o.model_path);
        report = sparsereg::rank_importance(kind, model.alpha, model.feature_names,
                                            model.coefficients, o.top_n);
    } else {
        const auto model = sparsereg::read_logistic_model(o.model_path);
        report = sparsereg::rank_importance(kind, model.lambda, model.feature_names,
                                            model.coefficients, o.top_n);
    }
    const fs::path out = ensure_out_dir(o.out_dir);
    sparsereg::write_importance_json(out / "importance.json", report);
    sparsereg::write_importance_csv(out / "importance.csv", report);
    std::cout << report.positive.size() << " positive and " << report.negative.size()
              << " negative features\n";
    note_written(out / "importance.json");
    note_written(out / "importance.csv");
}

struct EvaluateOpts {
    std::string model_path;
    std::string data_path;
    std::string out_dir;
};

void check_features_match(const std::vector<std::string>& model_names,
                          const std::vector<std::string>& data_names) {
    if (model_names != data_names)
        throw std::runtime_error("model feature names do not match dataset feature names");
}

void cmd_evaluate(const EvaluateOpts& o) {
    const std::string kind = sparsereg::model_kind(o.model_path);
    const auto ds = sparsereg::read_dataset(o.data_path);
    const fs::path out = ensure_out_dir(o.out_dir);
    json eval;
    eval["kind"] = kind;
    eval["n_rows"] = ds.n_rows();
    if (kind == "linear") {
        const auto model = sparsereg::read_linear_model(o.model_path);
        check_features_match(model.feature_names, ds.feature_names);
        const sparsereg::Vector pred = sparsereg::predict_linear(model, ds.x);
        double sq = 0.0;
        for (Eigen::Index i = 0; i < ds.y.size(); ++i) {
            const double r = ds.y(i) - pred(i);
            sq += r * r;
        }
        eval["mse"] = sq / static_cast<double>(ds.n_rows());
        eval["r2"] = sparsereg::r2_out_of_sample(ds.y, pred);
    } else {
        const auto model = sparsereg::read_logistic_model(o.model_path);
        check_features_match(model.feature_names, ds.feature_names);
        const sparsereg::Vector prob = sparsereg::predict_proba(model, ds.x);
        const auto roc_curve = sparsereg::roc(ds.y, prob);
        const auto pr = sparsereg::pr_curve(ds.y, prob);
        sparsereg::write_roc_csv(out / "roc.csv", roc_curve);
        sparsereg::write_pr_csv(out / "pr_curve.csv", pr);
        eval["auc"] = roc_curve.auc;
        eval["average_precision"] = pr.average_precision;
        note_written(out / "roc.csv");
        note_written(out / "pr_curve.csv");
    }
    std::ofstream evs(out / "evaluation.json", std::ios::binary);
    if (!evs) throw std::runtime_error("cannot open evaluation.json for writing");
    evs << eval.dump(2) << "\n";
    note_written(out / "evaluation.json");
}

struct SweepOpts {
    std::string data_path;
    std::string out_dir;
    std::vector<double> lambda_set = {1e-4, 0.1, 1.0, 100.0};
    std::vector<double> gamma_grid = {0.0, 0.25, 0.5, 0.75, 1.0};
    double test_fraction = 0.2;
    std::uint64_t seed = 0;
};

void cmd_sweep(const SweepOpts& o) {
    const auto ds = sparsereg::read_dataset(o.data_path);
    const std::vector<sparsereg::SamplingScheme> schemes = {
        sparsereg::SamplingScheme::original, sparsereg::SamplingScheme::oversample_minority,
        sparsereg::SamplingScheme::undersample_majority};
    const auto report =
        sparsereg::sweep(ds, o.lambda_set, o.gamma_grid, schemes, o.test_fraction, o.seed);
    const fs::path out = ensure_out_dir(o.out_dir);
    sparsereg::write_sweep_csv(out / "sweep.csv", report);
    std::cout << report.cells.size() << " sweep cells\n";
    note_written(out / "sweep.csv");
}

struct SynthOpts {
    std::string kind;
    std::string out_dir;
    sparsereg::SyntheticSpec spec;
    std::uint64_t seed = 0;
};

void cmd_synth(const SynthOpts& o) {
    sparsereg::SyntheticSpec spec = o.spec;
    spec.kind = (o.kind == "linear") ? sparsereg::TaskKind::linear
                                     : sparsereg::TaskKind::logistic;
    const auto data = sparsereg::generate_synthetic(spec, o.seed);
    const fs::path out = ensure_out_dir(o.out_dir);
    sparsereg::write_dataset(out / "dataset.json", data.dataset);
    if (spec.kind == sparsereg::TaskKind::linear) {
        sparsereg::LinearModel truth;
        truth.intercept = data.true_intercept;
        truth.coefficients = data.true_coefficients;
        truth.feature_names = data.dataset.feature_names;
        truth.converged = true;
        sparsereg::write_linear_model(out / "true_model.json", truth);
    } else {
        sparsereg::LogisticModel truth;
        truth.intercept = data.true_intercept;
        truth.coefficients = data.true_coefficients;
        truth.feature_names = data.dataset.feature_names;
        truth.converged = true;
        sparsereg::write_logistic_model(out / "true_model.json", truth);
    }
    std::cout << "generated " << data.dataset.n_rows() << " rows, "
              << data.dataset.n_features() << " features\n";
    note_written(out / "dataset.json");
    note_written(out / "true_model.json");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse linear and logistic models with L1 penalties"};
    app.name("sparsereg");
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON file supplying any option; command line wins");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.failure_message([](const CLI::App*, const CLI::Error& e) {
        return std::string("error: ") + e.what() + "\n";
    });

    auto eo = std::make_shared<EncodeOpts>();
    auto* enc = app.add_subcommand("encode", "One-hot encode a CSV against a schema");
    enc->add_option("--csv", eo->csv_path, "Input CSV file")
        ->required()
        ->check(CLI::ExistingFile);
    enc->add_option("--schema", eo->schema_path, "Schema JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    enc->add_option("--top-k", eo->top_k, "Retained categories per categorical column")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    enc->add_option("--out-dir", eo->out_dir, "Output directory")->required();
    enc->callback([eo]() { cmd_encode(*eo); });

    auto co = std::make_shared<CvFitOpts>();
    auto* cv = app.add_subcommand(
        "cv-fit", "Cross-validate a penalty grid, refit the winner, score a held-out split");
    cv->add_option("--task", co->task, "Model family")
        ->required()
        ->check(CLI::IsMember({"lasso", "logreg"}));
    cv->add_option("--data", co->data_path, "Encoded dataset JSON")
        ->required()
        ->check(CLI::ExistingFile);
    cv->add_option("--grid", co->grid,
                   "Penalty grid (comma separated; default depends on task)")
        ->delimiter(',');
    cv->add_option("--k", co->k, "Number of folds")
        ->capture_default_str()
        ->check(CLI::Range(2, 1000000));
    cv->add_option("--seed", co->seed, "RNG seed")->required();
    cv->add_option("--test-fraction", co->test_fraction, "Held-out fraction")
        ->capture_default_str();
    cv->add_flag("--standardize,!--no-standardize", co->standardize,
                 "Standardize features inside each fit")
        ->capture_default_str();
    cv->add_option("--out-dir", co->out_dir, "Output directory")->required();
    cv->callback([co]() { cmd_cv_fit(*co); });

    auto io = std::make_shared<ImportanceOpts>();
    auto* imp = app.add_subcommand("importance",
                                   "Rank nonzero model coefficients by sign and magnitude");
    imp->add_option("--model", io->model_path, "Model JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    imp->add_option("--top-n", io->top_n, "Entries kept per direction")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    imp->add_option("--out-dir", io->out_dir, "Output directory")->required();
    imp->callback([io]() { cmd_importance(*io); });

    auto vo = std::make_shared<EvaluateOpts>();
    auto* ev = app.add_subcommand("evaluate", "Score a saved model on an encoded dataset");
    ev->add_option("--model", vo->model_path, "Model JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    ev->add_option("--data", vo->data_path, "Encoded dataset JSON")
        ->required()
        ->check(CLI::ExistingFile);
    ev->add_option("--out-dir", vo->out_dir, "Output directory")->required();
    ev->callback([vo]() { cmd_evaluate(*vo); });

    auto so = std::make_shared<SweepOpts>();
    auto* sw = app.add_subcommand(
        "sweep", "AUC of each sampling scheme across a penalty set and gamma grid");
    sw->add_option("--data", so->data_path, "Encoded dataset JSON")
        ->required()
        ->check(CLI::ExistingFile);
    sw->add_option("--lambda-set", so->lambda_set, "Penalty values (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    sw->add_option("--gamma-grid", so->gamma_grid, "Sampling frequencies (comma separated)")
        ->delimiter(',')
        ->capture_default_str();
    sw->add_option("--test-fraction", so->test_fraction, "Held-out fraction")
        ->capture_default_str();
    sw->add_option("--seed", so->seed, "RNG seed")->required();
    sw->add_option("--out-dir", so->out_dir, "Output directory")->required();
    sw->callback([so]() {
        if (so->lambda_set.empty()) throw CLI::ValidationError("--lambda-set must be non-empty");
        if (so->gamma_grid.empty()) throw CLI::ValidationError("--gamma-grid must be non-empty");
        cmd_sweep(*so);
    });

    auto yo = std::make_shared<SynthOpts>();
    auto* sy = app.add_subcommand("synth",
                                  "Generate a synthetic dataset with a known sparse model");
    sy->add_option("--kind", yo->kind, "Task kind")
        ->required()
        ->check(CLI::IsMember({"linear", "logistic"}));
    sy->add_option("--n", yo->spec.n, "Rows")->capture_default_str()->check(CLI::PositiveNumber);
    sy->add_option("--p", yo->spec.p, "Features")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sy->add_option("--sparsity", yo->spec.sparsity, "Nonzero true coefficients")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sy->add_option("--noise", yo->spec.noise, "Noise standard deviation (linear)")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sy->add_option("--imbalance", yo->spec.imbalance, "Positive rate (logistic)")
        ->capture_default_str();
    sy->add_option("--seed", yo->seed, "RNG seed")->required();
    sy->add_option("--out-dir", yo->out_dir, "Output directory")->required();
    sy->callback([yo]() { cmd_synth(*yo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
