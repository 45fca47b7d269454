#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "sparsereg/common.hpp"
#include "sparsereg/io.hpp"

using namespace sparsereg;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path base_dir() {
    const fs::path dir = fs::temp_directory_path() / "sparsereg_cli_tests";
    fs::create_directories(dir);
    return dir;
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = base_dir() / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << text;
}

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const std::string& args) {
    static int seq = 0;
    const fs::path out_file = base_dir() / ("stdout_" + std::to_string(seq) + ".txt");
    const fs::path err_file = base_dir() / ("stderr_" + std::to_string(seq) + ".txt");
    ++seq;
    const std::string cmd = std::string(SPARSEREG_CLI_PATH) + " " + args + " > " +
                            out_file.string() + " 2> " + err_file.string();
    const int status = std::system(cmd.c_str());
    RunResult r;
    if (WIFEXITED(status)) r.code = WEXITSTATUS(status);
    r.out = slurp(out_file);
    r.err = slurp(err_file);
    return r;
}

// Six rows, one categorical column with three levels, a C/D outcome.
fs::path write_sample_csv(const fs::path& dir) {
    const fs::path path = dir / "sample.csv";
    spit(path,
         "city,wage,status\n"
         "NY,10,C\n"
         "LA,20,D\n"
         "NY,30,C\n"
         "SF,40,D\n"
         "LA,15,C\n"
         "NY,25,D\n");
    return path;
}

fs::path write_sample_schema(const fs::path& dir) {
    const fs::path path = dir / "schema.json";
    spit(path,
         "[{\"name\": \"city\", \"kind\": \"categorical\"},"
         " {\"name\": \"wage\", \"kind\": \"numeric\"},"
         " {\"name\": \"status\", \"kind\": \"target_binary\","
         "  \"positive_values\": [\"C\"], \"negative_values\": [\"D\"]}]\n");
    return path;
}

}  // namespace

TEST_CASE("encode writes a vocabulary and an encoded dataset") {
    const fs::path dir = fresh_dir("encode");
    const fs::path csv = write_sample_csv(dir);
    const fs::path schema = write_sample_schema(dir);

    const auto r = run_cli("encode --csv " + csv.string() + " --schema " + schema.string() +
                           " --out-dir " + dir.string());
    CHECK(r.code == 0);
    CHECK(r.err.empty());

    const FeatureVocabulary vocab = read_vocabulary(dir / "vocabulary.json");
    CHECK(vocab.k == 100);
    CHECK(vocab.target_name == "status");

    const EncodedDataset ds = read_dataset(dir / "dataset.json");
    CHECK(ds.n_rows() == 6);
    // Three city levels plus the numeric wage column.
    CHECK(ds.n_features() == 4);
    Eigen::Index positives = 0;
    for (Eigen::Index i = 0; i < 6; ++i)
        if (ds.y(i) == 1.0) ++positives;
    CHECK(positives == 3);
}

TEST_CASE("encode honours the category cap") {
    const fs::path dir = fresh_dir("encode_topk");
    const fs::path csv = write_sample_csv(dir);
    const fs::path schema = write_sample_schema(dir);

    const auto r = run_cli("encode --csv " + csv.string() + " --schema " + schema.string() +
                           " --top-k 2 --out-dir " + dir.string());
    CHECK(r.code == 0);
    const EncodedDataset ds = read_dataset(dir / "dataset.json");
    CHECK(ds.n_features() == 3);

    const auto bad = run_cli("encode --csv " + csv.string() + " --schema " + schema.string() +
                             " --top-k 0 --out-dir " + dir.string());
    CHECK(bad.code == 2);
}

TEST_CASE("encode reports a schema column missing from the csv") {
    const fs::path dir = fresh_dir("encode_missing");
    const fs::path csv = write_sample_csv(dir);
    const fs::path schema = dir / "schema.json";
    spit(schema,
         "[{\"name\": \"height\", \"kind\": \"numeric\"},"
         " {\"name\": \"status\", \"kind\": \"target_binary\","
         "  \"positive_values\": [\"C\"], \"negative_values\": [\"D\"]}]\n");

    const auto r = run_cli("encode --csv " + csv.string() + " --schema " + schema.string() +
                           " --out-dir " + dir.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("error: ") == 0);
    CHECK(r.err.find("height") != std::string::npos);
}

TEST_CASE("cv-fit recovers a noiseless linear model") {
    const fs::path synth_dir = fresh_dir("cvfit_lasso_data");
    const auto gen = run_cli("synth --kind linear --n 150 --p 8 --sparsity 3 --noise 0"
                             " --seed 4 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path fit_dir = fresh_dir("cvfit_lasso");
    const auto r = run_cli("cv-fit --task lasso --data " + (synth_dir / "dataset.json").string() +
                           " --grid 0.0001,0.01 --k 5 --seed 7 --out-dir " + fit_dir.string());
    CHECK(r.code == 0);
    CHECK(r.out.find("selected hyperparameter") != std::string::npos);

    const json eval = json::parse(slurp(fit_dir / "evaluation.json"));
    CHECK(eval.at("task") == "lasso");
    CHECK(eval.at("score_kind") == "r2_out_of_sample");
    CHECK(eval.at("test_score").get<double>() >= 0.999);
    CHECK(eval.at("k") == 5);
    CHECK(eval.at("standardized") == true);
    CHECK(eval.at("n_train").get<int>() + eval.at("n_test").get<int>() == 150);

    CHECK(model_kind(fit_dir / "model.json") == "linear");
    const std::string csv = slurp(fit_dir / "cv_report.csv");
    CHECK(csv.rfind("hyperparameter,mean_score,std_error\n", 0) == 0);

    // Omitting --k falls back to ten folds.
    const fs::path default_dir = fresh_dir("cvfit_lasso_default_k");
    const auto d = run_cli("cv-fit --task lasso --data " +
                           (synth_dir / "dataset.json").string() +
                           " --grid 0.01 --seed 7 --out-dir " + default_dir.string());
    CHECK(d.code == 0);
    const json deval = json::parse(slurp(default_dir / "evaluation.json"));
    CHECK(deval.at("k") == 10);
}

TEST_CASE("cv-fit logreg reports every sampling scheme per fold") {
    const fs::path synth_dir = fresh_dir("cvfit_logreg_data");
    const auto gen = run_cli("synth --kind logistic --n 150 --p 4 --sparsity 2"
                             " --imbalance 0.3 --seed 5 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path fit_dir = fresh_dir("cvfit_logreg");
    const auto r = run_cli("cv-fit --task logreg --data " +
                           (synth_dir / "dataset.json").string() +
                           " --grid 0.01,0.1 --k 4 --seed 11 --out-dir " + fit_dir.string());
    CHECK(r.code == 0);

    const CvReport report = read_cv_report(fit_dir / "cv_report.json");
    CHECK(report.score_kind == "auc");
    CHECK(report.folding == "stratified");
    CHECK(report.k == 4);
    REQUIRE(report.cells.size() == 4 * 2 * 3);
    int per_scheme[3] = {0, 0, 0};
    for (const CvCell& cell : report.cells) {
        if (cell.scheme == "oversample_minority") ++per_scheme[0];
        if (cell.scheme == "undersample_majority") ++per_scheme[1];
        if (cell.scheme == "original") ++per_scheme[2];
    }
    CHECK(per_scheme[0] == 8);
    CHECK(per_scheme[1] == 8);
    CHECK(per_scheme[2] == 8);
    CHECK(model_kind(fit_dir / "model.json") == "logistic");
}

TEST_CASE("importance splits planted coefficients by sign") {
    // y = 5 x1 - 5 x2 exactly, so the fitted heads of each list are known.
    const fs::path dir = fresh_dir("importance");
    EncodedDataset ds;
    auto rng = make_rng(77);
    std::normal_distribution<double> gauss(0.0, 1.0);
    ds.x.resize(60, 4);
    ds.y.resize(60);
    for (Eigen::Index i = 0; i < 60; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) ds.x(i, j) = gauss(rng);
        ds.y(i) = 5.0 * ds.x(i, 0) - 5.0 * ds.x(i, 1);
    }
    ds.feature_names = {"f1", "f2", "f3", "f4"};
    write_dataset(dir / "dataset.json", ds);

    const auto fit = run_cli("cv-fit --task lasso --data " + (dir / "dataset.json").string() +
                             " --grid 0.001 --k 3 --seed 2 --out-dir " + dir.string());
    REQUIRE(fit.code == 0);

    const auto imp = run_cli("importance --model " + (dir / "model.json").string() +
                             " --top-n 20 --out-dir " + dir.string());
    CHECK(imp.code == 0);

    const json report = json::parse(slurp(dir / "importance.json"));
    REQUIRE(!report.at("positive").empty());
    REQUIRE(!report.at("negative").empty());
    CHECK(report.at("positive")[0].at("feature") == "f1");
    CHECK(report.at("positive")[0].at("coefficient").get<double>() > 4.0);
    CHECK(report.at("negative")[0].at("feature") == "f2");
    CHECK(report.at("negative")[0].at("coefficient").get<double>() < -4.0);

    const std::string csv = slurp(dir / "importance.csv");
    CHECK(csv.rfind("direction,feature,coefficient\n", 0) == 0);
}

TEST_CASE("evaluate writes curves for a logistic model") {
    const fs::path synth_dir = fresh_dir("evaluate_data");
    const auto gen = run_cli("synth --kind logistic --n 120 --p 4 --sparsity 2"
                             " --imbalance 0.4 --seed 6 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path fit_dir = fresh_dir("evaluate_fit");
    const auto fit = run_cli("cv-fit --task logreg --data " +
                             (synth_dir / "dataset.json").string() +
                             " --grid 0.05 --k 3 --seed 8 --out-dir " + fit_dir.string());
    REQUIRE(fit.code == 0);

    const fs::path eval_dir = fresh_dir("evaluate_out");
    const auto r = run_cli("evaluate --model " + (fit_dir / "model.json").string() + " --data " +
                           (synth_dir / "dataset.json").string() + " --out-dir " +
                           eval_dir.string());
    CHECK(r.code == 0);
    CHECK(slurp(eval_dir / "roc.csv").rfind("threshold,fpr,tpr\n", 0) == 0);
    CHECK(slurp(eval_dir / "pr_curve.csv").rfind("threshold,recall,precision\n", 0) == 0);
    const json eval = json::parse(slurp(eval_dir / "evaluation.json"));
    CHECK(eval.at("kind") == "logistic");
    CHECK(eval.at("auc").get<double>() >= 0.0);
    CHECK(eval.at("auc").get<double>() <= 1.0);
    CHECK(eval.contains("average_precision"));
}

TEST_CASE("evaluate rejects mismatched feature names") {
    const fs::path lin_dir = fresh_dir("mismatch_linear");
    const auto gen_lin = run_cli("synth --kind linear --n 50 --p 3 --sparsity 2 --noise 0.5"
                                 " --seed 9 --out-dir " + lin_dir.string());
    REQUIRE(gen_lin.code == 0);
    const fs::path fit_dir = fresh_dir("mismatch_fit");
    const auto fit = run_cli("cv-fit --task lasso --data " +
                             (lin_dir / "dataset.json").string() +
                             " --grid 0.01 --k 3 --seed 10 --out-dir " + fit_dir.string());
    REQUIRE(fit.code == 0);

    const fs::path other_dir = fresh_dir("mismatch_other");
    const auto gen_other = run_cli("synth --kind linear --n 50 --p 5 --sparsity 2 --noise 0.5"
                                   " --seed 9 --out-dir " + other_dir.string());
    REQUIRE(gen_other.code == 0);

    const auto r = run_cli("evaluate --model " + (fit_dir / "model.json").string() + " --data " +
                           (other_dir / "dataset.json").string() + " --out-dir " +
                           fresh_dir("mismatch_out").string());
    CHECK(r.code == 1);
    CHECK(r.err.find("feature names do not match") != std::string::npos);
}

TEST_CASE("sweep covers the default grids and stays deterministic") {
    const fs::path synth_dir = fresh_dir("sweep_data");
    const auto gen = run_cli("synth --kind logistic --n 200 --p 3 --sparsity 2"
                             " --imbalance 0.25 --seed 3 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path a_dir = fresh_dir("sweep_a");
    const auto a = run_cli("sweep --data " + (synth_dir / "dataset.json").string() +
                           " --seed 13 --out-dir " + a_dir.string());
    CHECK(a.code == 0);
    const std::string csv = slurp(a_dir / "sweep.csv");
    CHECK(csv.rfind("lambda,gamma,scheme,auc\n", 0) == 0);
    // Four default penalties, five gammas, three schemes.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 4 * 5 * 3);
    CHECK(csv.find("\n0.0001,0,original,") != std::string::npos);
    CHECK(csv.find("\n100,1,undersample_majority,") != std::string::npos);

    const fs::path b_dir = fresh_dir("sweep_b");
    const auto b = run_cli("sweep --data " + (synth_dir / "dataset.json").string() +
                           " --seed 13 --out-dir " + b_dir.string());
    CHECK(b.code == 0);
    CHECK(slurp(b_dir / "sweep.csv") == csv);
}

TEST_CASE("sweep rejects an empty gamma grid") {
    const fs::path synth_dir = fresh_dir("sweep_empty_data");
    const auto gen = run_cli("synth --kind logistic --n 80 --p 2 --sparsity 1"
                             " --imbalance 0.4 --seed 1 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);
    const auto r = run_cli("sweep --data " + (synth_dir / "dataset.json").string() +
                           " --gamma-grid , --seed 1 --out-dir " +
                           fresh_dir("sweep_empty_out").string());
    CHECK(r.code == 2);
    CHECK(r.err.find("--gamma-grid") != std::string::npos);

    // An empty list in a config file is rejected at parse time as well.
    const fs::path cfg = base_dir() / "sweep_empty.json";
    spit(cfg, std::string("{\"sweep\": {\"data\": \"") + (synth_dir / "dataset.json").string() +
                  "\", \"gamma-grid\": [], \"seed\": 1, \"out-dir\": \"" +
                  fresh_dir("sweep_empty_cfg_out").string() + "\"}}\n");
    const auto c = run_cli("sweep --config " + cfg.string());
    CHECK(c.code == 2);
    CHECK(c.err.find("--gamma-grid") != std::string::npos);
}

TEST_CASE("corrupt model files exit with a prefixed error") {
    const fs::path dir = fresh_dir("corrupt");
    spit(dir / "model.json", "this is not json");
    const auto r = run_cli("importance --model " + (dir / "model.json").string() +
                           " --out-dir " + dir.string());
    CHECK(r.code == 1);
    CHECK(r.err.find("error: ") == 0);
    CHECK(r.err.find("invalid JSON") != std::string::npos);
}

TEST_CASE("missing required options exit with usage failure") {
    const fs::path dir = fresh_dir("missing_opt");
    const auto gen = run_cli("synth --kind linear --n 30 --p 2 --sparsity 1 --noise 0.5"
                             " --seed 2 --out-dir " + dir.string());
    REQUIRE(gen.code == 0);
    const auto r = run_cli("cv-fit --task lasso --data " + (dir / "dataset.json").string() +
                           " --out-dir " + dir.string());
    CHECK(r.code == 2);
    CHECK(r.err.find("--seed") != std::string::npos);

    const auto bad_kind = run_cli("synth --kind quadratic --seed 1 --out-dir " + dir.string());
    CHECK(bad_kind.code == 2);
}

TEST_CASE("help exits cleanly") {
    const auto r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK(r.out.find("encode") != std::string::npos);
    CHECK(r.out.find("cv-fit") != std::string::npos);
    CHECK(r.out.find("sweep") != std::string::npos);
}

TEST_CASE("a json config supplies options and the command line wins") {
    const fs::path synth_dir = fresh_dir("config_data");
    const auto gen = run_cli("synth --kind linear --n 80 --p 4 --sparsity 2 --noise 0.3"
                             " --seed 21 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path out_dir = fresh_dir("config_out");
    const fs::path cfg = base_dir() / "config.json";
    spit(cfg, std::string("{\"cv-fit\": {\"task\": \"lasso\", \"data\": \"") +
                  (synth_dir / "dataset.json").string() + "\", \"grid\": [0.01, 0.1]," +
                  " \"k\": 3, \"seed\": 5, \"out-dir\": \"" + out_dir.string() + "\"}}\n");

    const auto r = run_cli("cv-fit --config " + cfg.string());
    CHECK(r.code == 0);
    const json eval = json::parse(slurp(out_dir / "evaluation.json"));
    CHECK(eval.at("k") == 3);
    CHECK(eval.at("seed") == 5);

    const fs::path override_dir = fresh_dir("config_override");
    const auto o = run_cli("cv-fit --config " + cfg.string() + " --k 4 --out-dir " +
                           override_dir.string());
    CHECK(o.code == 0);
    const json oeval = json::parse(slurp(override_dir / "evaluation.json"));
    CHECK(oeval.at("k") == 4);
}

TEST_CASE("cv-fit reruns are byte identical") {
    const fs::path synth_dir = fresh_dir("rerun_data");
    const auto gen = run_cli("synth --kind logistic --n 120 --p 3 --sparsity 2"
                             " --imbalance 0.35 --seed 30 --out-dir " + synth_dir.string());
    REQUIRE(gen.code == 0);

    const fs::path a_dir = fresh_dir("rerun_a");
    const fs::path b_dir = fresh_dir("rerun_b");
    const std::string args = "cv-fit --task logreg --data " +
                             (synth_dir / "dataset.json").string() +
                             " --grid 0.01,0.1 --k 3 --seed 17 --out-dir ";
    REQUIRE(run_cli(args + a_dir.string()).code == 0);
    REQUIRE(run_cli(args + b_dir.string()).code == 0);
    for (const std::string name : {"model.json", "cv_report.json", "cv_report.csv"})
        CHECK(slurp(a_dir / name) == slurp(b_dir / name));

    // Synthetic data generation is seed deterministic too.
    const fs::path s2 = fresh_dir("rerun_data_again");
    REQUIRE(run_cli("synth --kind logistic --n 120 --p 3 --sparsity 2 --imbalance 0.35"
                    " --seed 30 --out-dir " + s2.string()).code == 0);
    CHECK(slurp(s2 / "dataset.json") == slurp(synth_dir / "dataset.json"));
}
