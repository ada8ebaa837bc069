#include <doctest.h>

#include <grmssvdd/artifact_io.hpp>
#include <grmssvdd/event_io.hpp>
#include <grmssvdd/experiment.hpp>
#include <grmssvdd/metrics.hpp>
#include <grmssvdd/rng.hpp>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_util.hpp"

namespace fs = std::filesystem;
using namespace grmssvdd;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("grmssvdd_exp_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name = "") const {
        return name.empty() ? path.string() : (path / name).string();
    }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

// Two well-separated blobs so holdout metrics are meaningful.
MultimodalDataset blob_dataset(int n_pos, int n_neg, grmssvdd::Rng& rng) {
    std::vector<MultimodalInstance> instances;
    auto add = [&](int label, double offset) {
        MultimodalInstance inst;
        inst.label = label;
        inst.source_event = label == 1 ? "pos" : "neg";
        inst.end_time = static_cast<double>(instances.size());
        for (int m = 0; m < 2; ++m) {
            Vector v(4);
            for (int j = 0; j < 4; ++j) v[j] = offset + 0.1 * rng.normal();
            inst.vectors_per_modality.push_back(std::move(v));
        }
        instances.push_back(std::move(inst));
    };
    // Mixed order: holdout third must contain both classes.
    const int total = n_pos + n_neg;
    for (int i = 0; i < total; ++i) {
        if (i % 3 == 2 && n_neg > 0) { add(0, 3.0); --n_neg; }
        else { add(1, 0.0); }
    }
    return assemble_dataset(std::move(instances));
}

ModelConfig plain_config() {
    ModelConfig cfg;
    cfg.d = 2;
    cfg.C = 0.5;
    cfg.max_iter = 5;
    cfg.signs = {1, 1};
    return cfg;
}

}  // namespace

TEST_CASE("grid expansion collapses ignored parameters") {
    GridSpec grid;
    grid.d = {2};
    grid.C = {0.3};
    grid.beta = {0.0};
    grid.sigma = {1.0, 10.0};
    grid.k = {0, 1};
    grid.regularizers = {0, 8};
    grid.signs.clear();

    ModelConfig base;
    base.use_npt = true;

    // M=3: 8 sign patterns. id 0 drops k (1 value), id 8 keeps both.
    auto with_npt = expand_grid(grid, base, 3);
    CHECK(with_npt.size() == 16 + 32);
    for (const auto& c : with_npt) {
        CHECK(c.use_npt);
        if (c.regularizer == 0) CHECK(c.k == 0);
        c.validate(3);
    }

    // Without NPT sigma collapses to the base value.
    base.use_npt = false;
    base.sigma = 7.0;
    auto without_npt = expand_grid(grid, base, 3);
    CHECK(without_npt.size() == 8 + 16);
    for (const auto& c : without_npt) CHECK(c.sigma == 7.0);

    // Pinned signs shrink the expansion.
    grid.signs = {{1, -1, 1}};
    auto pinned = expand_grid(grid, base, 3);
    CHECK(pinned.size() == 1 + 2);
    CHECK(pinned[0].signs == std::vector<int>{1, -1, 1});

    GridSpec empty_d = grid;
    empty_d.d.clear();
    CHECK_THROWS_AS(expand_grid(empty_d, base, 3), InvalidInput);

    GridSpec no_sigma = grid;
    no_sigma.sigma.clear();
    expand_grid(no_sigma, base, 3);  // fine without NPT
    base.use_npt = true;
    CHECK_THROWS_AS(expand_grid(no_sigma, base, 3), InvalidInput);
}

TEST_CASE("gridsearch rows match a manual holdout evaluation") {
    grmssvdd::Rng rng(601);
    auto data = blob_dataset(12, 6, rng);
    REQUIRE(data.size() == 18);

    auto cfg = plain_config();
    const std::vector<std::string> strategies = {"and", "or"};
    auto rows = run_gridsearch(data, {cfg}, strategies);
    REQUIRE(rows.size() == 2);
    CHECK_FALSE(rows[0].failed);
    CHECK(rows[0].strategy == "and");
    CHECK(rows[1].strategy == "or");

    // Same protocol by hand: fit on the first two thirds' positives.
    MultimodalDataset fit_side;
    fit_side.M = data.M;
    fit_side.D = data.D;
    MultimodalDataset holdout = fit_side;
    for (int i = 0; i < 18; ++i)
        (i < 12 ? fit_side : holdout).instances.push_back(
            data.instances[static_cast<std::size_t>(i)]);

    auto model = train(filter_by_label(fit_side, 1), cfg);
    for (std::size_t s = 0; s < strategies.size(); ++s) {
        const auto strategy = DecisionStrategy::parse(strategies[s]);
        std::vector<bool> fused, labels;
        for (const auto& inst : holdout.instances) {
            fused.push_back(fuse(classify_modalities(model, inst.vectors_per_modality),
                                 strategy));
            labels.push_back(inst.label == 1);
        }
        CHECK(rows[s].gm == reliability_metrics(fused, labels).gm);
    }

    // The separated blobs should actually be separable.
    CHECK(rows[1].gm == 1.0);
}

TEST_CASE("infeasible candidates fail without sinking the run") {
    grmssvdd::Rng rng(611);
    auto data = blob_dataset(12, 6, rng);

    auto good = plain_config();
    auto bad = plain_config();
    bad.C = 0.05;  // fit side has 8 positives over 2 modalities: needs >= 1/16

    auto rows = run_gridsearch(data, {bad, good}, {"or"});
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].failed);
    CHECK_FALSE(rows[0].error.empty());
    CHECK(rows[0].gm == 0.0);
    CHECK_FALSE(rows[1].failed);
    CHECK(rows[1].gm > 0.0);
}

TEST_CASE("worker count does not change gridsearch results") {
    grmssvdd::Rng rng(621);
    auto data = blob_dataset(15, 9, rng);
    std::vector<ModelConfig> candidates;
    for (double C : {0.3, 0.5, 1.0}) {
        auto c = plain_config();
        c.C = C;
        candidates.push_back(c);
    }

    setenv("GRMSSVDD_WORKERS", "1", 1);
    auto serial = run_gridsearch(data, candidates, {"and", "or"});
    setenv("GRMSSVDD_WORKERS", "3", 1);
    auto parallel = run_gridsearch(data, candidates, {"and", "or"});
    unsetenv("GRMSSVDD_WORKERS");

    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].gm == parallel[i].gm);
        CHECK(serial[i].strategy == parallel[i].strategy);
        CHECK(serial[i].failed == parallel[i].failed);
    }

    setenv("GRMSSVDD_WORKERS", "zero", 1);
    CHECK_THROWS_AS(run_gridsearch(data, candidates, {"or"}), InvalidInput);
    unsetenv("GRMSSVDD_WORKERS");

    CHECK_THROWS_AS(run_gridsearch(data, candidates, {}), InvalidInput);
    MultimodalDataset tiny;
    tiny.M = data.M;
    tiny.D = data.D;
    tiny.instances.assign(data.instances.begin(), data.instances.begin() + 2);
    CHECK_THROWS_AS(run_gridsearch(tiny, candidates, {"or"}), InvalidInput);
}

TEST_CASE("config files override defaults field by field") {
    TempDir dir("config");
    {
        std::ofstream out(dir.str("config.json"));
        out << R"({
  "events_dir": "ev",
  "out_dir": "res",
  "w": 8,
  "pca_components": 12,
  "seed": 42,
  "strategies": ["or"],
  "model": {"d": 3, "C": 0.4, "use_npt": true, "sigma": 2.0, "max_iter": 7},
  "grid": {"d": [2, 3], "regularizers": [0, 8]},
  "synth": {"n_events": 9, "channels_per_modality": [3, 4], "shape": "dropout"}
})";
    }
    auto config = load_experiment_config(dir.str("config.json"));
    CHECK(config.events_dir == "ev");
    CHECK(config.out_dir == "res");
    CHECK(config.w == 8);
    CHECK(config.pca_components == 12);
    CHECK(config.seed == 42);
    CHECK(config.strategies == std::vector<std::string>{"or"});
    CHECK(config.model.d == 3);
    CHECK(config.model.C == 0.4);
    CHECK(config.model.use_npt);
    CHECK(config.model.sigma == 2.0);
    CHECK(config.model.max_iter == 7);
    CHECK(config.grid.d == std::vector<int>{2, 3});
    CHECK(config.grid.regularizers == std::vector<int>{0, 8});
    CHECK(config.grid.C == GridSpec{}.C);  // untouched lists keep defaults
    CHECK(config.synth.n_events == 9);
    CHECK(config.synth.shape == AnomalyShape::Dropout);
    CHECK(config.synth.n_timesteps == SynthConfig{}.n_timesteps);
    CHECK(config.train_fraction == 0.7);
    CHECK(config.resolved_model_path() == (fs::path("res") / "model.json").string());
    config.model_path = "elsewhere.json";
    CHECK(config.resolved_model_path() == "elsewhere.json");

    CHECK_THROWS_AS(load_experiment_config(dir.str("missing.json")), InvalidInput);
}

TEST_CASE("pipeline commands compose on synthetic events") {
    TempDir dir("pipeline");
    ExperimentConfig config;
    config.events_dir = dir.str("events");
    config.out_dir = dir.str("out");
    config.w = 8;
    config.pca_components = 10;
    config.train_fraction = 0.7;
    config.cct = 0.5;
    config.seed = 3;
    config.strategies = {"and", "or", "uni0"};
    config.synth.n_events = 12;
    config.synth.channels_per_modality = {3, 4};
    config.synth.n_timesteps = 120;
    config.synth.dt = 0.05;
    config.synth.magnitude = 10.0;
    config.model = plain_config();
    config.model.signs = {-1, -1};

    REQUIRE(cmd_generate(config) == 0);
    CHECK(read_events_dir(config.events_dir).size() == 12);

    REQUIRE(cmd_preprocess(config) == 0);
    auto train_set = load_dataset(dir.str("out/train.json"));
    auto test_set = load_dataset(dir.str("out/test.json"));
    CHECK(train_set.size() == 24);  // floor(0.7 * 12) = 8 events, 3 windows each
    CHECK(test_set.size() == 12);
    CHECK(train_set.M == 2);

    REQUIRE(cmd_train(config) == 0);
    auto model = load_model(config.resolved_model_path());
    CHECK(model.modality_count() == 2);
    CHECK_FALSE(model.pca.empty());  // artifacts attached from preprocessing.json
    CHECK_FALSE(model.normalization.empty());

    REQUIRE(cmd_evaluate(config) == 0);
    auto report = nlohmann::json::parse(slurp(dir.str("out/report.json")));
    REQUIRE(report.is_array());
    REQUIRE(report.size() == 3);
    CHECK(report[0].at("strategy") == "and");
    CHECK(fs::exists(dir.str("out/report.txt")));
    for (const char* name : {"and", "or", "uni0"})
        CHECK(fs::exists(dir.str("out/predictions_" + std::string(name) + ".csv")));

    REQUIRE(cmd_earliness(config) == 0);
    auto earl = nlohmann::json::parse(slurp(dir.str("out/earliness.json")));
    CHECK(earl.at("cct").get<double>() == 0.5);
    CHECK(earl.at("ttr").get<double>() + earl.at("ftr").get<double>() == 1.0);
    CHECK(earl.at("events").size() == 4);
}

TEST_CASE("gridsearch command ranks, saves, and repeats byte for byte") {
    TempDir dir("grid_cmd");
    ExperimentConfig config;
    config.events_dir = dir.str("events");
    config.out_dir = dir.str("out");
    config.w = 8;
    config.pca_components = 10;
    config.seed = 3;
    config.strategies = {"and", "or"};
    config.synth.n_events = 12;
    config.synth.channels_per_modality = {3, 4};
    config.synth.n_timesteps = 120;
    config.synth.dt = 0.05;
    config.synth.magnitude = 10.0;
    config.model.max_iter = 5;
    config.grid.d = {2};
    config.grid.C = {0.3, 0.5};
    config.grid.beta = {0.0};
    config.grid.sigma = {1.0};
    config.grid.k = {0};
    config.grid.regularizers = {0};
    config.grid.signs = {{-1, -1}};

    REQUIRE(cmd_generate(config) == 0);
    REQUIRE(cmd_preprocess(config) == 0);
    REQUIRE(cmd_gridsearch(config) == 0);

    const std::string first = slurp(dir.str("out/gridsearch.json"));
    auto rows = nlohmann::json::parse(first);
    REQUIRE(rows.is_array());
    REQUIRE(rows.size() == 4);  // 2 candidates x 2 strategies
    double prev = 2.0;
    bool seen_failed = false;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].at("rank").get<std::size_t>() == i + 1);
        const bool failed = rows[i].at("failed").get<bool>();
        if (failed) seen_failed = true;
        else {
            CHECK_FALSE(seen_failed);  // failures sort last
            const double gm = rows[i].at("gm").get<double>();
            CHECK(gm <= prev);
            prev = gm;
        }
    }
    CHECK(fs::exists(dir.str("out/gridsearch.txt")));

    // The winner model is retrained on the full training set and saved.
    auto model = load_model(config.resolved_model_path());
    CHECK(model.config.d == 2);
    CHECK_FALSE(model.pca.empty());

    REQUIRE(cmd_gridsearch(config) == 0);
    CHECK(slurp(dir.str("out/gridsearch.json")) == first);
}

TEST_CASE("command line surface") {
    TempDir dir("cli");
    {
        std::ofstream out(dir.str("config.json"));
        out << R"({
  "events_dir": ")" << dir.str("events")
            << R"(",
  "out_dir": ")" << dir.str("out")
            << R"(",
  "w": 8,
  "pca_components": 10,
  "synth": {"n_events": 9, "channels_per_modality": [3, 4], "n_timesteps": 120,
            "dt": 0.05, "magnitude": 10.0}
})";
    }

    auto run = [&](std::vector<std::string> args) {
        std::vector<const char*> argv = {"grmssvdd"};
        for (const auto& a : args) argv.push_back(a.c_str());
        return run_cli(static_cast<int>(argv.size()), argv.data());
    };

    CHECK(run({"generate", "--config", dir.str("config.json"), "--seed", "3"}) == 0);
    CHECK(read_events_dir(dir.str("events")).size() == 9);
    CHECK(run({"preprocess", "--config", dir.str("config.json"), "--seed", "3"}) == 0);
    CHECK(run({"train", "--config", dir.str("config.json"), "--seed", "3"}) == 0);
    CHECK(run({"evaluate", "--config", dir.str("config.json"), "--seed", "3",
               "--strategy", "or"}) == 0);
    CHECK(fs::exists(dir.str("out/predictions_or.csv")));

    CHECK(run({"bogus"}) != 0);
    CHECK(run({"evaluate", "--strategy", "nonsense"}) != 0);
    CHECK(run({"train", "--config", dir.str("nope.json")}) != 0);
    CHECK(run({}) != 0);
}
