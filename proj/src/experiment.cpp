#include "grmssvdd/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "grmssvdd/artifact_io.hpp"
#include "grmssvdd/event_io.hpp"
#include "grmssvdd/metrics.hpp"
#include "grmssvdd/preprocessing.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace grmssvdd {

namespace {

int worker_count() {
    if (const char* env = std::getenv("GRMSSVDD_WORKERS")) {
        int n = 0;
        const auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), n);
        if (ec == std::errc() && *ptr == '\0' && n >= 1) return n;
        throw InvalidInput("GRMSSVDD_WORKERS must be a positive integer");
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

template <typename T>
void read_into(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void read_model_config(const json& j, ModelConfig& model) {
    read_into(j, "d", model.d);
    read_into(j, "C", model.C);
    read_into(j, "beta", model.beta);
    read_into(j, "eta", model.eta);
    read_into(j, "sigma", model.sigma);
    read_into(j, "k", model.k);
    read_into(j, "regularizer", model.regularizer);
    read_into(j, "signs", model.signs);
    read_into(j, "use_npt", model.use_npt);
    read_into(j, "max_iter", model.max_iter);
}

std::string instance_id(const MultimodalInstance& inst) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), inst.end_time);
    (void)ec;
    return inst.source_event + "@" + std::string(buf, ptr);
}

std::vector<bool> modality_verdicts(const TrainedModel& model,
                                    const MultimodalInstance& inst) {
    return classify_modalities(model, inst.vectors_per_modality);
}

json model_config_to_json(const ModelConfig& c) {
    return json{{"d", c.d},     {"C", c.C},         {"beta", c.beta},
                {"eta", c.eta}, {"sigma", c.sigma}, {"k", c.k},
                {"regularizer", c.regularizer},     {"signs", c.signs},
                {"use_npt", c.use_npt},             {"max_iter", c.max_iter},
                {"seed", c.seed}};
}

std::string signs_label(const std::vector<int>& signs) {
    std::string out;
    for (int s : signs) out += s > 0 ? '+' : '-';
    return out;
}

void attach_preprocessing(TrainedModel& model, const ExperimentConfig& config) {
    const fs::path path = fs::path(config.out_dir) / "preprocessing.json";
    if (!fs::exists(path)) return;
    PreprocessingArtifacts artifacts = load_preprocessing(path.string());
    model.pca = std::move(artifacts.pca);
    model.normalization = std::move(artifacts.normalization);
}

int fail(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 1;
}

}  // namespace

std::string ExperimentConfig::resolved_model_path() const {
    if (!model_path.empty()) return model_path;
    return (fs::path(out_dir) / "model.json").string();
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open config: " + path);
    const json doc = json::parse(in);

    ExperimentConfig config;
    read_into(doc, "events_dir", config.events_dir);
    read_into(doc, "out_dir", config.out_dir);
    read_into(doc, "model_path", config.model_path);
    read_into(doc, "w", config.w);
    read_into(doc, "noise_factor", config.noise_factor);
    read_into(doc, "pca_components", config.pca_components);
    read_into(doc, "train_fraction", config.train_fraction);
    read_into(doc, "cct", config.cct);
    read_into(doc, "seed", config.seed);
    read_into(doc, "strategies", config.strategies);

    if (doc.contains("model")) read_model_config(doc.at("model"), config.model);

    if (doc.contains("grid")) {
        const json& g = doc.at("grid");
        read_into(g, "d", config.grid.d);
        read_into(g, "C", config.grid.C);
        read_into(g, "beta", config.grid.beta);
        read_into(g, "sigma", config.grid.sigma);
        read_into(g, "k", config.grid.k);
        read_into(g, "regularizers", config.grid.regularizers);
        read_into(g, "signs", config.grid.signs);
    }

    if (doc.contains("synth")) {
        const json& s = doc.at("synth");
        read_into(s, "n_events", config.synth.n_events);
        read_into(s, "channels_per_modality", config.synth.channels_per_modality);
        read_into(s, "n_timesteps", config.synth.n_timesteps);
        read_into(s, "dt", config.synth.dt);
        if (s.contains("shape"))
            config.synth.shape = anomaly_shape_from(s.at("shape").get<std::string>());
        read_into(s, "magnitude", config.synth.magnitude);
        read_into(s, "affected_fraction", config.synth.affected_fraction);
        read_into(s, "start_min_frac", config.synth.start_min_frac);
        read_into(s, "start_max_frac", config.synth.start_max_frac);
        read_into(s, "len_min_frac", config.synth.len_min_frac);
        read_into(s, "len_max_frac", config.synth.len_max_frac);
    }
    return config;
}

int cmd_generate(const ExperimentConfig& config) {
    SynthConfig synth = config.synth;
    synth.seed = config.seed;
    const auto events = generate(synth);
    for (const auto& event : events) write_event(event, config.events_dir);
    std::cout << "wrote " << events.size() << " events to " << config.events_dir << "\n";
    return 0;
}

namespace {

struct PreprocessedSplit {
    MultimodalDataset train;
    MultimodalDataset test;
    PreprocessingArtifacts artifacts;
};

PreprocessedSplit preprocess_events(const std::vector<EventSeries>& events,
                                    const ExperimentConfig& config) {
    const auto [train_events, test_events] =
        split_train_test(events, config.train_fraction, config.seed);

    const WindowSpec spec{config.w};
    auto window_all = [&](const std::vector<EventSeries>& side) {
        std::vector<MultimodalInstance> instances;
        for (const auto& event : side) {
            auto extracted = extract_reliability_instances(event, spec);
            std::move(extracted.begin(), extracted.end(), std::back_inserter(instances));
        }
        if (instances.empty()) throw InvalidInput("no instances extracted for one split side");
        return assemble_dataset(std::move(instances));
    };

    MultimodalDataset train = window_all(train_events);
    MultimodalDataset test = window_all(test_events);

    if (config.noise_factor > 0.0) {
        const auto channel_std = per_channel_std(train, config.w);
        train = inject_noise(train, config.noise_factor, channel_std, config.w,
                             config.seed + 11);
        test = inject_noise(test, config.noise_factor, channel_std, config.w,
                            config.seed + 12);
    }

    int n_components = config.pca_components;
    for (int dm : train.D) n_components = std::min(n_components, dm);
    n_components = std::min(n_components, train.size());

    PreprocessedSplit out;
    out.artifacts.w = config.w;
    out.artifacts.noise_factor = config.noise_factor;
    out.artifacts.pca = fit_pca(train, n_components);
    train = apply_pca(out.artifacts.pca, train);
    test = apply_pca(out.artifacts.pca, test);

    shuffle_dataset(train, config.seed + 21);
    shuffle_dataset(test, config.seed + 22);

    NormalizedSplit normalized = fit_apply_normalization(train, test);
    out.train = std::move(normalized.train);
    out.test = std::move(normalized.test);
    out.artifacts.normalization = std::move(normalized.stats);
    return out;
}

}  // namespace

int cmd_preprocess(const ExperimentConfig& config) {
    const auto events = read_events_dir(config.events_dir);
    if (events.empty()) return fail("no events found in " + config.events_dir);

    PreprocessedSplit split = preprocess_events(events, config);

    fs::create_directories(config.out_dir);
    const fs::path out(config.out_dir);
    save_dataset(split.train, (out / "train.json").string());
    save_dataset(split.test, (out / "test.json").string());
    save_preprocessing(split.artifacts, (out / "preprocessing.json").string());
    std::cout << "train instances: " << split.train.size()
              << ", test instances: " << split.test.size() << "\n";
    return 0;
}

int cmd_train(const ExperimentConfig& config) {
    const fs::path out(config.out_dir);
    MultimodalDataset train_set = load_dataset((out / "train.json").string());

    ModelConfig model_config = config.model;
    model_config.seed = config.seed;
    if (model_config.signs.empty())
        model_config.signs.assign(static_cast<std::size_t>(train_set.M), -1);

    const MultimodalDataset targets = filter_by_label(train_set, 1);
    TrainedModel model = train(targets, model_config);
    attach_preprocessing(model, config);

    fs::create_directories(out);
    save_model(model, config.resolved_model_path());
    std::cout << "trained in " << model.iterations_run << " iterations, radius "
              << model.svdd.radius << "\n";
    return 0;
}

int cmd_evaluate(const ExperimentConfig& config) {
    const fs::path out(config.out_dir);
    const TrainedModel model = load_model(config.resolved_model_path());
    const MultimodalDataset test = load_dataset((out / "test.json").string());

    std::vector<std::string> ids;
    std::vector<std::vector<bool>> verdicts;
    std::vector<bool> labels;
    for (const auto& inst : test.instances) {
        ids.push_back(instance_id(inst));
        verdicts.push_back(modality_verdicts(model, inst));
        labels.push_back(inst.label == 1);
    }

    fs::create_directories(out);
    std::vector<EvaluationReport> reports;
    for (const auto& name : config.strategies) {
        const DecisionStrategy strategy = DecisionStrategy::parse(name);
        std::vector<bool> fused(verdicts.size());
        for (std::size_t i = 0; i < verdicts.size(); ++i)
            fused[i] = fuse(verdicts[i], strategy);
        reports.push_back(reliability_metrics(fused, labels));
        save_predictions_csv(ids, verdicts, fused, labels,
                             (out / ("predictions_" + name + ".csv")).string());
    }
    save_reports(config.strategies, reports, (out / "report.json").string(),
                 (out / "report.txt").string());
    std::cout << report_table(config.strategies, reports);
    return 0;
}

std::vector<ModelConfig> expand_grid(const GridSpec& grid, const ModelConfig& base,
                                     int modality_count) {
    if (grid.d.empty() || grid.C.empty() || grid.beta.empty() ||
        grid.regularizers.empty() || grid.k.empty() ||
        (base.use_npt && grid.sigma.empty()))
        throw InvalidInput("expand_grid: every grid list must be non-empty");

    std::vector<std::vector<int>> sign_choices = grid.signs;
    if (sign_choices.empty()) {
        for (int mask = 0; mask < (1 << modality_count); ++mask) {
            std::vector<int> signs(static_cast<std::size_t>(modality_count), -1);
            for (int m = 0; m < modality_count; ++m)
                if (mask & (1 << m)) signs[static_cast<std::size_t>(m)] = 1;
            sign_choices.push_back(std::move(signs));
        }
    }
    const std::vector<double> sigmas =
        base.use_npt ? grid.sigma : std::vector<double>{base.sigma};

    std::vector<ModelConfig> out;
    for (int id : grid.regularizers) {
        // k only matters on the graph path; one canonical value elsewhere.
        const std::vector<int> ks = id >= 7 ? grid.k : std::vector<int>{0};
        for (int d : grid.d)
            for (double C : grid.C)
                for (double beta : grid.beta)
                    for (double sigma : sigmas)
                        for (int k : ks)
                            for (const auto& signs : sign_choices) {
                                ModelConfig c = base;
                                c.regularizer = id;
                                c.d = d;
                                c.C = C;
                                c.beta = beta;
                                c.sigma = sigma;
                                c.k = k;
                                c.signs = signs;
                                out.push_back(std::move(c));
                            }
    }
    return out;
}

std::vector<GridResult> run_gridsearch(const MultimodalDataset& train_set,
                                       const std::vector<ModelConfig>& candidates,
                                       const std::vector<std::string>& strategies) {
    if (strategies.empty()) throw InvalidInput("run_gridsearch: no strategies");
    const int holdout_size = train_set.size() / 3;
    if (holdout_size < 1)
        throw InvalidInput("run_gridsearch: training set too small for a holdout third");

    MultimodalDataset fit_side;
    fit_side.M = train_set.M;
    fit_side.D = train_set.D;
    MultimodalDataset holdout;
    holdout.M = train_set.M;
    holdout.D = train_set.D;
    const int fit_size = train_set.size() - holdout_size;
    for (int i = 0; i < train_set.size(); ++i) {
        (i < fit_size ? fit_side : holdout)
            .instances.push_back(train_set.instances[static_cast<std::size_t>(i)]);
    }
    const MultimodalDataset fit_targets = filter_by_label(fit_side, 1);

    std::vector<bool> holdout_labels;
    for (const auto& inst : holdout.instances) holdout_labels.push_back(inst.label == 1);

    std::vector<GridResult> results(candidates.size() * strategies.size());
    std::atomic<std::size_t> next{0};

    auto work = [&]() {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= candidates.size()) return;
            const std::size_t row0 = c * strategies.size();
            try {
                const TrainedModel model = train(fit_targets, candidates[c]);
                std::vector<std::vector<bool>> verdicts;
                verdicts.reserve(holdout.instances.size());
                for (const auto& inst : holdout.instances)
                    verdicts.push_back(modality_verdicts(model, inst));
                for (std::size_t s = 0; s < strategies.size(); ++s) {
                    GridResult& r = results[row0 + s];
                    r.config = candidates[c];
                    r.strategy = strategies[s];
                    const DecisionStrategy strategy = DecisionStrategy::parse(strategies[s]);
                    std::vector<bool> fused(verdicts.size());
                    for (std::size_t i = 0; i < verdicts.size(); ++i)
                        fused[i] = fuse(verdicts[i], strategy);
                    r.gm = reliability_metrics(fused, holdout_labels).gm;
                }
            } catch (const std::exception& e) {
                for (std::size_t s = 0; s < strategies.size(); ++s) {
                    GridResult& r = results[row0 + s];
                    r.config = candidates[c];
                    r.strategy = strategies[s];
                    r.failed = true;
                    r.error = e.what();
                }
            }
        }
    };

    const int workers =
        std::min<int>(worker_count(), static_cast<int>(candidates.size()));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return results;
}

int cmd_gridsearch(const ExperimentConfig& config) {
    const fs::path out(config.out_dir);
    MultimodalDataset train_set = load_dataset((out / "train.json").string());

    ModelConfig base = config.model;
    base.seed = config.seed;
    if (base.signs.empty()) base.signs.assign(static_cast<std::size_t>(train_set.M), -1);

    const auto candidates = expand_grid(config.grid, base, train_set.M);
    auto results = run_gridsearch(train_set, candidates, config.strategies);

    std::vector<std::size_t> order(results.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (results[a].failed != results[b].failed) return !results[a].failed;
        return results[a].gm > results[b].gm;
    });

    json rows = json::array();
    std::string table =
        "rank  id  d    C      beta     sigma  k  signs  strategy  gm\n";
    char buf[160];
    for (std::size_t rank = 0; rank < order.size(); ++rank) {
        const GridResult& r = results[order[rank]];
        json row;
        row["rank"] = rank + 1;
        row["config"] = model_config_to_json(r.config);
        row["strategy"] = r.strategy;
        row["gm"] = r.gm;
        row["failed"] = r.failed;
        if (r.failed) row["error"] = r.error;
        rows.push_back(std::move(row));
        char gm_text[24];
        if (r.failed) {
            std::snprintf(gm_text, sizeof(gm_text), "failed");
        } else {
            std::snprintf(gm_text, sizeof(gm_text), "%.4f", r.gm);
        }
        std::snprintf(buf, sizeof(buf),
                      "%-5zu %-3d %-4d %-6.3g %-8.3g %-6.3g %-2d %-6s %-9s %s\n",
                      rank + 1, r.config.regularizer, r.config.d, r.config.C,
                      r.config.beta, r.config.sigma, r.config.k,
                      signs_label(r.config.signs).c_str(), r.strategy.c_str(), gm_text);
        table += buf;
    }

    fs::create_directories(out);
    {
        std::ofstream js(out / "gridsearch.json");
        js << rows.dump(2) << "\n";
        std::ofstream txt(out / "gridsearch.txt");
        txt << table;
    }

    const auto winner_it =
        std::find_if(order.begin(), order.end(),
                     [&](std::size_t i) { return !results[i].failed; });
    if (winner_it == order.end()) return fail("every grid candidate failed");
    const GridResult& winner = results[*winner_it];

    TrainedModel model = train(filter_by_label(train_set, 1), winner.config);
    attach_preprocessing(model, config);
    save_model(model, config.resolved_model_path());

    std::cout << "grid rows: " << results.size() << ", best gm " << winner.gm
              << " (regularizer " << winner.config.regularizer << ", strategy "
              << winner.strategy << ")\n";
    return 0;
}

int cmd_earliness(const ExperimentConfig& config) {
    const TrainedModel model = load_model(config.resolved_model_path());
    if (model.pca.empty())
        return fail("model has no preprocessing artifacts; cannot classify raw windows");

    const auto events = read_events_dir(config.events_dir);
    if (events.empty()) return fail("no events found in " + config.events_dir);
    const auto [train_events, test_events] =
        split_train_test(events, config.train_fraction, config.seed);
    if (test_events.empty()) return fail("split left no test events for earliness");

    const DecisionStrategy strategy = DecisionStrategy::parse(config.strategies.front());
    const EarlinessReport report =
        evaluate_earliness(model, strategy, test_events, config.cct, WindowSpec{config.w});

    fs::create_directories(config.out_dir);
    save_earliness_report(report, (fs::path(config.out_dir) / "earliness.json").string());
    std::cout << "events: " << report.detections.size() << ", ttr " << report.ttr
              << ", del " << (report.del ? std::to_string(*report.del) : "n/a")
              << ", earl " << (report.earl ? std::to_string(*report.earl) : "n/a") << "\n";
    return 0;
}

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"graph-regularized multimodal subspace SVDD toolkit"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::string> model_path;
    std::optional<std::string> strategy;
    std::optional<double> noise;
    std::optional<std::string> npt;

    app.add_option("--config", config_path, "experiment config JSON");
    app.add_option("--seed", seed, "override the experiment seed");
    app.add_option("--out", out_dir, "override the output directory");
    app.add_option("--model", model_path, "override the model path");
    app.add_option("--strategy", strategy, "decision strategy")
        ->check(CLI::IsMember({"and", "or", "uni0", "uni1", "uni2"}));
    app.add_option("--noise", noise, "noise factor");
    app.add_option("--npt", npt, "NPT pathway")->check(CLI::IsMember({"on", "off"}));

    auto* c_generate = app.add_subcommand("generate", "write synthetic events");
    auto* c_preprocess = app.add_subcommand("preprocess", "window, reduce, normalize");
    auto* c_train = app.add_subcommand("train", "train one model");
    auto* c_evaluate = app.add_subcommand("evaluate", "reliability report per strategy");
    auto* c_gridsearch = app.add_subcommand("gridsearch", "hyperparameter search");
    auto* c_earliness = app.add_subcommand("earliness", "rolling detection delay");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        ExperimentConfig config;
        if (!config_path.empty()) config = load_experiment_config(config_path);
        if (seed) config.seed = *seed;
        if (out_dir) config.out_dir = *out_dir;
        if (model_path) config.model_path = *model_path;
        if (strategy) config.strategies = {*strategy};
        if (noise) config.noise_factor = *noise;
        if (npt) config.model.use_npt = (*npt == "on");

        if (c_generate->parsed()) {
            if (out_dir) config.events_dir = *out_dir;
            return cmd_generate(config);
        }
        if (c_preprocess->parsed()) return cmd_preprocess(config);
        if (c_train->parsed()) return cmd_train(config);
        if (c_evaluate->parsed()) return cmd_evaluate(config);
        if (c_gridsearch->parsed()) return cmd_gridsearch(config);
        if (c_earliness->parsed()) return cmd_earliness(config);
        return fail("no command given");
    } catch (const std::exception& e) {
        return fail(e.what());
    }
}

}  // namespace grmssvdd
