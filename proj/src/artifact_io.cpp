#include "grmssvdd/artifact_io.hpp"

#include <cstdio>
#include <fstream>

#include <json.hpp>

using nlohmann::json;

namespace grmssvdd {

namespace {

json to_json(const Matrix& m) {
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

Matrix matrix_from(const json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (rows < 0 || cols < 0 ||
        static_cast<Eigen::Index>(data.size()) != rows * cols)
        throw InvalidInput("matrix JSON has inconsistent dimensions");
    Matrix m(rows, cols);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[at++];
    return m;
}

json to_json(const Vector& v) {
    return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const json& j) {
    const auto data = j.get<std::vector<double>>();
    Vector v(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i) v[static_cast<Eigen::Index>(i)] = data[i];
    return v;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << text;
    out.close();
    if (!out) throw Error("failed writing: " + path);
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidInput("cannot open: " + path);
    return json::parse(in);
}

json report_to_json(const EvaluationReport& r) {
    return json{{"n_tp", r.n_tp}, {"n_tn", r.n_tn}, {"n_fp", r.n_fp},
                {"n_fn", r.n_fn}, {"acc", r.acc},   {"tpr", r.tpr},
                {"tnr", r.tnr},   {"pre", r.pre},   {"hm", r.hm},
                {"gm", r.gm},     {"degenerate", r.degenerate}};
}

}  // namespace

void save_dataset(const MultimodalDataset& dataset, const std::string& path) {
    json doc;
    doc["M"] = dataset.M;
    doc["D"] = dataset.D;
    json instances = json::array();
    for (const auto& inst : dataset.instances) {
        json vectors = json::array();
        for (const auto& v : inst.vectors_per_modality) vectors.push_back(to_json(v));
        instances.push_back(json{{"label", inst.label},
                                 {"end_time", inst.end_time},
                                 {"source_event", inst.source_event},
                                 {"vectors", std::move(vectors)}});
    }
    doc["instances"] = std::move(instances);
    write_text(path, doc.dump(2) + "\n");
}

MultimodalDataset load_dataset(const std::string& path) {
    const json doc = read_json(path);
    std::vector<MultimodalInstance> instances;
    for (const auto& j : doc.at("instances")) {
        MultimodalInstance inst;
        inst.label = j.at("label").get<int>();
        inst.end_time = j.at("end_time").get<double>();
        inst.source_event = j.at("source_event").get<std::string>();
        for (const auto& v : j.at("vectors")) inst.vectors_per_modality.push_back(vector_from(v));
        instances.push_back(std::move(inst));
    }
    MultimodalDataset dataset = assemble_dataset(std::move(instances));
    if (dataset.M != doc.at("M").get<int>() ||
        dataset.D != doc.at("D").get<std::vector<int>>())
        throw ShapeMismatch("dataset JSON header disagrees with its instances");
    return dataset;
}

void save_preprocessing(const PreprocessingArtifacts& artifacts, const std::string& path) {
    json doc;
    doc["w"] = artifacts.w;
    doc["noise_factor"] = artifacts.noise_factor;
    json pca = json::array();
    for (const auto& p : artifacts.pca) {
        pca.push_back(json{{"mean", to_json(p.mean)},
                           {"components", to_json(p.components)},
                           {"n_components", p.n_components},
                           {"eigenvalues", to_json(p.eigenvalues)},
                           {"total_variance", p.total_variance}});
    }
    doc["pca"] = std::move(pca);
    json norm = json::array();
    for (const auto& s : artifacts.normalization)
        norm.push_back(json{{"mean", s.mean}, {"stddev", s.stddev}});
    doc["normalization"] = std::move(norm);
    write_text(path, doc.dump(2) + "\n");
}

PreprocessingArtifacts load_preprocessing(const std::string& path) {
    const json doc = read_json(path);
    PreprocessingArtifacts artifacts;
    artifacts.w = doc.at("w").get<int>();
    artifacts.noise_factor = doc.at("noise_factor").get<double>();
    for (const auto& j : doc.at("pca")) {
        PcaModel p;
        p.mean = vector_from(j.at("mean"));
        p.components = matrix_from(j.at("components"));
        p.n_components = j.at("n_components").get<int>();
        p.eigenvalues = vector_from(j.at("eigenvalues"));
        p.total_variance = j.at("total_variance").get<double>();
        artifacts.pca.push_back(std::move(p));
    }
    for (const auto& j : doc.at("normalization")) {
        NormalizationStats s;
        s.mean = j.at("mean").get<double>();
        s.stddev = j.at("stddev").get<double>();
        artifacts.normalization.push_back(s);
    }
    return artifacts;
}

void save_model(const TrainedModel& model, const std::string& path) {
    json doc;
    doc["schema_version"] = 1;

    const auto& c = model.config;
    doc["config"] = json{{"d", c.d},     {"C", c.C},         {"beta", c.beta},
                         {"eta", c.eta}, {"sigma", c.sigma}, {"k", c.k},
                         {"regularizer", c.regularizer},     {"signs", c.signs},
                         {"use_npt", c.use_npt},             {"max_iter", c.max_iter},
                         {"seed", c.seed}};

    json q = json::array();
    for (const auto& m : model.q) q.push_back(to_json(m));
    doc["q"] = std::move(q);

    doc["svdd"] = json{{"alpha", to_json(model.svdd.alpha)},
                       {"center", to_json(model.svdd.center)},
                       {"radius", model.svdd.radius},
                       {"C", model.svdd.C},
                       {"kkt_tol", model.svdd.kkt_tol},
                       {"support_indices", model.svdd.support_indices},
                       {"boundary_indices", model.svdd.boundary_indices}};

    json npt = json::array();
    for (const auto& n : model.npt) {
        npt.push_back(json{{"sigma", n.sigma},
                           {"train_inputs", to_json(n.train_inputs)},
                           {"kernel_row_means", to_json(n.kernel_row_means)},
                           {"eigenvalues", to_json(n.eigenvalues)},
                           {"phi_pinv", to_json(n.phi_pinv)}});
    }
    doc["npt"] = std::move(npt);

    json pca = json::array();
    for (const auto& p : model.pca) {
        pca.push_back(json{{"mean", to_json(p.mean)},
                           {"components", to_json(p.components)},
                           {"n_components", p.n_components},
                           {"eigenvalues", to_json(p.eigenvalues)},
                           {"total_variance", p.total_variance}});
    }
    doc["pca"] = std::move(pca);

    json norm = json::array();
    for (const auto& s : model.normalization)
        norm.push_back(json{{"mean", s.mean}, {"stddev", s.stddev}});
    doc["normalization"] = std::move(norm);

    doc["iterations_run"] = model.iterations_run;
    doc["final_omega"] = model.final_omega;
    write_text(path, doc.dump(2) + "\n");
}

TrainedModel load_model(const std::string& path) {
    const json doc = read_json(path);
    if (doc.at("schema_version").get<int>() != 1)
        throw InvalidInput("unsupported model schema_version in " + path);

    TrainedModel model;
    const json& c = doc.at("config");
    model.config.d = c.at("d").get<int>();
    model.config.C = c.at("C").get<double>();
    model.config.beta = c.at("beta").get<double>();
    model.config.eta = c.at("eta").get<double>();
    model.config.sigma = c.at("sigma").get<double>();
    model.config.k = c.at("k").get<int>();
    model.config.regularizer = c.at("regularizer").get<int>();
    model.config.signs = c.at("signs").get<std::vector<int>>();
    model.config.use_npt = c.at("use_npt").get<bool>();
    model.config.max_iter = c.at("max_iter").get<int>();
    model.config.seed = c.at("seed").get<std::uint64_t>();

    for (const auto& j : doc.at("q")) model.q.push_back(matrix_from(j));

    const json& s = doc.at("svdd");
    model.svdd.alpha = vector_from(s.at("alpha"));
    model.svdd.center = vector_from(s.at("center"));
    model.svdd.radius = s.at("radius").get<double>();
    model.svdd.C = s.at("C").get<double>();
    model.svdd.kkt_tol = s.at("kkt_tol").get<double>();
    model.svdd.support_indices = s.at("support_indices").get<std::vector<int>>();
    model.svdd.boundary_indices = s.at("boundary_indices").get<std::vector<int>>();

    for (const auto& j : doc.at("npt")) {
        NptModel n;
        n.sigma = j.at("sigma").get<double>();
        n.train_inputs = matrix_from(j.at("train_inputs"));
        n.kernel_row_means = vector_from(j.at("kernel_row_means"));
        n.eigenvalues = vector_from(j.at("eigenvalues"));
        n.phi_pinv = matrix_from(j.at("phi_pinv"));
        model.npt.push_back(std::move(n));
    }

    for (const auto& j : doc.at("pca")) {
        PcaModel p;
        p.mean = vector_from(j.at("mean"));
        p.components = matrix_from(j.at("components"));
        p.n_components = j.at("n_components").get<int>();
        p.eigenvalues = vector_from(j.at("eigenvalues"));
        p.total_variance = j.at("total_variance").get<double>();
        model.pca.push_back(std::move(p));
    }
    for (const auto& j : doc.at("normalization")) {
        NormalizationStats st;
        st.mean = j.at("mean").get<double>();
        st.stddev = j.at("stddev").get<double>();
        model.normalization.push_back(st);
    }

    model.iterations_run = doc.at("iterations_run").get<int>();
    model.final_omega = doc.at("final_omega").get<double>();
    return model;
}

std::string report_table(const std::vector<std::string>& row_names,
                         const std::vector<EvaluationReport>& rows) {
    if (row_names.size() != rows.size())
        throw ShapeMismatch("report_table: names and rows differ in length");
    std::size_t width = 8;
    for (const auto& n : row_names) width = std::max(width, n.size());

    std::string out;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%-*s", static_cast<int>(width), "strategy");
    out += buf;
    for (const char* col : {"acc", "tpr", "tnr", "pre", "hm", "gm"}) {
        std::snprintf(buf, sizeof(buf), "  %6s", col);
        out += buf;
    }
    out += "\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%-*s", static_cast<int>(width),
                      row_names[i].c_str());
        out += buf;
        const auto& r = rows[i];
        for (double v : {r.acc, r.tpr, r.tnr, r.pre, r.hm, r.gm}) {
            std::snprintf(buf, sizeof(buf), "  %6.4f", v);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

void save_reports(const std::vector<std::string>& row_names,
                  const std::vector<EvaluationReport>& rows,
                  const std::string& json_path, const std::string& table_path) {
    json doc = json::array();
    for (std::size_t i = 0; i < rows.size(); ++i) {
        json row = report_to_json(rows[i]);
        row["strategy"] = row_names[i];
        doc.push_back(std::move(row));
    }
    write_text(json_path, doc.dump(2) + "\n");
    write_text(table_path, report_table(row_names, rows));
}

void save_earliness_report(const EarlinessReport& report, const std::string& path) {
    json doc;
    doc["cct"] = report.cct;
    doc["ttr"] = report.ttr;
    doc["ftr"] = report.ftr;
    if (report.del) doc["del"] = *report.del; else doc["del"] = nullptr;
    if (report.earl) doc["earl"] = *report.earl; else doc["earl"] = nullptr;
    json events = json::array();
    for (const auto& det : report.detections) {
        json j{{"event_id", det.event_id},
               {"triggered", det.triggered},
               {"true_trigger", det.true_trigger}};
        if (det.triggered) j["trigger_time"] = det.trigger_time;
        if (det.true_trigger) j["delay"] = det.delay;
        events.push_back(std::move(j));
    }
    doc["events"] = std::move(events);
    write_text(path, doc.dump(2) + "\n");
}

void save_predictions_csv(const std::vector<std::string>& instance_ids,
                          const std::vector<std::vector<bool>>& per_modality,
                          const std::vector<bool>& fused,
                          const std::vector<bool>& labels, const std::string& path) {
    const std::size_t n = instance_ids.size();
    if (per_modality.size() != n || fused.size() != n || labels.size() != n)
        throw ShapeMismatch("save_predictions_csv: column lengths differ");

    std::string out = "instance_id";
    const std::size_t M = n > 0 ? per_modality[0].size() : 0;
    for (std::size_t m = 0; m < M; ++m) out += ",p_" + std::to_string(m);
    out += ",fused,label\n";
    for (std::size_t i = 0; i < n; ++i) {
        if (per_modality[i].size() != M)
            throw ShapeMismatch("save_predictions_csv: ragged modality verdicts");
        out += instance_ids[i];
        for (std::size_t m = 0; m < M; ++m)
            out += per_modality[i][m] ? ",1" : ",0";
        out += fused[i] ? ",1" : ",0";
        out += labels[i] ? ",1" : ",0";
        out += "\n";
    }
    write_text(path, out);
}

}  // namespace grmssvdd
