#include "grmssvdd/event_io.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace grmssvdd {

namespace {

// Shortest round-trip formatting keeps the files diffable and exact.
std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw Error("failed to format a double");
    return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
    double v = 0.0;
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
        throw InvalidInput("bad numeric field: '" + text + "'");
    return v;
}

}  // namespace

void write_event(const EventSeries& event, const std::string& dir) {
    event.validate();
    fs::create_directories(dir);

    std::ofstream csv(fs::path(dir) / (event.id + ".csv"));
    if (!csv) throw Error("cannot open event CSV for writing: " + event.id);
    csv << "timestamp";
    for (int c = 0; c < event.n_channels(); ++c) csv << ",ch" << c;
    csv << "\n";
    for (int t = 0; t < event.n_timesteps(); ++t) {
        csv << format_double(event.timestamps[static_cast<std::size_t>(t)]);
        for (int c = 0; c < event.n_channels(); ++c)
            csv << ',' << format_double(event.channels(c, t));
        csv << "\n";
    }
    csv.close();
    if (!csv) throw Error("failed writing event CSV: " + event.id);

    json sidecar;
    sidecar["id"] = event.id;
    sidecar["tau1"] = event.tau1;
    sidecar["tau2"] = event.tau2;
    if (event.event_class)
        sidecar["event_class"] = *event.event_class;
    else
        sidecar["event_class"] = nullptr;
    sidecar["modality_of_channel"] = event.modality_of_channel;

    std::ofstream js(fs::path(dir) / (event.id + ".json"));
    if (!js) throw Error("cannot open event sidecar for writing: " + event.id);
    js << sidecar.dump(2) << "\n";
    js.close();
    if (!js) throw Error("failed writing event sidecar: " + event.id);
}

EventSeries read_event(const std::string& csv_path, const std::string& json_path) {
    std::ifstream js(json_path);
    if (!js) throw InvalidInput("cannot open event sidecar: " + json_path);
    json sidecar = json::parse(js);

    EventSeries event;
    event.id = sidecar.at("id").get<std::string>();
    event.tau1 = sidecar.at("tau1").get<double>();
    event.tau2 = sidecar.at("tau2").get<double>();
    if (sidecar.contains("event_class") && !sidecar["event_class"].is_null())
        event.event_class = sidecar["event_class"].get<std::string>();
    event.modality_of_channel = sidecar.at("modality_of_channel").get<std::vector<int>>();

    std::ifstream csv(csv_path);
    if (!csv) throw InvalidInput("cannot open event CSV: " + csv_path);
    std::string line;
    if (!std::getline(csv, line)) throw InvalidInput("empty event CSV: " + csv_path);

    const auto n_channels = event.modality_of_channel.size();
    std::vector<std::vector<double>> columns(n_channels);
    std::string field;
    while (std::getline(csv, line)) {
        if (line.empty()) continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream row(line);
        std::size_t col = 0;
        while (std::getline(row, field, ',')) {
            const double v = parse_double(field);
            if (col == 0) {
                event.timestamps.push_back(v);
            } else {
                if (col - 1 >= n_channels)
                    throw ShapeMismatch("event CSV has more channels than the sidecar: " +
                                        csv_path);
                columns[col - 1].push_back(v);
            }
            ++col;
        }
        if (col != n_channels + 1)
            throw ShapeMismatch("event CSV row width mismatch: " + csv_path);
    }

    const auto n = event.timestamps.size();
    event.channels.resize(static_cast<Eigen::Index>(n_channels),
                          static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n_channels; ++c) {
        for (std::size_t t = 0; t < n; ++t)
            event.channels(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(t)) =
                columns[c][t];
    }
    event.validate();
    return event;
}

std::vector<EventSeries> read_events_dir(const std::string& dir) {
    if (!fs::is_directory(dir)) throw InvalidInput("not a directory: " + dir);
    std::vector<fs::path> csvs;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv")
            csvs.push_back(entry.path());
    }
    std::sort(csvs.begin(), csvs.end());

    std::vector<EventSeries> events;
    events.reserve(csvs.size());
    for (const auto& csv : csvs) {
        fs::path sidecar = csv;
        sidecar.replace_extension(".json");
        if (!fs::exists(sidecar))
            throw InvalidInput("missing sidecar for " + csv.string());
        events.push_back(read_event(csv.string(), sidecar.string()));
    }
    return events;
}

}  // namespace grmssvdd
