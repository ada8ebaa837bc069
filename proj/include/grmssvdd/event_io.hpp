#pragma once

#include <string>
#include <vector>

#include "grmssvdd/data_model.hpp"

namespace grmssvdd {

// One CSV per event (column 0 timestamp, columns 1..n channel values) plus a
// JSON sidecar {id, tau1, tau2, event_class, modality_of_channel}.
void write_event(const EventSeries& event, const std::string& dir);

EventSeries read_event(const std::string& csv_path, const std::string& json_path);

// Loads every <name>.csv/<name>.json pair in the directory, sorted by name.
std::vector<EventSeries> read_events_dir(const std::string& dir);

}  // namespace grmssvdd
