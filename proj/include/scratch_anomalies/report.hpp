#pragma once

// Report rendering: JSON for machines, plain text for teachers.

#include "scratch_anomalies/anomaly.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace scratch_anomalies {

using OrderedJson = nlohmann::ordered_json;

OrderedJson to_json(const AnomalyReport& report);
OrderedJson to_json(const ModeComparison& comparison);

/// Array of {group, pattern_id, properties, support, supporters} over all groups.
OrderedJson patterns_to_json(const AnomalyReport& report);

std::string render_json(const AnomalyReport& report);
std::string render_json(const ModeComparison& comparison);

std::string render_text(const AnomalyReport& report);
std::string render_text(const ModeComparison& comparison);

/// Writes one Graphviz file per script into `dir` (created if needed).
/// Returns the number of files written. Throws UnreadableFile on I/O failure.
int write_models(const Corpus& corpus, const std::filesystem::path& dir);

}  // namespace scratch_anomalies
