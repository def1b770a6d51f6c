#pragma once

// Violation detection, confidence scoring and the end-to-end detection pipeline.

#include "scratch_anomalies/miner.hpp"
#include "scratch_anomalies/sb3.hpp"
#include "scratch_anomalies/script_model.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace scratch_anomalies {

inline constexpr const char* kAllScriptsGroup = "*";
inline constexpr const char* kStageGroup = "#stage";

/// A script reduced to what the mining phases need.
struct ScriptRecord {
    ScriptId id;
    bool is_stage = false;
    bool dead_code = false;
    PropertySet properties;
};

struct ScriptGroup {
    std::string group_key;
    std::vector<PropertyRow> scripts;
};

struct Violation {
    ScriptId script;
    std::string group_key;
    int pattern_id = 0;
    int support = 0;
    PropertySet missing;
    PropertySet present;  // pattern properties the script does have
    int same_way_count = 0;
    double confidence = 0.0;
};

struct Anomaly {
    Violation violation;
    bool dead_code = false;
    int rank = 0;
};

struct GroupResult {
    std::string key;
    int scripts = 0;
    int min_support = 0;
    std::vector<Pattern> patterns;
};

struct CorpusSummary {
    int projects = 0;
    std::vector<SkippedFile> skipped;
    int scripts = 0;
};

struct AnomalyReport {
    Mode mode = Mode::ActorAgnostic;
    MinerConfig config;
    CorpusSummary corpus;
    std::vector<GroupResult> groups;
    int violations_found = 0;
    std::vector<Anomaly> anomalies;
};

/// One (script, missing set) reported in both modes.
struct OverlapEntry {
    ScriptId script;
    PropertySet missing;

    auto operator<=>(const OverlapEntry&) const = default;
    bool operator==(const OverlapEntry&) const = default;
};

struct ModeComparison {
    AnomalyReport actor_agnostic;
    AnomalyReport actor_specific;
    std::vector<OverlapEntry> overlap;
};

/// Group key of a script in actor-specific mode.
std::string actor_group_key(const ScriptRecord& record);

/// Models every script of the corpus and extracts its properties.
std::vector<ScriptRecord> collect_scripts(const Corpus& corpus, const PropertyOptions& options);

/// AA: one group "*". AS: one group per normalized actor name, stage scripts
/// under "#stage". Groups come back sorted by key; empty groups are omitted.
std::vector<ScriptGroup> group_scripts(const std::vector<ScriptRecord>& scripts, Mode mode);

/// Near-miss violations of `patterns` inside `group`, one per (script,
/// missing set); when several patterns are missed the same way the most
/// confident one is kept.
std::vector<Violation> find_violations(const ScriptGroup& group, const std::vector<Pattern>& patterns,
                                       const MinerConfig& config);

/// Ranking order: confidence desc, support desc, |missing| asc, script id asc.
bool ranks_before(const Violation& a, const Violation& b);

/// Runs grouping, mining, violation detection and ranking on a loaded corpus.
/// Throws NoScripts when the corpus has no scripts.
AnomalyReport detect(const Corpus& corpus, const MinerConfig& config);

/// Loads `dir` and runs detect. Throws EmptyCorpus / NoScripts / UnreadableFile.
AnomalyReport detect(const std::filesystem::path& dir, const MinerConfig& config,
                     const CorpusOptions& corpus_options = {});

ModeComparison compare_modes(const Corpus& corpus, const MinerConfig& config);

}  // namespace scratch_anomalies
