#include "scratch_anomalies/anomaly.hpp"

#include "scratch_anomalies/errors.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace scratch_anomalies {

namespace {

constexpr double kConfidenceSlack = 1e-12;

PropertySet difference(const PropertySet& a, const PropertySet& b) {
    PropertySet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

PropertySet intersection(const PropertySet& a, const PropertySet& b) {
    PropertySet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

bool more_confident(const Violation& a, const Violation& b) {
    return std::tie(b.confidence, b.support, a.pattern_id) < std::tie(a.confidence, a.support, b.pattern_id);
}

}  // namespace

std::string actor_group_key(const ScriptRecord& record) {
    return record.is_stage ? kStageGroup : normalize_actor_name(record.id.actor);
}

std::vector<ScriptRecord> collect_scripts(const Corpus& corpus, const PropertyOptions& options) {
    std::vector<ScriptRecord> records;
    for (const Project& project : corpus.projects) {
        for (const Script& script : extract_scripts(project)) {
            records.push_back(ScriptRecord{script.id, script.actor_is_stage, script.dead_code,
                                           extract_properties(build_model(script), options)});
        }
    }
    return records;
}

std::vector<ScriptGroup> group_scripts(const std::vector<ScriptRecord>& scripts, Mode mode) {
    std::map<std::string, ScriptGroup> groups;
    for (const auto& record : scripts) {
        const std::string key = mode == Mode::ActorAgnostic ? kAllScriptsGroup : actor_group_key(record);
        auto& group = groups[key];
        group.group_key = key;
        group.scripts.push_back(PropertyRow{record.id, record.properties});
    }
    std::vector<ScriptGroup> out;
    out.reserve(groups.size());
    for (auto& [key, group] : groups) {
        out.push_back(std::move(group));
    }
    return out;
}

std::vector<Violation> find_violations(const ScriptGroup& group, const std::vector<Pattern>& patterns,
                                       const MinerConfig& config) {
    const auto max_missing = static_cast<std::size_t>(config.max_missing);
    // (script, missing) -> best violation
    std::map<std::pair<ScriptId, PropertySet>, Violation> best;

    for (const Pattern& pattern : patterns) {
        std::vector<Violation> candidates;
        std::map<PropertySet, int> same_way;
        for (const PropertyRow& row : group.scripts) {
            if (pattern.supporters.contains(row.script)) {
                continue;
            }
            PropertySet missing = difference(pattern.properties, row.properties);
            if (missing.empty() || missing.size() > max_missing || missing.size() == pattern.properties.size()) {
                continue;
            }
            ++same_way[missing];
            Violation v;
            v.script = row.script;
            v.group_key = group.group_key;
            v.pattern_id = pattern.pattern_id;
            v.support = pattern.support;
            v.present = intersection(pattern.properties, row.properties);
            v.missing = std::move(missing);
            candidates.push_back(std::move(v));
        }
        for (auto& v : candidates) {
            v.same_way_count = same_way.at(v.missing);
            v.confidence = static_cast<double>(v.support) / static_cast<double>(v.support + v.same_way_count);
            auto key = std::make_pair(v.script, v.missing);
            const auto it = best.find(key);
            if (it == best.end()) {
                best.emplace(std::move(key), std::move(v));
            } else if (more_confident(v, it->second)) {
                it->second = std::move(v);
            }
        }
    }

    std::vector<Violation> out;
    out.reserve(best.size());
    for (auto& [key, v] : best) {
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), ranks_before);
    return out;
}

bool ranks_before(const Violation& a, const Violation& b) {
    if (a.confidence != b.confidence) {
        return a.confidence > b.confidence;
    }
    if (a.support != b.support) {
        return a.support > b.support;
    }
    if (a.missing.size() != b.missing.size()) {
        return a.missing.size() < b.missing.size();
    }
    return std::tie(a.script, a.group_key, a.pattern_id, a.missing) <
           std::tie(b.script, b.group_key, b.pattern_id, b.missing);
}

AnomalyReport detect(const Corpus& corpus, const MinerConfig& config) {
    config.validate();
    const std::vector<ScriptRecord> records = collect_scripts(corpus, config.property_options());
    if (records.empty()) {
        throw NoScripts("the corpus contains no scripts");
    }

    AnomalyReport report;
    report.mode = config.mode;
    report.config = config;
    report.corpus.projects = static_cast<int>(corpus.projects.size());
    report.corpus.skipped = corpus.skipped;
    report.corpus.scripts = static_cast<int>(records.size());

    std::map<ScriptId, bool> dead_code;
    for (const auto& record : records) {
        dead_code.emplace(record.id, record.dead_code);
    }

    std::vector<Violation> violations;
    for (const ScriptGroup& group : group_scripts(records, config.mode)) {
        const PropertyDB db{group.scripts};
        GroupResult result;
        result.key = group.group_key;
        result.scripts = static_cast<int>(group.scripts.size());
        result.min_support = config.support_for(group.scripts.size());
        result.patterns = mine_patterns(db, result.min_support, config.min_pattern_size);
        auto found = find_violations(group, result.patterns, config);
        violations.insert(violations.end(), std::make_move_iterator(found.begin()),
                          std::make_move_iterator(found.end()));
        report.groups.push_back(std::move(result));
    }

    std::sort(violations.begin(), violations.end(), ranks_before);
    report.violations_found = static_cast<int>(violations.size());
    for (auto& v : violations) {
        if (v.confidence + kConfidenceSlack < config.min_confidence) {
            continue;
        }
        if (static_cast<int>(report.anomalies.size()) >= config.top_n) {
            break;
        }
        Anomaly anomaly;
        anomaly.dead_code = dead_code.at(v.script);
        anomaly.rank = static_cast<int>(report.anomalies.size()) + 1;
        anomaly.violation = std::move(v);
        report.anomalies.push_back(std::move(anomaly));
    }
    return report;
}

AnomalyReport detect(const std::filesystem::path& dir, const MinerConfig& config,
                     const CorpusOptions& corpus_options) {
    config.validate();
    return detect(load_corpus(dir, corpus_options), config);
}

ModeComparison compare_modes(const Corpus& corpus, const MinerConfig& config) {
    MinerConfig aa = config;
    aa.mode = Mode::ActorAgnostic;
    MinerConfig as = config;
    as.mode = Mode::ActorSpecific;

    ModeComparison comparison{detect(corpus, aa), detect(corpus, as), {}};
    std::set<OverlapEntry> aa_keys;
    for (const auto& a : comparison.actor_agnostic.anomalies) {
        aa_keys.insert(OverlapEntry{a.violation.script, a.violation.missing});
    }
    std::set<OverlapEntry> shared;
    for (const auto& a : comparison.actor_specific.anomalies) {
        OverlapEntry key{a.violation.script, a.violation.missing};
        if (aa_keys.contains(key)) {
            shared.insert(std::move(key));
        }
    }
    comparison.overlap.assign(shared.begin(), shared.end());
    return comparison;
}

}  // namespace scratch_anomalies
