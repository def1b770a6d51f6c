#pragma once

// Closed frequent itemset mining over per-script temporal property sets.

#include "scratch_anomalies/sb3.hpp"
#include "scratch_anomalies/script_model.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scratch_anomalies {

enum class Mode { ActorAgnostic, ActorSpecific };

std::string to_string(Mode mode);  // "AA" / "AS"

struct MinerConfig {
    std::optional<int> min_support;  // nullopt: pick per group, see default_min_support
    int min_pattern_size = 2;
    int max_missing = 2;
    double min_confidence = 0.9;
    int top_n = 10;
    Mode mode = Mode::ActorAgnostic;
    bool adjacent_only = false;
    bool no_self_pairs = false;

    /// Throws std::invalid_argument naming the first out-of-range field.
    void validate() const;
    int support_for(std::size_t group_rows) const;
    PropertyOptions property_options() const { return {adjacent_only, no_self_pairs}; }
};

/// max(3, ceil(rows / 10)).
int default_min_support(std::size_t rows);

struct PropertyRow {
    ScriptId script;
    PropertySet properties;
};

struct PropertyDB {
    std::vector<PropertyRow> rows;

    PropertySet universe() const;
};

struct Pattern {
    int pattern_id = 0;
    PropertySet properties;
    int support = 0;
    std::set<ScriptId> supporters;
};

/// Exactly the closed property sets held by at least `min_support` rows and
/// having at least `min_pattern_size` members, ordered by support desc, size
/// desc, then lexicographically; pattern ids follow that order from 0.
std::vector<Pattern> mine_patterns(const PropertyDB& db, int min_support, int min_pattern_size);

inline std::vector<Pattern> mine_patterns(const PropertyDB& db, const MinerConfig& config) {
    return mine_patterns(db, config.support_for(db.rows.size()), config.min_pattern_size);
}

}  // namespace scratch_anomalies
