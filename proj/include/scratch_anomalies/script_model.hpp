#pragma once

// Control-flow automata for scripts and the temporal properties read off them.

#include "scratch_anomalies/sb3.hpp"

#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace scratch_anomalies {

/// What a transition executes: the block's opcode, plus the proccode for
/// custom-block definitions and calls. Argument values are never part of it.
struct BlockLabel {
    std::string opcode;
    std::optional<std::string> qualifier;

    auto operator<=>(const BlockLabel&) const = default;
    bool operator==(const BlockLabel&) const = default;
};

/// "opcode" or "opcode:proccode".
std::string to_string(const BlockLabel& label);
BlockLabel label_of(const RawBlock& block);

using LocationId = int;

/// An ε-transition has no label.
struct Transition {
    LocationId src = 0;
    std::optional<BlockLabel> label;
    LocationId dst = 0;

    bool is_epsilon() const { return !label.has_value(); }
    auto operator<=>(const Transition&) const = default;
    bool operator==(const Transition&) const = default;
};

/// Locations are 0..location_count-1; location 0 is the initial location.
struct ScriptModel {
    int location_count = 1;
    LocationId initial = 0;
    std::vector<Transition> transitions;

    std::size_t labeled_count() const;
    std::size_t epsilon_count() const;
};

struct TemporalProperty {
    BlockLabel pred;
    BlockLabel succ;

    auto operator<=>(const TemporalProperty&) const = default;
    bool operator==(const TemporalProperty&) const = default;
};

using PropertySet = std::set<TemporalProperty>;

struct PropertyOptions {
    // Pair a with b only when b's transition starts where a's ends, modulo ε.
    bool adjacent_only = false;
    bool no_self_pairs = false;
};

/// Builds the automaton of a script. Blocks that control can never reach
/// (after a stop, or after an if/else whose branches all stop) are left out.
ScriptModel build_model(const Script& script);

/// (a, b) for every labeled a whose target reaches the source of a labeled b.
PropertySet extract_properties(const ScriptModel& model, const PropertyOptions& options = {});

/// Graphviz rendering; ε edges are dashed.
std::string to_dot(const ScriptModel& model, const std::string& graph_name);

}  // namespace scratch_anomalies
