#include "scratch_anomalies/script_model.hpp"

#include <algorithm>
#include <sstream>

namespace scratch_anomalies {

namespace {

enum class Shape { Plain, Branch, IfElse, BoundedLoop, Forever, Terminal };

Shape shape_of(const RawBlock& block) {
    const std::string& op = block.opcode;
    if (op == "control_if_else") {
        return Shape::IfElse;
    }
    if (op == "control_repeat" || op == "control_repeat_until" || op == "control_while" ||
        op == "control_for_each") {
        return Shape::BoundedLoop;
    }
    if (op == "control_forever") {
        return Shape::Forever;
    }
    // A stop with a successor is "stop other scripts", which continues.
    if (op == "control_delete_this_clone" || (op == "control_stop" && !block.next)) {
        return Shape::Terminal;
    }
    if (!block.substacks.empty()) {
        return block.substacks.size() >= 2 ? Shape::IfElse : Shape::Branch;
    }
    return Shape::Plain;
}

class ModelBuilder {
public:
    ModelBuilder(const Script& script, ScriptModel& model) : script_(script), model_(model) {}

    // Returns the location control reaches after the chain, or nullopt when
    // the chain never completes.
    std::optional<LocationId> chain(std::optional<BlockId> first, LocationId from) {
        LocationId at = from;
        for (auto id = first; id; id = script_.block(*id).next) {
            const auto exit = block(script_.block(*id), at);
            if (!exit) {
                return std::nullopt;
            }
            at = *exit;
        }
        return at;
    }

private:
    LocationId fresh() { return model_.location_count++; }

    void epsilon(LocationId src, LocationId dst) {
        if (src != dst) {
            model_.transitions.push_back(Transition{src, std::nullopt, dst});
        }
    }

    std::optional<LocationId> block(const RawBlock& b, LocationId from) {
        const LocationId after = fresh();
        model_.transitions.push_back(Transition{from, label_of(b), after});

        switch (shape_of(b)) {
        case Shape::Plain:
            return after;
        case Shape::Terminal:
            return std::nullopt;
        case Shape::Branch: {
            const auto body_exit = chain(b.substacks[0], after);
            const LocationId join = fresh();
            epsilon(after, join);
            if (body_exit) {
                epsilon(*body_exit, join);
            }
            return join;
        }
        case Shape::IfElse: {
            std::optional<LocationId> join;
            for (std::size_t branch = 0; branch < 2; ++branch) {
                const LocationId entry = fresh();
                model_.transitions.push_back(Transition{after, std::nullopt, entry});
                const auto sub = branch < b.substacks.size() ? b.substacks[branch] : std::nullopt;
                if (const auto exit = chain(sub, entry)) {
                    if (!join) {
                        join = fresh();
                    }
                    epsilon(*exit, *join);
                }
            }
            return join;
        }
        case Shape::BoundedLoop:
        case Shape::Forever: {
            const LocationId head = after;
            if (const auto tail = chain(b.substacks.empty() ? std::nullopt : b.substacks[0], head)) {
                epsilon(*tail, head);
            }
            if (shape_of(b) == Shape::Forever) {
                return std::nullopt;
            }
            const LocationId exit = fresh();
            epsilon(head, exit);
            return exit;
        }
        }
        return after;
    }

    const Script& script_;
    ScriptModel& model_;
};

std::vector<std::vector<bool>> reachability(const ScriptModel& model, bool epsilon_only) {
    const auto n = static_cast<std::size_t>(model.location_count);
    std::vector<std::vector<LocationId>> out(n);
    for (const auto& t : model.transitions) {
        if (!epsilon_only || t.is_epsilon()) {
            out[static_cast<std::size_t>(t.src)].push_back(t.dst);
        }
    }
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t start = 0; start < n; ++start) {
        std::vector<LocationId> stack{static_cast<LocationId>(start)};
        reach[start][start] = true;
        while (!stack.empty()) {
            const auto at = static_cast<std::size_t>(stack.back());
            stack.pop_back();
            for (const LocationId next : out[at]) {
                if (!reach[start][static_cast<std::size_t>(next)]) {
                    reach[start][static_cast<std::size_t>(next)] = true;
                    stack.push_back(next);
                }
            }
        }
    }
    return reach;
}

std::string dot_escape(const std::string& text) {
    std::string out;
    for (const char c : text) {
        if (c == '"' || c == '\\') {
            out += '\\';
        }
        out += c;
    }
    return out;
}

}  // namespace

std::string to_string(const BlockLabel& label) {
    return label.qualifier ? label.opcode + ":" + *label.qualifier : label.opcode;
}

BlockLabel label_of(const RawBlock& block) {
    BlockLabel label{block.opcode, std::nullopt};
    if (block.opcode.starts_with("procedures_")) {
        label.qualifier = block.proc_signature;
    }
    return label;
}

std::size_t ScriptModel::labeled_count() const {
    return static_cast<std::size_t>(
        std::count_if(transitions.begin(), transitions.end(), [](const Transition& t) { return !t.is_epsilon(); }));
}

std::size_t ScriptModel::epsilon_count() const { return transitions.size() - labeled_count(); }

ScriptModel build_model(const Script& script) {
    ScriptModel model;
    ModelBuilder(script, model).chain(script.root_block, model.initial);
    return model;
}

PropertySet extract_properties(const ScriptModel& model, const PropertyOptions& options) {
    const auto reach = reachability(model, options.adjacent_only);
    PropertySet properties;
    for (const auto& first : model.transitions) {
        if (first.is_epsilon()) {
            continue;
        }
        const auto& from = reach[static_cast<std::size_t>(first.dst)];
        for (const auto& second : model.transitions) {
            if (second.is_epsilon() || !from[static_cast<std::size_t>(second.src)]) {
                continue;
            }
            if (options.no_self_pairs && *first.label == *second.label) {
                continue;
            }
            properties.insert(TemporalProperty{*first.label, *second.label});
        }
    }
    return properties;
}

std::string to_dot(const ScriptModel& model, const std::string& graph_name) {
    std::ostringstream out;
    out << "digraph \"" << dot_escape(graph_name) << "\" {\n";
    out << "  rankdir=TB;\n";
    for (int loc = 0; loc < model.location_count; ++loc) {
        out << "  l" << loc << " [label=\"l" << loc << "\"" << (loc == model.initial ? ", shape=doublecircle" : "")
            << "];\n";
    }
    for (const auto& t : model.transitions) {
        out << "  l" << t.src << " -> l" << t.dst;
        if (t.label) {
            out << " [label=\"" << dot_escape(to_string(*t.label)) << "\"];\n";
        } else {
            out << " [style=dashed];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace scratch_anomalies
