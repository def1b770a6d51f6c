#include "scratch_anomalies/report.hpp"

#include "scratch_anomalies/errors.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scratch_anomalies {

namespace {

OrderedJson properties_json(const PropertySet& properties) {
    OrderedJson out = OrderedJson::array();
    for (const auto& p : properties) {
        out.push_back(OrderedJson::array({to_string(p.pred), to_string(p.succ)}));
    }
    return out;
}

OrderedJson config_json(const MinerConfig& config) {
    OrderedJson out;
    if (config.min_support) {
        out["min_support"] = *config.min_support;
    } else {
        out["min_support"] = "auto";
    }
    out["min_pattern_size"] = config.min_pattern_size;
    out["max_missing"] = config.max_missing;
    out["min_confidence"] = config.min_confidence;
    out["top_n"] = config.top_n;
    out["adjacent_only"] = config.adjacent_only;
    out["no_self_pairs"] = config.no_self_pairs;
    return out;
}

OrderedJson script_json(const ScriptId& id) {
    return OrderedJson{{"project", id.project}, {"actor", id.actor}, {"script_index", id.index}};
}

std::string fixed2(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.2f", value);
    return buffer;
}

std::string property_text(const TemporalProperty& p) { return to_string(p.pred) + " -> " + to_string(p.succ); }

std::string file_safe(const std::string& text) {
    std::string out;
    for (const char c : text) {
        const auto u = static_cast<unsigned char>(c);
        out += (std::isalnum(u) || c == '-' || c == '.') ? c : '_';
    }
    return out;
}

}  // namespace

OrderedJson to_json(const AnomalyReport& report) {
    OrderedJson out;
    out["mode"] = to_string(report.mode);
    out["config"] = config_json(report.config);

    OrderedJson skipped = OrderedJson::array();
    for (const auto& s : report.corpus.skipped) {
        skipped.push_back(OrderedJson{{"file", s.file}, {"error", s.error}});
    }
    out["corpus"] = OrderedJson{
        {"projects", report.corpus.projects}, {"skipped", skipped}, {"scripts", report.corpus.scripts}};

    OrderedJson groups = OrderedJson::array();
    for (const auto& g : report.groups) {
        groups.push_back(OrderedJson{{"key", g.key}, {"scripts", g.scripts}, {"patterns", g.patterns.size()}});
    }
    out["groups"] = groups;
    out["violations_found"] = report.violations_found;

    OrderedJson anomalies = OrderedJson::array();
    for (const auto& a : report.anomalies) {
        const Violation& v = a.violation;
        OrderedJson item;
        item["rank"] = a.rank;
        item["confidence"] = v.confidence;
        item["support"] = v.support;
        item["same_way_count"] = v.same_way_count;
        item["project"] = v.script.project;
        item["actor"] = v.script.actor;
        item["script_index"] = v.script.index;
        item["dead_code"] = a.dead_code;
        item["pattern_id"] = v.pattern_id;
        item["missing"] = properties_json(v.missing);
        item["present"] = properties_json(v.present);
        item["annotation"] = nullptr;
        anomalies.push_back(std::move(item));
    }
    out["anomalies"] = anomalies;
    return out;
}

OrderedJson to_json(const ModeComparison& comparison) {
    OrderedJson overlap = OrderedJson::array();
    for (const auto& entry : comparison.overlap) {
        OrderedJson item = script_json(entry.script);
        item["missing"] = properties_json(entry.missing);
        overlap.push_back(std::move(item));
    }
    OrderedJson out;
    out["AA"] = to_json(comparison.actor_agnostic);
    out["AS"] = to_json(comparison.actor_specific);
    out["overlap"] = overlap;
    return out;
}

OrderedJson patterns_to_json(const AnomalyReport& report) {
    OrderedJson out = OrderedJson::array();
    for (const auto& group : report.groups) {
        for (const auto& pattern : group.patterns) {
            OrderedJson supporters = OrderedJson::array();
            for (const auto& id : pattern.supporters) {
                supporters.push_back(script_json(id));
            }
            OrderedJson item;
            item["group"] = group.key;
            item["pattern_id"] = pattern.pattern_id;
            item["properties"] = properties_json(pattern.properties);
            item["support"] = pattern.support;
            item["supporters"] = supporters;
            out.push_back(std::move(item));
        }
    }
    return out;
}

std::string render_json(const AnomalyReport& report) { return to_json(report).dump(2) + "\n"; }

std::string render_json(const ModeComparison& comparison) { return to_json(comparison).dump(2) + "\n"; }

std::string render_text(const AnomalyReport& report) {
    const MinerConfig& c = report.config;
    std::ostringstream out;
    out << "Scratch anomaly report (" << to_string(report.mode) << " mode)\n";
    out << "config: min-support=" << (c.min_support ? std::to_string(*c.min_support) : "auto")
        << " min-pattern-size=" << c.min_pattern_size << " max-missing=" << c.max_missing
        << " min-confidence=" << fixed2(c.min_confidence) << " top=" << c.top_n
        << (c.adjacent_only ? " adjacent-only" : "") << (c.no_self_pairs ? " no-self-pairs" : "") << "\n";
    out << "corpus: " << report.corpus.projects << " projects, " << report.corpus.skipped.size() << " skipped, "
        << report.corpus.scripts << " scripts\n";
    for (const auto& s : report.corpus.skipped) {
        out << "  skipped " << s.file << ": " << s.error << "\n";
    }
    for (const auto& g : report.groups) {
        out << "group " << g.key << ": " << g.scripts << " scripts, " << g.patterns.size() << " patterns (k="
            << g.min_support << ")\n";
    }
    out << "violations found: " << report.violations_found << ", reported: " << report.anomalies.size() << "\n";

    if (report.anomalies.empty()) {
        out << "\nNo anomalies above confidence threshold.\n";
        return out.str();
    }
    for (const auto& a : report.anomalies) {
        const Violation& v = a.violation;
        out << "\n#" << a.rank << "  confidence " << fixed2(v.confidence) << "  support " << v.support
            << "  same-way " << v.same_way_count << "\n";
        out << "  project " << v.script.project << ", actor " << v.script.actor << ", script " << v.script.index
            << (a.dead_code ? " (dead code)" : "") << "\n";
        out << "  pattern " << v.group_key << "/" << v.pattern_id << "\n";
        for (const auto& p : v.present) {
            out << "  present: " << property_text(p) << "\n";
        }
        for (const auto& p : v.missing) {
            out << "  MISSING: " << property_text(p) << "\n";
        }
    }
    return out.str();
}

std::string render_text(const ModeComparison& comparison) {
    std::ostringstream out;
    out << render_text(comparison.actor_agnostic) << "\n" << render_text(comparison.actor_specific) << "\n";
    out << "Reported in both modes: " << comparison.overlap.size() << "\n";
    for (const auto& entry : comparison.overlap) {
        out << "  project " << entry.script.project << ", actor " << entry.script.actor << ", script "
            << entry.script.index << "\n";
        for (const auto& p : entry.missing) {
            out << "    MISSING: " << property_text(p) << "\n";
        }
    }
    return out.str();
}

int write_models(const Corpus& corpus, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw UnreadableFile("cannot create " + dir.string() + ": " + ec.message());
    }
    int written = 0;
    for (const Project& project : corpus.projects) {
        for (const Script& script : extract_scripts(project)) {
            const std::string name = file_safe(script.id.project) + "__" + file_safe(script.id.actor) + "__" +
                                     std::to_string(script.id.index);
            const auto path = dir / (name + ".dot");
            std::ofstream file(path, std::ios::binary);
            file << to_dot(build_model(script), to_string(script.id));
            if (!file) {
                throw UnreadableFile("cannot write " + path.string());
            }
            ++written;
        }
    }
    return written;
}

}  // namespace scratch_anomalies
