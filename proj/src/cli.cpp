#include "scratch_anomalies/cli.hpp"

#include "scratch_anomalies/anomaly.hpp"
#include "scratch_anomalies/errors.hpp"
#include "scratch_anomalies/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <stdexcept>

namespace scratch_anomalies::cli {

namespace {

struct CliOptions {
    std::string input;
    std::string mode = "aa";
    std::string min_support = "auto";
    int max_missing = 2;
    double min_confidence = 0.9;
    int min_pattern_size = 2;
    int top = 10;
    std::string format = "text";
    std::string output;
    std::string emit_models;
    std::string emit_patterns;
    bool compare_modes = false;
    bool recursive = false;
    bool adjacent_only = false;
    bool no_self_pairs = false;
};

std::optional<int> parse_min_support(const std::string& text) {
    if (text == "auto") {
        return std::nullopt;
    }
    int value = 0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || end != text.data() + text.size()) {
        throw std::invalid_argument("min-support must be an integer or \"auto\"");
    }
    return value;
}

MinerConfig to_config(const CliOptions& o) {
    MinerConfig config;
    config.min_support = parse_min_support(o.min_support);
    config.min_pattern_size = o.min_pattern_size;
    config.max_missing = o.max_missing;
    config.min_confidence = o.min_confidence;
    config.top_n = o.top;
    config.mode = o.mode == "as" ? Mode::ActorSpecific : Mode::ActorAgnostic;
    config.adjacent_only = o.adjacent_only;
    config.no_self_pairs = o.no_self_pairs;
    config.validate();
    return config;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    file << text;
    if (!file) {
        throw UnreadableFile("cannot write " + path);
    }
}

int execute(const CliOptions& options, const MinerConfig& config, std::ostream& out, std::ostream& err) {
    const Corpus corpus = load_corpus(options.input, CorpusOptions{options.recursive});
    for (const auto& skipped : corpus.skipped) {
        err << "warning: skipped " << skipped.file << ": " << skipped.error << "\n";
    }
    if (!options.emit_models.empty()) {
        write_models(corpus, options.emit_models);
    }

    const bool json = options.format == "json";
    std::string rendered;
    const AnomalyReport* pattern_source = nullptr;
    std::optional<ModeComparison> comparison;
    std::optional<AnomalyReport> report;
    if (options.compare_modes) {
        comparison = compare_modes(corpus, config);
        rendered = json ? render_json(*comparison) : render_text(*comparison);
        pattern_source = config.mode == Mode::ActorSpecific ? &comparison->actor_specific : &comparison->actor_agnostic;
    } else {
        report = detect(corpus, config);
        rendered = json ? render_json(*report) : render_text(*report);
        pattern_source = &*report;
    }

    if (!options.emit_patterns.empty()) {
        write_text_file(options.emit_patterns, patterns_to_json(*pattern_source).dump(2) + "\n");
    }
    if (options.output.empty()) {
        out << rendered;
    } else {
        write_text_file(options.output, rendered);
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Find anomalous scripts in a corpus of Scratch 3 solutions to one assignment",
                 "scratch-anomalies"};
    app.require_subcommand(1);

    CliOptions o;
    CLI::App* detect_cmd = app.add_subcommand("detect", "Mine patterns and report ranked anomalies");
    detect_cmd->add_option("-i,--input", o.input, "Directory of .sb3 / project.json files")->required();
    detect_cmd->add_option("--mode", o.mode, "aa (actor agnostic) or as (actor specific)")
        ->check(CLI::IsMember({"aa", "as"}))
        ->capture_default_str();
    detect_cmd->add_option("--min-support", o.min_support, "Minimum pattern support k, or \"auto\"")
        ->capture_default_str();
    detect_cmd->add_option("--max-missing", o.max_missing, "Largest missing set reported as a violation")
        ->capture_default_str();
    detect_cmd->add_option("--min-confidence", o.min_confidence, "Confidence threshold for reporting")
        ->capture_default_str();
    detect_cmd->add_option("--min-pattern-size", o.min_pattern_size, "Smallest pattern mined")
        ->capture_default_str();
    detect_cmd->add_option("--top", o.top, "Number of anomalies reported")->capture_default_str();
    detect_cmd->add_option("--format", o.format, "text or json")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
    detect_cmd->add_option("-o,--output", o.output, "Write the report here instead of stdout");
    detect_cmd->add_option("--emit-models", o.emit_models, "Write a Graphviz model per script to this directory");
    detect_cmd->add_option("--emit-patterns", o.emit_patterns, "Write mined patterns as JSON to this file");
    detect_cmd->add_flag("--compare-modes", o.compare_modes, "Run AA and AS and report their overlap");
    detect_cmd->add_flag("-r,--recursive", o.recursive, "Descend into subdirectories");
    detect_cmd->add_flag("--adjacent-only", o.adjacent_only, "Pair only directly successive blocks");
    detect_cmd->add_flag("--no-self-pairs", o.no_self_pairs, "Drop (a, a) properties produced by loops");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    MinerConfig config;
    try {
        app.parse(reversed);
        config = to_config(o);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kOk : kUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n" << "Run with --help for more information.\n";
        return kUsage;
    }

    try {
        return execute(o, config, out, err);
    } catch (const EmptyCorpus& e) {
        err << "error: " << e.what() << "\n";
        return kNothingToAnalyze;
    } catch (const NoScripts& e) {
        err << "error: " << e.what() << "\n";
        return kNothingToAnalyze;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIoFailure;
    }
}

}  // namespace scratch_anomalies::cli
