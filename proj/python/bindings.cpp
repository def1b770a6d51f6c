#include "scratch_anomalies/anomaly.hpp"
#include "scratch_anomalies/cli.hpp"
#include "scratch_anomalies/errors.hpp"
#include "scratch_anomalies/miner.hpp"
#include "scratch_anomalies/report.hpp"
#include "scratch_anomalies/sb3.hpp"
#include "scratch_anomalies/script_model.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace pybind11::literals;
namespace sa = scratch_anomalies;

namespace {

using PairList = std::vector<std::pair<std::string, std::string>>;

PairList to_pairs(const sa::PropertySet& properties) {
  PairList out;
  for (const auto& p : properties) {
    out.emplace_back(sa::to_string(p.pred), sa::to_string(p.succ));
  }
  return out;
}

sa::MinerConfig make_config(const std::string& mode, std::optional<int> min_support, int min_pattern_size,
                            int max_missing, double min_confidence, int top_n, bool adjacent_only,
                            bool no_self_pairs) {
  if (mode != "aa" && mode != "as") {
    throw py::value_error("mode must be 'aa' or 'as'");
  }
  sa::MinerConfig config;
  config.mode = mode == "as" ? sa::Mode::ActorSpecific : sa::Mode::ActorAgnostic;
  config.min_support = min_support;
  config.min_pattern_size = min_pattern_size;
  config.max_missing = max_missing;
  config.min_confidence = min_confidence;
  config.top_n = top_n;
  config.adjacent_only = adjacent_only;
  config.no_self_pairs = no_self_pairs;
  config.validate();
  return config;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Anomaly detection over corpora of Scratch 3 projects";

  auto base = py::register_exception<sa::Error>(m, "Error");
  py::register_exception<sa::UnreadableFile>(m, "UnreadableFile", base);
  py::register_exception<sa::MalformedProject>(m, "MalformedProject", base);
  py::register_exception<sa::EmptyCorpus>(m, "EmptyCorpus", base);
  py::register_exception<sa::NoScripts>(m, "NoScripts", base);

  m.def(
      "detect_json",
      [](const std::string& input, const std::string& mode, std::optional<int> min_support, int min_pattern_size,
         int max_missing, double min_confidence, int top_n, bool adjacent_only, bool no_self_pairs, bool recursive,
         bool text) {
        const auto config = make_config(mode, min_support, min_pattern_size, max_missing, min_confidence, top_n,
                                        adjacent_only, no_self_pairs);
        py::gil_scoped_release release;
        const auto report = sa::detect(input, config, sa::CorpusOptions{recursive});
        return text ? sa::render_text(report) : sa::render_json(report);
      },
      "input"_a, "mode"_a = "aa", "min_support"_a = py::none(), "min_pattern_size"_a = 2, "max_missing"_a = 2,
      "min_confidence"_a = 0.9, "top_n"_a = 10, "adjacent_only"_a = false, "no_self_pairs"_a = false,
      "recursive"_a = false, "text"_a = false,
      "Run the full pipeline on a corpus directory; returns the JSON (or text) report.");

  m.def(
      "compare_modes_json",
      [](const std::string& input, std::optional<int> min_support, int min_pattern_size, int max_missing,
         double min_confidence, int top_n, bool recursive) {
        const auto config =
            make_config("aa", min_support, min_pattern_size, max_missing, min_confidence, top_n, false, false);
        py::gil_scoped_release release;
        const auto corpus = sa::load_corpus(input, sa::CorpusOptions{recursive});
        return sa::render_json(sa::compare_modes(corpus, config));
      },
      "input"_a, "min_support"_a = py::none(), "min_pattern_size"_a = 2, "max_missing"_a = 2,
      "min_confidence"_a = 0.9, "top_n"_a = 10, "recursive"_a = false);

  m.def(
      "mine_patterns",
      [](const std::vector<PairList>& rows, int min_support, int min_pattern_size) {
        sa::PropertyDB db;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          sa::PropertyRow row{sa::ScriptId{"row", "", static_cast<int>(i)}, {}};
          for (const auto& [pred, succ] : rows[i]) {
            row.properties.insert(sa::TemporalProperty{{pred, std::nullopt}, {succ, std::nullopt}});
          }
          db.rows.push_back(std::move(row));
        }
        py::list out;
        for (const auto& pattern : sa::mine_patterns(db, min_support, min_pattern_size)) {
          std::vector<int> supporters;
          for (const auto& id : pattern.supporters) {
            supporters.push_back(id.index);
          }
          out.append(py::dict("pattern_id"_a = pattern.pattern_id, "properties"_a = to_pairs(pattern.properties),
                              "support"_a = pattern.support, "supporters"_a = supporters));
        }
        return out;
      },
      "rows"_a, "min_support"_a, "min_pattern_size"_a = 1,
      "Closed frequent itemsets of rows given as lists of (pred, succ) pairs.");

  m.def(
      "script_properties",
      [](const std::string& path, bool adjacent_only, bool no_self_pairs) {
        const auto project = sa::load_project(path);
        py::list out;
        for (const auto& script : sa::extract_scripts(project)) {
          const auto model = sa::build_model(script);
          out.append(py::dict("actor"_a = script.id.actor, "index"_a = script.id.index,
                              "is_stage"_a = script.actor_is_stage, "dead_code"_a = script.dead_code,
                              "locations"_a = model.location_count,
                              "properties"_a =
                                  to_pairs(sa::extract_properties(model, {adjacent_only, no_self_pairs}))));
        }
        return out;
      },
      "path"_a, "adjacent_only"_a = false, "no_self_pairs"_a = false,
      "Temporal properties of every script in one .sb3 / project.json file.");

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out;
        std::ostringstream err;
        const int code = sa::cli::run(args, out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      "args"_a, "Run the command-line tool in-process; returns (exit_code, stdout, stderr).");

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
