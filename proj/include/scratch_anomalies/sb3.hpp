#pragma once

// Loading Scratch 3 projects and cutting them into scripts.

#include <compare>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace scratch_anomalies {

using BlockId = std::string;

struct RawBlock {
    BlockId id;
    std::string opcode;
    std::optional<BlockId> next;
    std::optional<BlockId> parent;
    bool top_level = false;
    // Entry block of SUBSTACK / SUBSTACK2, in that order. An empty C-block
    // keeps a nullopt slot so if/else branches stay positional.
    std::vector<std::optional<BlockId>> substacks;
    // proccode of the custom block this block calls or defines.
    std::optional<std::string> proc_signature;
};

struct Actor {
    std::string name;
    bool is_stage = false;
    std::map<BlockId, RawBlock> raw_blocks;
};

struct Project {
    std::filesystem::path source_path;
    std::string name;
    std::vector<Actor> actors;  // stage first, then sprites in file order
};

struct ScriptId {
    std::string project;
    std::string actor;
    int index = 0;

    auto operator<=>(const ScriptId&) const = default;
    bool operator==(const ScriptId&) const = default;
};

std::string to_string(const ScriptId& id);

/// One top-level block chain of one actor. Holds the reachable blocks by value
/// so a Script stays valid after the Project is gone.
struct Script {
    ScriptId id;
    bool actor_is_stage = false;
    bool dead_code = false;  // root is not a hat block
    BlockId root_block;
    std::map<BlockId, RawBlock> blocks;

    const RawBlock& block(const BlockId& block_id) const;
};

struct SkippedFile {
    std::string file;
    std::string error;
};

struct Corpus {
    std::vector<Project> projects;
    std::vector<SkippedFile> skipped;
};

/// Trimmed, case-folded actor name used for identity and grouping.
std::string normalize_actor_name(std::string_view name);

bool is_hat_opcode(std::string_view opcode);
bool is_reporter_opcode(std::string_view opcode);

/// Parses project.json text. `name` becomes Project::name.
Project parse_project_json(std::string_view json_text, std::string name,
                           std::filesystem::path source_path = {});

/// Loads a .sb3 archive or a bare project.json.
/// Throws UnreadableFile or MalformedProject.
Project load_project(const std::filesystem::path& path);

std::vector<Script> extract_scripts(const Project& project);

struct CorpusOptions {
    bool recursive = false;
};

/// Loads every *.sb3 / *.json under `dir` in file-name order. Files that fail
/// to load are recorded in Corpus::skipped. Throws EmptyCorpus when nothing loads,
/// UnreadableFile when `dir` is not a readable directory.
Corpus load_corpus(const std::filesystem::path& dir, const CorpusOptions& options = {});

}  // namespace scratch_anomalies
