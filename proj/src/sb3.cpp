#include "scratch_anomalies/sb3.hpp"

#include "scratch_anomalies/errors.hpp"
#include "scratch_anomalies/zip_reader.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <set>
#include <unordered_map>

namespace scratch_anomalies {

using nlohmann::json;

namespace {

// C-blocks and the number of nested stacks they own.
const std::unordered_map<std::string_view, std::size_t>& c_block_arity() {
    static const std::unordered_map<std::string_view, std::size_t> arity = {
        {"control_if", 1},          {"control_if_else", 2}, {"control_repeat", 1},
        {"control_repeat_until", 1}, {"control_while", 1},   {"control_for_each", 1},
        {"control_forever", 1},      {"control_all_at_once", 1},
    };
    return arity;
}

const std::set<std::string_view>& reporter_opcodes() {
    static const std::set<std::string_view> opcodes = {
        "motion_xposition",      "motion_yposition",       "motion_direction",
        "looks_costumenumbername", "looks_backdropnumbername", "looks_size",
        "sound_volume",          "sensing_touchingobject", "sensing_touchingcolor",
        "sensing_coloristouchingcolor", "sensing_distanceto", "sensing_answer",
        "sensing_keypressed",    "sensing_mousedown",      "sensing_mousex",
        "sensing_mousey",        "sensing_loudness",       "sensing_loud",
        "sensing_timer",         "sensing_of",             "sensing_current",
        "sensing_dayssince2000", "sensing_username",       "sensing_userid",
        "data_variable",         "data_listcontents",      "data_itemoflist",
        "data_itemnumoflist",    "data_lengthoflist",      "data_listcontainsitem",
        "music_getTempo",        "videoSensing_videoOn",   "translate_getTranslate",
        "translate_getViewerLanguage",
    };
    return opcodes;
}

std::string_view trim(std::string_view text) {
    const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
    while (!text.empty() && is_space(text.front())) {
        text.remove_prefix(1);
    }
    while (!text.empty() && is_space(text.back())) {
        text.remove_suffix(1);
    }
    return text;
}

std::optional<BlockId> optional_id(const json& node, std::string_view field) {
    const auto it = node.find(field);
    if (it == node.end() || it->is_null()) {
        return std::nullopt;
    }
    if (!it->is_string()) {
        throw MalformedProject("block field '" + std::string(field) + "' must be a string or null");
    }
    return it->get<std::string>();
}

// sb3 inputs look like [shadow-kind, "<block-id>" | null | [primitive], ...].
std::optional<BlockId> input_block(const json& inputs, std::string_view key) {
    const auto it = inputs.find(key);
    if (it == inputs.end() || !it->is_array() || it->size() < 2) {
        return std::nullopt;
    }
    const json& ref = (*it)[1];
    if (ref.is_string()) {
        return ref.get<std::string>();
    }
    return std::nullopt;
}

std::optional<std::string> proccode_of(const json& node) {
    const auto mutation = node.find("mutation");
    if (mutation == node.end() || !mutation->is_object()) {
        return std::nullopt;
    }
    const auto code = mutation->find("proccode");
    if (code == mutation->end() || !code->is_string()) {
        return std::nullopt;
    }
    return code->get<std::string>();
}

RawBlock parse_block(const std::string& id, const json& node,
                     std::unordered_map<BlockId, BlockId>& prototype_of) {
    RawBlock block;
    block.id = id;
    const auto opcode = node.find("opcode");
    if (opcode == node.end() || !opcode->is_string()) {
        throw MalformedProject("block '" + id + "' has no opcode");
    }
    block.opcode = opcode->get<std::string>();
    block.next = optional_id(node, "next");
    block.parent = optional_id(node, "parent");
    if (const auto top = node.find("topLevel"); top != node.end() && top->is_boolean()) {
        block.top_level = top->get<bool>();
    }
    if (block.top_level && block.parent) {
        throw MalformedProject("top-level block '" + id + "' has a parent");
    }

    static const json no_inputs = json::object();
    const auto inputs_it = node.find("inputs");
    const json& inputs = (inputs_it != node.end() && inputs_it->is_object()) ? *inputs_it : no_inputs;

    std::size_t slots = 0;
    if (const auto known = c_block_arity().find(block.opcode); known != c_block_arity().end()) {
        slots = known->second;
    } else if (inputs.contains("SUBSTACK2")) {
        slots = 2;
    } else if (inputs.contains("SUBSTACK")) {
        slots = 1;
    }
    constexpr std::array<std::string_view, 2> substack_keys = {"SUBSTACK", "SUBSTACK2"};
    for (std::size_t i = 0; i < slots; ++i) {
        block.substacks.push_back(input_block(inputs, substack_keys[i]));
    }

    block.proc_signature = proccode_of(node);
    if (block.opcode == "procedures_definition") {
        if (auto proto = input_block(inputs, "custom_block")) {
            prototype_of.emplace(id, *proto);
        }
    }
    return block;
}

// Every next/substack reference must resolve, no block may be entered twice,
// and top-level blocks may not be entered at all. Together these make every
// script a finite tree and keep scripts disjoint.
void check_block_graph(const Actor& actor) {
    std::set<BlockId> entered;
    const auto enter = [&](const RawBlock& from, const BlockId& to) {
        const auto target = actor.raw_blocks.find(to);
        if (target == actor.raw_blocks.end()) {
            throw MalformedProject("block '" + from.id + "' in actor '" + actor.name +
                                   "' references missing block '" + to + "'");
        }
        if (target->second.top_level || !entered.insert(to).second) {
            throw MalformedProject("block '" + to + "' in actor '" + actor.name +
                                   "' is reachable along more than one edge");
        }
    };
    for (const auto& [id, block] : actor.raw_blocks) {
        if (block.next) {
            enter(block, *block.next);
        }
        for (const auto& sub : block.substacks) {
            if (sub) {
                enter(block, *sub);
            }
        }
    }
}

Actor parse_target(const json& target) {
    if (!target.is_object()) {
        throw MalformedProject("target is not an object");
    }
    const auto is_stage = target.find("isStage");
    const auto name = target.find("name");
    const auto blocks = target.find("blocks");
    if (is_stage == target.end() || !is_stage->is_boolean()) {
        throw MalformedProject("target lacks boolean 'isStage'");
    }
    if (name == target.end() || !name->is_string()) {
        throw MalformedProject("target lacks string 'name'");
    }
    if (blocks == target.end() || !blocks->is_object()) {
        throw MalformedProject("target '" + name->get<std::string>() + "' lacks 'blocks'");
    }

    Actor actor;
    actor.name = name->get<std::string>();
    actor.is_stage = is_stage->get<bool>();

    std::unordered_map<BlockId, BlockId> prototype_of;
    for (const auto& [id, node] : blocks->items()) {
        // Arrays are top-level variable/list reporters; shadows are argument menus.
        if (!node.is_object()) {
            continue;
        }
        if (const auto shadow = node.find("shadow"); shadow != node.end() && shadow->is_boolean() &&
                                                      shadow->get<bool>()) {
            continue;
        }
        actor.raw_blocks.emplace(id, parse_block(id, node, prototype_of));
    }

    for (const auto& [definition, prototype] : prototype_of) {
        // Prototypes are shadow blocks, so read them from the JSON directly.
        const auto proto_node = blocks->find(prototype);
        if (proto_node == blocks->end() || !proto_node->is_object()) {
            throw MalformedProject("custom block definition '" + definition + "' references missing prototype");
        }
        actor.raw_blocks.at(definition).proc_signature = proccode_of(*proto_node);
    }

    check_block_graph(actor);
    return actor;
}

void collect_tree(const Actor& actor, const BlockId& root, std::map<BlockId, RawBlock>& out) {
    std::vector<BlockId> pending{root};
    while (!pending.empty()) {
        const BlockId id = pending.back();
        pending.pop_back();
        const RawBlock& block = actor.raw_blocks.at(id);
        out.emplace(id, block);
        if (block.next) {
            pending.push_back(*block.next);
        }
        for (const auto& sub : block.substacks) {
            if (sub) {
                pending.push_back(*sub);
            }
        }
    }
}

bool is_project_file(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    return ext == ".sb3" || ext == ".json";
}

}  // namespace

std::string to_string(const ScriptId& id) {
    return id.project + "/" + id.actor + "#" + std::to_string(id.index);
}

const RawBlock& Script::block(const BlockId& block_id) const { return blocks.at(block_id); }

std::string normalize_actor_name(std::string_view name) {
    std::string out(trim(name));
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

bool is_hat_opcode(std::string_view opcode) {
    if (opcode == "control_start_as_clone" || opcode == "procedures_definition") {
        return true;
    }
    const auto sep = opcode.find('_');
    return sep != std::string_view::npos && opcode.substr(sep + 1).starts_with("when");
}

bool is_reporter_opcode(std::string_view opcode) {
    return opcode.starts_with("operator_") || opcode.starts_with("argument_reporter_") ||
           opcode.ends_with("_menu") || reporter_opcodes().contains(opcode);
}

Project parse_project_json(std::string_view json_text, std::string name, std::filesystem::path source_path) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw MalformedProject(std::string("project.json is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw MalformedProject("project.json root is not an object");
    }
    const auto targets = root.find("targets");
    if (targets == root.end() || !targets->is_array()) {
        throw MalformedProject("project.json has no 'targets' array");
    }

    Project project;
    project.source_path = std::move(source_path);
    project.name = std::move(name);

    std::vector<Actor> sprites;
    std::set<std::string> seen_names;
    for (const auto& target : *targets) {
        Actor actor = parse_target(target);
        if (!actor.is_stage && !seen_names.insert(normalize_actor_name(actor.name)).second) {
            throw MalformedProject("duplicate actor name '" + actor.name + "'");
        }
        if (actor.is_stage) {
            if (!project.actors.empty()) {
                throw MalformedProject("project has more than one stage");
            }
            project.actors.push_back(std::move(actor));
        } else {
            sprites.push_back(std::move(actor));
        }
    }
    if (project.actors.empty()) {
        throw MalformedProject("project has no stage target");
    }
    for (auto& sprite : sprites) {
        project.actors.push_back(std::move(sprite));
    }
    return project;
}

Project load_project(const std::filesystem::path& path) {
    const std::string bytes = read_file_bytes(path);
    const std::string stem = path.stem().string();
    if (looks_like_zip(bytes)) {
        auto entry = read_zip_entry(bytes, "project.json");
        if (!entry) {
            throw MalformedProject(path.string() + ": archive has no project.json entry");
        }
        return parse_project_json(*entry, stem, path);
    }
    return parse_project_json(bytes, stem, path);
}

std::vector<Script> extract_scripts(const Project& project) {
    std::vector<Script> scripts;
    for (const Actor& actor : project.actors) {
        int ordinal = 0;
        // std::map iteration is already ascending by block id.
        for (const auto& [id, block] : actor.raw_blocks) {
            if (!block.top_level || is_reporter_opcode(block.opcode)) {
                continue;
            }
            Script script;
            script.id = ScriptId{project.name, actor.name, ordinal++};
            script.actor_is_stage = actor.is_stage;
            script.dead_code = !is_hat_opcode(block.opcode);
            script.root_block = id;
            collect_tree(actor, id, script.blocks);
            scripts.push_back(std::move(script));
        }
    }
    return scripts;
}

Corpus load_corpus(const std::filesystem::path& dir, const CorpusOptions& options) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        throw UnreadableFile("not a directory: " + dir.string());
    }

    std::vector<fs::path> files;
    const auto consider = [&](const fs::directory_entry& entry) {
        if (entry.is_regular_file() && is_project_file(entry.path())) {
            files.push_back(entry.path());
        }
    };
    try {
        if (options.recursive) {
            for (const auto& entry : fs::recursive_directory_iterator(dir)) {
                consider(entry);
            }
        } else {
            for (const auto& entry : fs::directory_iterator(dir)) {
                consider(entry);
            }
        }
    } catch (const fs::filesystem_error& e) {
        throw UnreadableFile(e.what());
    }

    const auto relative_name = [&](const fs::path& file) { return file.lexically_relative(dir).generic_string(); };
    std::sort(files.begin(), files.end(),
              [&](const fs::path& a, const fs::path& b) { return relative_name(a) < relative_name(b); });

    Corpus corpus;
    std::set<std::string> used_names;
    for (const auto& file : files) {
        const std::string rel = relative_name(file);
        try {
            Project project = load_project(file);
            // Project names identify scripts, so they must be unique in a corpus.
            std::string name = fs::path(rel).replace_extension().generic_string();
            if (used_names.contains(name)) {
                name = rel;
            }
            used_names.insert(name);
            project.name = std::move(name);
            corpus.projects.push_back(std::move(project));
        } catch (const Error& e) {
            corpus.skipped.push_back(SkippedFile{rel, e.what()});
        }
    }
    if (corpus.projects.empty()) {
        throw EmptyCorpus("no loadable Scratch projects in " + dir.string());
    }
    return corpus;
}

}  // namespace scratch_anomalies
