#pragma once

// Builders for synthetic Scratch projects and corpora used across the test suites.

#include "scratch_anomalies/sb3.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scratch_anomalies::testing {

namespace op {
inline constexpr const char* flag = "event_whenflagclicked";
inline constexpr const char* key = "event_whenkeypressed";
inline constexpr const char* move = "motion_movesteps";
inline constexpr const char* go_to = "motion_gotoxy";
inline constexpr const char* next_costume = "looks_nextcostume";
inline constexpr const char* say = "looks_say";
inline constexpr const char* wait = "control_wait";
inline constexpr const char* turn = "motion_turnright";
inline constexpr const char* if_ = "control_if";
inline constexpr const char* if_else = "control_if_else";
inline constexpr const char* repeat = "control_repeat";
inline constexpr const char* forever = "control_forever";
inline constexpr const char* stop = "control_stop";
}  // namespace op

struct BlockSpec;
using Stack = std::vector<BlockSpec>;

struct BlockSpec {
    std::string opcode;
    std::vector<Stack> substacks;
    std::optional<std::string> proccode;
};

inline BlockSpec blk(std::string opcode) { return BlockSpec{std::move(opcode), {}, std::nullopt}; }
inline BlockSpec cblk(std::string opcode, std::vector<Stack> substacks) {
    return BlockSpec{std::move(opcode), std::move(substacks), std::nullopt};
}

struct ActorSpec {
    std::string name;
    std::vector<Stack> scripts;
    bool is_stage = false;
    // Top-level reporters dragged onto the canvas; must not become scripts.
    int orphan_reporters = 0;
};

/// project.json for the given actors; a stage without scripts is prepended
/// when none of the actors is the stage. Block ids are "<actor-index>_<n>"
/// zero-padded so id order equals creation order.
nlohmann::json project_json(const std::vector<ActorSpec>& actors);

/// A zip archive holding the given (name, content) entries.
std::string make_zip(const std::vector<std::pair<std::string, std::string>>& entries, bool deflate);

void write_file(const std::filesystem::path& path, const std::string& bytes);
void write_sb3(const std::filesystem::path& path, const nlohmann::json& project, bool deflate = true);

/// A single Script built from one stack in a sprite called "Sprite1".
Script make_script(const Stack& stack);

/// Fresh, empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

/// 20 projects, each with one sprite "Cat" running [when key pressed; move; next costume];
/// in `deviants` of them "move steps" is replaced by "go to x:y".
void write_planted_bug_corpus(const std::filesystem::path& dir, int conforming = 18, int deviants = 2);

}  // namespace scratch_anomalies::testing
