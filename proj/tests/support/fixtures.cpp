#include "fixtures.hpp"

#include <zlib.h>

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace scratch_anomalies::testing {

namespace {

class BlockWriter {
public:
    BlockWriter(nlohmann::json& blocks, int actor_index) : blocks_(blocks), actor_index_(actor_index) {}

    // Writes a stack and returns the id of its first block.
    std::optional<std::string> stack(const Stack& blocks, const std::optional<std::string>& parent, bool top) {
        std::optional<std::string> first;
        std::optional<std::string> previous;
        for (const auto& desc : blocks) {
            const std::string id = fresh_id();
            nlohmann::json node;
            node["opcode"] = desc.opcode;
            node["next"] = nullptr;
            node["parent"] = previous ? nlohmann::json(*previous) : (parent ? nlohmann::json(*parent) : nullptr);
            node["inputs"] = nlohmann::json::object();
            node["fields"] = nlohmann::json::object();
            node["shadow"] = false;
            node["topLevel"] = top && !previous;
            if (node["topLevel"].get<bool>()) {
                node["x"] = 0;
                node["y"] = 0;
            }
            blocks_[id] = node;
            if (previous) {
                blocks_[*previous]["next"] = id;
            } else {
                first = id;
            }

            static const char* keys[] = {"SUBSTACK", "SUBSTACK2"};
            for (std::size_t i = 0; i < desc.substacks.size() && i < 2; ++i) {
                const auto entry = stack(desc.substacks[i], id, false);
                blocks_[id]["inputs"][keys[i]] = nlohmann::json::array({2, entry ? nlohmann::json(*entry) : nullptr});
            }
            if (desc.proccode) {
                if (desc.opcode == "procedures_definition") {
                    const std::string proto = fresh_id();
                    blocks_[proto] = {{"opcode", "procedures_prototype"},
                                      {"next", nullptr},
                                      {"parent", id},
                                      {"inputs", nlohmann::json::object()},
                                      {"fields", nlohmann::json::object()},
                                      {"shadow", true},
                                      {"topLevel", false},
                                      {"mutation", {{"tagName", "mutation"}, {"proccode", *desc.proccode}}}};
                    blocks_[id]["inputs"]["custom_block"] = nlohmann::json::array({1, proto});
                } else {
                    blocks_[id]["mutation"] = {{"tagName", "mutation"}, {"proccode", *desc.proccode}};
                }
            }
            previous = id;
        }
        return first;
    }

    void orphan_reporter() {
        const std::string id = fresh_id();
        blocks_[id] = {{"opcode", "operator_add"}, {"next", nullptr},  {"parent", nullptr},
                       {"inputs", nlohmann::json::object()},         {"fields", nlohmann::json::object()},
                       {"shadow", false},          {"topLevel", true}, {"x", 10},
                       {"y", 10}};
    }

private:
    std::string fresh_id() {
        char buffer[32];
        std::snprintf(buffer, sizeof buffer, "a%02d_%04d", actor_index_, counter_++);
        return buffer;
    }

    nlohmann::json& blocks_;
    int actor_index_;
    int counter_ = 0;
};

void put_u16(std::string& out, std::uint16_t v) {
    out += static_cast<char>(v & 0xff);
    out += static_cast<char>((v >> 8) & 0xff);
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out += static_cast<char>((v >> (8 * i)) & 0xff);
    }
}

std::string deflate_raw(const std::string& data) {
    z_stream stream{};
    if (deflateInit2(&stream, Z_BEST_COMPRESSION, Z_DEFLATED, -MAX_WBITS, 8, Z_DEFAULT_STRATEGY) != Z_OK) {
        throw std::runtime_error("deflateInit2 failed");
    }
    std::string out(deflateBound(&stream, static_cast<uLong>(data.size())), '\0');
    stream.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(data.data()));
    stream.avail_in = static_cast<uInt>(data.size());
    stream.next_out = reinterpret_cast<Bytef*>(out.data());
    stream.avail_out = static_cast<uInt>(out.size());
    const int rc = deflate(&stream, Z_FINISH);
    out.resize(stream.total_out);
    deflateEnd(&stream);
    if (rc != Z_STREAM_END) {
        throw std::runtime_error("deflate failed");
    }
    return out;
}

}  // namespace

nlohmann::json project_json(const std::vector<ActorSpec>& actors) {
    std::vector<ActorSpec> all;
    bool has_stage = false;
    for (const auto& a : actors) {
        has_stage = has_stage || a.is_stage;
    }
    if (!has_stage) {
        all.push_back(ActorSpec{"Stage", {}, true, 0});
    }
    all.insert(all.end(), actors.begin(), actors.end());

    nlohmann::json targets = nlohmann::json::array();
    for (std::size_t i = 0; i < all.size(); ++i) {
        const ActorSpec& actor = all[i];
        nlohmann::json blocks = nlohmann::json::object();
        BlockWriter writer(blocks, static_cast<int>(i));
        for (const auto& script : actor.scripts) {
            writer.stack(script, std::nullopt, true);
        }
        for (int r = 0; r < actor.orphan_reporters; ++r) {
            writer.orphan_reporter();
        }
        targets.push_back({{"isStage", actor.is_stage},
                           {"name", actor.name},
                           {"variables", nlohmann::json::object()},
                           {"blocks", blocks},
                           {"costumes", nlohmann::json::array()},
                           {"sounds", nlohmann::json::array()}});
    }
    return {{"targets", targets}, {"monitors", nlohmann::json::array()}, {"meta", {{"semver", "3.0.0"}}}};
}

std::string make_zip(const std::vector<std::pair<std::string, std::string>>& entries, bool deflate) {
    std::string out;
    std::string central;
    for (const auto& [name, content] : entries) {
        const auto crc = static_cast<std::uint32_t>(
            crc32(0L, reinterpret_cast<const Bytef*>(content.data()), static_cast<uInt>(content.size())));
        const std::string payload = deflate ? deflate_raw(content) : content;
        const std::uint16_t method = deflate ? 8 : 0;
        const auto offset = static_cast<std::uint32_t>(out.size());

        put_u32(out, 0x04034b50);
        put_u16(out, 20);
        put_u16(out, 0);
        put_u16(out, method);
        put_u16(out, 0);
        put_u16(out, 0);
        put_u32(out, crc);
        put_u32(out, static_cast<std::uint32_t>(payload.size()));
        put_u32(out, static_cast<std::uint32_t>(content.size()));
        put_u16(out, static_cast<std::uint16_t>(name.size()));
        put_u16(out, 0);
        out += name;
        out += payload;

        put_u32(central, 0x02014b50);
        put_u16(central, 20);
        put_u16(central, 20);
        put_u16(central, 0);
        put_u16(central, method);
        put_u16(central, 0);
        put_u16(central, 0);
        put_u32(central, crc);
        put_u32(central, static_cast<std::uint32_t>(payload.size()));
        put_u32(central, static_cast<std::uint32_t>(content.size()));
        put_u16(central, static_cast<std::uint16_t>(name.size()));
        put_u16(central, 0);
        put_u16(central, 0);
        put_u16(central, 0);
        put_u16(central, 0);
        put_u32(central, 0);
        put_u32(central, offset);
        central += name;
    }
    const auto central_offset = static_cast<std::uint32_t>(out.size());
    out += central;
    put_u32(out, 0x06054b50);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, static_cast<std::uint16_t>(entries.size()));
    put_u16(out, static_cast<std::uint16_t>(entries.size()));
    put_u32(out, static_cast<std::uint32_t>(central.size()));
    put_u32(out, central_offset);
    put_u16(out, 0);
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
    std::ofstream file(path, std::ios::binary);
    file << bytes;
    if (!file) {
        throw std::runtime_error("cannot write " + path.string());
    }
}

void write_sb3(const std::filesystem::path& path, const nlohmann::json& project, bool deflate) {
    write_file(path, make_zip({{"project.json", project.dump()}, {"costume1.svg", "<svg/>"}}, deflate));
}

Script make_script(const Stack& stack) {
    const Project project =
        parse_project_json(project_json({ActorSpec{"Sprite1", {stack}, false, 0}}).dump(), "fixture");
    auto scripts = extract_scripts(project);
    if (scripts.size() != 1) {
        throw std::logic_error("fixture stack did not yield exactly one script");
    }
    return std::move(scripts.front());
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("scratch-anomalies-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

void write_planted_bug_corpus(const std::filesystem::path& dir, int conforming, int deviants) {
    const Stack good = {blk(op::key), blk(op::move), blk(op::next_costume)};
    const Stack bad = {blk(op::key), blk(op::go_to), blk(op::next_costume)};
    const int total = conforming + deviants;
    // Deviants are spread through the corpus rather than sitting at the end.
    for (int i = 0; i < total; ++i) {
        const bool deviant = ((i + 1) * deviants) / total != (i * deviants) / total;
        char name[32];
        std::snprintf(name, sizeof name, "student%02d.sb3", i + 1);
        write_sb3(dir / name, project_json({ActorSpec{"Cat", {deviant ? bad : good}, false, 0}}));
    }
}

}  // namespace scratch_anomalies::testing
