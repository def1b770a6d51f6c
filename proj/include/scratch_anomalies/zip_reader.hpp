#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace scratch_anomalies {

/// Returns true when the file starts with a zip local-file-header signature.
bool looks_like_zip(std::string_view bytes);

/// Extracts one entry of an in-memory zip archive. Supports stored and
/// deflated entries; returns nullopt when no entry has this exact name.
/// Throws MalformedProject on a corrupt archive.
std::optional<std::string> read_zip_entry(std::string_view archive, std::string_view entry_name);

/// Reads a whole file into memory. Throws UnreadableFile.
std::string read_file_bytes(const std::filesystem::path& path);

}  // namespace scratch_anomalies
