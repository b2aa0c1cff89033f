#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace surface {

std::string read_file(const std::filesystem::path& path);

// Writes through a sibling temporary file and renames it into place, so a
// failed run never leaves a truncated output behind.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// Writes every file only after all contents were produced.
void write_files_atomic(const std::vector<std::pair<std::filesystem::path, std::string>>& files);

}  // namespace surface
