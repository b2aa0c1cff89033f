#include "surface/io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>
#include <system_error>

#include "surface/error.hpp"

namespace surface {

namespace fs = std::filesystem;

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(fmt::format("cannot open '{}' for reading", path.string()));
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError(fmt::format("error reading '{}'", path.string()));
  return std::move(buf).str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  write_files_atomic({{path, std::string(content)}});
}

void write_files_atomic(const std::vector<std::pair<fs::path, std::string>>& files) {
  std::vector<std::pair<fs::path, fs::path>> staged;
  auto cleanup = [&] {
    std::error_code ec;
    for (auto& [tmp, _] : staged) fs::remove(tmp, ec);
  };
  for (const auto& [path, content] : files) {
    if (path.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
      if (ec) {
        cleanup();
        throw IoError(fmt::format("cannot create directory '{}': {}", path.parent_path().string(), ec.message()));
      }
    }
    fs::path tmp = path;
    tmp += ".tmp";
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      cleanup();
      throw IoError(fmt::format("cannot open '{}' for writing", path.string()));
    }
    staged.emplace_back(tmp, path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
      cleanup();
      throw IoError(fmt::format("error writing '{}'", path.string()));
    }
  }
  for (const auto& [tmp, path] : staged) {
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
      cleanup();
      throw IoError(fmt::format("cannot move output into '{}': {}", path.string(), ec.message()));
    }
  }
}

}  // namespace surface
