#include "shockloop/csv.hpp"

#include <cstdio>
#include <fstream>

#include "shockloop/error.hpp"

namespace shockloop {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void KeyValueWriter::add(std::string_view key, double value) {
  entries_.emplace_back(key, format_double(value));
}

void KeyValueWriter::add(std::string_view key, long long value) {
  entries_.emplace_back(key, std::to_string(value));
}

void KeyValueWriter::add(std::string_view key, bool value) {
  entries_.emplace_back(key, value ? "true" : "false");
}

void KeyValueWriter::add(std::string_view key, std::string_view value) {
  entries_.emplace_back(key, value);
}

std::string KeyValueWriter::str() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + " = " + v + "\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view contents) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

}  // namespace shockloop
