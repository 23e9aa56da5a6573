#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace shockloop {

/// Fixed `%.17g` rendering; the byte-identical artifact contract depends on it.
std::string format_double(double v);

/// Flat `key = value` text, one pair per line, in insertion order.
class KeyValueWriter {
 public:
  void add(std::string_view key, double value);
  void add(std::string_view key, long long value);
  void add(std::string_view key, bool value);
  void add(std::string_view key, std::string_view value);
  void add(std::string_view key, const char* value) { add(key, std::string_view(value)); }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_text_file(const std::filesystem::path& path, std::string_view contents);

}  // namespace shockloop
