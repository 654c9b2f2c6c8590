#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gasket::io {

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string fnv1a_hex(const std::string& text);

/// Shortest round-trippable decimal form (%.17g).
std::string format_double(double v);

/// Write to a sibling temporary file, then rename over the target.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// CSV table whose first line is a comment carrying the config hash and seed.
class CsvTable {
public:
  CsvTable(std::vector<std::string> columns, std::string config_hash, std::uint64_t seed);

  /// Start a new row; cells are appended with add().
  CsvTable& row();
  CsvTable& add(const std::string& cell);
  CsvTable& add(double v);
  CsvTable& add(long long v);
  CsvTable& add(int v) { return add(static_cast<long long>(v)); }
  CsvTable& add(std::size_t v) { return add(static_cast<long long>(v)); }

  std::size_t rows() const { return rows_.size(); }
  std::string str() const;
  void write(const std::filesystem::path& path) const;

private:
  std::vector<std::string> columns_;
  std::string header_;
  std::vector<std::vector<std::string>> rows_;
};

/// Quote a cell if it holds a comma, quote or newline.
std::string csv_escape(const std::string& cell);

}  // namespace gasket::io
