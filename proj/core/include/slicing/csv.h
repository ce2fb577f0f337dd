#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace slicing {

// Comma-separated, LF line endings, doubles with 9 significant digits.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  CsvWriter& header(const std::vector<std::string>& names);

  CsvWriter& field(double value);
  CsvWriter& field(std::uint64_t value);
  CsvWriter& field(std::string_view value);
  CsvWriter& field(int value) { return field(static_cast<std::uint64_t>(value)); }
  void end_row();

 private:
  void separator();

  std::ofstream out_;
  bool row_open_ = false;
};

std::string format_double(double value);

}  // namespace slicing
