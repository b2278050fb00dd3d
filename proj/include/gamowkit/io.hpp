#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gamowkit {

/// Shortest decimal string that reads back to exactly `value`.
std::string format_number(double value);

/// Minimal CSV builder: header first, then rows of already formatted cells.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  void add_row(std::vector<std::string> cells);
  std::size_t rows() const { return rows_.size(); }
  std::string str() const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

void write_text_file(const std::string& path, std::string_view text);

}  // namespace gamowkit
