#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace disruptix {

// Shortest round-trip decimal form of a double ("0.5", not "0.50000...").
std::string format_double(double v);

// Splits one delimited line. No quoting: the corpus formats are plain
// delimited text with opaque keys.
std::vector<std::string_view> split_fields(std::string_view line, char delim);

// Line-oriented CSV writer with a fixed delimiter and UTF-8 passthrough.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, char delim = ',');

  void row(const std::vector<std::string>& cells);
  void close();

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  char delim_;
  std::ofstream out_;
};

// Whole-file CSV reader used by exports round-trips and the CLI. Returns
// header + data rows as strings; throws IoError when the file is missing.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  // Column index by name, -1 if absent.
  int column(std::string_view name) const;
};

CsvTable read_csv(const std::string& path, char delim = ',');

}  // namespace disruptix
