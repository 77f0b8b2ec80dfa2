#pragma once

#include <string>
#include <utility>
#include <vector>

namespace degen {

/// %.17g, the shortest printf form that round-trips every double.
std::string format_real(double x);

/// Comma-separated table with a header row and LF line endings.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  /// Starts a row; fill it with the cell() overloads.
  CsvTable& row();
  CsvTable& cell(double x);
  CsvTable& cell(int x);
  CsvTable& cell(const std::string& s);
  CsvTable& cell(const char* s) { return cell(std::string(s)); }

  std::string str() const;
  std::size_t rows() const noexcept { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

/// "key: value" lines.
class Record {
 public:
  Record& add(const std::string& key, double x);
  Record& add(const std::string& key, int x);
  Record& add(const std::string& key, const std::string& s);
  Record& add(const std::string& key, const char* s) { return add(key, std::string(s)); }
  std::string str() const;

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
};

}  // namespace degen
