#include "degen/report.hpp"

#include "degen/errors.hpp"

#include <cstdio>

namespace degen {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::string quote_if_needed(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row() {
  rows_.emplace_back();
  return *this;
}

CsvTable& CsvTable::cell(double x) { return cell(format_real(x)); }

CsvTable& CsvTable::cell(int x) { return cell(std::to_string(x)); }

CsvTable& CsvTable::cell(const std::string& s) {
  if (rows_.empty()) throw InvalidArgument("cell before row");
  if (rows_.back().size() >= header_.size()) throw InvalidArgument("row longer than header");
  rows_.back().push_back(quote_if_needed(s));
  return *this;
}

std::string CsvTable::str() const {
  std::string out;
  const auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  std::vector<std::string> h;
  for (const auto& s : header_) h.push_back(quote_if_needed(s));
  line(h);
  for (const auto& r : rows_) {
    if (r.size() != header_.size()) throw InvalidArgument("incomplete CSV row");
    line(r);
  }
  return out;
}

Record& Record::add(const std::string& key, double x) { return add(key, format_real(x)); }

Record& Record::add(const std::string& key, int x) { return add(key, std::to_string(x)); }

Record& Record::add(const std::string& key, const std::string& s) {
  fields_.emplace_back(key, s);
  return *this;
}

std::string Record::str() const {
  std::string out;
  for (const auto& [k, v] : fields_) out += k + ": " + v + "\n";
  return out;
}

}  // namespace degen
