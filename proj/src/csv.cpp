#include "mockq/csv.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "mockq/error.hpp"

namespace mockq {

std::string CsvWriter::format(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
  require(columns_ > 0, "bad_argument", "csv header must be nonempty");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) text_ += ',';
    text_ += header[i];
  }
  text_ += '\n';
}

void CsvWriter::add_row(const std::vector<double>& row) {
  require(row.size() == columns_, "bad_argument", "csv row width does not match header");
  for (std::size_t i = 0; i < row.size(); ++i) {
    if (i) text_ += ',';
    text_ += format(row[i]);
  }
  text_ += '\n';
}

void CsvWriter::add_mixed_row(const std::vector<std::string>& cells) {
  require(cells.size() == columns_, "bad_argument", "csv row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) text_ += ',';
    text_ += cells[i];
  }
  text_ += '\n';
}

void CsvWriter::write(const std::string& path) const {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  require(f.good(), "io_not_found", "cannot open for writing: " + path);
  f << text_;
  f.flush();
  require(f.good(), "io_not_found", "write failed: " + path);
}

CsvTable read_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  require(f.good(), "io_not_found", path);
  CsvTable table;
  std::string line;
  bool first = true;
  while (std::getline(f, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        cells.push_back(line.substr(start));
        break;
      }
      cells.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (first) {
      table.header = std::move(cells);
      first = false;
      continue;
    }
    require(cells.size() == table.header.size(), "bad_argument",
            "csv row width does not match header: " + path);
    std::vector<double> row;
    row.reserve(cells.size());
    for (const std::string& c : cells) {
      char* end = nullptr;
      const double v = std::strtod(c.c_str(), &end);
      require(end != c.c_str() && *end == '\0', "bad_argument",
              "non-numeric csv cell '" + c + "' in " + path);
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  require(!first, "bad_argument", "empty csv: " + path);
  return table;
}

}  // namespace mockq
