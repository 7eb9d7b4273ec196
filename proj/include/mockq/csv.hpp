#pragma once
#include <string>
#include <vector>

namespace mockq {

// Writes comma-separated rows with LF line endings; numbers at 17 significant
// digits so reruns are byte-comparable.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);
  void add_row(const std::vector<double>& row);
  void add_mixed_row(const std::vector<std::string>& cells);
  const std::string& text() const { return text_; }
  void write(const std::string& path) const;

  static std::string format(double v);

 private:
  std::size_t columns_;
  std::string text_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

CsvTable read_csv(const std::string& path);

}  // namespace mockq
