#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

namespace modw {

/// Comma-separated table with a header row; numbers written with 17 significant
/// digits so reruns are byte-identical.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  void row(std::initializer_list<double> values) { row(std::vector<double>(values)); }
  /// Row whose first column is text.
  void row(const std::string& label, const std::vector<double>& values);
  /// Row whose last column is text.
  void row(const std::vector<double>& values, const std::string& label);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_;
};

std::string format_number(double v);

}  // namespace modw
