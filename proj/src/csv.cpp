#include "modw/csv.hpp"

#include <cstdio>

#include "modw/errors.hpp"

namespace modw {

std::string format_number(double v)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : path_(path), out_(path), columns_(header.size())
{
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values)
{
  if (values.size() != columns_) throw std::logic_error(path_ + ": row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << format_number(values[i]);
  out_ << '\n';
}

void CsvWriter::row(const std::string& label, const std::vector<double>& values)
{
  if (values.size() + 1 != columns_) throw std::logic_error(path_ + ": row width does not match the header");
  out_ << label;
  for (double v : values) out_ << ',' << format_number(v);
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values, const std::string& label)
{
  if (values.size() + 1 != columns_) throw std::logic_error(path_ + ": row width does not match the header");
  for (double v : values) out_ << format_number(v) << ',';
  out_ << label << '\n';
}

}  // namespace modw
