#include "glab/csv.hpp"

#include <stdexcept>

#include "glab/numerics.hpp"

namespace glab {

CsvWriter::CsvWriter(const std::string& path,
                     const std::vector<std::string>& columns)
    : out_(path, std::ios::binary), width_(columns.size()) {
  if (!out_) throw std::runtime_error("cannot open " + path + " for writing");
  out_ << kSeriesFormatTag << "\n";
  for (size_t i = 0; i < columns.size(); ++i)
    out_ << (i ? "," : "") << columns[i];
  out_ << "\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_)
    throw std::runtime_error("csv row width mismatch");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    const std::string& c = cells[i];
    if (c.find_first_of(",\"\n") == std::string::npos) {
      out_ << c;
      continue;
    }
    out_ << '"';
    for (char ch : c) {
      if (ch == '"') out_ << '"';
      out_ << ch;
    }
    out_ << '"';
  }
  out_ << "\n";
}

std::string CsvWriter::num(double v) { return format_double(v); }

std::string CsvWriter::num(long long v) { return std::to_string(v); }

}  // namespace glab
