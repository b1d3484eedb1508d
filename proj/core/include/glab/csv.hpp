#pragma once
#include <fstream>
#include <string>
#include <vector>

namespace glab {

// Series files carry a versioned header comment, then a column header,
// then rows. Floats are emitted with 17 significant digits so files are
// reproducible bit for bit.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& cells);
  static std::string num(double v);
  static std::string num(long long v);

 private:
  std::ofstream out_;
  size_t width_;
};

inline constexpr const char* kSeriesFormatTag = "# glab-series v1";

}  // namespace glab
