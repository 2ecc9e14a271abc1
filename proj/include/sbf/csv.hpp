#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace sbf {

/// Decimal with up to 17 significant digits; round-trips every double.
std::string fmt17(double x);

/// A cell is either preformatted text or a number rendered via fmt17.
struct CsvCell {
  std::string text;
  CsvCell(const char* s) : text(s) {}
  CsvCell(const std::string& s) : text(s) {}
  CsvCell(double x);
  CsvCell(int x) : text(std::to_string(x)) {}
  CsvCell(long x) : text(std::to_string(x)) {}
  CsvCell(std::uint64_t x) : text(std::to_string(x)) {}
};

/// Header plus rows; byte-stable output for identical inputs.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& os) : os_(os) {}
  void row(const std::vector<CsvCell>& cells);

 private:
  std::ostream& os_;
};

}  // namespace sbf
