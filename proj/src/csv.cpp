#include "sbf/csv.hpp"

#include <cstdio>

namespace sbf {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvCell::CsvCell(double x) : text(fmt17(x)) {}

void CsvWriter::row(const std::vector<CsvCell>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    os_ << cells[i].text;
  }
  os_ << '\n';
}

}  // namespace sbf
