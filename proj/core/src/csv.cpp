#include "fracmem/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace fracmem {

std::string format_number(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  if (std::isinf(value)) {
    return value > 0 ? "inf" : "-inf";
  }
  if (value == 0.0) {
    return "0"; // folds -0 as well
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string_view> columns)
    : out_(out), columns_(columns.size()) {
  bool first = true;
  for (auto c : columns) {
    if (!first) {
      out_ << ',';
    }
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::separator() {
  if (filled_ >= columns_) {
    throw std::logic_error("CsvWriter: too many fields in row");
  }
  if (filled_ > 0) {
    out_ << ',';
  }
  ++filled_;
}

CsvWriter& CsvWriter::field(double value) {
  separator();
  out_ << format_number(value);
  return *this;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  out_ << text;
  return *this;
}

CsvWriter& CsvWriter::field(int value) {
  separator();
  out_ << value;
  return *this;
}

CsvWriter& CsvWriter::field(bool value) { return field(value ? 1 : 0); }

void CsvWriter::end_row() {
  if (filled_ != columns_) {
    throw std::logic_error("CsvWriter: row has " + std::to_string(filled_) + " fields, expected " +
                           std::to_string(columns_));
  }
  out_ << '\n';
  filled_ = 0;
}

} // namespace fracmem
