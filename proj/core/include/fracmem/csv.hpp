#pragma once

#include <initializer_list>
#include <iosfwd>
#include <string>
#include <string_view>

namespace fracmem {

/// Fixed 12-significant-digit rendering used by every CSV and report, so
/// reruns are byte-identical.
std::string format_number(double value);

/// Minimal CSV emitter: one header line, then rows in the header's order.
class CsvWriter {
public:
  CsvWriter(std::ostream& out, std::initializer_list<std::string_view> columns);

  CsvWriter& field(double value);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(int value);
  CsvWriter& field(bool value);
  CsvWriter& field(const char* text) { return field(std::string_view(text)); }
  void end_row();

private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

} // namespace fracmem
