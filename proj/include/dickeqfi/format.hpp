#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace dickeqfi {

std::string version();

/// 17 significant digits, round-trips every double; "inf", "-inf", "nan".
std::string format_double(double v);

/// "# dickeqfi <version> generated <UTC timestamp>"
std::string provenance_line();

/// Comma-separated, LF-terminated rows. Fields are written verbatim, so
/// callers must not pass commas inside a field.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void comment(const std::string& text);
  void header(const std::vector<std::string>& columns);
  void row(const std::vector<std::string>& fields);
  void row(std::initializer_list<double> values);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
};

}  // namespace dickeqfi
