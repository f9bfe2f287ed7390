#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gai {

class CsvError : public std::runtime_error {
 public:
  CsvError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Minimal RFC 4180 reader: quoted fields, doubled quotes, LF or CRLF.
class CsvReader {
 public:
  explicit CsvReader(std::istream& in) : in_(in) {}

  // Next record, or nullopt at end of input. Blank lines are skipped.
  std::optional<std::vector<std::string>> next();
  // Line number (1-based) where the last returned record started.
  std::size_t line() const { return record_line_; }

 private:
  std::istream& in_;
  std::size_t line_ = 0;
  std::size_t record_line_ = 0;
};

/// Position of the column called `name`, or nullopt.
std::optional<std::size_t> column_index(const std::vector<std::string>& header,
                                        std::string_view name);

double parse_double(std::string_view field, std::size_t line, std::string_view column);

/// "%.9g"; non-finite values print as NA.
std::string format_double(double v);

class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view s);
  CsvWriter& field(double v);
  CsvWriter& field(long long v);
  CsvWriter& field(unsigned long long v);
  CsvWriter& field(int v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(long v) { return field(static_cast<long long>(v)); }
  CsvWriter& field(unsigned long v) { return field(static_cast<unsigned long long>(v)); }
  CsvWriter& field(unsigned v) { return field(static_cast<unsigned long long>(v)); }
  CsvWriter& field(const char* s) { return field(std::string_view(s)); }
  CsvWriter& field(const std::string& s) { return field(std::string_view(s)); }
  CsvWriter& na();
  void end_row();

  void row(std::initializer_list<std::string_view> fields);

 private:
  void separator();

  std::ostream& out_;
  bool fresh_ = true;
};

}  // namespace gai
