#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace winprob::csv {

/// Line-oriented CSV reader. Fields may be double-quoted; a doubled quote
/// inside a quoted field is a literal quote. Records never span lines.
class Reader {
 public:
  Reader(std::istream& in, std::string source);

  /// Reads the header row and throws ParseError unless it equals `expected`.
  void expect_header(std::string_view expected);

  /// Next non-empty record, or nullopt at end of stream.
  std::optional<std::vector<std::string>> next();

  std::size_t line() const noexcept { return line_; }
  const std::string& source() const noexcept { return source_; }

  [[noreturn]] void fail(const std::string& what) const;

 private:
  std::istream& in_;
  std::string source_;
  std::size_t line_ = 0;
};

std::vector<std::string> split_record(std::string_view line);

/// Quotes `field` only when it contains a comma, quote, or leading/trailing space.
std::string escape(std::string_view field);

std::int64_t to_int(std::string_view s);
double to_double(std::string_view s);
bool to_bool(std::string_view s);

/// Fixed 17-significant-digit text; reads back to the identical double.
std::string format_double(double v);

}  // namespace winprob::csv
