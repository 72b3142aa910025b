#include "winprob/date.hpp"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace winprob {

namespace {

int digits(std::string_view s, std::size_t pos, std::size_t len) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data() + pos, s.data() + pos + len, v);
  if (ec != std::errc() || ptr != s.data() + pos + len) throw std::invalid_argument("bad date");
  return v;
}

}  // namespace

Date parse_date(std::string_view s) {
  try {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') throw std::invalid_argument("bad date");
    for (std::size_t i : {0u, 5u, 8u})
      if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("bad date");
    const Date d{std::chrono::year{digits(s, 0, 4)},
                 std::chrono::month{static_cast<unsigned>(digits(s, 5, 2))},
                 std::chrono::day{static_cast<unsigned>(digits(s, 8, 2))}};
    if (!d.ok()) throw std::invalid_argument("bad date");
    return d;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not an ISO-8601 date: '" + std::string(s) + "'");
  }
}

std::string format_date(const Date& d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

Date add_days(const Date& d, int days) {
  return Date{std::chrono::sys_days{d} + std::chrono::days{days}};
}

}  // namespace winprob
