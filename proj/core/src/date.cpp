#include "disruptix/date.hpp"

#include <charconv>
#include <cstdio>

namespace disruptix {

bool is_leap_year(std::int32_t year) {
  return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(std::int32_t year, std::int32_t month) {
  static const int table[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  if (month < 1 || month > 12) return 0;
  if (month == 2 && is_leap_year(year)) return 29;
  return table[month - 1];
}

bool is_valid_date(std::int32_t year, std::int32_t month, std::int32_t day) {
  return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

Date Date::plus_years(std::int32_t n) const {
  Date d{year + n, month, day};
  if (d.month == 2 && d.day == 29 && !is_leap_year(d.year)) d.day = 28;
  return d;
}

std::string Date::to_string() const {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
  return buf;
}

namespace {

bool parse_int_field(std::string_view s, std::int32_t& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size();
}

}  // namespace

bool parse_date(std::string_view text, Date& out) {
  // Fixed layout YYYY-MM-DD (4-2-2); longer years are not expected in
  // bibliographic dumps.
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return false;
  std::int32_t y, m, d;
  if (!parse_int_field(text.substr(0, 4), y)) return false;
  if (!parse_int_field(text.substr(5, 2), m)) return false;
  if (!parse_int_field(text.substr(8, 2), d)) return false;
  if (!is_valid_date(y, m, d)) return false;
  out = Date{y, m, d};
  return true;
}

bool parse_year(std::string_view text, std::int32_t& out) {
  return parse_int_field(text, out);
}

}  // namespace disruptix
