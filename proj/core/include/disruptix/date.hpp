#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace disruptix {

// Calendar date at day precision. Used when a corpus carries full
// publication dates; year-only corpora store a bare integer instead.
struct Date {
  std::int32_t year = 0;
  std::int32_t month = 1;  // 1..12
  std::int32_t day = 1;    // 1..days_in_month

  auto operator<=>(const Date&) const = default;

  // Same month/day in year+n; Feb 29 maps to Feb 28 when the target
  // year is not a leap year.
  Date plus_years(std::int32_t n) const;

  std::string to_string() const;  // ISO-8601, zero padded
};

bool is_leap_year(std::int32_t year);
int days_in_month(std::int32_t year, std::int32_t month);
bool is_valid_date(std::int32_t year, std::int32_t month, std::int32_t day);

// Strict ISO-8601 "YYYY-MM-DD". Returns false on malformed or
// non-existent calendar dates.
bool parse_date(std::string_view text, Date& out);

// Bare integer year, optionally negative. Returns false on anything else.
bool parse_year(std::string_view text, std::int32_t& out);

// Publication date resolution of a graph. Every node in one graph uses
// the same kind.
enum class DateKind { FullDate, YearOnly };

}  // namespace disruptix
