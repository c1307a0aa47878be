#pragma once

#include <charconv>
#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace linkclimate {

using Date = std::chrono::year_month_day;

// Parses exactly "YYYY-MM-DD"; rejects impossible calendar dates.
inline std::optional<Date> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto digits = [&](std::size_t pos, std::size_t len, int& out) {
    for (std::size_t i = pos; i < pos + len; ++i)
      if (text[i] < '0' || text[i] > '9') return false;
    auto [p, ec] = std::from_chars(text.data() + pos, text.data() + pos + len, out);
    return ec == std::errc{} && p == text.data() + pos + len;
  };
  int y = 0, m = 0, d = 0;
  if (!digits(0, 4, y) || !digits(5, 2, m) || !digits(8, 2, d)) return std::nullopt;
  Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
            std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

inline std::string format_date(const Date& date) {
  char buf[16];
  int y = static_cast<int>(date.year());
  unsigned m = static_cast<unsigned>(date.month());
  unsigned d = static_cast<unsigned>(date.day());
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", y, m, d);
  return buf;
}

inline Date add_days(const Date& date, int days) {
  return Date{std::chrono::sys_days{date} + std::chrono::days{days}};
}

inline Date date_of(std::chrono::system_clock::time_point tp) {
  return Date{std::chrono::floor<std::chrono::days>(tp)};
}

// UTC "YYYY-MM-DDTHH:MM:SSZ".
inline std::string format_timestamp(std::chrono::system_clock::time_point tp) {
  using namespace std::chrono;
  auto day = floor<days>(tp);
  hh_mm_ss<seconds> hms{floor<seconds>(tp - day)};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%sT%02d:%02d:%02dZ", format_date(Date{day}).c_str(),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

}  // namespace linkclimate
