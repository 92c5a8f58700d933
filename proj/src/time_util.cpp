#include "vigil/time_util.hpp"

#include <array>
#include <cctype>
#include <cstdio>

namespace vigil {

namespace {

// Days since 1970-01-01 for a civil date (proleptic Gregorian).
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const unsigned doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  d = doy - (153 * mp + 2) / 5 + 1;
  m = mp + (mp < 10 ? 3 : -9);
  y += m <= 2;
}

bool read_digits(const std::string& s, size_t pos, size_t count, int& out) {
  if (pos + count > s.size()) return false;
  int v = 0;
  for (size_t i = 0; i < count; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace

std::optional<Instant> parse_rfc3339(const std::string& text) {
  int year, month, day, hour, minute, second;
  if (!read_digits(text, 0, 4, year)) return std::nullopt;
  if (text.size() < 20 || text[4] != '-' || text[7] != '-') return std::nullopt;
  if (!read_digits(text, 5, 2, month) || !read_digits(text, 8, 2, day))
    return std::nullopt;
  char sep = text[10];
  if (sep != 'T' && sep != 't' && sep != ' ') return std::nullopt;
  if (!read_digits(text, 11, 2, hour) || text[13] != ':' ||
      !read_digits(text, 14, 2, minute) || text[16] != ':' ||
      !read_digits(text, 17, 2, second))
    return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 ||
      minute > 59 || second > 60)
    return std::nullopt;

  size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    size_t frac_start = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
      ++pos;
    if (pos == frac_start) return std::nullopt;
  }
  if (pos >= text.size()) return std::nullopt;

  std::int64_t offset_sec = 0;
  char c = text[pos];
  if (c == 'Z' || c == 'z') {
    if (pos + 1 != text.size()) return std::nullopt;
  } else if (c == '+' || c == '-') {
    int oh, om;
    if (!read_digits(text, pos + 1, 2, oh)) return std::nullopt;
    if (pos + 3 >= text.size() || text[pos + 3] != ':') return std::nullopt;
    if (!read_digits(text, pos + 4, 2, om)) return std::nullopt;
    if (pos + 6 != text.size()) return std::nullopt;
    offset_sec = (oh * 3600 + om * 60) * (c == '-' ? -1 : 1);
  } else {
    return std::nullopt;
  }

  std::int64_t days = days_from_civil(year, static_cast<unsigned>(month),
                                      static_cast<unsigned>(day));
  return days * 86400 + hour * 3600 + minute * 60 + second - offset_sec;
}

std::string format_rfc3339(Instant t) {
  std::int64_t days = t / 86400;
  std::int64_t rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    days -= 1;
  }
  std::int64_t y;
  unsigned m, d;
  civil_from_days(days, y, m, d);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                static_cast<long long>(y), m, d,
                static_cast<long long>(rem / 3600),
                static_cast<long long>((rem / 60) % 60),
                static_cast<long long>(rem % 60));
  return buf;
}

int hour_of_day(Instant t, int tz_offset_minutes) {
  std::int64_t shifted = t + static_cast<std::int64_t>(tz_offset_minutes) * 60;
  std::int64_t sec = ((shifted % 86400) + 86400) % 86400;
  return static_cast<int>(sec / 3600);
}

}  // namespace vigil
