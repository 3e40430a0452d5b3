#ifndef OA_DATETIME_HPP
#define OA_DATETIME_HPP

#include <array>
#include <charconv>
#include <chrono>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "oa/errors.hpp"

namespace oa {

/// A UTC instant with second precision.
///
/// Every datetime the toolkit stores or emits goes through this type, so the
/// canonical lexical form is always `YYYY-MM-DDTHH:MM:SSZ`.
class DateTime {
public:
  using clock_seconds = std::chrono::sys_seconds;

  constexpr DateTime() = default;
  constexpr explicit DateTime(clock_seconds tp) : tp_(tp) {}

  static DateTime from_unix(std::int64_t seconds) {
    return DateTime(clock_seconds(std::chrono::seconds(seconds)));
  }

  static DateTime from_civil(int y, unsigned mo, unsigned d, unsigned h = 0, unsigned mi = 0,
                             unsigned s = 0) {
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{mo}, day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
      throw InvalidDateTime("calendar fields out of range");
    }
    return DateTime(sys_days{ymd} + hours{h} + minutes{mi} + seconds{s});
  }

  // Accepts `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)`; fractions are
  // truncated and offsets folded into UTC.
  static DateTime parse_iso8601(std::string_view text);

  // Accepts the IMF-fixdate form used by HTTP, e.g. `Tue, 03 May 2011 10:00:00 GMT`.
  static DateTime parse_rfc1123(std::string_view text);

  std::string iso8601() const;
  std::string rfc1123() const;

  constexpr std::int64_t unix_seconds() const { return tp_.time_since_epoch().count(); }
  constexpr clock_seconds time_point() const { return tp_; }

  friend constexpr auto operator<=>(const DateTime&, const DateTime&) = default;

private:
  clock_seconds tp_{};
};

namespace detail {

inline bool read_uint(std::string_view text, std::size_t pos, std::size_t width, unsigned& out) {
  if (pos + width > text.size()) return false;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (text[i] < '0' || text[i] > '9') return false;
  }
  auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + pos + width, out);
  return ec == std::errc{} && ptr == text.data() + pos + width;
}

inline void put_padded(std::string& out, long long value, int width) {
  std::string digits = std::to_string(value < 0 ? -value : value);
  if (value < 0) out.push_back('-');
  for (int i = static_cast<int>(digits.size()); i < width; ++i) out.push_back('0');
  out += digits;
}

inline constexpr std::array<std::string_view, 7> kWeekdays{"Sun", "Mon", "Tue", "Wed",
                                                           "Thu", "Fri", "Sat"};
inline constexpr std::array<std::string_view, 12> kMonths{
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

}  // namespace detail

inline DateTime DateTime::parse_iso8601(std::string_view text) {
  auto fail = [&]() -> DateTime {
    throw InvalidDateTime("not an ISO-8601 UTC datetime: '" + std::string(text) + "'");
  };
  unsigned y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  if (text.size() < 20) return fail();
  if (!detail::read_uint(text, 0, 4, y) || text[4] != '-' || !detail::read_uint(text, 5, 2, mo) ||
      text[7] != '-' || !detail::read_uint(text, 8, 2, d) || text[10] != 'T' ||
      !detail::read_uint(text, 11, 2, h) || text[13] != ':' ||
      !detail::read_uint(text, 14, 2, mi) || text[16] != ':' ||
      !detail::read_uint(text, 17, 2, s)) {
    return fail();
  }
  std::size_t pos = 19;
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    const std::size_t digits_start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') ++pos;
    if (pos == digits_start) return fail();
  }
  long offset_seconds = 0;
  if (pos < text.size() && text[pos] == 'Z') {
    ++pos;
  } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    const int sign = text[pos] == '+' ? 1 : -1;
    unsigned oh = 0, om = 0;
    if (!detail::read_uint(text, pos + 1, 2, oh) || pos + 3 >= text.size() ||
        text[pos + 3] != ':' || !detail::read_uint(text, pos + 4, 2, om) || oh > 23 || om > 59) {
      return fail();
    }
    offset_seconds = sign * static_cast<long>(oh * 3600 + om * 60);
    pos += 6;
  } else {
    return fail();
  }
  if (pos != text.size()) return fail();
  DateTime local;
  try {
    local = from_civil(static_cast<int>(y), mo, d, h, mi, s);
  } catch (const InvalidDateTime&) {
    return fail();
  }
  return DateTime(local.tp_ - std::chrono::seconds(offset_seconds));
}

inline DateTime DateTime::parse_rfc1123(std::string_view text) {
  auto fail = [&]() -> DateTime {
    throw InvalidDateTime("not an RFC 1123 date: '" + std::string(text) + "'");
  };
  // "Tue, 03 May 2011 10:00:00 GMT" is exactly 29 characters.
  if (text.size() != 29 || text.substr(3, 2) != ", " || text[7] != ' ' || text[11] != ' ' ||
      text[16] != ' ' || text[19] != ':' || text[22] != ':' || text.substr(25) != " GMT") {
    return fail();
  }
  bool weekday_ok = false;
  for (auto wd : detail::kWeekdays) weekday_ok = weekday_ok || text.substr(0, 3) == wd;
  unsigned month = 0;
  for (unsigned i = 0; i < detail::kMonths.size(); ++i) {
    if (text.substr(8, 3) == detail::kMonths[i]) month = i + 1;
  }
  unsigned y = 0, d = 0, h = 0, mi = 0, s = 0;
  if (!weekday_ok || month == 0 || !detail::read_uint(text, 5, 2, d) ||
      !detail::read_uint(text, 12, 4, y) || !detail::read_uint(text, 17, 2, h) ||
      !detail::read_uint(text, 20, 2, mi) || !detail::read_uint(text, 23, 2, s)) {
    return fail();
  }
  try {
    return from_civil(static_cast<int>(y), month, d, h, mi, s);
  } catch (const InvalidDateTime&) {
    return fail();
  }
}

inline std::string DateTime::iso8601() const {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(tp_);
  const year_month_day ymd{days};
  const hh_mm_ss hms{tp_ - days};
  std::string out;
  out.reserve(20);
  detail::put_padded(out, static_cast<int>(ymd.year()), 4);
  out.push_back('-');
  detail::put_padded(out, static_cast<unsigned>(ymd.month()), 2);
  out.push_back('-');
  detail::put_padded(out, static_cast<unsigned>(ymd.day()), 2);
  out.push_back('T');
  detail::put_padded(out, hms.hours().count(), 2);
  out.push_back(':');
  detail::put_padded(out, hms.minutes().count(), 2);
  out.push_back(':');
  detail::put_padded(out, hms.seconds().count(), 2);
  out.push_back('Z');
  return out;
}

inline std::string DateTime::rfc1123() const {
  using namespace std::chrono;
  const auto days = floor<std::chrono::days>(tp_);
  const year_month_day ymd{days};
  const weekday wd{days};
  const hh_mm_ss hms{tp_ - days};
  std::string out(detail::kWeekdays[wd.c_encoding()]);
  out += ", ";
  detail::put_padded(out, static_cast<unsigned>(ymd.day()), 2);
  out.push_back(' ');
  out += detail::kMonths[static_cast<unsigned>(ymd.month()) - 1];
  out.push_back(' ');
  detail::put_padded(out, static_cast<int>(ymd.year()), 4);
  out.push_back(' ');
  detail::put_padded(out, hms.hours().count(), 2);
  out.push_back(':');
  detail::put_padded(out, hms.minutes().count(), 2);
  out.push_back(':');
  detail::put_padded(out, hms.seconds().count(), 2);
  out += " GMT";
  return out;
}

}  // namespace oa

#endif  // OA_DATETIME_HPP
