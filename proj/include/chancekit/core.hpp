#ifndef CHANCEKIT_CORE_HPP
#define CHANCEKIT_CORE_HPP

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chancekit {

// Items compare by exact identity. Producers guarantee non-empty ids
// with no whitespace.
using Item = std::string;

// Unitless ordering ticks. ISO-8601 instants are normalized to seconds
// since the Unix epoch at parse time.
using Tick = std::int64_t;

// One observation: a timestamped multiset of items. Text sentences,
// purchase baskets and gridded epicenters all reduce to this shape.
struct Event {
  Tick t = 0;
  std::map<Item, int> items;  // item -> multiplicity, every count >= 1

  friend bool operator==(const Event&, const Event&) = default;
};

// Ordered list of events, non-decreasing in t. May be empty.
using EventStream = std::vector<Event>;

inline bool is_sorted_by_time(const EventStream& stream) {
  for (std::size_t i = 1; i < stream.size(); ++i)
    if (stream[i - 1].t > stream[i].t) return false;
  return true;
}

// Raised by the input parsers; the message names the offending line/row.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

// Days since 1970-01-01 of a proleptic Gregorian date.
inline std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline bool parse_fixed_uint(std::string_view s, std::size_t pos,
                             std::size_t len, int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    const char c = s[i];
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  out = v;
  return true;
}

}  // namespace detail

// Accepts integer ticks ("42", "-7") or an ISO-8601 instant:
// "YYYY-MM-DD", optionally "Thh:mm:ss" and a "Z" / "+hh:mm" / "-hh:mm"
// offset. Instants map to Unix seconds. Returns nullopt on anything else.
inline std::optional<Tick> parse_timestamp(std::string_view s) {
  if (s.empty()) return std::nullopt;

  const std::size_t digits_from = (s[0] == '+' || s[0] == '-') ? 1 : 0;
  if (digits_from < s.size() &&
      std::all_of(s.begin() + digits_from, s.end(),
                  [](char c) { return c >= '0' && c <= '9'; })) {
    Tick value = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
      return std::nullopt;
    return value;
  }

  int year = 0, month = 0, day = 0;
  if (!detail::parse_fixed_uint(s, 0, 4, year) || s.size() < 10 ||
      s[4] != '-' || s[7] != '-' ||
      !detail::parse_fixed_uint(s, 5, 2, month) ||
      !detail::parse_fixed_uint(s, 8, 2, day))
    return std::nullopt;
  if (month < 1 || month > 12 || day < 1 || day > 31) return std::nullopt;

  int hh = 0, mm = 0, ss = 0;
  std::size_t pos = 10;
  if (pos < s.size() && (s[pos] == 'T' || s[pos] == 't')) {
    if (!detail::parse_fixed_uint(s, pos + 1, 2, hh) || pos + 3 >= s.size() ||
        s[pos + 3] != ':' || !detail::parse_fixed_uint(s, pos + 4, 2, mm) ||
        pos + 6 >= s.size() || s[pos + 6] != ':' ||
        !detail::parse_fixed_uint(s, pos + 7, 2, ss))
      return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
    pos += 9;
  }

  std::int64_t offset_sec = 0;
  if (pos < s.size()) {
    const char c = s[pos];
    if (c == 'Z' || c == 'z') {
      pos += 1;
    } else if (c == '+' || c == '-') {
      int oh = 0, om = 0;
      if (!detail::parse_fixed_uint(s, pos + 1, 2, oh) ||
          pos + 3 >= s.size() || s[pos + 3] != ':' ||
          !detail::parse_fixed_uint(s, pos + 4, 2, om))
        return std::nullopt;
      offset_sec = (oh * 3600LL + om * 60LL) * (c == '+' ? 1 : -1);
      pos += 6;
    }
  }
  if (pos != s.size()) return std::nullopt;

  const std::int64_t days = detail::days_from_civil(
      year, static_cast<unsigned>(month), static_cast<unsigned>(day));
  return days * 86400 + hh * 3600 + mm * 60 + ss - offset_sec;
}

}  // namespace chancekit

#endif  // CHANCEKIT_CORE_HPP
