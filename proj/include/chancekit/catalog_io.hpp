#ifndef CHANCEKIT_CATALOG_IO_HPP
#define CHANCEKIT_CATALOG_IO_HPP

#include <charconv>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "chancekit/core.hpp"

namespace chancekit {

struct SeismicEvent {
  Tick t = 0;
  double lat = 0;  // degrees, [-90, 90]
  double lon = 0;  // degrees, [-180, 180]
  std::optional<double> mag;

  friend bool operator==(const SeismicEvent&, const SeismicEvent&) = default;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string field = line.substr(
        start, comma == std::string::npos ? std::string::npos : comma - start);
    const auto first = field.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
      field.clear();
    } else {
      const auto last = field.find_last_not_of(" \t\r");
      field = field.substr(first, last - first + 1);
    }
    fields.push_back(std::move(field));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline std::optional<double> parse_double_field(const std::string& s) {
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

}  // namespace detail

// Header must be exactly `t,lat,lon` or `t,lat,lon,mag`. t is integer
// ticks or an ISO-8601 instant. With the mag column present individual
// rows may leave it empty. Events are returned in file order; row
// numbers in errors are 1-based over the data rows.
inline std::vector<SeismicEvent> parse_catalog_csv(std::istream& in) {
  std::vector<SeismicEvent> events;
  std::string line;
  if (!std::getline(in, line))
    throw ParseError("empty catalog: expected header t,lat,lon[,mag]");
  const auto header = detail::split_csv_line(line);
  const bool has_mag = header.size() == 4 && header[3] == "mag";
  if (!(header.size() == 3 || has_mag) || header[0] != "t" ||
      header[1] != "lat" || header[2] != "lon")
    throw ParseError("invalid header: expected t,lat,lon[,mag]");

  long long row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != header.size())
      throw ParseError("row " + std::to_string(row) + ": expected " +
                       std::to_string(header.size()) + " fields, got " +
                       std::to_string(fields.size()));

    SeismicEvent event;
    const auto t = parse_timestamp(fields[0]);
    if (!t)
      throw ParseError("row " + std::to_string(row) +
                       ": invalid timestamp \"" + fields[0] + "\"");
    event.t = *t;

    const auto lat = detail::parse_double_field(fields[1]);
    if (!lat)
      throw ParseError("row " + std::to_string(row) + ": invalid latitude \"" +
                       fields[1] + "\"");
    if (*lat < -90.0 || *lat > 90.0)
      throw ParseError("row " + std::to_string(row) +
                       ": latitude out of range: " + fields[1]);
    event.lat = *lat;

    const auto lon = detail::parse_double_field(fields[2]);
    if (!lon)
      throw ParseError("row " + std::to_string(row) +
                       ": invalid longitude \"" + fields[2] + "\"");
    if (*lon < -180.0 || *lon > 180.0)
      throw ParseError("row " + std::to_string(row) +
                       ": longitude out of range: " + fields[2]);
    event.lon = *lon;

    if (has_mag && !fields[3].empty()) {
      const auto mag = detail::parse_double_field(fields[3]);
      if (!mag)
        throw ParseError("row " + std::to_string(row) +
                         ": invalid magnitude \"" + fields[3] + "\"");
      event.mag = *mag;
    }
    events.push_back(event);
  }
  return events;
}

}  // namespace chancekit

#endif  // CHANCEKIT_CATALOG_IO_HPP
