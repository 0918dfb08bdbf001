#ifndef CHANCEKIT_BASKET_IO_HPP
#define CHANCEKIT_BASKET_IO_HPP

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "chancekit/core.hpp"

namespace chancekit {

namespace detail {

inline bool has_whitespace(const std::string& s) {
  return s.find_first_of(" \t\r\n") != std::string::npos;
}

}  // namespace detail

// One JSON object per line: {"t": <integer or ISO-8601 string>,
// "items": [<non-empty string>, ...]}. Repeated items carry multiplicity.
// Whitespace-only lines are skipped. The result is stably sorted by t,
// so equal-t lines keep file order.
inline EventStream parse_basket_jsonl(std::istream& in) {
  EventStream stream;
  std::string line;
  long long line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError("malformed line " + std::to_string(line_no) + ": " +
                       e.what());
    }
    if (!obj.is_object())
      throw ParseError("malformed line " + std::to_string(line_no) +
                       ": not a JSON object");

    Event event;
    if (!obj.contains("t"))
      throw ParseError("malformed line " + std::to_string(line_no) +
                       ": missing \"t\"");
    const auto& t = obj["t"];
    if (t.is_number_integer()) {
      event.t = t.get<Tick>();
    } else if (t.is_string()) {
      const auto parsed = parse_timestamp(t.get<std::string>());
      if (!parsed)
        throw ParseError("malformed line " + std::to_string(line_no) +
                         ": invalid timestamp \"" + t.get<std::string>() +
                         "\"");
      event.t = *parsed;
    } else {
      throw ParseError("malformed line " + std::to_string(line_no) +
                       ": \"t\" must be an integer or ISO-8601 string");
    }

    if (!obj.contains("items") || !obj["items"].is_array())
      throw ParseError("malformed line " + std::to_string(line_no) +
                       ": missing \"items\" array");
    if (obj["items"].empty())
      throw ParseError("empty basket at line " + std::to_string(line_no));
    for (const auto& it : obj["items"]) {
      if (!it.is_string())
        throw ParseError("malformed line " + std::to_string(line_no) +
                         ": items must be strings");
      const auto id = it.get<std::string>();
      if (id.empty() || detail::has_whitespace(id))
        throw ParseError("malformed line " + std::to_string(line_no) +
                         ": invalid item \"" + id + "\"");
      event.items[id] += 1;
    }
    stream.push_back(std::move(event));
  }
  std::stable_sort(stream.begin(), stream.end(),
                   [](const Event& a, const Event& b) { return a.t < b.t; });
  return stream;
}

// Inverse of parse_basket_jsonl up to item order: items are written
// sorted, repeated per multiplicity, t as integer ticks. Re-parsing the
// output yields an identical stream.
inline void write_basket_jsonl(const EventStream& stream, std::ostream& out) {
  for (const auto& event : stream) {
    nlohmann::json items = nlohmann::json::array();
    for (const auto& [id, count] : event.items)
      for (int i = 0; i < count; ++i) items.push_back(id);
    nlohmann::json obj;
    obj["t"] = event.t;
    obj["items"] = std::move(items);
    out << obj.dump() << '\n';
  }
}

}  // namespace chancekit

#endif  // CHANCEKIT_BASKET_IO_HPP
