#pragma once

// Query syntax tree: a flat chain of include/exclude clauses joined by AND/OR,
// plus the canonical JSON codec. AND binds tighter than OR.

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "stsq/core_model.hpp"

namespace stsq {

struct NameIs {
  std::string value;
  friend bool operator==(const NameIs&, const NameIs&) = default;
};

struct WithinKm {
  WithinKm(GeoPoint centre_, double radius_km_) : centre(centre_), radius_km(radius_km_) {
    if (!(radius_km > 0.0) || !std::isfinite(radius_km))
      throw InvalidValue("radius must be a positive finite number of kilometres");
  }
  GeoPoint centre;
  double radius_km;
  friend bool operator==(const WithinKm&, const WithinKm&) = default;
};

struct ActiveDuring {
  HoursOfOperation interval;
  friend bool operator==(const ActiveDuring&, const ActiveDuring&) = default;
};

struct BandOverlaps {
  FrequencyBand band;
  friend bool operator==(const BandOverlaps&, const BandOverlaps&) = default;
};

using Predicate = std::variant<NameIs, WithinKm, ActiveDuring, BandOverlaps>;

struct Clause {
  bool include = true;
  Predicate predicate;
  friend bool operator==(const Clause&, const Clause&) = default;
};

enum class Connector { And, Or };

class Query {
public:
  Query(std::vector<Clause> clauses, std::vector<Connector> connectors)
      : clauses_(std::move(clauses)), connectors_(std::move(connectors)) {
    if (clauses_.empty())
      throw InvalidValue("query needs at least one clause");
    if (connectors_.size() != clauses_.size() - 1)
      throw InvalidValue("query needs exactly one connector between consecutive clauses");
  }
  explicit Query(Clause single) : Query(std::vector<Clause>{std::move(single)}, {}) {}

  const std::vector<Clause>& clauses() const noexcept { return clauses_; }
  const std::vector<Connector>& connectors() const noexcept { return connectors_; }

  friend bool operator==(const Query&, const Query&) = default;

private:
  std::vector<Clause> clauses_;
  std::vector<Connector> connectors_;
};

/// OR of AND-groups.
using NormalForm = std::vector<std::vector<Clause>>;

inline NormalForm normalize(const Query& q) {
  NormalForm groups{{q.clauses().front()}};
  for (std::size_t i = 1; i < q.clauses().size(); ++i) {
    if (q.connectors()[i - 1] == Connector::Or)
      groups.emplace_back();
    groups.back().push_back(q.clauses()[i]);
  }
  return groups;
}

// ---------------------------------------------------------------------------
// JSON codec

using Json = nlohmann::ordered_json;

inline Json predicate_to_json(const Predicate& p) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        Json j;
        if constexpr (std::is_same_v<T, NameIs>) {
          j["type"] = "name";
          j["value"] = v.value;
        } else if constexpr (std::is_same_v<T, WithinKm>) {
          j["type"] = "within";
          j["lat"] = v.centre.lat();
          j["lon"] = v.centre.lon();
          j["radius_km"] = v.radius_km;
        } else if constexpr (std::is_same_v<T, ActiveDuring>) {
          j["type"] = "active";
          j["from_min"] = v.interval.from();
          j["to_min"] = v.interval.to();
        } else {
          j["type"] = "band";
          j["low_hz"] = v.band.low_hz();
          j["high_hz"] = v.band.high_hz();
        }
        return j;
      },
      p);
}

inline Json query_to_json_value(const Query& q) {
  Json j;
  j["clauses"] = Json::array();
  for (const auto& c : q.clauses())
    j["clauses"].push_back(Json{{"include", c.include}, {"predicate", predicate_to_json(c.predicate)}});
  j["connectors"] = Json::array();
  for (auto c : q.connectors())
    j["connectors"].push_back(c == Connector::And ? "and" : "or");
  return j;
}

inline std::string query_to_json(const Query& q) { return query_to_json_value(q).dump(); }

namespace detail {

inline const Json& require(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw SchemaViolation(path + "." + key, "missing field");
  return *it;
}

inline void only_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys)
      known = known || it.key() == k;
    if (!known)
      throw SchemaViolation(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
  }
}

inline double json_number(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_number())
    throw SchemaViolation(path + "." + key, "expected a number");
  return v.get<double>();
}

inline std::int64_t json_integer(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (v.is_number_unsigned()) {
    auto u = v.get<std::uint64_t>();
    if (u > static_cast<std::uint64_t>(INT64_MAX))
      throw SchemaViolation(path + "." + key, "integer out of range");
    return static_cast<std::int64_t>(u);
  }
  if (!v.is_number_integer())
    throw SchemaViolation(path + "." + key, "expected an integer");
  return v.get<std::int64_t>();
}

inline int json_minutes(const Json& obj, const char* key, const std::string& path) {
  auto v = json_integer(obj, key, path);
  if (v < 0 || v > kMinutesPerDay)
    throw SchemaViolation(path + "." + key, "minutes out of range [0, 1440]");
  return static_cast<int>(v);
}

inline HoursOfOperation json_hours(const Json& obj, const std::string& path) {
  int from = json_minutes(obj, "from_min", path);
  int to = json_minutes(obj, "to_min", path);
  try {
    return {from, to};
  } catch (const InvalidValue& e) {
    throw SchemaViolation(path, e.what());
  }
}

inline FrequencyBand json_band(const Json& obj, const std::string& path) {
  auto low = json_integer(obj, "low_hz", path);
  auto high = json_integer(obj, "high_hz", path);
  try {
    return {low, high};
  } catch (const InvalidValue& e) {
    throw SchemaViolation(path, e.what());
  }
}

inline GeoPoint json_point(const Json& obj, const std::string& path) {
  double lat = json_number(obj, "lat", path);
  double lon = json_number(obj, "lon", path);
  try {
    return {lat, lon};
  } catch (const InvalidValue& e) {
    throw SchemaViolation(path, e.what());
  }
}

inline Predicate predicate_from_json(const Json& j, const std::string& path) {
  if (!j.is_object())
    throw SchemaViolation(path, "expected an object");
  const Json& type = require(j, "type", path);
  if (!type.is_string())
    throw SchemaViolation(path + ".type", "expected a string");
  const auto& t = type.get_ref<const std::string&>();
  if (t == "name") {
    only_keys(j, {"type", "value"}, path);
    const Json& v = require(j, "value", path);
    if (!v.is_string())
      throw SchemaViolation(path + ".value", "expected a string");
    return NameIs{v.get<std::string>()};
  }
  if (t == "within") {
    only_keys(j, {"type", "lat", "lon", "radius_km"}, path);
    GeoPoint centre = json_point(j, path);
    double radius = json_number(j, "radius_km", path);
    if (!(radius > 0.0) || !std::isfinite(radius))
      throw SchemaViolation(path + ".radius_km", "radius must be positive");
    return WithinKm(centre, radius);
  }
  if (t == "active") {
    only_keys(j, {"type", "from_min", "to_min"}, path);
    return ActiveDuring{json_hours(j, path)};
  }
  if (t == "band") {
    only_keys(j, {"type", "low_hz", "high_hz"}, path);
    return BandOverlaps{json_band(j, path)};
  }
  throw SchemaViolation(path + ".type", "unknown predicate type '" + t + "'");
}

} // namespace detail

/// Decodes an already-parsed JSON document.
inline Query query_from_json_value(const Json& doc) {
  using detail::require;
  if (!doc.is_object())
    throw SchemaViolation("", "expected an object");
  detail::only_keys(doc, {"clauses", "connectors"}, "");

  auto clauses_it = doc.find("clauses");
  if (clauses_it == doc.end())
    throw SchemaViolation("clauses", "missing field");
  if (!clauses_it->is_array() || clauses_it->empty())
    throw SchemaViolation("clauses", "expected a non-empty array");

  std::vector<Clause> clauses;
  for (std::size_t i = 0; i < clauses_it->size(); ++i) {
    const std::string path = "clauses[" + std::to_string(i) + "]";
    const Json& c = (*clauses_it)[i];
    if (!c.is_object())
      throw SchemaViolation(path, "expected an object");
    detail::only_keys(c, {"include", "predicate"}, path);
    bool include = true;
    if (auto inc = c.find("include"); inc != c.end()) {
      if (!inc->is_boolean())
        throw SchemaViolation(path + ".include", "expected a boolean");
      include = inc->get<bool>();
    }
    clauses.push_back({include, detail::predicate_from_json(require(c, "predicate", path), path + ".predicate")});
  }

  auto conn_it = doc.find("connectors");
  if (conn_it == doc.end())
    throw SchemaViolation("connectors", "missing field");
  if (!conn_it->is_array())
    throw SchemaViolation("connectors", "expected an array");
  if (conn_it->size() != clauses.size() - 1)
    throw SchemaViolation("connectors", "expected " + std::to_string(clauses.size() - 1) + " connectors, got " +
                                            std::to_string(conn_it->size()));
  std::vector<Connector> connectors;
  for (std::size_t i = 0; i < conn_it->size(); ++i) {
    const Json& c = (*conn_it)[i];
    if (c == "and")
      connectors.push_back(Connector::And);
    else if (c == "or")
      connectors.push_back(Connector::Or);
    else
      throw SchemaViolation("connectors[" + std::to_string(i) + "]", "expected \"and\" or \"or\"");
  }
  return Query(std::move(clauses), std::move(connectors));
}

inline Query query_from_json(std::string_view text) {
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw MalformedJson("request body is not valid JSON");
  return query_from_json_value(doc);
}

} // namespace stsq
