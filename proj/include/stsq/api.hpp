#pragma once

// Transport-independent JSON API. Every endpoint is a function from a request
// body to (status, body); the HTTP server and the CLI's --json output both go
// through here so their bodies are byte-identical.
//
// The dataset is an immutable snapshot. Readers copy the shared_ptr under a
// short lock; an import builds the new dataset off-lock and swaps it in whole.

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "stsq/analytics.hpp"
#include "stsq/evaluator.hpp"
#include "stsq/geo.hpp"
#include "stsq/ingest.hpp"
#include "stsq/query_model.hpp"
#include "stsq/sql_emitter.hpp"

namespace stsq {

inline constexpr std::size_t kMaxJsonBody = 1u << 20;   // 1 MiB
inline constexpr std::size_t kMaxImportBody = 16u << 20; // 16 MiB

// ---------------------------------------------------------------------------
// Response shapes

inline Json transmitter_to_json(const Transmitter& t) {
  Json j;
  j["name"] = t.name;
  if (t.location)
    j["location"] = Json{{"lat", t.location->lat()}, {"lon", t.location->lon()}};
  else
    j["location"] = nullptr;
  j["hours"] = Json{{"from_min", t.hours.from()}, {"to_min", t.hours.to()}};
  j["band"] = Json{{"low_hz", t.band.low_hz()}, {"high_hz", t.band.high_hz()}};
  return j;
}

template <class Range>
Json transmitters_to_json(const Range& rows) {
  Json arr = Json::array();
  for (const auto& t : rows)
    arr.push_back(transmitter_to_json(t));
  return arr;
}

inline Json band_to_json(const FrequencyBand& b) { return Json{{"low_hz", b.low_hz()}, {"high_hz", b.high_hz()}}; }

inline Json hours_to_json(const HoursOfOperation& h) { return Json{{"from_min", h.from()}, {"to_min", h.to()}}; }

inline Json query_response_json(const std::vector<Transmitter>& matches, const SqlStatement& sql) {
  return Json{{"matches", transmitters_to_json(matches)}, {"sql", sql_to_json(sql)}};
}

inline Json gap_report_to_json(const GapReport& r) {
  Json gaps = Json::array();
  for (const auto& g : r.gaps)
    gaps.push_back(band_to_json(g));
  return Json{{"window", band_to_json(r.window)}, {"gaps", gaps}};
}

inline Json conflicts_to_json(const ConflictReport& r) {
  Json conflicts = Json::array();
  for (const auto& c : r.conflicts)
    conflicts.push_back(
        Json{{"a", c.a}, {"b", c.b}, {"band_overlap", band_to_json(c.band_overlap)}, {"distance_km", c.distance_km}});
  Json indeterminate = Json::array();
  for (const auto& p : r.indeterminate)
    indeterminate.push_back(Json{{"a", p.a}, {"b", p.b}});
  return Json{{"conflicts", conflicts}, {"indeterminate", indeterminate}};
}

inline Json coverage_to_json(const TimeCoverage& c) {
  Json intervals = Json::array();
  for (const auto& h : c.intervals)
    intervals.push_back(hours_to_json(h));
  return Json{{"intervals", intervals}};
}

inline Json import_report_to_json(const ImportReport& r) {
  Json errors = Json::array();
  for (const auto& e : r.errors)
    errors.push_back(Json{{"row", e.row}, {"field", e.field}, {"message", e.message}});
  return Json{{"imported", r.imported}, {"errors", errors}};
}

inline Json error_json(const std::string& path, const std::string& message) {
  return Json{{"error", Json{{"path", path}, {"message", message}}}};
}

// ---------------------------------------------------------------------------

struct ApiResponse {
  int status = 200;
  std::string body;
  std::string content_type = "application/json";
};

class Api {
public:
  explicit Api(Dataset initial = {}, std::shared_ptr<const Geocoder> geocoder = nullptr)
      : snapshot_(std::make_shared<const Dataset>(std::move(initial))), geocoder_(std::move(geocoder)) {}

  std::shared_ptr<const Dataset> snapshot() const {
    std::lock_guard lock(snapshot_mutex_);
    return snapshot_;
  }

  void replace(Dataset d) {
    auto next = std::make_shared<const Dataset>(std::move(d));
    std::lock_guard lock(snapshot_mutex_);
    snapshot_ = std::move(next);
  }

  ApiResponse get_transmitters() const {
    auto data = snapshot();
    return ok(Json{{"transmitters", transmitters_to_json(*data)}});
  }

  ApiResponse post_query(std::string_view body) const {
    if (body.size() > kMaxJsonBody)
      return too_large(kMaxJsonBody);
    try {
      const Query q = query_from_json(body);
      auto data = snapshot();
      return ok(query_response_json(evaluate(q, *data), emit(q)));
    } catch (const MalformedJson& e) {
      return fail(400, "", e.what());
    } catch (const SchemaViolation& e) {
      return fail(400, e.path(), e.message());
    }
  }

  ApiResponse post_gaps(std::string_view body) const {
    if (body.size() > kMaxJsonBody)
      return too_large(kMaxJsonBody);
    try {
      const Json doc = parse_object(body);
      detail::only_keys(doc, {"window", "during"}, "");
      const Json& window = object_field(doc, "window");
      const Json& during = object_field(doc, "during");
      detail::only_keys(window, {"low_hz", "high_hz"}, "window");
      detail::only_keys(during, {"from_min", "to_min"}, "during");
      const FrequencyBand w = detail::json_band(window, "window");
      const HoursOfOperation h = detail::json_hours(during, "during");
      auto data = snapshot();
      return ok(gap_report_to_json(find_gaps(*data, w, h)));
    } catch (const MalformedJson& e) {
      return fail(400, "", e.what());
    } catch (const SchemaViolation& e) {
      return fail(400, e.path(), e.message());
    }
  }

  ApiResponse post_conflicts(std::string_view body) const {
    if (body.size() > kMaxJsonBody)
      return too_large(kMaxJsonBody);
    try {
      const Json doc = parse_object(body);
      detail::only_keys(doc, {"radius_km"}, "");
      const double radius = positive_radius(doc);
      auto data = snapshot();
      return ok(conflicts_to_json(find_conflicts(*data, radius)));
    } catch (const MalformedJson& e) {
      return fail(400, "", e.what());
    } catch (const SchemaViolation& e) {
      return fail(400, e.path(), e.message());
    }
  }

  ApiResponse post_active_times(std::string_view body) const {
    if (body.size() > kMaxJsonBody)
      return too_large(kMaxJsonBody);
    try {
      const Json doc = parse_object(body);
      detail::only_keys(doc, {"lat", "lon", "radius_km"}, "");
      const GeoPoint centre = point_field(doc);
      const double radius = positive_radius(doc);
      auto data = snapshot();
      return ok(coverage_to_json(active_times(*data, centre, radius)));
    } catch (const MalformedJson& e) {
      return fail(400, "", e.what());
    } catch (const SchemaViolation& e) {
      return fail(400, e.path(), e.message());
    }
  }

  /// All-or-nothing: the snapshot is replaced only when every row imports.
  ApiResponse post_import(std::string_view body) {
    if (body.size() > kMaxImportBody)
      return too_large(kMaxImportBody);
    ImportResult result;
    try {
      result = import_csv(body);
    } catch (const MissingHeader& e) {
      return fail(400, "header", e.what());
    }
    if (!result.report.errors.empty()) {
      Json j = error_json("rows", std::to_string(result.report.errors.size()) +
                                      " row(s) rejected; dataset unchanged");
      j["report"] = import_report_to_json(result.report);
      return {422, j.dump()};
    }
    std::lock_guard writer(writer_mutex_);
    replace(std::move(result.dataset));
    return ok(import_report_to_json(result.report));
  }

  ApiResponse get_export() const {
    auto data = snapshot();
    return {200, export_csv(*data), "text/csv; charset=utf-8"};
  }

  ApiResponse get_geocode(std::string_view address) const {
    if (!geocoder_)
      return fail(503, "address", "no geocoder configured");
    try {
      const GeoPoint p = geocode(address, *geocoder_);
      return ok(Json{{"lat", p.lat()}, {"lon", p.lon()}});
    } catch (const InvalidValue& e) {
      return fail(400, "address", e.what());
    } catch (const AddressNotFound& e) {
      return fail(404, "address", e.what());
    } catch (const ProviderUnavailable& e) {
      return fail(502, "address", e.what());
    }
  }

private:
  static ApiResponse ok(const Json& j) { return {200, j.dump()}; }
  static ApiResponse fail(int status, const std::string& path, const std::string& message) {
    return {status, error_json(path, message).dump()};
  }
  static ApiResponse too_large(std::size_t limit) {
    return fail(413, "", "request body exceeds " + std::to_string(limit) + " bytes");
  }

  static Json parse_object(std::string_view body) {
    Json doc = Json::parse(body, nullptr, false);
    if (doc.is_discarded())
      throw MalformedJson("request body is not valid JSON");
    if (!doc.is_object())
      throw SchemaViolation("", "expected an object");
    return doc;
  }

  static const Json& object_field(const Json& doc, const char* key) {
    auto it = doc.find(key);
    if (it == doc.end())
      throw SchemaViolation(key, "missing field");
    if (!it->is_object())
      throw SchemaViolation(key, "expected an object");
    return *it;
  }

  static double positive_radius(const Json& doc) {
    auto it = doc.find("radius_km");
    if (it == doc.end())
      throw SchemaViolation("radius_km", "missing field");
    if (!it->is_number())
      throw SchemaViolation("radius_km", "expected a number");
    const double r = it->get<double>();
    if (!(r > 0.0) || !std::isfinite(r))
      throw SchemaViolation("radius_km", "radius must be positive");
    return r;
  }

  static GeoPoint point_field(const Json& doc) {
    for (const char* key : {"lat", "lon"}) {
      auto it = doc.find(key);
      if (it == doc.end())
        throw SchemaViolation(key, "missing field");
      if (!it->is_number())
        throw SchemaViolation(key, "expected a number");
    }
    const double lat = doc["lat"].get<double>();
    const double lon = doc["lon"].get<double>();
    if (!(lat >= -90.0 && lat <= 90.0))
      throw SchemaViolation("lat", "latitude out of range [-90, 90]");
    if (!(lon >= -180.0 && lon <= 180.0))
      throw SchemaViolation("lon", "longitude out of range [-180, 180]");
    return {lat, lon};
  }

  mutable std::mutex snapshot_mutex_;
  std::mutex writer_mutex_;
  std::shared_ptr<const Dataset> snapshot_;
  std::shared_ptr<const Geocoder> geocoder_;
};

} // namespace stsq
