#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <string_view>

#include "stsq/core_model.hpp"

namespace stsq {

/// IUGG mean earth radius.
inline constexpr double kEarthRadiusKm = 6371.0088;

inline double radians(double degrees) noexcept { return degrees * (std::numbers::pi / 180.0); }

/// Degrees-minutes-seconds coordinate. The sign applies to the whole value.
struct DmsCoordinate {
  int sign = 1;
  int degrees = 0;
  int minutes = 0;
  double seconds = 0.0;

  void validate() const {
    if (sign != 1 && sign != -1)
      throw InvalidValue("DMS sign must be +1 or -1");
    if (degrees < 0 || minutes < 0 || minutes > 59 || !(seconds >= 0.0 && seconds < 60.0))
      throw InvalidValue("DMS component out of range");
    if (degrees + minutes / 60.0 + seconds / 3600.0 > 180.0)
      throw InvalidValue("DMS magnitude above 180 degrees");
  }
};

inline double dms_to_decimal(const DmsCoordinate& d) {
  d.validate();
  return d.sign * (d.degrees + d.minutes / 60.0 + d.seconds / 3600.0);
}

inline DmsCoordinate decimal_to_dms(double value) {
  DmsCoordinate out;
  out.sign = value < 0 ? -1 : 1;
  double magnitude = std::fabs(value);
  out.degrees = static_cast<int>(magnitude);
  double rest = (magnitude - out.degrees) * 60.0;
  out.minutes = std::min(59, static_cast<int>(rest));
  out.seconds = std::max(0.0, (rest - out.minutes) * 60.0);
  if (out.seconds >= 60.0)
    out.seconds = std::nextafter(60.0, 0.0);
  return out;
}

/// Great-circle distance on a sphere of radius kEarthRadiusKm. The operation order
/// matches the SQL expression emitted for spatial clauses term for term, so both
/// paths produce bit-identical distances.
inline double haversine_km(const GeoPoint& a, const GeoPoint& b) {
  const double lat_term = std::pow(std::sin(radians(b.lat() - a.lat()) / 2), 2);
  const double lon_term = std::pow(std::sin(radians(b.lon() - a.lon()) / 2), 2);
  const double h = lat_term + std::cos(radians(a.lat())) * std::cos(radians(b.lat())) * lon_term;
  return 2 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

/// Address lookup. Implementations must tolerate concurrent calls.
class Geocoder {
public:
  virtual ~Geocoder() = default;
  virtual GeoPoint lookup(std::string_view address) const = 0;
};

/// Lower-cases and collapses runs of whitespace; leading/trailing space dropped.
inline std::string normalize_address(std::string_view address) {
  std::string out;
  bool pending_space = false;
  for (unsigned char c : address) {
    if (std::isspace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space)
      out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

/// In-memory address table, used wherever network lookups are unwanted.
class FixtureGeocoder : public Geocoder {
public:
  FixtureGeocoder() = default;
  FixtureGeocoder(std::initializer_list<std::pair<std::string, GeoPoint>> entries) {
    for (const auto& [address, point] : entries)
      add(address, point);
  }

  void add(std::string_view address, GeoPoint point) { entries_.insert_or_assign(normalize_address(address), point); }

  GeoPoint lookup(std::string_view address) const override {
    auto it = entries_.find(normalize_address(address));
    if (it == entries_.end())
      throw AddressNotFound("address not found: " + std::string(address));
    return it->second;
  }

private:
  std::map<std::string, GeoPoint> entries_;
};

inline GeoPoint geocode(std::string_view address, const Geocoder& provider) {
  if (normalize_address(address).empty())
    throw InvalidValue("address must not be empty");
  return provider.lookup(address);
}

} // namespace stsq
