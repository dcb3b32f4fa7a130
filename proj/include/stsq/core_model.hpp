#pragma once

// Domain value types: geographic points, time-of-day arcs, frequency bands,
// transmitters and name-ordered datasets.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "stsq/error.hpp"

namespace stsq {

using Hertz = std::int64_t;

inline constexpr Hertz kMaxHertz = 1'000'000'000'000; // 1 THz
inline constexpr int kMinutesPerDay = 1440;

class GeoPoint {
public:
  GeoPoint(double lat, double lon) : lat_(lat), lon_(lon) {
    if (!(lat >= -90.0 && lat <= 90.0))
      throw InvalidValue("latitude out of range [-90, 90]: " + std::to_string(lat));
    if (!(lon >= -180.0 && lon <= 180.0))
      throw InvalidValue("longitude out of range [-180, 180]: " + std::to_string(lon));
  }

  double lat() const noexcept { return lat_; }
  double lon() const noexcept { return lon_; }

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
  double lat_;
  double lon_;
};

/// Minutes since midnight. 1440 (24:00) is only meaningful as the end of an interval.
class TimeOfDay {
public:
  explicit TimeOfDay(int minutes) : minutes_(minutes) {
    if (minutes < 0 || minutes > kMinutesPerDay)
      throw InvalidValue("time of day out of range [0, 1440]: " + std::to_string(minutes));
  }

  int minutes() const noexcept { return minutes_; }

  friend auto operator<=>(const TimeOfDay&, const TimeOfDay&) = default;

private:
  int minutes_;
};

/// Half-open minute range [from, to) on the 24-hour circle.
/// from > to wraps midnight; the whole day is exactly (0, 1440).
class HoursOfOperation {
public:
  /// Linear piece [begin, end) of an arc.
  struct Segment {
    int begin;
    int end;
  };

  HoursOfOperation(TimeOfDay from, TimeOfDay to) : from_(from), to_(to) {
    if (from.minutes() == kMinutesPerDay)
      throw InvalidValue("interval cannot start at 24:00");
    if (from == to)
      throw InvalidValue("empty interval: from == to (use 00:00..24:00 for the whole day)");
  }
  HoursOfOperation(int from_min, int to_min) : HoursOfOperation(TimeOfDay(from_min), TimeOfDay(to_min)) {}

  static HoursOfOperation full_day() { return {0, kMinutesPerDay}; }

  int from() const noexcept { return from_.minutes(); }
  int to() const noexcept { return to_.minutes(); }
  bool wraps() const noexcept { return from() > to(); }
  bool is_full_day() const noexcept { return from() == 0 && to() == kMinutesPerDay; }

  bool contains(int minute) const noexcept {
    if (!wraps())
      return minute >= from() && minute < to();
    return minute >= from() || minute < to();
  }

  /// Cuts the arc at midnight into one or two non-empty linear segments.
  std::vector<Segment> segments() const {
    if (!wraps())
      return {{from(), to()}};
    std::vector<Segment> out{{from(), kMinutesPerDay}};
    if (to() > 0)
      out.push_back({0, to()});
    return out;
  }

  friend bool operator==(const HoursOfOperation&, const HoursOfOperation&) = default;

private:
  TimeOfDay from_;
  TimeOfDay to_;
};

/// True iff the two arcs share a stretch of nonzero length.
inline bool hours_overlap(const HoursOfOperation& a, const HoursOfOperation& b) {
  for (const auto& sa : a.segments())
    for (const auto& sb : b.segments())
      if (std::max(sa.begin, sb.begin) < std::min(sa.end, sb.end))
        return true;
  return false;
}

/// Closed integer-hertz interval [low, high].
class FrequencyBand {
public:
  FrequencyBand(Hertz low_hz, Hertz high_hz) : low_(low_hz), high_(high_hz) {
    if (low_hz < 0)
      throw InvalidValue("negative frequency: " + std::to_string(low_hz));
    if (low_hz > high_hz)
      throw InvertedRange("inverted band: " + std::to_string(low_hz) + " > " + std::to_string(high_hz));
    if (high_hz > kMaxHertz)
      throw UpperBoundExceeded("frequency above 1 THz: " + std::to_string(high_hz));
  }

  Hertz low_hz() const noexcept { return low_; }
  Hertz high_hz() const noexcept { return high_; }
  Hertz width() const noexcept { return high_ - low_; }

  bool overlaps(const FrequencyBand& other) const noexcept {
    return std::max(low_, other.low_) <= std::min(high_, other.high_);
  }

  std::optional<FrequencyBand> intersection(const FrequencyBand& other) const {
    if (!overlaps(other))
      return std::nullopt;
    return FrequencyBand(std::max(low_, other.low_), std::min(high_, other.high_));
  }

  friend bool operator==(const FrequencyBand&, const FrequencyBand&) = default;

private:
  Hertz low_;
  Hertz high_;
};

inline bool bands_overlap(const FrequencyBand& a, const FrequencyBand& b) noexcept { return a.overlaps(b); }

/// Band centred on `centre_hz` with full width `bandwidth_hz`. Odd widths put the
/// extra hertz above the centre; the lower edge is clamped at 0 Hz.
inline FrequencyBand band_from_centre(Hertz centre_hz, Hertz bandwidth_hz) {
  if (centre_hz < 0 || bandwidth_hz < 0)
    throw InvalidValue("centre frequency and bandwidth must be non-negative");
  if (centre_hz > kMaxHertz || bandwidth_hz > 2 * kMaxHertz)
    throw UpperBoundExceeded("band edge above 1 THz");
  const Hertz below = bandwidth_hz / 2;
  const Hertz above = bandwidth_hz - below;
  const Hertz high = centre_hz + above;
  if (high > kMaxHertz)
    throw UpperBoundExceeded("band edge above 1 THz: " + std::to_string(high));
  return {std::max<Hertz>(0, centre_hz - below), high};
}

inline FrequencyBand band_from_min_max(Hertz low_hz, Hertz high_hz) { return {low_hz, high_hz}; }

struct Transmitter {
  Transmitter(std::string name_, std::optional<GeoPoint> location_, HoursOfOperation hours_, FrequencyBand band_)
      : name(std::move(name_)), location(location_), hours(hours_), band(band_) {
    if (name.empty())
      throw InvalidValue("transmitter name must not be empty");
  }

  std::string name;
  std::optional<GeoPoint> location;
  HoursOfOperation hours;
  FrequencyBand band;

  friend bool operator==(const Transmitter&, const Transmitter&) = default;
};

/// Transmitters with unique names, kept in byte-wise name order.
class Dataset {
public:
  using const_iterator = std::vector<Transmitter>::const_iterator;

  Dataset() = default;
  explicit Dataset(std::vector<Transmitter> transmitters) : rows_(std::move(transmitters)) {
    std::sort(rows_.begin(), rows_.end(), [](const Transmitter& a, const Transmitter& b) { return a.name < b.name; });
    auto dup = std::adjacent_find(rows_.begin(), rows_.end(),
                                  [](const Transmitter& a, const Transmitter& b) { return a.name == b.name; });
    if (dup != rows_.end())
      throw DuplicateName(dup->name);
  }

  const_iterator begin() const noexcept { return rows_.begin(); }
  const_iterator end() const noexcept { return rows_.end(); }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const Transmitter& operator[](std::size_t i) const { return rows_[i]; }
  std::span<const Transmitter> rows() const noexcept { return rows_; }

  const Transmitter* find(const std::string& name) const {
    auto it = std::lower_bound(rows_.begin(), rows_.end(), name,
                               [](const Transmitter& t, const std::string& n) { return t.name < n; });
    return (it != rows_.end() && it->name == name) ? &*it : nullptr;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

private:
  std::vector<Transmitter> rows_;
};

} // namespace stsq
