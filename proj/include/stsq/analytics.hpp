#pragma once

// Spectrum gaps, pairwise interference conflicts and time coverage.

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "stsq/core_model.hpp"
#include "stsq/geo.hpp"

namespace stsq {

struct GapReport {
  FrequencyBand window;
  std::vector<FrequencyBand> gaps;
  friend bool operator==(const GapReport&, const GapReport&) = default;
};

struct ConflictPair {
  std::string a;
  std::string b;
  FrequencyBand band_overlap;
  double distance_km;
  friend bool operator==(const ConflictPair&, const ConflictPair&) = default;
};

struct NamePair {
  std::string a;
  std::string b;
  friend bool operator==(const NamePair&, const NamePair&) = default;
};

struct ConflictReport {
  std::vector<ConflictPair> conflicts;
  std::vector<NamePair> indeterminate;
};

struct TimeCoverage {
  std::vector<HoursOfOperation> intervals;
  friend bool operator==(const TimeCoverage&, const TimeCoverage&) = default;
};

/// Sub-bands of `window` not used by any transmitter that is on at some point
/// during `during`. Works on the closed integer-hertz lattice.
inline GapReport find_gaps(const Dataset& d, const FrequencyBand& window, const HoursOfOperation& during) {
  std::vector<std::pair<Hertz, Hertz>> occupied;
  for (const auto& t : d)
    if (hours_overlap(t.hours, during))
      if (auto clipped = t.band.intersection(window))
        occupied.emplace_back(clipped->low_hz(), clipped->high_hz());
  std::sort(occupied.begin(), occupied.end());

  GapReport report{window, {}};
  Hertz next_free = window.low_hz(); // lowest hertz not yet known to be covered
  for (const auto& [low, high] : occupied) {
    if (low > next_free)
      report.gaps.emplace_back(next_free, low - 1);
    next_free = std::max(next_free, high + 1);
  }
  if (next_free <= window.high_hz())
    report.gaps.emplace_back(next_free, window.high_hz());
  return report;
}

/// All pairs whose bands and hours overlap, split into located pairs within
/// `radius_km` and pairs where a missing location leaves the answer open.
inline ConflictReport find_conflicts(const Dataset& d, double radius_km) {
  if (!(radius_km > 0.0))
    throw InvalidValue("conflict radius must be positive");
  ConflictReport report;
  const auto rows = d.rows();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const Transmitter& a = rows[i];
      const Transmitter& b = rows[j];
      auto shared = a.band.intersection(b.band);
      if (!shared || !hours_overlap(a.hours, b.hours))
        continue;
      if (!a.location || !b.location) {
        report.indeterminate.push_back({a.name, b.name});
        continue;
      }
      const double distance = haversine_km(*a.location, *b.location);
      if (distance <= radius_km)
        report.conflicts.push_back({a.name, b.name, *shared, distance});
    }
  }
  return report;
}

/// Union of arcs as maximal disjoint intervals ordered by start; an arc that
/// runs through midnight comes out as a single wrapping interval.
inline TimeCoverage circular_union(const std::vector<HoursOfOperation>& arcs) {
  std::vector<HoursOfOperation::Segment> segs;
  for (const auto& arc : arcs)
    for (const auto& s : arc.segments())
      segs.push_back(s);
  std::sort(segs.begin(), segs.end(), [](const auto& x, const auto& y) { return x.begin < y.begin; });

  std::vector<HoursOfOperation::Segment> merged;
  for (const auto& s : segs) {
    if (!merged.empty() && s.begin <= merged.back().end)
      merged.back().end = std::max(merged.back().end, s.end);
    else
      merged.push_back(s);
  }

  TimeCoverage out;
  if (merged.size() >= 2 && merged.front().begin == 0 && merged.back().end == kMinutesPerDay) {
    const int wrapped_to = merged.front().end;
    const int wrapped_from = merged.back().begin;
    for (std::size_t i = 1; i + 1 < merged.size(); ++i)
      out.intervals.emplace_back(merged[i].begin, merged[i].end);
    out.intervals.emplace_back(wrapped_from, wrapped_to);
    return out;
  }
  for (const auto& s : merged)
    out.intervals.emplace_back(s.begin, s.end);
  return out;
}

inline TimeCoverage active_times(const Dataset& d, const GeoPoint& centre, double radius_km) {
  if (!(radius_km > 0.0))
    throw InvalidValue("radius must be positive");
  std::vector<HoursOfOperation> arcs;
  for (const auto& t : d)
    if (t.location && haversine_km(centre, *t.location) <= radius_km)
      arcs.push_back(t.hours);
  return circular_union(arcs);
}

} // namespace stsq
