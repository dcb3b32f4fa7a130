#pragma once

// Brute-force reference implementations used only by tests. Nothing here calls
// into the code paths it is used to check (segments, normalize, haversine, ...).

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "stsq/core_model.hpp"
#include "stsq/query_model.hpp"

namespace oracle {

using stsq::FrequencyBand;
using stsq::GeoPoint;
using stsq::Hertz;
using stsq::HoursOfOperation;

inline constexpr double kRadiusKm = 6371.0088;

/// Minute membership by modular offset from the start of the arc.
inline bool minute_in(const HoursOfOperation& h, int minute) {
  int length = ((h.to() - h.from()) % 1440 + 1440) % 1440;
  if (length == 0)
    length = 1440;
  const int offset = ((minute - h.from()) % 1440 + 1440) % 1440;
  return offset < length;
}

inline bool hours_overlap(const HoursOfOperation& a, const HoursOfOperation& b) {
  for (int m = 0; m < 1440; ++m)
    if (minute_in(a, m) && minute_in(b, m))
      return true;
  return false;
}

inline bool band_overlap(const FrequencyBand& a, const FrequencyBand& b) {
  return !(a.high_hz() < b.low_hz() || b.high_hz() < a.low_hz());
}

/// Central angle from unit vectors, atan2(|u x v|, u . v).
inline double great_circle_km(const GeoPoint& a, const GeoPoint& b) {
  const double d2r = M_PI / 180.0;
  auto unit = [&](const GeoPoint& p) {
    const double la = p.lat() * d2r, lo = p.lon() * d2r;
    return std::array<double, 3>{std::cos(la) * std::cos(lo), std::cos(la) * std::sin(lo), std::sin(la)};
  };
  const auto u = unit(a), v = unit(b);
  const double cx = u[1] * v[2] - u[2] * v[1];
  const double cy = u[2] * v[0] - u[0] * v[2];
  const double cz = u[0] * v[1] - u[1] * v[0];
  const double dot = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  return kRadiusKm * std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

/// Gaps by marking every hertz of the window. Window width must stay small.
inline std::vector<FrequencyBand> gaps_per_hertz(const FrequencyBand& window, const std::vector<FrequencyBand>& occupied) {
  const Hertz n = window.high_hz() - window.low_hz() + 1;
  std::vector<char> used(static_cast<std::size_t>(n), 0);
  for (const auto& b : occupied)
    for (Hertz f = std::max(b.low_hz(), window.low_hz()); f <= std::min(b.high_hz(), window.high_hz()); ++f)
      used[static_cast<std::size_t>(f - window.low_hz())] = 1;
  std::vector<FrequencyBand> out;
  Hertz i = 0;
  while (i < n) {
    if (used[i]) {
      ++i;
      continue;
    }
    Hertz j = i;
    while (j + 1 < n && !used[j + 1])
      ++j;
    out.emplace_back(window.low_hz() + i, window.low_hz() + j);
    i = j + 1;
  }
  return out;
}

/// Per-minute coverage of a set of arcs.
inline std::vector<bool> minute_cover(const std::vector<HoursOfOperation>& arcs) {
  std::vector<bool> cover(1440, false);
  for (const auto& a : arcs)
    for (int m = 0; m < 1440; ++m)
      cover[m] = cover[m] || minute_in(a, m);
  return cover;
}

enum class Truth { No, Yes, Unknown };

inline Truth predicate(const stsq::Predicate& p, const stsq::Transmitter& t) {
  if (auto* n = std::get_if<stsq::NameIs>(&p))
    return t.name == n->value ? Truth::Yes : Truth::No;
  if (auto* w = std::get_if<stsq::WithinKm>(&p)) {
    if (!t.location)
      return Truth::Unknown;
    return oracle::great_circle_km(w->centre, *t.location) <= w->radius_km ? Truth::Yes : Truth::No;
  }
  if (auto* a = std::get_if<stsq::ActiveDuring>(&p))
    return oracle::hours_overlap(a->interval, t.hours) ? Truth::Yes : Truth::No;
  const auto& b = std::get<stsq::BandOverlaps>(p).band;
  return oracle::band_overlap(b, t.band) ? Truth::Yes : Truth::No;
}

/// Flat AND/OR chain with AND binding tighter, evaluated with an operand stack.
inline bool query_matches(const stsq::Query& q, const stsq::Transmitter& t) {
  auto clause = [&](std::size_t i) {
    const auto& c = q.clauses()[i];
    const Truth r = predicate(c.predicate, t);
    if (r == Truth::Unknown)
      return false;
    return c.include ? r == Truth::Yes : r == Truth::No;
  };
  std::vector<bool> terms{clause(0)};
  for (std::size_t i = 1; i < q.clauses().size(); ++i) {
    const bool v = clause(i);
    if (q.connectors()[i - 1] == stsq::Connector::And)
      terms.back() = terms.back() && v;
    else
      terms.push_back(v);
  }
  for (bool b : terms)
    if (b)
      return true;
  return false;
}

inline std::vector<std::string> query_names(const stsq::Query& q, const stsq::Dataset& d) {
  std::vector<std::string> out;
  for (const auto& t : d)
    if (query_matches(q, t))
      out.push_back(t.name);
  std::sort(out.begin(), out.end());
  return out;
}

} // namespace oracle
