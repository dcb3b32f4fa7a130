#pragma once

// In-memory query execution. This is the reference semantics: the SQL emitter,
// the service and the CLI all have to agree with it.

#include <vector>

#include "stsq/core_model.hpp"
#include "stsq/geo.hpp"
#include "stsq/query_model.hpp"

namespace stsq {

/// Three-valued predicate result. Unknown only comes from a spatial predicate
/// applied to a transmitter without a location.
enum class ClauseOutcome { False, True, Unknown };

inline ClauseOutcome eval_predicate(const Predicate& p, const Transmitter& t) {
  auto of = [](bool b) { return b ? ClauseOutcome::True : ClauseOutcome::False; };
  return std::visit(
      [&](const auto& v) -> ClauseOutcome {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NameIs>) {
          return of(t.name == v.value);
        } else if constexpr (std::is_same_v<T, WithinKm>) {
          if (!t.location)
            return ClauseOutcome::Unknown;
          return of(haversine_km(v.centre, *t.location) <= v.radius_km);
        } else if constexpr (std::is_same_v<T, ActiveDuring>) {
          return of(hours_overlap(v.interval, t.hours));
        } else {
          return of(v.band.overlaps(t.band));
        }
      },
      p);
}

/// Unknown is false whichever way the include box is set: missing data never
/// produces a match, not even through negation.
inline bool eval_clause(const Clause& c, const Transmitter& t) {
  switch (eval_predicate(c.predicate, t)) {
  case ClauseOutcome::True:
    return c.include;
  case ClauseOutcome::False:
    return !c.include;
  case ClauseOutcome::Unknown:
    break;
  }
  return false;
}

inline bool matches(const NormalForm& groups, const Transmitter& t) {
  for (const auto& group : groups) {
    bool all = true;
    for (const auto& clause : group)
      if (!eval_clause(clause, t)) {
        all = false;
        break;
      }
    if (all)
      return true;
  }
  return false;
}

/// Matching transmitters in name order (the dataset order).
inline std::vector<Transmitter> evaluate(const Query& q, const Dataset& d) {
  const NormalForm groups = normalize(q);
  std::vector<Transmitter> out;
  for (const auto& t : d)
    if (matches(groups, t))
      out.push_back(t);
  return out;
}

} // namespace stsq
