#pragma once

// Task corpus: named DSL queries with their expected result names, optionally
// with a gap or time-coverage check attached.
//
// {"tasks": [{"id": "T01", "description": "...", "dsl": "freq 90MHz +/- 1MHz",
//             "expected_names": [],
//             "gaps":  {"window": {"low_hz", "high_hz"}, "during": {"from_min", "to_min"},
//                       "expected": [{"low_hz", "high_hz"}, ...]},
//             "times": {"lat", "lon", "radius_km", "expected": [{"from_min", "to_min"}, ...]}}]}

#include <set>
#include <string>
#include <vector>

#include "stsq/analytics.hpp"
#include "stsq/evaluator.hpp"
#include "stsq/query_dsl.hpp"

namespace stsq {

struct GapCheck {
  FrequencyBand window;
  HoursOfOperation during;
  std::vector<FrequencyBand> expected;
};

struct TimesCheck {
  GeoPoint centre;
  double radius_km;
  std::vector<HoursOfOperation> expected;
};

struct Task {
  std::string id;
  std::string description;
  std::string dsl;
  std::vector<std::string> expected_names;
  std::optional<GapCheck> gaps;
  std::optional<TimesCheck> times;
};

struct TaskOutcome {
  std::string id;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline const Json& array_field(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_array())
    throw SchemaViolation(path + "." + key, "expected an array");
  return v;
}

inline std::string string_field(const Json& obj, const char* key, const std::string& path) {
  const Json& v = require(obj, key, path);
  if (!v.is_string())
    throw SchemaViolation(path + "." + key, "expected a string");
  return v.get<std::string>();
}

} // namespace detail

/// Validates ids (unique) and that every DSL string parses.
inline std::vector<Task> load_corpus(std::string_view text) {
  using namespace detail;
  Json doc = Json::parse(text, nullptr, false);
  if (doc.is_discarded())
    throw MalformedJson("corpus is not valid JSON");
  if (!doc.is_object())
    throw SchemaViolation("", "expected an object");
  const Json& tasks = array_field(doc, "tasks", "");

  std::vector<Task> out;
  std::set<std::string> ids;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const std::string path = "tasks[" + std::to_string(i) + "]";
    const Json& t = tasks[i];
    if (!t.is_object())
      throw SchemaViolation(path, "expected an object");
    only_keys(t, {"id", "description", "dsl", "expected_names", "gaps", "times"}, path);
    Task task{string_field(t, "id", path), "", string_field(t, "dsl", path), {}, {}, {}};
    if (t.contains("description"))
      task.description = string_field(t, "description", path);
    if (!ids.insert(task.id).second)
      throw SchemaViolation(path + ".id", "duplicate task id '" + task.id + "'");
    try {
      parse(task.dsl);
    } catch (const ParseError& e) {
      throw SchemaViolation(path + ".dsl", e.what());
    }
    for (const auto& n : array_field(t, "expected_names", path)) {
      if (!n.is_string())
        throw SchemaViolation(path + ".expected_names", "expected strings");
      task.expected_names.push_back(n.get<std::string>());
    }
    std::sort(task.expected_names.begin(), task.expected_names.end());

    if (auto g = t.find("gaps"); g != t.end()) {
      const std::string gp = path + ".gaps";
      if (!g->is_object())
        throw SchemaViolation(gp, "expected an object");
      GapCheck check{json_band(require(*g, "window", gp), gp + ".window"),
                     json_hours(require(*g, "during", gp), gp + ".during"),
                     {}};
      const Json& expected = array_field(*g, "expected", gp);
      for (std::size_t k = 0; k < expected.size(); ++k)
        check.expected.push_back(json_band(expected[k], gp + ".expected[" + std::to_string(k) + "]"));
      task.gaps = std::move(check);
    }
    if (auto tm = t.find("times"); tm != t.end()) {
      const std::string tp = path + ".times";
      if (!tm->is_object())
        throw SchemaViolation(tp, "expected an object");
      const double radius = json_number(*tm, "radius_km", tp);
      if (!(radius > 0.0))
        throw SchemaViolation(tp + ".radius_km", "radius must be positive");
      TimesCheck check{json_point(*tm, tp), radius, {}};
      const Json& expected = array_field(*tm, "expected", tp);
      for (std::size_t k = 0; k < expected.size(); ++k)
        check.expected.push_back(json_hours(expected[k], tp + ".expected[" + std::to_string(k) + "]"));
      task.times = std::move(check);
    }
    out.push_back(std::move(task));
  }
  return out;
}

inline TaskOutcome run_task(const Task& task, const Dataset& d) {
  TaskOutcome outcome{task.id, true, {}};
  std::vector<std::string> got;
  for (const auto& t : evaluate(parse(task.dsl), d))
    got.push_back(t.name);
  if (got != task.expected_names) {
    outcome.passed = false;
    outcome.detail = "names differ: got [";
    for (std::size_t i = 0; i < got.size(); ++i)
      outcome.detail += (i ? ", " : "") + got[i];
    outcome.detail += "]";
  }
  if (task.gaps && find_gaps(d, task.gaps->window, task.gaps->during).gaps != task.gaps->expected) {
    outcome.passed = false;
    outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("gaps differ");
  }
  if (task.times && active_times(d, task.times->centre, task.times->radius_km).intervals != task.times->expected) {
    outcome.passed = false;
    outcome.detail += (outcome.detail.empty() ? "" : "; ") + std::string("active times differ");
  }
  return outcome;
}

} // namespace stsq
