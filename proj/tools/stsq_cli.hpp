#pragma once

// Command-line front end. Exit codes: 0 success, 1 task/assertion failure
// (or a server that cannot start), 2 usage or parse error, 3 data error.

#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stsq/service.hpp"
#include "stsq/stsq.hpp"

namespace stsq::cli {

enum ExitCode { kOk = 0, kFailed = 1, kUsage = 2, kDataError = 3 };

struct Exit {
  int code;
  std::string message;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Exit{kDataError, "cannot open " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Dataset load_dataset(const std::string& path, std::ostream& err) {
  ImportResult result;
  try {
    result = import_csv(read_file(path));
  } catch (const MissingHeader& e) {
    throw Exit{kDataError, path + ": " + e.what()};
  }
  if (!result.report.errors.empty()) {
    for (const auto& e : result.report.errors)
      err << path << ": row " << e.row << ", " << e.field << ": " << e.message << "\n";
    throw Exit{kDataError, path + ": " + std::to_string(result.report.errors.size()) + " row(s) rejected"};
  }
  return std::move(result.dataset);
}

inline Query parse_or_exit(const std::string& dsl) {
  try {
    return parse(dsl);
  } catch (const ParseError& e) {
    throw Exit{kUsage, std::string(e.what()) + "\n  " + dsl + "\n  " + std::string(e.offset(), ' ') + "^"};
  }
}

/// "25MHz..35MHz" via the DSL's frequency grammar.
inline FrequencyBand parse_window(const std::string& text) {
  try {
    return std::get<BandOverlaps>(parse("freq " + text).clauses().front().predicate).band;
  } catch (const std::exception&) {
    throw Exit{kUsage, "invalid --window '" + text + "' (expected e.g. 25MHz..35MHz)"};
  }
}

inline HoursOfOperation parse_hours_flag(const std::string& text) {
  try {
    return std::get<ActiveDuring>(parse("active " + text).clauses().front().predicate).interval;
  } catch (const std::exception&) {
    throw Exit{kUsage, "invalid --hours '" + text + "' (expected e.g. 03:00..08:00)"};
  }
}

inline GeoPoint parse_point_flag(const std::string& text) {
  try {
    auto comma = text.find(',');
    if (comma == std::string::npos)
      throw InvalidValue("missing comma");
    std::size_t used = 0;
    const std::string lat_s = text.substr(0, comma), lon_s = text.substr(comma + 1);
    double lat = std::stod(lat_s, &used);
    if (used != lat_s.size())
      throw InvalidValue("trailing characters");
    double lon = std::stod(lon_s, &used);
    if (detail::trim(lon_s.substr(used)).size() != 0)
      throw InvalidValue("trailing characters");
    return {lat, lon};
  } catch (const std::exception&) {
    throw Exit{kUsage, "invalid --at '" + text + "' (expected lat,lon in decimal degrees)"};
  }
}

inline void require_positive(double radius) {
  if (!(radius > 0.0))
    throw Exit{kUsage, "--radius must be positive"};
}

inline std::string format_cell(double v) { return detail::format_decimal(v); }

/// Fixed columns matching the relational schema, two spaces between columns.
inline void print_table(std::ostream& out, const std::vector<Transmitter>& rows) {
  const std::vector<std::string> header = {"name",         "latitude",    "longitude",   "hours_from_min",
                                           "hours_to_min", "freq_low_hz", "freq_high_hz"};
  std::vector<std::vector<std::string>> cells{header};
  for (const auto& t : rows)
    cells.push_back({t.name, t.location ? format_cell(t.location->lat()) : "NULL",
                     t.location ? format_cell(t.location->lon()) : "NULL", std::to_string(t.hours.from()),
                     std::to_string(t.hours.to()), std::to_string(t.band.low_hz()), std::to_string(t.band.high_hz())});
  std::vector<std::size_t> width(header.size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c)
      width[c] = std::max(width[c], row[c].size());
  for (const auto& row : cells) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += row[c];
      if (c + 1 < row.size())
        line += std::string(width[c] - row[c].size() + 2, ' ');
    }
    out << line << "\n";
  }
  out << "(" << rows.size() << " row" << (rows.size() == 1 ? "" : "s") << ")\n";
}

inline std::string params_text(const SqlStatement& s) { return sql_to_json(s)["params"].dump(); }

inline std::string clock(int minutes) { return detail::format_clock(minutes); }

inline Service* g_running_service = nullptr;

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"stsq: query spatial-temporal-spectral transmitter data"};
  app.require_subcommand(1);

  std::string data_path, dsl, corpus_path, window_text, hours_text, at_text, import_path;
  double radius = 0;
  bool as_json = false, sql_only = false;
  int port = -1;

  auto* query = app.add_subcommand("query", "Evaluate a DSL query; print matches and the emitted SQL");
  query->add_option("--data", data_path, "CSV dataset")->required();
  query->add_option("dsl", dsl, "query text, e.g. 'freq 90MHz +/- 1MHz'")->required();
  query->add_flag("--json", as_json, "print the /api/query response body");
  query->add_flag("--sql-only", sql_only, "print only the SQL statement");

  auto* gaps = app.add_subcommand("gaps", "Unused frequency ranges in a window during an hour range");
  gaps->add_option("--data", data_path, "CSV dataset")->required();
  gaps->add_option("--window", window_text, "frequency window, e.g. 25MHz..35MHz")->required();
  gaps->add_option("--hours", hours_text, "hour range, e.g. 03:00..08:00")->required();
  gaps->add_flag("--json", as_json, "print the /api/gaps response body");

  auto* conflicts = app.add_subcommand("conflicts", "Transmitter pairs overlapping in band, hours and space");
  conflicts->add_option("--data", data_path, "CSV dataset")->required();
  conflicts->add_option("--radius", radius, "distance threshold in km")->required();
  conflicts->add_flag("--json", as_json, "print the /api/conflicts response body");

  auto* times = app.add_subcommand("times", "Hours with transmissions within a radius of a point");
  times->add_option("--data", data_path, "CSV dataset")->required();
  times->add_option("--at", at_text, "centre as lat,lon")->required();
  times->add_option("--radius", radius, "radius in km")->required();
  times->add_flag("--json", as_json, "print the /api/active-times response body");

  auto* tasks = app.add_subcommand("tasks", "Task corpus commands");
  tasks->require_subcommand(1);
  auto* tasks_run = tasks->add_subcommand("run", "Run a task corpus and report PASS/FAIL per task");
  tasks_run->add_option("--data", data_path, "CSV dataset")->required();
  tasks_run->add_option("--corpus", corpus_path, "corpus JSON")->required();

  auto* serve = app.add_subcommand("serve", "Start the HTTP API (STSQ_PORT, STSQ_DATA, STSQ_CORS_ORIGIN)");
  serve->add_option("--data", data_path, "CSV dataset (overrides STSQ_DATA)");
  serve->add_option("--port", port, "port (overrides STSQ_PORT)");

  auto* import_cmd = app.add_subcommand("import", "Validate a CSV and print it in canonical form");
  import_cmd->add_option("csv", import_path, "input CSV")->required();

  auto* export_cmd = app.add_subcommand("export", "Print a dataset as canonical CSV");
  export_cmd->add_option("--data", data_path, "CSV dataset")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*query) {
      const Query q = parse_or_exit(dsl);
      Api api(load_dataset(data_path, err));
      const SqlStatement sql = emit(q);
      if (as_json) {
        out << (sql_only ? sql_to_json(sql).dump() : api.post_query(query_to_json(q)).body);
      } else if (sql_only) {
        out << sql.text << "\n-- params: " << params_text(sql) << "\n";
      } else {
        print_table(out, evaluate(q, *api.snapshot()));
        out << "\nSQL: " << sql.text << "\nparams: " << params_text(sql) << "\n";
      }
      return kOk;
    }

    if (*gaps) {
      const FrequencyBand window = parse_window(window_text);
      const HoursOfOperation during = parse_hours_flag(hours_text);
      Api api(load_dataset(data_path, err));
      if (as_json) {
        out << api.post_gaps(Json{{"window", band_to_json(window)}, {"during", hours_to_json(during)}}.dump()).body;
        return kOk;
      }
      const GapReport report = find_gaps(*api.snapshot(), window, during);
      out << "window " << window.low_hz() << ".." << window.high_hz() << " Hz, active " << clock(during.from())
          << ".." << clock(during.to()) << "\n";
      for (const auto& g : report.gaps)
        out << "gap  " << g.low_hz() << ".." << g.high_hz() << " Hz\n";
      out << "(" << report.gaps.size() << " gap" << (report.gaps.size() == 1 ? "" : "s") << ")\n";
      return kOk;
    }

    if (*conflicts) {
      require_positive(radius);
      Api api(load_dataset(data_path, err));
      if (as_json) {
        out << api.post_conflicts(Json{{"radius_km", radius}}.dump()).body;
        return kOk;
      }
      const ConflictReport report = find_conflicts(*api.snapshot(), radius);
      for (const auto& c : report.conflicts)
        out << "conflict  " << c.a << "  <->  " << c.b << "  band " << c.band_overlap.low_hz() << ".."
            << c.band_overlap.high_hz() << " Hz  distance " << format_cell(c.distance_km) << " km\n";
      for (const auto& p : report.indeterminate)
        out << "indeterminate  " << p.a << "  <->  " << p.b << "  (location missing)\n";
      out << "(" << report.conflicts.size() << " conflicts, " << report.indeterminate.size() << " indeterminate)\n";
      return kOk;
    }

    if (*times) {
      const GeoPoint centre = parse_point_flag(at_text);
      require_positive(radius);
      Api api(load_dataset(data_path, err));
      if (as_json) {
        out << api.post_active_times(Json{{"lat", centre.lat()}, {"lon", centre.lon()}, {"radius_km", radius}}.dump())
                   .body;
        return kOk;
      }
      const TimeCoverage cov = active_times(*api.snapshot(), centre, radius);
      for (const auto& h : cov.intervals)
        out << clock(h.from()) << ".." << clock(h.to()) << (h.wraps() ? "  (wraps midnight)" : "") << "\n";
      out << "(" << cov.intervals.size() << " interval" << (cov.intervals.size() == 1 ? "" : "s") << ")\n";
      return kOk;
    }

    if (*tasks_run) {
      std::vector<Task> corpus;
      try {
        corpus = load_corpus(read_file(corpus_path));
      } catch (const Exit& e) {
        throw Exit{kUsage, e.message};
      } catch (const Error& e) {
        throw Exit{kUsage, corpus_path + ": " + e.what()};
      }
      const Dataset data = load_dataset(data_path, err);
      const auto started = std::chrono::steady_clock::now();
      std::size_t passed = 0;
      for (const auto& task : corpus) {
        const TaskOutcome r = run_task(task, data);
        passed += r.passed;
        out << (r.passed ? "PASS  " : "FAIL  ") << r.id;
        if (!task.description.empty())
          out << "  " << task.description;
        if (!r.passed)
          out << "\n      " << r.detail;
        out << "\n";
      }
      const auto ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
      if (corpus.empty())
        out << "0 tasks\n";
      else
        out << passed << "/" << corpus.size() << " tasks passed (" << format_cell(std::round(ms * 10) / 10)
            << " ms)\n";
      return passed == corpus.size() ? kOk : kFailed;
    }

    if (*serve) {
      ServiceConfig config = ServiceConfig::from_env();
      if (port >= 0)
        config.port = port;
      if (!data_path.empty())
        config.data_path = data_path;
      Dataset initial;
      if (config.data_path)
        initial = load_dataset(*config.data_path, err);
      std::shared_ptr<const Geocoder> geocoder = HttpGeocoder::from_env();
      Api api(std::move(initial), geocoder);
      Service service(api, config);
      if (!service.bind())
        throw Exit{kFailed, "cannot bind " + config.host + ":" + std::to_string(config.port) + " (port in use?)"};
      err << "stsq: serving " << api.snapshot()->size() << " transmitters on port " << service.port() << "\n";
      g_running_service = &service;
      auto on_signal = [](int) {
        if (g_running_service)
          g_running_service->stop();
      };
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      const bool clean = service.run();
      g_running_service = nullptr;
      return clean ? kOk : kFailed;
    }

    if (*import_cmd) {
      out << export_csv(load_dataset(import_path, err));
      return kOk;
    }

    if (*export_cmd) {
      out << export_csv(load_dataset(data_path, err));
      return kOk;
    }
  } catch (const Exit& e) {
    err << "stsq: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "stsq: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

} // namespace stsq::cli
