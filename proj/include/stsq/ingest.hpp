#pragma once

// CSV import/export of transmitter datasets.
//
// Import columns (header required, any order, names case-insensitive):
//   name, latitude, longitude, hours, centre_frequency, bandwidth, min_frequency, max_frequency
// Coordinates are decimal degrees or DMS (38°40'11.86'', 38d40m11.86s); hours are
// "H:MM-H:MM" or "H:MM -- H:MM"; frequencies take an SI suffix or are bare hertz.
// Each row populates exactly one of {centre_frequency + bandwidth, min_frequency + max_frequency}.
//
// Export always writes name,latitude,longitude,hours,min_frequency,max_frequency with
// decimal degrees and exact hertz, so export -> import reproduces the dataset.

#include <charconv>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stsq/core_model.hpp"
#include "stsq/geo.hpp"
#include "stsq/query_dsl.hpp"

namespace stsq {

struct RowError {
  std::size_t row; // 1-based, header excluded
  std::string field;
  std::string message;
  friend bool operator==(const RowError&, const RowError&) = default;
};

struct ImportReport {
  std::size_t imported = 0;
  std::vector<RowError> errors;
};

struct ImportResult {
  Dataset dataset;
  ImportReport report;
};

namespace csv {

struct Field {
  std::string text;
  bool quoted = false;
};

struct Record {
  std::vector<Field> fields;
  bool unterminated_quote = false;

  bool blank() const { return fields.size() == 1 && !fields[0].quoted && fields[0].text.empty(); }
};

/// RFC 4180 reader; accepts LF or CRLF record separators.
inline std::vector<Record> read(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF"))
    text.remove_prefix(3);
  std::vector<Record> records;
  if (text.empty())
    return records;

  Record rec;
  Field field;
  std::size_t i = 0;
  auto end_field = [&] {
    rec.fields.push_back(std::move(field));
    field = Field{};
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(rec));
    rec = Record{};
  };

  while (i < text.size()) {
    char c = text[i];
    if (c == '"' && field.text.empty() && !field.quoted) {
      field.quoted = true;
      ++i;
      bool closed = false;
      while (i < text.size()) {
        if (text[i] == '"') {
          if (i + 1 < text.size() && text[i + 1] == '"') {
            field.text.push_back('"');
            i += 2;
            continue;
          }
          ++i;
          closed = true;
          break;
        }
        field.text.push_back(text[i++]);
      }
      if (!closed)
        rec.unterminated_quote = true;
      // Characters after the closing quote (before the separator) are kept verbatim.
      while (i < text.size() && text[i] != ',' && text[i] != '\n' && text[i] != '\r')
        field.text.push_back(text[i++]);
      continue;
    }
    if (c == ',') {
      end_field();
      ++i;
    } else if (c == '\r' || c == '\n') {
      end_record();
      i += (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ? 2 : 1;
    } else {
      field.text.push_back(c);
      ++i;
    }
  }
  const char last = text.back();
  if (last != '\n' && last != '\r')
    end_record();
  return records;
}

inline std::string quote(std::string_view s) {
  const bool needs = s.find_first_of(",\"\r\n") != std::string_view::npos ||
                     (!s.empty() && (std::isspace(static_cast<unsigned char>(s.front())) ||
                                     std::isspace(static_cast<unsigned char>(s.back()))));
  if (!needs)
    return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"')
      out.push_back('"');
    out.push_back(c);
  }
  return out + "\"";
}

} // namespace csv

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

/// Thrown while converting a single cell; caught per row.
struct CellError {
  std::string field;
  std::string message;
};

inline std::optional<double> parse_plain_decimal(std::string_view s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    return std::nullopt;
  return v;
}

/// Decimal degrees or DMS. The leading sign applies to the whole coordinate.
inline double parse_coordinate(std::string_view cell, const std::string& field) {
  std::string_view s = trim(cell);
  if (auto v = parse_plain_decimal(s.starts_with('+') ? s.substr(1) : s))
    return *v;

  int sign = 1;
  if (s.starts_with('-') || s.starts_with('+')) {
    sign = s.front() == '-' ? -1 : 1;
    s.remove_prefix(1);
  }

  struct Marker {
    std::string_view text;
    int slot; // 0 degrees, 1 minutes, 2 seconds
  };
  // Longest spellings first so '' is not read as two minute marks.
  static constexpr Marker markers[] = {{"\xC2\xB0", 0}, {"\xC2\xBA", 0}, {"''", 2},          {"\xE2\x80\xB3", 2},
                                       {"\xE2\x80\xB2", 1}, {"d", 0},    {"m", 1},           {"s", 2},
                                       {"'", 1},            {"\"", 2}};
  std::optional<double> parts[3];
  int last_slot = -1;
  std::size_t i = 0;
  while (true) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
      ++i;
    if (i == s.size())
      break;
    std::size_t j = i;
    while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.'))
      ++j;
    if (j == i)
      throw CellError{field, "not a coordinate: '" + std::string(cell) + "'"};
    auto number = parse_plain_decimal(s.substr(i, j - i));
    if (!number)
      throw CellError{field, "not a coordinate: '" + std::string(cell) + "'"};
    while (j < s.size() && s[j] == ' ')
      ++j;
    int slot = -1;
    for (const auto& m : markers)
      if (s.substr(j).starts_with(m.text)) {
        slot = m.slot;
        j += m.text.size();
        break;
      }
    if (slot < 0)
      slot = last_slot + 1; // unmarked trailing component
    if (slot <= last_slot || slot > 2)
      throw CellError{field, "malformed DMS coordinate: '" + std::string(cell) + "'"};
    parts[slot] = number;
    last_slot = slot;
    i = j;
  }
  if (!parts[0])
    throw CellError{field, "malformed DMS coordinate: '" + std::string(cell) + "'"};

  DmsCoordinate dms;
  dms.sign = sign;
  const double deg = *parts[0];
  const double min = parts[1].value_or(0.0);
  if (deg != std::floor(deg) || min != std::floor(min))
    throw CellError{field, "DMS degrees and minutes must be whole numbers"};
  dms.degrees = static_cast<int>(deg);
  dms.minutes = static_cast<int>(min);
  dms.seconds = parts[2].value_or(0.0);
  try {
    return dms_to_decimal(dms);
  } catch (const InvalidValue& e) {
    throw CellError{field, e.what()};
  }
}

inline int parse_clock(std::string_view s) {
  s = trim(s);
  auto colon = s.find(':');
  if (colon == std::string_view::npos || colon == 0 || colon > 2 || s.size() - colon - 1 != 2)
    throw CellError{"hours", "expected H:MM, got '" + std::string(s) + "'"};
  for (std::size_t k = 0; k < s.size(); ++k)
    if (k != colon && !std::isdigit(static_cast<unsigned char>(s[k])))
      throw CellError{"hours", "expected H:MM, got '" + std::string(s) + "'"};
  const int h = std::stoi(std::string(s.substr(0, colon)));
  const int m = std::stoi(std::string(s.substr(colon + 1)));
  if (m > 59 || h > 24 || (h == 24 && m != 0))
    throw CellError{"hours", "out-of-range time '" + std::string(s) + "'"};
  return h * 60 + m;
}

inline HoursOfOperation parse_hours_cell(std::string_view cell) {
  std::string_view s = trim(cell);
  std::size_t sep = s.find("--");
  std::size_t sep_len = 2;
  if (sep == std::string_view::npos) {
    sep = s.find("\xE2\x80\x93"); // en dash
    sep_len = 3;
  }
  if (sep == std::string_view::npos) {
    sep = s.find('-');
    sep_len = 1;
  }
  if (sep == std::string_view::npos)
    throw CellError{"hours", "expected 'H:MM-H:MM', got '" + std::string(s) + "'"};
  const int from = parse_clock(s.substr(0, sep));
  const int to = parse_clock(s.substr(sep + sep_len));
  try {
    return {from, to};
  } catch (const InvalidValue& e) {
    throw CellError{"hours", e.what()};
  }
}

inline Hertz parse_frequency_cell(std::string_view cell, const std::string& field) {
  std::string text(trim(cell));
  if (!text.empty() && std::isdigit(static_cast<unsigned char>(text.back())))
    text += "Hz";
  try {
    return parse_frequency(text);
  } catch (const FrequencyError& e) {
    throw CellError{field, e.what()};
  }
}

inline std::string format_hours_cell(const HoursOfOperation& h) {
  auto clock = [](int m) { return std::to_string(m / 60) + ":" + (m % 60 < 10 ? "0" : "") + std::to_string(m % 60); };
  return clock(h.from()) + "-" + clock(h.to());
}

} // namespace detail

/// Rows with any bad cell are skipped and reported once each; only a missing or
/// incomplete header aborts the import.
inline ImportResult import_csv(std::string_view text) {
  using detail::CellError;
  const auto records = csv::read(text);
  if (records.empty())
    throw MissingHeader("CSV has no header row");

  std::map<std::string, std::size_t> column;
  for (std::size_t i = 0; i < records[0].fields.size(); ++i)
    column.emplace(detail::lower(detail::trim(records[0].fields[i].text)), i);
  for (const char* required : {"name", "latitude", "longitude", "hours"})
    if (!column.count(required))
      throw MissingHeader(std::string("CSV header lacks column '") + required + "'");
  const bool has_centre = column.count("centre_frequency") && column.count("bandwidth");
  const bool has_minmax = column.count("min_frequency") && column.count("max_frequency");
  if (!has_centre && !has_minmax)
    throw MissingHeader("CSV header needs centre_frequency+bandwidth or min_frequency+max_frequency columns");

  ImportReport report;
  std::vector<Transmitter> rows;
  std::map<std::string, std::size_t> seen;
  const std::size_t width = records[0].fields.size();

  for (std::size_t r = 1; r < records.size(); ++r) {
    const csv::Record& rec = records[r];
    if (rec.blank())
      continue;
    const std::size_t row_number = r;
    try {
      if (rec.unterminated_quote)
        throw CellError{"row", "unterminated quoted field"};
      if (rec.fields.size() != width)
        throw CellError{"row", "expected " + std::to_string(width) + " fields, got " + std::to_string(rec.fields.size())};

      auto cell = [&](const char* name) -> std::string_view {
        auto it = column.find(name);
        if (it == column.end())
          return {};
        const csv::Field& f = rec.fields[it->second];
        return f.quoted ? std::string_view(f.text) : detail::trim(f.text);
      };

      std::string name(cell("name"));
      if (name.empty())
        throw CellError{"name", "empty name"};
      if (seen.count(name))
        throw CellError{"name", "duplicate name (first seen in row " + std::to_string(seen[name]) + ")"};

      std::optional<GeoPoint> location;
      const auto lat_cell = detail::trim(cell("latitude"));
      const auto lon_cell = detail::trim(cell("longitude"));
      if (lat_cell.empty() != lon_cell.empty())
        throw CellError{lat_cell.empty() ? "latitude" : "longitude", "latitude and longitude must both be set or both be empty"};
      if (!lat_cell.empty()) {
        const double lat = detail::parse_coordinate(lat_cell, "latitude");
        const double lon = detail::parse_coordinate(lon_cell, "longitude");
        if (!(lat >= -90.0 && lat <= 90.0))
          throw CellError{"latitude", "latitude out of range [-90, 90]"};
        if (!(lon >= -180.0 && lon <= 180.0))
          throw CellError{"longitude", "longitude out of range [-180, 180]"};
        location = GeoPoint(lat, lon);
      }

      const HoursOfOperation hours = detail::parse_hours_cell(cell("hours"));

      const auto centre = detail::trim(cell("centre_frequency"));
      const auto bandwidth = detail::trim(cell("bandwidth"));
      const auto fmin = detail::trim(cell("min_frequency"));
      const auto fmax = detail::trim(cell("max_frequency"));
      const bool centre_used = !centre.empty() || !bandwidth.empty();
      const bool minmax_used = !fmin.empty() || !fmax.empty();
      if (centre_used && minmax_used)
        throw CellError{"frequency", "ambiguous source: both centre/bandwidth and min/max are set"};
      if (!centre_used && !minmax_used)
        throw CellError{"frequency", "no frequency given"};

      std::optional<FrequencyBand> band;
      try {
        if (centre_used) {
          if (centre.empty() || bandwidth.empty())
            throw CellError{"frequency", "centre_frequency and bandwidth must both be set"};
          band = band_from_centre(detail::parse_frequency_cell(centre, "centre_frequency"),
                                  detail::parse_frequency_cell(bandwidth, "bandwidth"));
        } else {
          if (fmin.empty() || fmax.empty())
            throw CellError{"frequency", "min_frequency and max_frequency must both be set"};
          band = band_from_min_max(detail::parse_frequency_cell(fmin, "min_frequency"),
                                   detail::parse_frequency_cell(fmax, "max_frequency"));
        }
      } catch (const InvalidValue& e) {
        throw CellError{"frequency", e.what()};
      }

      seen.emplace(name, row_number);
      rows.emplace_back(std::move(name), location, hours, *band);
    } catch (const CellError& e) {
      report.errors.push_back({row_number, e.field, e.message});
    }
  }
  report.imported = rows.size();
  return {Dataset(std::move(rows)), std::move(report)};
}

inline std::string export_csv(const Dataset& d) {
  std::string out = "name,latitude,longitude,hours,min_frequency,max_frequency\r\n";
  for (const auto& t : d) {
    out += csv::quote(t.name);
    out += ',';
    if (t.location)
      out += detail::format_decimal(t.location->lat()) + "," + detail::format_decimal(t.location->lon());
    else
      out += ',';
    out += ',' + detail::format_hours_cell(t.hours);
    out += ',' + std::to_string(t.band.low_hz()) + ',' + std::to_string(t.band.high_hz());
    out += "\r\n";
  }
  return out;
}

} // namespace stsq
