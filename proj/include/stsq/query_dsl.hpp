#pragma once

// Textual query language.
//
//   query      := clause { ("and" | "or") clause }
//   clause     := [ "not" ] predicate
//   predicate  := "name" "=" quoted-string
//               | "within" decimal "km" "of" "(" signed-decimal "," signed-decimal ")"
//               | "active" time ".." time
//               | "freq" freq ( ".." freq | "+/-" freq )
//   time       := H:MM or HH:MM
//   freq       := decimal unit        unit := Hz | kHz | MHz | GHz | THz
//
// Keywords and units are case-insensitive; whitespace between tokens is free.

#include <cctype>
#include <charconv>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>

#include "stsq/query_model.hpp"

namespace stsq {

namespace detail {

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::optional<int> unit_exponent(std::string_view unit) {
  const std::string u = lower(unit);
  if (u == "hz")
    return 0;
  if (u == "khz")
    return 3;
  if (u == "mhz")
    return 6;
  if (u == "ghz")
    return 9;
  if (u == "thz")
    return 12;
  return std::nullopt;
}

/// Exact value of `int_digits.frac_digits` x 10^exponent in hertz.
inline Hertz scaled_hertz(std::string_view int_digits, std::string_view frac_digits, int exponent) {
  while (int_digits.size() > 1 && int_digits.front() == '0')
    int_digits.remove_prefix(1);
  if (int_digits.size() + exponent > 13)
    throw FrequencyError(FrequencyError::Kind::OutOfRange, "frequency above 1 THz");
  Hertz value = 0;
  for (char c : int_digits)
    value = value * 10 + (c - '0');
  for (int i = 0; i < exponent; ++i)
    value = value * 10 + (i < static_cast<int>(frac_digits.size()) ? frac_digits[i] - '0' : 0);
  for (std::size_t i = exponent; i < frac_digits.size(); ++i)
    if (frac_digits[i] != '0')
      throw FrequencyError(FrequencyError::Kind::NonIntegralHertz, "frequency is not a whole number of hertz");
  if (value > kMaxHertz)
    throw FrequencyError(FrequencyError::Kind::OutOfRange, "frequency above 1 THz");
  return value;
}

inline std::string format_decimal(double v) {
  char buf[1100];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed);
  return std::string(buf, res.ptr);
}

inline std::string format_clock(int minutes) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
  return buf;
}

class DslParser {
public:
  explicit DslParser(std::string_view text) : text_(text) {}

  Query parse_query() {
    std::vector<Clause> clauses{parse_clause()};
    std::vector<Connector> connectors;
    for (;;) {
      skip_ws();
      if (at_end())
        break;
      const std::size_t at = pos_;
      const std::string word = lower(read_word());
      if (word == "and")
        connectors.push_back(Connector::And);
      else if (word == "or")
        connectors.push_back(Connector::Or);
      else
        throw ParseError(at, "'and', 'or' or end of input");
      clauses.push_back(parse_clause());
    }
    return Query(std::move(clauses), std::move(connectors));
  }

private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  std::string_view read_word() {
    const std::size_t start = pos_;
    while (!at_end() && std::isalpha(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  void expect_keyword(std::string_view kw) {
    skip_ws();
    const std::size_t at = pos_;
    if (lower(read_word()) != kw)
      throw ParseError(at, "'" + std::string(kw) + "'");
  }

  void expect_symbol(std::string_view sym) {
    skip_ws();
    if (text_.substr(pos_, sym.size()) != sym)
      throw ParseError(pos_, "'" + std::string(sym) + "'");
    pos_ += sym.size();
  }

  bool accept_symbol(std::string_view sym) {
    skip_ws();
    if (text_.substr(pos_, sym.size()) != sym)
      return false;
    pos_ += sym.size();
    return true;
  }

  std::string_view read_digits() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    return text_.substr(start, pos_ - start);
  }

  /// digits [ "." digits ]; the dot is only taken when a digit follows (keeps "..").
  std::pair<std::string_view, std::string_view> read_unsigned_decimal() {
    skip_ws();
    const std::size_t at = pos_;
    auto int_part = read_digits();
    if (int_part.empty())
      throw ParseError(at, "number");
    std::string_view frac;
    if (peek() == '.' && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      ++pos_;
      frac = read_digits();
    }
    return {int_part, frac};
  }

  double parse_decimal(bool allow_sign) {
    skip_ws();
    const std::size_t start = pos_;
    bool negative = false;
    if (allow_sign && (peek() == '-' || peek() == '+')) {
      negative = peek() == '-';
      ++pos_;
    }
    const std::size_t digits_at = pos_;
    read_unsigned_decimal();
    double value = 0;
    auto first = text_.data() + digits_at;
    auto res = std::from_chars(first, text_.data() + pos_, value);
    if (res.ec != std::errc())
      throw ParseError(start, "decimal number");
    return negative ? -value : value;
  }

  Hertz parse_freq() {
    skip_ws();
    const std::size_t at = pos_;
    auto [int_part, frac] = read_unsigned_decimal();
    skip_ws();
    const std::size_t unit_at = pos_;
    auto unit = read_word();
    auto exponent = unit_exponent(unit);
    if (!exponent)
      throw ParseError(unit_at, "frequency unit (Hz, kHz, MHz, GHz, THz)");
    try {
      return scaled_hertz(int_part, frac, *exponent);
    } catch (const FrequencyError& e) {
      throw ParseError(at, std::string("a frequency that is ") +
                               (e.kind() == FrequencyError::Kind::OutOfRange ? "at most 1 THz"
                                                                             : "a whole number of hertz"));
    }
  }

  int parse_time() {
    skip_ws();
    const std::size_t at = pos_;
    auto hours = read_digits();
    if (hours.empty() || hours.size() > 2 || peek() != ':')
      throw ParseError(at, "time H:MM");
    ++pos_;
    auto minutes = read_digits();
    if (minutes.size() != 2)
      throw ParseError(at, "time H:MM");
    const int h = std::stoi(std::string(hours));
    const int m = std::stoi(std::string(minutes));
    if (m > 59 || h > 24 || (h == 24 && m != 0))
      throw ParseError(at, "time between 00:00 and 24:00");
    return h * 60 + m;
  }

  std::string parse_quoted() {
    skip_ws();
    if (peek() != '"')
      throw ParseError(pos_, "quoted string");
    ++pos_;
    std::string out;
    for (;;) {
      if (at_end())
        throw ParseError(pos_, "closing '\"'");
      char c = text_[pos_++];
      if (c == '"')
        return out;
      if (c == '\\') {
        if (peek() != '"' && peek() != '\\')
          throw ParseError(pos_, "'\\\"' or '\\\\' escape");
        c = text_[pos_++];
      }
      out.push_back(c);
    }
  }

  Clause parse_clause() {
    skip_ws();
    std::size_t at = pos_;
    std::string word = lower(read_word());
    bool include = true;
    if (word == "not") {
      include = false;
      skip_ws();
      at = pos_;
      word = lower(read_word());
    }

    if (word == "name") {
      expect_symbol("=");
      return {include, NameIs{parse_quoted()}};
    }
    if (word == "within") {
      const std::size_t radius_at = (skip_ws(), pos_);
      double radius = parse_decimal(false);
      if (!(radius > 0.0) || !std::isfinite(radius))
        throw ParseError(radius_at, "positive radius");
      expect_keyword("km");
      expect_keyword("of");
      expect_symbol("(");
      const std::size_t point_at = (skip_ws(), pos_);
      double lat = parse_decimal(true);
      expect_symbol(",");
      double lon = parse_decimal(true);
      expect_symbol(")");
      try {
        return {include, WithinKm(GeoPoint(lat, lon), radius)};
      } catch (const InvalidValue&) {
        throw ParseError(point_at, "latitude in [-90, 90] and longitude in [-180, 180]");
      }
    }
    if (word == "active") {
      const std::size_t from_at = (skip_ws(), pos_);
      int from = parse_time();
      expect_symbol("..");
      int to = parse_time();
      if (from == to || from == kMinutesPerDay)
        throw ParseError(from_at, "non-empty interval (00:00..24:00 for the whole day)");
      return {include, ActiveDuring{HoursOfOperation(from, to)}};
    }
    if (word == "freq") {
      const std::size_t freq_at = (skip_ws(), pos_);
      Hertz first = parse_freq();
      if (accept_symbol("..")) {
        Hertz second = parse_freq();
        if (first > second)
          throw ParseError(freq_at, "low frequency not above high frequency");
        return {include, BandOverlaps{FrequencyBand(first, second)}};
      }
      if (accept_symbol("+/-")) {
        Hertz tolerance = parse_freq();
        if (first + tolerance > kMaxHertz)
          throw ParseError(freq_at, "band within 1 THz");
        return {include, BandOverlaps{FrequencyBand(std::max<Hertz>(0, first - tolerance), first + tolerance)}};
      }
      throw ParseError(pos_, "'..' or '+/-'");
    }
    throw ParseError(at, "'name', 'within', 'active' or 'freq'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

} // namespace detail

inline Query parse(std::string_view text) { return detail::DslParser(text).parse_query(); }

/// "900MHz" -> 900000000. Bare numbers without a unit are rejected.
inline Hertz parse_frequency(std::string_view text) {
  std::string_view s = text;
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
    ++i;
  auto int_part = s.substr(0, i);
  std::string_view frac;
  if (i < s.size() && s[i] == '.') {
    std::size_t j = i + 1;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
      ++j;
    frac = s.substr(i + 1, j - i - 1);
    i = j;
  }
  if (int_part.empty() && frac.empty())
    throw FrequencyError(FrequencyError::Kind::Malformed, "not a frequency: '" + std::string(text) + "'");
  if (int_part.empty())
    int_part = "0";
  auto unit = s.substr(i);
  while (!unit.empty() && std::isspace(static_cast<unsigned char>(unit.front())))
    unit.remove_prefix(1);
  auto exponent = detail::unit_exponent(unit);
  if (!exponent)
    throw FrequencyError(FrequencyError::Kind::UnknownUnit, "unknown frequency unit '" + std::string(unit) + "'");
  return detail::scaled_hertz(int_part, frac, *exponent);
}

/// Largest SI prefix that leaves an integral mantissa: 90000000 -> "90MHz".
inline std::string format_frequency(Hertz hz) {
  static constexpr std::pair<Hertz, const char*> prefixes[] = {
      {1'000'000'000'000, "THz"}, {1'000'000'000, "GHz"}, {1'000'000, "MHz"}, {1'000, "kHz"}};
  if (hz != 0)
    for (auto [scale, unit] : prefixes)
      if (hz % scale == 0)
        return std::to_string(hz / scale) + unit;
  return std::to_string(hz) + "Hz";
}

inline std::string print_predicate(const Predicate& p) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, NameIs>) {
          std::string out = "name = \"";
          for (char c : v.value) {
            if (c == '"' || c == '\\')
              out.push_back('\\');
            out.push_back(c);
          }
          return out + "\"";
        } else if constexpr (std::is_same_v<T, WithinKm>) {
          return "within " + detail::format_decimal(v.radius_km) + " km of (" + detail::format_decimal(v.centre.lat()) +
                 ", " + detail::format_decimal(v.centre.lon()) + ")";
        } else if constexpr (std::is_same_v<T, ActiveDuring>) {
          return "active " + detail::format_clock(v.interval.from()) + ".." + detail::format_clock(v.interval.to());
        } else {
          return "freq " + format_frequency(v.band.low_hz()) + ".." + format_frequency(v.band.high_hz());
        }
      },
      p);
}

inline std::string print(const Query& q) {
  std::string out;
  for (std::size_t i = 0; i < q.clauses().size(); ++i) {
    if (i > 0)
      out += q.connectors()[i - 1] == Connector::And ? " and " : " or ";
    const Clause& c = q.clauses()[i];
    if (!c.include)
      out += "not ";
    out += print_predicate(c.predicate);
  }
  return out;
}

} // namespace stsq
