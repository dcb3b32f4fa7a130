#pragma once

// Query -> parameterized SQL over the `transmitters` table, plus a small
// interpreter for exactly the emitted dialect. The interpreter follows SQL
// three-valued logic and is used to check emitted statements against the
// in-memory evaluator.
//
// Table:
//   transmitters(name TEXT PRIMARY KEY, latitude DOUBLE NULL, longitude DOUBLE NULL,
//                hours_from_min INTEGER, hours_to_min INTEGER,
//                freq_low_hz BIGINT, freq_high_hz BIGINT)

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "stsq/core_model.hpp"
#include "stsq/query_model.hpp"

namespace stsq {

using SqlParam = std::variant<std::string, std::int64_t, double>;

struct SqlStatement {
  std::string text;
  std::vector<SqlParam> params;
  friend bool operator==(const SqlStatement&, const SqlStatement&) = default;
};

inline constexpr std::string_view kSelectPrefix =
    "SELECT name, latitude, longitude, hours_from_min, hours_to_min, freq_low_hz, freq_high_hz "
    "FROM transmitters WHERE ";
inline constexpr std::string_view kSelectSuffix = " ORDER BY name ASC";

namespace detail {

class SqlBuilder {
public:
  std::string placeholder(SqlParam value) {
    params_.push_back(std::move(value));
    return "$" + std::to_string(params_.size());
  }

  std::string clause(const Clause& c) {
    return std::visit([&](const auto& v) { return render(v, c.include); }, c.predicate);
  }

  std::vector<SqlParam> take_params() { return std::move(params_); }

private:
  static std::string wrap(const std::string& body, bool include) {
    return include ? "(" + body + ")" : "(NOT (" + body + "))";
  }

  std::string render(const NameIs& p, bool include) { return wrap("name = " + placeholder(p.value), include); }

  std::string render(const BandOverlaps& p, bool include) {
    const auto low = placeholder(p.band.low_hz());
    const auto high = placeholder(p.band.high_hz());
    return wrap("freq_low_hz <= " + high + " AND freq_high_hz >= " + low, include);
  }

  // Stored rows and the query interval may each wrap midnight, hence four cases.
  std::string render(const ActiveDuring& p, bool include) {
    const auto a = placeholder(static_cast<std::int64_t>(p.interval.from()));
    const auto b = placeholder(static_cast<std::int64_t>(p.interval.to()));
    const std::string body =
        "(hours_from_min < hours_to_min AND " + a + " < " + b + " AND hours_from_min < " + b + " AND " + a +
        " < hours_to_min) OR (hours_from_min < hours_to_min AND " + a + " > " + b + " AND (hours_to_min > " + a +
        " OR hours_from_min < " + b + ")) OR (hours_from_min > hours_to_min AND " + a + " < " + b + " AND (" + b +
        " > hours_from_min OR " + a + " < hours_to_min)) OR (hours_from_min > hours_to_min AND " + a + " > " + b +
        ")";
    return wrap(body, include);
  }

  // The NULL guard sits outside any NOT so a missing location is never a match.
  std::string render(const WithinKm& p, bool include) {
    const auto lat = placeholder(p.centre.lat());
    const auto lon = placeholder(p.centre.lon());
    const auto radius = placeholder(p.radius_km);
    const std::string distance = "2 * 6371.0088 * ASIN(LEAST(1.0, SQRT(POWER(SIN(RADIANS(latitude - " + lat +
                                 ") / 2), 2) + COS(RADIANS(" + lat + ")) * COS(RADIANS(latitude)) * "
                                 "POWER(SIN(RADIANS(longitude - " + lon + ") / 2), 2))))";
    const std::string test = distance + " <= " + radius;
    return "(latitude IS NOT NULL AND longitude IS NOT NULL AND " + (include ? test : "NOT (" + test + ")") + ")";
  }

  std::vector<SqlParam> params_;
};

} // namespace detail

inline SqlStatement emit(const Query& q) {
  detail::SqlBuilder builder;
  std::string where;
  for (std::size_t i = 0; i < q.clauses().size(); ++i) {
    if (i > 0)
      where += q.connectors()[i - 1] == Connector::And ? " AND " : " OR ";
    where += builder.clause(q.clauses()[i]);
  }
  return {std::string(kSelectPrefix) + where + std::string(kSelectSuffix), builder.take_params()};
}

inline Json sql_to_json(const SqlStatement& s) {
  Json params = Json::array();
  for (const auto& p : s.params)
    std::visit([&](const auto& v) { params.push_back(v); }, p);
  return Json{{"text", s.text}, {"params", params}};
}

// ---------------------------------------------------------------------------
// Interpreter

namespace sql {

struct Null {
  friend bool operator==(Null, Null) { return true; }
};
using Value = std::variant<Null, bool, std::int64_t, double, std::string>;

enum class Column { Name, Latitude, Longitude, HoursFrom, HoursTo, FreqLow, FreqHigh };

struct Token {
  enum Kind { Word, Number, Param, Symbol, End } kind;
  std::string text;
  std::size_t offset;
};

inline std::vector<Token> tokenize(std::string_view s, std::size_t base) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& why) {
    throw UnsupportedSql(why + " at offset " + std::to_string(base + i));
  };
  while (i < s.size()) {
    const unsigned char c = s[i];
    if (std::isspace(c)) {
      ++i;
    } else if (std::isalpha(c) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_'))
        ++j;
      out.push_back({Token::Word, std::string(s.substr(i, j - i)), base + i});
      i = j;
    } else if (std::isdigit(c)) {
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
          ++j;
      }
      out.push_back({Token::Number, std::string(s.substr(i, j - i)), base + i});
      i = j;
    } else if (c == '$') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j])))
        ++j;
      if (j == i + 1)
        fail("bare '$'");
      out.push_back({Token::Param, std::string(s.substr(i + 1, j - i - 1)), base + i});
      i = j;
    } else {
      static constexpr std::string_view two[] = {"<=", ">=", "<>"};
      bool matched = false;
      for (auto op : two)
        if (s.substr(i, 2) == op) {
          out.push_back({Token::Symbol, std::string(op), base + i});
          i += 2;
          matched = true;
          break;
        }
      if (matched)
        continue;
      if (std::string_view("()*/+-<>=,").find(static_cast<char>(c)) == std::string_view::npos)
        fail(std::string("unexpected character '") + static_cast<char>(c) + "'");
      out.push_back({Token::Symbol, std::string(1, static_cast<char>(c)), base + i});
      ++i;
    }
  }
  out.push_back({Token::End, "", base + s.size()});
  return out;
}

struct Node {
  enum Kind { Literal, ParamRef, ColumnRef, Unary, Binary, Not, And, Or, IsNull, IsNotNull, Call } kind;
  std::string op; // operator symbol or function name
  Value literal;
  std::size_t param = 0;
  Column column = Column::Name;
  std::vector<std::unique_ptr<Node>> args;
};
using NodePtr = std::unique_ptr<Node>;

inline NodePtr make(Node::Kind kind, std::string op = {}) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->op = std::move(op);
  return n;
}

class ExprParser {
public:
  explicit ExprParser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  NodePtr parse_all() {
    auto e = parse_or();
    if (cur().kind != Token::End)
      fail("trailing input");
    return e;
  }

  std::size_t max_param() const { return max_param_; }

private:
  const Token& cur() const { return toks_[pos_]; }
  [[noreturn]] void fail(const std::string& why) const {
    throw UnsupportedSql(why + " at offset " + std::to_string(cur().offset) + " near '" + cur().text + "'");
  }
  bool is_word(std::string_view w) const { return cur().kind == Token::Word && cur().text == w; }
  bool is_symbol(std::string_view s) const { return cur().kind == Token::Symbol && cur().text == s; }
  void expect_symbol(std::string_view s) {
    if (!is_symbol(s))
      fail("expected '" + std::string(s) + "'");
    ++pos_;
  }

  NodePtr parse_or() {
    auto left = parse_and();
    while (is_word("OR")) {
      ++pos_;
      auto n = make(Node::Or);
      n->args.push_back(std::move(left));
      n->args.push_back(parse_and());
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_and() {
    auto left = parse_not();
    while (is_word("AND")) {
      ++pos_;
      auto n = make(Node::And);
      n->args.push_back(std::move(left));
      n->args.push_back(parse_not());
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_not() {
    if (is_word("NOT")) {
      ++pos_;
      auto n = make(Node::Not);
      n->args.push_back(parse_not());
      return n;
    }
    return parse_comparison();
  }

  NodePtr parse_comparison() {
    auto left = parse_additive();
    if (is_word("IS")) {
      ++pos_;
      bool negated = false;
      if (is_word("NOT")) {
        ++pos_;
        negated = true;
      }
      if (!is_word("NULL"))
        fail("expected NULL");
      ++pos_;
      auto n = make(negated ? Node::IsNotNull : Node::IsNull);
      n->args.push_back(std::move(left));
      return n;
    }
    for (std::string_view op : {"<=", ">=", "<>", "<", ">", "="}) {
      if (is_symbol(op)) {
        ++pos_;
        auto n = make(Node::Binary, std::string(op));
        n->args.push_back(std::move(left));
        n->args.push_back(parse_additive());
        return n;
      }
    }
    return left;
  }

  NodePtr parse_additive() {
    auto left = parse_multiplicative();
    while (is_symbol("+") || is_symbol("-")) {
      auto n = make(Node::Binary, cur().text);
      ++pos_;
      n->args.push_back(std::move(left));
      n->args.push_back(parse_multiplicative());
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_multiplicative() {
    auto left = parse_unary();
    while (is_symbol("*") || is_symbol("/")) {
      auto n = make(Node::Binary, cur().text);
      ++pos_;
      n->args.push_back(std::move(left));
      n->args.push_back(parse_unary());
      left = std::move(n);
    }
    return left;
  }

  NodePtr parse_unary() {
    if (is_symbol("-")) {
      ++pos_;
      auto n = make(Node::Unary, "-");
      n->args.push_back(parse_unary());
      return n;
    }
    return parse_primary();
  }

  NodePtr parse_primary() {
    const Token& t = cur();
    if (t.kind == Token::Number) {
      auto n = make(Node::Literal);
      if (t.text.find('.') == std::string::npos) {
        std::int64_t v = 0;
        auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        if (res.ec != std::errc())
          fail("integer literal out of range");
        n->literal = v;
      } else {
        double v = 0;
        std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
        n->literal = v;
      }
      ++pos_;
      return n;
    }
    if (t.kind == Token::Param) {
      auto n = make(Node::ParamRef);
      std::size_t index = 0;
      auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), index);
      if (res.ec != std::errc() || index == 0)
        fail("bad placeholder");
      n->param = index;
      max_param_ = std::max(max_param_, index);
      ++pos_;
      return n;
    }
    if (is_symbol("(")) {
      ++pos_;
      auto inner = parse_or();
      expect_symbol(")");
      return inner;
    }
    if (t.kind == Token::Word) {
      static constexpr std::pair<std::string_view, Column> columns[] = {
          {"name", Column::Name},           {"latitude", Column::Latitude}, {"longitude", Column::Longitude},
          {"hours_from_min", Column::HoursFrom}, {"hours_to_min", Column::HoursTo},
          {"freq_low_hz", Column::FreqLow}, {"freq_high_hz", Column::FreqHigh}};
      for (auto [name, col] : columns)
        if (t.text == name) {
          auto n = make(Node::ColumnRef);
          n->column = col;
          ++pos_;
          return n;
        }
      static constexpr std::pair<std::string_view, int> functions[] = {
          {"RADIANS", 1}, {"SIN", 1}, {"COS", 1}, {"ASIN", 1}, {"SQRT", 1}, {"POWER", 2}, {"LEAST", -1}};
      for (auto [name, arity] : functions)
        if (t.text == name) {
          auto n = make(Node::Call, t.text);
          ++pos_;
          expect_symbol("(");
          n->args.push_back(parse_or());
          while (is_symbol(",")) {
            ++pos_;
            n->args.push_back(parse_or());
          }
          expect_symbol(")");
          if (arity >= 0 && static_cast<int>(n->args.size()) != arity)
            fail("wrong number of arguments to " + std::string(name));
          return n;
        }
    }
    fail("unsupported expression");
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::size_t max_param_ = 0;
};

class RowEvaluator {
public:
  RowEvaluator(const Transmitter& row, const std::vector<SqlParam>& params) : row_(row), params_(params) {}

  Value eval(const Node& n) const {
    switch (n.kind) {
    case Node::Literal:
      return n.literal;
    case Node::ParamRef:
      return std::visit([](const auto& v) -> Value { return v; }, params_.at(n.param - 1));
    case Node::ColumnRef:
      return column(n.column);
    case Node::Unary: {
      Value v = eval(*n.args[0]);
      if (is_null(v))
        return Null{};
      if (auto* i = std::get_if<std::int64_t>(&v))
        return -*i;
      return -as_real(v);
    }
    case Node::Binary:
      return binary(n.op, eval(*n.args[0]), eval(*n.args[1]));
    case Node::Not: {
      Value v = eval(*n.args[0]);
      if (is_null(v))
        return Null{};
      return !as_bool(v);
    }
    case Node::And: {
      Value l = eval(*n.args[0]);
      Value r = eval(*n.args[1]);
      if ((!is_null(l) && !as_bool(l)) || (!is_null(r) && !as_bool(r)))
        return false;
      if (is_null(l) || is_null(r))
        return Null{};
      return true;
    }
    case Node::Or: {
      Value l = eval(*n.args[0]);
      Value r = eval(*n.args[1]);
      if ((!is_null(l) && as_bool(l)) || (!is_null(r) && as_bool(r)))
        return true;
      if (is_null(l) || is_null(r))
        return Null{};
      return false;
    }
    case Node::IsNull:
      return is_null(eval(*n.args[0]));
    case Node::IsNotNull:
      return !is_null(eval(*n.args[0]));
    case Node::Call:
      return call(n);
    }
    throw UnsupportedSql("unknown node");
  }

private:
  static bool is_null(const Value& v) { return std::holds_alternative<Null>(v); }

  static bool as_bool(const Value& v) {
    if (auto* b = std::get_if<bool>(&v))
      return *b;
    throw UnsupportedSql("type error: expected a boolean");
  }

  static double as_real(const Value& v) {
    if (auto* d = std::get_if<double>(&v))
      return *d;
    if (auto* i = std::get_if<std::int64_t>(&v))
      return static_cast<double>(*i);
    throw UnsupportedSql("type error: expected a number");
  }

  static bool is_number(const Value& v) {
    return std::holds_alternative<double>(v) || std::holds_alternative<std::int64_t>(v);
  }

  Value column(Column c) const {
    switch (c) {
    case Column::Name:
      return row_.name;
    case Column::Latitude:
      return row_.location ? Value(row_.location->lat()) : Value(Null{});
    case Column::Longitude:
      return row_.location ? Value(row_.location->lon()) : Value(Null{});
    case Column::HoursFrom:
      return static_cast<std::int64_t>(row_.hours.from());
    case Column::HoursTo:
      return static_cast<std::int64_t>(row_.hours.to());
    case Column::FreqLow:
      return row_.band.low_hz();
    case Column::FreqHigh:
      return row_.band.high_hz();
    }
    return Null{};
  }

  static Value binary(const std::string& op, const Value& l, const Value& r) {
    if (is_null(l) || is_null(r))
      return Null{};
    if (op == "=" || op == "<>" || op == "<" || op == "<=" || op == ">" || op == ">=") {
      int cmp = 0;
      if (auto *ls = std::get_if<std::string>(&l), *rs = std::get_if<std::string>(&r); ls && rs) {
        cmp = ls->compare(*rs);
      } else if (auto *li = std::get_if<std::int64_t>(&l), *ri = std::get_if<std::int64_t>(&r); li && ri) {
        cmp = (*li > *ri) - (*li < *ri);
      } else if (is_number(l) && is_number(r)) {
        const double a = as_real(l), b = as_real(r);
        cmp = (a > b) - (a < b);
      } else {
        throw UnsupportedSql("type error: incomparable operands to " + op);
      }
      if (op == "=")
        return cmp == 0;
      if (op == "<>")
        return cmp != 0;
      if (op == "<")
        return cmp < 0;
      if (op == "<=")
        return cmp <= 0;
      if (op == ">")
        return cmp > 0;
      return cmp >= 0;
    }
    if (!is_number(l) || !is_number(r))
      throw UnsupportedSql("type error: arithmetic on non-numbers");
    auto *li = std::get_if<std::int64_t>(&l), *ri = std::get_if<std::int64_t>(&r);
    if (li && ri) {
      if (op == "+")
        return *li + *ri;
      if (op == "-")
        return *li - *ri;
      if (op == "*")
        return *li * *ri;
      if (*ri == 0)
        throw UnsupportedSql("division by zero");
      return *li / *ri;
    }
    const double a = as_real(l), b = as_real(r);
    if (op == "+")
      return a + b;
    if (op == "-")
      return a - b;
    if (op == "*")
      return a * b;
    return a / b;
  }

  Value call(const Node& n) const {
    std::vector<Value> args;
    for (const auto& a : n.args)
      args.push_back(eval(*a));
    if (n.op == "LEAST") {
      // NULL arguments are skipped; the result is NULL only when all are.
      Value best = Null{};
      for (const auto& v : args) {
        if (is_null(v))
          continue;
        if (is_null(best) || as_real(v) < as_real(best))
          best = v;
      }
      return best;
    }
    for (const auto& v : args)
      if (is_null(v))
        return Null{};
    const double x = as_real(args[0]);
    if (n.op == "RADIANS")
      return x * (std::numbers::pi / 180.0);
    if (n.op == "SIN")
      return std::sin(x);
    if (n.op == "COS")
      return std::cos(x);
    if (n.op == "ASIN")
      return std::asin(x);
    if (n.op == "SQRT")
      return std::sqrt(x);
    return std::pow(x, as_real(args[1]));
  }

  const Transmitter& row_;
  const std::vector<SqlParam>& params_;
};

} // namespace sql

/// Runs a statement produced by emit() over `d`. Anything outside the emitted
/// dialect raises UnsupportedSql.
inline std::vector<Transmitter> interpret(const SqlStatement& s, const Dataset& d) {
  std::string_view text = s.text;
  if (!text.starts_with(kSelectPrefix) || !text.ends_with(kSelectSuffix) ||
      text.size() < kSelectPrefix.size() + kSelectSuffix.size())
    throw UnsupportedSql("statement is not a SELECT over transmitters ordered by name");
  auto where = text.substr(kSelectPrefix.size(), text.size() - kSelectPrefix.size() - kSelectSuffix.size());

  sql::ExprParser parser(sql::tokenize(where, kSelectPrefix.size()));
  const sql::NodePtr expr = parser.parse_all();
  if (parser.max_param() > s.params.size())
    throw UnsupportedSql("placeholder $" + std::to_string(parser.max_param()) + " has no parameter");

  std::vector<Transmitter> out;
  for (const auto& row : d) {
    sql::Value v = sql::RowEvaluator(row, s.params).eval(*expr);
    if (auto* b = std::get_if<bool>(&v); b && *b)
      out.push_back(row);
    else if (!std::holds_alternative<bool>(v) && !std::holds_alternative<sql::Null>(v))
      throw UnsupportedSql("WHERE clause is not a boolean expression");
  }
  std::stable_sort(out.begin(), out.end(), [](const Transmitter& a, const Transmitter& b) { return a.name < b.name; });
  return out;
}

} // namespace stsq
