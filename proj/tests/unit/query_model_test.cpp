#include <gtest/gtest.h>

#include "stsq/query_model.hpp"
#include "support/generators.hpp"

using namespace stsq;

namespace {

Clause name_clause(const std::string& n, bool include = true) { return {include, NameIs{n}}; }

std::string violation_path(const std::string& text) {
  try {
    query_from_json(text);
  } catch (const SchemaViolation& e) {
    return e.path();
  }
  return "<no violation>";
}

} // namespace

TEST(Query, ShapeInvariants) {
  EXPECT_THROW(Query({}, {}), InvalidValue);
  EXPECT_THROW(Query({name_clause("a"), name_clause("b")}, {}), InvalidValue);
  EXPECT_NO_THROW(Query({name_clause("a"), name_clause("b")}, {Connector::Or}));
  EXPECT_THROW(WithinKm(GeoPoint(0, 0), 0.0), InvalidValue);
  EXPECT_THROW(WithinKm(GeoPoint(0, 0), -1.0), InvalidValue);
}

TEST(QueryJson, SingleNameClause) {
  Query q(name_clause("Stadium"));
  EXPECT_EQ(query_to_json(q),
            R"({"clauses":[{"include":true,"predicate":{"type":"name","value":"Stadium"}}],"connectors":[]})");
}

TEST(QueryJson, OrConnector) {
  Query q({name_clause("a"), name_clause("b", false)}, {Connector::Or});
  auto j = query_to_json_value(q);
  EXPECT_EQ(j["connectors"], Json::array({"or"}));
  EXPECT_EQ(j["clauses"][1]["include"], false);
}

TEST(QueryJson, AllPredicateShapes) {
  Query q({{true, WithinKm(GeoPoint(38.5, -90.25), 10)},
           {false, ActiveDuring{HoursOfOperation(1200, 600)}},
           {true, BandOverlaps{FrequencyBand(90'000'000, 100'000'000)}}},
          {Connector::And, Connector::Or});
  EXPECT_EQ(query_to_json(q),
            R"({"clauses":[{"include":true,"predicate":{"type":"within","lat":38.5,"lon":-90.25,"radius_km":10.0}},)"
            R"({"include":false,"predicate":{"type":"active","from_min":1200,"to_min":600}},)"
            R"({"include":true,"predicate":{"type":"band","low_hz":90000000,"high_hz":100000000}}],)"
            R"("connectors":["and","or"]})");
  EXPECT_EQ(query_from_json(query_to_json(q)), q);
}

TEST(QueryJson, SchemaViolations) {
  EXPECT_EQ(violation_path(R"({"clauses":[{"include":true,"predicate":{"type":"name","value":"a"}}],"connectors":["and"]})"),
            "connectors");
  EXPECT_EQ(violation_path(R"({"clauses":[{"include":true,"predicate":{"type":"colour"}}],"connectors":[]})"),
            "clauses[0].predicate.type");
  EXPECT_EQ(violation_path(R"({"clauses":[],"connectors":[]})"), "clauses");
  EXPECT_EQ(violation_path(R"([1,2])"), "");
  EXPECT_EQ(violation_path(
                R"({"clauses":[{"include":true,"predicate":{"type":"band","low_hz":5,"high_hz":4}}],"connectors":[]})"),
            "clauses[0].predicate");
  EXPECT_EQ(violation_path(
                R"({"clauses":[{"include":true,"predicate":{"type":"active","from_min":60,"to_min":60}}],"connectors":[]})"),
            "clauses[0].predicate");
  EXPECT_NE(violation_path(R"({"clauses":[{"include":"yes","predicate":{"type":"name","value":"a"}}],"connectors":[]})"),
            "<no violation>");
  EXPECT_THROW(query_from_json("{not json"), MalformedJson);
}

TEST(Normalize, Examples) {
  Clause c1 = name_clause("1"), c2 = name_clause("2"), c3 = name_clause("3");
  NormalForm g1 = normalize(Query({c1, c2, c3}, {Connector::And, Connector::Or}));
  EXPECT_EQ(g1, (NormalForm{{c1, c2}, {c3}}));
  EXPECT_EQ(normalize(Query({c1, c2, c3}, {Connector::Or, Connector::Or})), (NormalForm{{c1}, {c2}, {c3}}));
  EXPECT_EQ(normalize(Query(c1)), (NormalForm{{c1}}));
  EXPECT_EQ(normalize(Query({c1, c2, c3}, {Connector::Or, Connector::And})), (NormalForm{{c1}, {c2, c3}}));
}

TEST(Normalize, PreservesClausesInOrder) {
  gen::Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    auto q = gen::query(rng, nullptr, 8);
    auto nf = normalize(q);
    std::vector<Clause> flat;
    for (const auto& g : nf) {
      ASSERT_FALSE(g.empty());
      flat.insert(flat.end(), g.begin(), g.end());
    }
    ASSERT_EQ(flat, q.clauses());
    auto ors = std::count(q.connectors().begin(), q.connectors().end(), Connector::Or);
    ASSERT_EQ(nf.size(), static_cast<std::size_t>(ors) + 1);
  }
}

TEST(QueryJson, RoundTripProperty) {
  gen::Rng rng(32);
  for (int i = 0; i < 1000; ++i) {
    auto q = gen::query(rng, nullptr, 6, kMaxHertz);
    ASSERT_EQ(query_from_json(query_to_json(q)), q) << query_to_json(q);
  }
}
