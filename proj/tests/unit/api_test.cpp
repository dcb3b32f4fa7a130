#include <gtest/gtest.h>

#include "stsq/api.hpp"
#include "stsq/query_dsl.hpp"
#include "support/generators.hpp"

using namespace stsq;

namespace {

Json body_of(const ApiResponse& r) { return Json::parse(r.body); }

std::string error_path(const ApiResponse& r) { return body_of(r)["error"]["path"].get<std::string>(); }

} // namespace

TEST(Api, Transmitters) {
  Api api(gen::sample());
  auto r = api.get_transmitters();
  EXPECT_EQ(r.status, 200);
  auto j = body_of(r);
  ASSERT_EQ(j["transmitters"].size(), 6u);
  for (const auto& t : j["transmitters"]) {
    if (t["name"] == "International Aeronautical Distress") {
      EXPECT_TRUE(t["location"].is_null());
    }
  }
  EXPECT_EQ(j["transmitters"][0].dump(),
            R"({"name":"Emergency Communications System","location":{"lat":38.6269,"lon":90.19933611111111},)"
            R"("hours":{"from_min":0,"to_min":1440},"band":{"low_hz":0,"high_hz":5032}})");
  EXPECT_EQ(api.get_transmitters().body, r.body);
  EXPECT_EQ(Api().get_transmitters().body, R"({"transmitters":[]})");
}

TEST(Api, Query) {
  Api api(gen::sample());
  auto r = api.post_query(query_to_json(parse("active 01:00..04:00")));
  ASSERT_EQ(r.status, 200);
  auto j = body_of(r);
  EXPECT_EQ(j["matches"].size(), 4u);
  EXPECT_EQ(j["sql"]["params"], Json::array({60, 240}));

  auto empty = body_of(api.post_query(query_to_json(parse("freq 90MHz +/- 1MHz"))));
  EXPECT_EQ(empty["matches"], Json::array());

  auto bad = api.post_query(R"({"clauses":[{"include":true,"predicate":{"type":"name","value":"a"}}],"connectors":["or"]})");
  EXPECT_EQ(bad.status, 400);
  EXPECT_EQ(error_path(bad), "connectors");
  EXPECT_EQ(api.post_query("{").status, 400);
  EXPECT_EQ(api.post_query(std::string(kMaxJsonBody + 1, ' ')).status, 413);
}

TEST(Api, QuerySqlAgreesWithMatches) {
  gen::Rng rng(91);
  for (int i = 0; i < 50; ++i) {
    Api api(gen::dataset(rng, 30));
    auto q = gen::query(rng, api.snapshot().get());
    auto j = body_of(api.post_query(query_to_json(q)));
    SqlStatement s{j["sql"]["text"].get<std::string>(), {}};
    for (const auto& p : j["sql"]["params"]) {
      if (p.is_string())
        s.params.emplace_back(p.get<std::string>());
      else if (p.is_number_integer())
        s.params.emplace_back(p.get<std::int64_t>());
      else
        s.params.emplace_back(p.get<double>());
    }
    ASSERT_EQ(transmitters_to_json(interpret(s, *api.snapshot())), j["matches"]);
  }
}

TEST(Api, Gaps) {
  Api api(gen::sample());
  auto r = api.post_gaps(R"({"window":{"low_hz":25000000,"high_hz":35000000},"during":{"from_min":180,"to_min":480}})");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.body, R"({"window":{"low_hz":25000000,"high_hz":35000000},"gaps":[{"low_hz":25000000,"high_hz":25998999},)"
                    R"({"low_hz":26001001,"high_hz":35000000}]})");
  auto inverted = api.post_gaps(R"({"window":{"low_hz":5,"high_hz":4},"during":{"from_min":180,"to_min":480}})");
  EXPECT_EQ(inverted.status, 400);
  EXPECT_EQ(error_path(inverted), "window");
  EXPECT_EQ(api.post_gaps(R"({"window":{"low_hz":1,"high_hz":4},"during":{"from_min":180,"to_min":180}})").status, 400);
  EXPECT_EQ(Api().post_gaps(R"({"window":{"low_hz":1,"high_hz":4},"during":{"from_min":0,"to_min":1440}})").body,
            R"({"window":{"low_hz":1,"high_hz":4},"gaps":[{"low_hz":1,"high_hz":4}]})");
}

TEST(Api, Conflicts) {
  Api api(gen::sample());
  EXPECT_EQ(api.post_conflicts(R"({"radius_km":50})").body, R"({"conflicts":[],"indeterminate":[]})");
  auto zero = api.post_conflicts(R"({"radius_km":0})");
  EXPECT_EQ(zero.status, 400);
  EXPECT_EQ(error_path(zero), "radius_km");
  auto h = HoursOfOperation::full_day();
  Api dup(Dataset({{"b", GeoPoint(1, 1), h, {10, 20}}, {"a", GeoPoint(1, 1), h, {10, 20}}}));
  EXPECT_EQ(dup.post_conflicts(R"({"radius_km":1})").body,
            R"({"conflicts":[{"a":"a","b":"b","band_overlap":{"low_hz":10,"high_hz":20},"distance_km":0.0}],"indeterminate":[]})");
}

TEST(Api, ActiveTimes) {
  Api api(gen::sample());
  const auto& m = *api.snapshot()->find("Mobile Phone Tower 123")->location;
  Json req{{"lat", m.lat()}, {"lon", m.lon()}, {"radius_km", 20}};
  EXPECT_EQ(api.post_active_times(req.dump()).body, R"({"intervals":[{"from_min":0,"to_min":1440}]})");
  EXPECT_EQ(api.post_active_times(R"({"lat":-45,"lon":170,"radius_km":10})").body, R"({"intervals":[]})");
  Api one(Dataset({{"s", GeoPoint(1, 1), HoursOfOperation(1200, 600), {1, 2}}}));
  EXPECT_EQ(one.post_active_times(R"({"lat":1,"lon":1,"radius_km":1})").body,
            R"({"intervals":[{"from_min":1200,"to_min":600}]})");
  EXPECT_EQ(error_path(api.post_active_times(R"({"lat":91,"lon":1,"radius_km":1})")), "lat");
  EXPECT_EQ(error_path(api.post_active_times(R"({"lat":1,"lon":1,"radius_km":-3})")), "radius_km");
}

TEST(Api, ImportExport) {
  Api api;
  const auto csv = gen::slurp(gen::data_path("sample.csv"));
  auto r = api.post_import(csv);
  EXPECT_EQ(r.status, 200);
  EXPECT_EQ(r.body, R"({"imported":6,"errors":[]})");
  EXPECT_EQ(*api.snapshot(), gen::sample());

  const auto before = api.get_transmitters().body;
  auto bad = api.post_import(csv + "Broken,,,25:00-3:00,1MHz,1kHz,,\n");
  EXPECT_EQ(bad.status, 422);
  auto j = body_of(bad);
  EXPECT_EQ(j["error"]["path"], "rows");
  EXPECT_EQ(j["report"]["imported"], 6);
  EXPECT_EQ(j["report"]["errors"][0]["row"], 7);
  EXPECT_EQ(j["report"]["errors"][0]["field"], "hours");
  EXPECT_EQ(api.get_transmitters().body, before);

  EXPECT_EQ(error_path(api.post_import("nonsense\n")), "header");
  EXPECT_EQ(api.post_import(std::string(kMaxImportBody + 1, 'x')).status, 413);

  auto exported = api.get_export();
  EXPECT_EQ(exported.content_type.rfind("text/csv", 0), 0u);
  Api again;
  EXPECT_EQ(again.post_import(exported.body).status, 200);
  EXPECT_EQ(*again.snapshot(), *api.snapshot());
}

TEST(Api, Geocode) {
  EXPECT_EQ(Api().get_geocode("x").status, 503);
  Api api({}, std::make_shared<FixtureGeocoder>(FixtureGeocoder{{"Adelaide", {-34.9285, 138.6007}}}));
  EXPECT_EQ(api.get_geocode("Adelaide").body, R"({"lat":-34.9285,"lon":138.6007})");
  EXPECT_EQ(api.get_geocode("Atlantis").status, 404);
  EXPECT_EQ(api.get_geocode("").status, 400);
}

TEST(Api, ErrorEnvelope) {
  Api api(gen::sample());
  for (const auto& r : {api.post_query("[]"), api.post_gaps("{}"), api.post_conflicts("nope"), api.post_active_times("{}"),
                        api.post_import("")}) {
    ASSERT_GE(r.status, 400);
    auto j = body_of(r);
    ASSERT_TRUE(j["error"]["path"].is_string()) << r.body;
    ASSERT_TRUE(j["error"]["message"].is_string()) << r.body;
  }
}
