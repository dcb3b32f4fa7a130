#include <gtest/gtest.h>

#include <thread>

#include "stsq/query_dsl.hpp"
#include "stsq/service.hpp"
#include "support/generators.hpp"

using namespace stsq;

namespace {

class ServiceTest : public ::testing::Test {
protected:
  void SetUp() override {
    ServiceConfig cfg;
    cfg.host = "127.0.0.1";
    cfg.port = 0;
    cfg.cors_origin = "http://ui.example";
    service_ = std::make_unique<Service>(api_, cfg);
    ASSERT_TRUE(service_->bind());
    thread_ = std::thread([this] { service_->run(); });
    service_->wait_until_ready();
    client_ = std::make_unique<httplib::Client>("127.0.0.1", service_->port());
  }

  void TearDown() override {
    service_->stop();
    if (thread_.joinable())
      thread_.join();
  }

  httplib::Result post(const std::string& path, const std::string& body, const char* type = "application/json") {
    return client_->Post(path, body, type);
  }

  static Json json(const httplib::Result& r) { return Json::parse(r->body); }

  Api api_{gen::sample()};
  std::unique_ptr<Service> service_;
  std::thread thread_;
  std::unique_ptr<httplib::Client> client_;
};

} // namespace

TEST_F(ServiceTest, Transmitters) {
  auto r = client_->Get("/api/transmitters");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(r->get_header_value("Content-Type"), "application/json");
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "http://ui.example");
  EXPECT_EQ(json(r)["transmitters"].size(), 6u);
  EXPECT_EQ(client_->Get("/api/transmitters")->body, r->body);
}

TEST_F(ServiceTest, Query) {
  auto r = post("/api/query", query_to_json(parse("active 01:00..04:00")));
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  EXPECT_EQ(json(r)["matches"].size(), 4u);
  EXPECT_EQ(json(post("/api/query", query_to_json(parse("freq 90MHz +/- 1MHz"))))["matches"], Json::array());

  auto bad = post("/api/query", R"({"clauses":[{"include":true,"predicate":{"type":"name","value":"a"}}],"connectors":["and"]})");
  EXPECT_EQ(bad->status, 400);
  EXPECT_EQ(json(bad)["error"]["path"], "connectors");

  auto big = post("/api/query", std::string(kMaxJsonBody + 10, ' '));
  ASSERT_TRUE(big);
  EXPECT_EQ(big->status, 413);
  EXPECT_TRUE(json(big)["error"]["message"].is_string());
}

TEST_F(ServiceTest, Analytics) {
  auto gaps = post("/api/gaps", R"({"window":{"low_hz":25000000,"high_hz":35000000},"during":{"from_min":180,"to_min":480}})");
  EXPECT_EQ(gaps->status, 200);
  EXPECT_EQ(json(gaps)["gaps"].size(), 2u);
  EXPECT_EQ(post("/api/gaps", R"({"window":{"low_hz":9,"high_hz":1},"during":{"from_min":0,"to_min":60}})")->status, 400);

  auto conflicts = post("/api/conflicts", R"({"radius_km":50})");
  EXPECT_EQ(conflicts->body, R"({"conflicts":[],"indeterminate":[]})");
  EXPECT_EQ(post("/api/conflicts", R"({"radius_km":0})")->status, 400);

  const auto& m = *api_.snapshot()->find("Mobile Phone Tower 123")->location;
  auto times = post("/api/active-times", Json{{"lat", m.lat()}, {"lon", m.lon()}, {"radius_km", 20}}.dump());
  EXPECT_EQ(times->body, R"({"intervals":[{"from_min":0,"to_min":1440}]})");
  EXPECT_EQ(post("/api/active-times", R"({"lat":0,"lon":0})")->status, 400);
}

TEST_F(ServiceTest, ImportAndExport) {
  const auto before = client_->Get("/api/transmitters")->body;
  auto bad = post("/api/import", "name,latitude,longitude,hours,min_frequency,max_frequency\nx,,,25:00-3:00,1,2\n", "text/csv");
  EXPECT_EQ(bad->status, 422);
  EXPECT_EQ(json(bad)["report"]["errors"].size(), 1u);
  EXPECT_EQ(client_->Get("/api/transmitters")->body, before);

  auto big = post("/api/import", std::string(kMaxImportBody + 10, 'x'), "text/csv");
  ASSERT_TRUE(big);
  EXPECT_EQ(big->status, 413);

  auto exported = client_->Get("/api/export");
  EXPECT_EQ(exported->status, 200);
  EXPECT_EQ(exported->get_header_value("Content-Type"), "text/csv; charset=utf-8");

  auto small = post("/api/import", "name,latitude,longitude,hours,min_frequency,max_frequency\nonly,1,2,1:00-2:00,5,6\n", "text/csv");
  EXPECT_EQ(small->body, R"({"imported":1,"errors":[]})");
  EXPECT_EQ(json(client_->Get("/api/transmitters"))["transmitters"].size(), 1u);

  auto restore = post("/api/import", exported->body, "text/csv");
  EXPECT_EQ(restore->status, 200);
  EXPECT_EQ(*api_.snapshot(), gen::sample());
}

TEST_F(ServiceTest, ReadsDuringImportSeeWholeSnapshots) {
  const auto small_csv = std::string("name,latitude,longitude,hours,min_frequency,max_frequency\nonly,1,2,1:00-2:00,5,6\n");
  const auto full_csv = export_csv(gen::sample());
  std::thread writer([&] {
    httplib::Client c("127.0.0.1", service_->port());
    for (int i = 0; i < 20; ++i)
      c.Post("/api/import", i % 2 ? full_csv : small_csv, "text/csv");
  });
  for (int i = 0; i < 40; ++i) {
    auto r = client_->Get("/api/transmitters");
    ASSERT_TRUE(r);
    auto n = json(r)["transmitters"].size();
    ASSERT_TRUE(n == 1 || n == 6) << n;
  }
  writer.join();
}

TEST_F(ServiceTest, CorsAndUnknownRoutes) {
  auto pre = client_->Options("/api/query");
  ASSERT_TRUE(pre);
  EXPECT_EQ(pre->status, 204);
  EXPECT_EQ(pre->get_header_value("Access-Control-Allow-Origin"), "http://ui.example");
  auto missing = client_->Get("/api/nope");
  EXPECT_EQ(missing->status, 404);
  EXPECT_TRUE(json(missing)["error"]["path"].is_string());
}

TEST(HttpGeocoder, TalksToProvider) {
  httplib::Server provider;
  provider.Get("/v1/geocode", [](const httplib::Request& req, httplib::Response& res) {
    const auto address = req.get_param_value("address");
    if (address == "St. Louis, MO")
      res.set_content(R"({"lat":38.627,"lon":-90.1994})", "application/json");
    else if (address == "broken")
      res.set_content("[]", "application/json");
    else
      res.status = 404;
  });
  const int port = provider.bind_to_any_port("127.0.0.1");
  std::thread t([&] { provider.listen_after_bind(); });
  provider.wait_until_ready();

  HttpGeocoder g("http://127.0.0.1:" + std::to_string(port) + "/v1/");
  auto p = geocode("St. Louis, MO", g);
  EXPECT_EQ(p.lat(), 38.627);
  EXPECT_EQ(p.lon(), -90.1994);
  EXPECT_THROW(geocode("Atlantis", g), AddressNotFound);
  EXPECT_THROW(geocode("broken", g), ProviderUnavailable);
  EXPECT_THROW(geocode("", g), InvalidValue);

  Api api({}, std::make_shared<HttpGeocoder>(g));
  EXPECT_EQ(api.get_geocode("St. Louis, MO").status, 200);

  provider.stop();
  t.join();
  EXPECT_THROW(g.lookup("St. Louis, MO"), ProviderUnavailable);
  EXPECT_EQ(api.get_geocode("St. Louis, MO").status, 502);
}
