#include <gtest/gtest.h>

#include "stsq/tasks.hpp"
#include "support/corpus_spec.hpp"

using namespace stsq;

TEST(Corpus, ShippedFileMatchesOracle) {
  const auto shipped = Json::parse(gen::slurp(gen::data_path("tasks.json")));
  EXPECT_EQ(shipped, corpus::generate(gen::sample()));
}

TEST(Corpus, AllTasksPass) {
  auto d = gen::sample();
  auto tasks = load_corpus(gen::slurp(gen::data_path("tasks.json")));
  ASSERT_EQ(tasks.size(), 12u);
  for (const auto& t : tasks) {
    auto r = run_task(t, d);
    EXPECT_TRUE(r.passed) << t.id << ": " << r.detail;
  }
}

TEST(Corpus, HeadlineResults) {
  auto tasks = load_corpus(gen::slurp(gen::data_path("tasks.json")));
  auto find = [&](const std::string& id) {
    return *std::find_if(tasks.begin(), tasks.end(), [&](const Task& t) { return t.id == id; });
  };
  EXPECT_TRUE(find("S1").expected_names.empty());
  EXPECT_EQ(find("S2").expected_names,
            (std::vector<std::string>{"Emergency Communications System", "International Aeronautical Distress",
                                      "Mobile Phone Tower 123", "University Satcom"}));
  EXPECT_EQ(find("S6").expected_names.size(), 6u);
  ASSERT_TRUE(find("S3").gaps);
  EXPECT_EQ(find("S3").gaps->expected.size(), 2u);
}

TEST(Corpus, WrongExpectationFails) {
  auto tasks = load_corpus(R"({"tasks":[{"id":"x","dsl":"name = \"Stadium\"","expected_names":["Nope"]}]})");
  auto r = run_task(tasks[0], gen::sample());
  EXPECT_FALSE(r.passed);
  EXPECT_FALSE(r.detail.empty());
}

TEST(Corpus, SchemaErrors) {
  EXPECT_THROW(load_corpus("[]"), SchemaViolation);
  EXPECT_THROW(load_corpus("{"), MalformedJson);
  EXPECT_THROW(load_corpus(R"({"tasks":[{"id":"a","dsl":"freq 90","expected_names":[]}]})"), SchemaViolation);
  EXPECT_THROW(load_corpus(R"({"tasks":[{"id":"a","dsl":"name = \"x\"","expected_names":[]},)"
                           R"({"id":"a","dsl":"name = \"y\"","expected_names":[]}]})"),
               SchemaViolation);
  EXPECT_THROW(load_corpus(R"({"tasks":[{"id":"a","dsl":"name = \"x\"","expected_names":[], "extra":1}]})"),
               SchemaViolation);
  EXPECT_TRUE(load_corpus(R"({"tasks":[]})").empty());
}

TEST(Corpus, RunsFromOracle) {
  std::vector<bool> cover(1440, false);
  for (int m = 1300; m < 1440; ++m)
    cover[m] = true;
  for (int m = 0; m < 30; ++m)
    cover[m] = true;
  for (int m = 100; m < 200; ++m)
    cover[m] = true;
  EXPECT_EQ(corpus::runs(cover), (std::vector<HoursOfOperation>{{100, 200}, {1300, 30}}));
}
