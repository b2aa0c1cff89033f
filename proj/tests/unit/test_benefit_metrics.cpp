#include <doctest.h>

#include <random>

#include "surface/benefit_metrics.hpp"
#include "surface/error.hpp"

using namespace surface;
using namespace surface::benefit;

namespace {

std::vector<SiteTest> pairs(const std::string& standard, const std::vector<std::pair<int, int>>& scores) {
  std::vector<SiteTest> out;
  int i = 0;
  for (const auto& [a, b] : scores) {
    const auto site = "site" + std::to_string(i++) + ".example";
    out.push_back({site, standard, "alice", a});
    out.push_back({site, standard, "bob", b});
  }
  return out;
}

}  // namespace

TEST_CASE("agreement counts equal pairs") {
  CHECK(agreement(pairs("X", {{1, 1}, {3, 3}, {2, 1}})) == doctest::Approx(2.0 / 3.0));
  CHECK(agreement(pairs("X", {{1, 1}, {2, 2}})) == 1.0);
  CHECK_THROWS_AS(agreement({}), ValidationError);
}

TEST_CASE("pairs need exactly two distinct testers") {
  auto t = pairs("X", {{1, 1}});
  t.push_back({"site0.example", "X", "carol", 1});
  CHECK_THROWS_WITH(agreement(t), doctest::Contains("expected 2"));
  std::vector<SiteTest> lone = {{"s", "X", "alice", 1}};
  CHECK_THROWS_WITH(agreement(lone), doctest::Contains("1 tester"));
  std::vector<SiteTest> twice = {{"s", "X", "alice", 1}, {"s", "X", "alice", 3}};
  CHECK_THROWS_WITH(agreement(twice), doctest::Contains("twice"));
}

TEST_CASE("raw break fraction is consensus-broken") {
  CHECK(raw_break_fraction(pairs("X", {{3, 3}, {3, 2}, {1, 1}}), "X") == doctest::Approx(1.0 / 3.0));
  CHECK(raw_break_fraction(pairs("X", {{1, 2}, {2, 2}}), "X") == 0.0);
  CHECK_THROWS_WITH(raw_break_fraction(pairs("X", {{1, 1}}), "Y"), doctest::Contains("no data"));
}

TEST_CASE("weighted break rate") {
  CHECK(weighted_break_rate(0.5, {"X", 5000, 10000}) == doctest::Approx(0.25));
  CHECK(weighted_break_rate(0.9, {"X", 0, 10000}) == 0.0);
  // Usage of 852 sites keeps any raw rate up to 0.117 under one percent.
  CHECK(weighted_break_rate(0.117, {"WEBGL", 852, 10000}) < 0.01);
  CHECK_THROWS_AS(weighted_break_rate(1.5, {"X", 1, 10}), ValidationError);
}

TEST_CASE("break rate rendering") {
  CHECK(render_break_rate(0.0) == "0%");
  CHECK(render_break_rate(0.0001) == "<1%");
  CHECK(render_break_rate(0.0099) == "<1%");
  CHECK(render_break_rate(0.01) == "1%");
  CHECK(render_break_rate(0.6293) == "63%");
  CHECK(render_break_rate(0.885) == "89%");
}

TEST_CASE("DOM1-shaped data: 29 of 42 broken at 9113 users renders 63%") {
  std::vector<std::pair<int, int>> scores(42, {1, 1});
  for (int i = 0; i < 29; ++i) scores[i] = {3, 3};
  const auto t = pairs("DOM1", scores);
  const double raw = raw_break_fraction(t, "DOM1");
  CHECK(raw == doctest::Approx(0.6905).epsilon(0.0001));
  CHECK(render_break_rate(weighted_break_rate(raw, {"DOM1", 9113, 10000})) == "63%");
}

TEST_CASE("properties: bounds, label permutation, adding a (1,1) pair") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> score(1, 3);
  for (int round = 0; round < 100; ++round) {
    std::vector<std::pair<int, int>> s(1 + rng() % 30);
    for (auto& p : s) p = {score(rng), score(rng)};
    const auto t = pairs("X", s);
    const UsageRecord u{"X", rng() % 10001, 10000};
    const double raw = raw_break_fraction(t, "X");
    const double w = weighted_break_rate(raw, u);
    CHECK(w <= raw);
    CHECK(w <= static_cast<double>(u.sites_using) / 10000.0);

    auto swapped = t;
    for (auto& x : swapped) x.tester = x.tester == "alice" ? "bob" : "alice";
    CHECK(agreement(swapped) == agreement(t));
    CHECK(raw_break_fraction(swapped, "X") == raw);

    auto more = s;
    more.push_back({1, 1});
    CHECK(raw_break_fraction(pairs("X", more), "X") <= raw);
  }
}

TEST_CASE("break rate table") {
  auto tests = pairs("A", {{3, 3}, {1, 2}, {1, 1}, {3, 3}});
  const std::vector<UsageRecord> usage = {{"B", 0, 10000}, {"A", 5000, 10000}};
  const auto rows = break_rate_table(tests, usage);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].standard == "A");
  CHECK(rows[0].paired_sites == 4);
  CHECK(rows[0].broken_sites == 2);
  CHECK(rows[0].disputed == 1);
  CHECK(rows[0].weighted_break_rate == doctest::Approx(0.25));
  CHECK(rows[0].agreement == doctest::Approx(0.75));
  CHECK(rows[1].standard == "B");
  CHECK(rows[1].paired_sites == 0);
  CHECK_FALSE(rows[1].agreement.has_value());

  const auto back = parse_break_rate_csv(break_rate_csv(rows));
  CHECK(back == rows);

  const std::vector<UsageRecord> used_untested = {{"A", 5000, 10000}, {"C", 3, 10000}};
  CHECK_THROWS_WITH(break_rate_table(tests, used_untested), doctest::Contains("no data for standard 'C'"));
  const std::vector<UsageRecord> missing = {{"B", 0, 10000}};
  CHECK_THROWS_WITH(break_rate_table(tests, missing), doctest::Contains("no usage record"));
}

TEST_CASE("usage and test CSV validation") {
  const auto u = parse_usage_csv("standard_abbrev,sites_using\nX,12\n");
  CHECK(u[0].population == 10000);
  CHECK_THROWS_AS(parse_usage_csv("standard_abbrev,sites_using,population\nX,12,10\n"), ParseError);
  CHECK_THROWS_AS(parse_usage_csv("standard_abbrev,sites_using,population\nX,1,10\nX,1,10\n"), ParseError);
  CHECK_THROWS_AS(parse_site_tests_csv("site,standard_abbrev,tester,score\ns,X,a,4\n"), ParseError);
  CHECK_THROWS_AS(parse_site_tests_csv("site,standard_abbrev,tester,score\ns,X,a,x\n"), ParseError);
  CHECK(parse_site_tests_csv("site,standard_abbrev,tester,score\ns,X,a,3\n")[0].score == 3);
}
