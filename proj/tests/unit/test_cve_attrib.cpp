#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "surface/cve_attrib.hpp"
#include "surface/error.hpp"
#include "surface/io.hpp"

using namespace surface;
using namespace surface::cve;

namespace {

CveRecord rec(std::string id, std::string description, Severity sev = Severity::high, std::string hint = "Firefox") {
  CveRecord r;
  r.id = std::move(id);
  r.year = year_of_cve_id(r.id);
  r.description = std::move(description);
  r.severity = sev;
  r.product_hint = std::move(hint);
  return r;
}

const std::vector<AttributionRule> kRules = {
    {Route::standard_name, "SVG", "SVG", false},
    {Route::functionality_keyword, "SVG image rendering", "SVG", true},
    {Route::js_endpoint, "Worker.postMessage", "H-WW", false},
    {Route::standard_name, "High Resolution Time", "HRT", false},
    {Route::native_symbol, "WebGLContext::Flush", "WEBGL", false},
};

}  // namespace

TEST_CASE("CVE ids and severities") {
  CHECK(year_of_cve_id("CVE-2011-2363") == 2011);
  CHECK(year_of_cve_id("CVE-2016-123456") == 2016);
  CHECK_THROWS_AS(year_of_cve_id("CVE-11-2363"), ValidationError);
  CHECK_THROWS_AS(year_of_cve_id("cve-2011-2363"), ValidationError);
  CHECK_THROWS_AS(year_of_cve_id("CVE-2011-23"), ValidationError);
  CHECK(severity_from_cvss(9.0) == Severity::severe);
  CHECK(severity_from_cvss(8.9) == Severity::high);
  CHECK(severity_from_cvss(7.0) == Severity::high);
  CHECK(severity_from_cvss(6.9) == Severity::moderate);
  CHECK(severity_from_cvss(3.9) == Severity::low);
  CHECK_THROWS_AS(severity_from_cvss(11), ValidationError);
}

TEST_CASE("JSON-lines CVE parsing") {
  const auto records = parse_cves_jsonl(
      R"({"id": "CVE-2012-0001", "description": "x", "severity": "high", "product_hint": "Firefox"}
{"id": "CVE-2013-0002", "description": "y", "severity": 9.3, "product_hint": ""}
)");
  REQUIRE(records.size() == 2);
  CHECK(records[0].year == 2012);
  CHECK(records[1].severity == Severity::severe);
  CHECK_THROWS_WITH(parse_cves_jsonl(R"({"id": "CVE-2012-0001", "severity": "low"}
{"id": "CVE-2012-0001", "severity": "low"})"),
                    doctest::Contains("duplicate"));
  CHECK_THROWS_WITH(parse_cves_jsonl(R"({"id": "CVE-2012-0001", "year": 2013, "severity": "low"})"),
                    doctest::Contains("does not match"));
  CHECK_THROWS_AS(parse_cves_jsonl(R"({"id": "BAD", "severity": "low"})"), ParseError);
  CHECK_THROWS_AS(parse_cves_jsonl(R"({"id": "CVE-2012-0001", "severity": "extreme"})"), ParseError);
}

TEST_CASE("filtering by keyword and year") {
  FilterConfig config;
  config.discard_keywords = {"Adobe Flash Player"};
  const std::vector<CveRecord> records = {
      rec("CVE-2012-0001", "Memory corruption in Adobe Flash Player before 11.2 via crafted SWF"),
      rec("CVE-2009-0002", "Use-after-free in SVG"),
      rec("CVE-2012-0003", "Overflow in the SVG code", Severity::high, "adobe flash player plugin"),
      rec("CVE-2012-0004", "Use-after-free in SVG"),
  };
  const auto out = filter_browser_cves(records, config);
  REQUIRE(out.kept.size() == 1);
  CHECK(out.kept[0].id == "CVE-2012-0004");
  CHECK(out.discarded.size() == 3);
  const auto empty = filter_browser_cves({}, config);
  CHECK(empty.kept.empty());
  CHECK(empty.discarded.empty());
}

TEST_CASE("attribution routes and negative rules") {
  const auto svg = attribute(rec("CVE-2011-2363",
                                 "Use-after-free vulnerability in the SVG animation DOM bindings allows remote "
                                 "attackers to execute arbitrary code via script that manipulates SVG animations."),
                             kRules);
  CHECK(svg.status == Status::attributed);
  CHECK(svg.standards == std::set<std::string>{"SVG"});
  CHECK(svg.primary_route == Route::standard_name);

  const auto excluded = attribute(
      rec("CVE-2015-0818", "Firefox permits privilege escalation through its SVG image rendering path."), kRules);
  CHECK(excluded.status == Status::unattributed);
  CHECK(excluded.standards.empty());
  CHECK(excluded.routes_used.empty());
  CHECK_FALSE(excluded.primary_route.has_value());

  const auto empty = attribute(rec("CVE-2015-0001", ""), kRules);
  CHECK(empty.status == Status::unattributed);

  const auto multi = attribute(
      rec("CVE-2014-0001", "Race in Worker.postMessage and the High Resolution Time clock; see WebGLContext::Flush"),
      kRules);
  CHECK(multi.standards == std::set<std::string>{"H-WW", "HRT", "WEBGL"});
  CHECK(multi.routes_used ==
        std::set<Route>{Route::standard_name, Route::js_endpoint, Route::native_symbol});
  CHECK(multi.primary_route == Route::standard_name);

  const auto js = attribute(rec("CVE-2014-0002", "crash in Worker.postMessage"), kRules);
  CHECK(js.primary_route == Route::js_endpoint);
}

TEST_CASE("attribution ignores rule order") {
  std::mt19937_64 rng(1);
  const auto r = rec("CVE-2014-0001", "Race in Worker.postMessage and SVG image rendering and WebGLContext::Flush");
  const auto reference = attribute(r, kRules);
  auto rules = kRules;
  for (int i = 0; i < 20; ++i) {
    std::shuffle(rules.begin(), rules.end(), rng);
    CHECK(attribute(r, rules) == reference);
  }
}

TEST_CASE("tally multi-counts and dedups") {
  const std::vector<CveRecord> records = {
      rec("CVE-2014-0001", "", Severity::high), rec("CVE-2014-0002", "", Severity::low),
      rec("CVE-2014-0003", "", Severity::severe), rec("CVE-2014-0004", "", Severity::moderate)};
  std::vector<AttributionResult> results(4);
  for (std::size_t i = 0; i < 3; ++i) {
    results[i].cve_id = records[i].id;
    results[i].status = Status::attributed;
    results[i].standards = {"WEBGL"};
    results[i].routes_used = {Route::standard_name};
    results[i].primary_route = Route::standard_name;
  }
  results[3].cve_id = records[3].id;
  const std::vector<std::string> standards = {"H-WW", "HRT", "WEBGL"};
  auto t = tally(results, records, standards);
  REQUIRE(t.rows.size() == 3);
  CHECK(t.rows[2] == TallyRow{"WEBGL", 3, 2});
  CHECK(t.rows[0] == TallyRow{"H-WW", 0, 0});
  CHECK(t.dedup_total == 3);

  results[0].standards = {"H-WW", "HRT"};
  t = tally(results, records, standards);
  CHECK(t.rows[0].cve_count == 1);
  CHECK(t.rows[1].cve_count == 1);
  CHECK(t.dedup_total == 3);
  std::size_t sum = 0;
  for (const auto& r : t.rows) sum += r.cve_count;
  CHECK(sum == 4);

  auto bad = results;
  bad[0].cve_id = "CVE-2099-0001";
  CHECK_THROWS_WITH(tally(bad, records, standards), doctest::Contains("unknown CVE"));
  bad = results;
  bad[0].standards = {"NOPE"};
  CHECK_THROWS_WITH(tally(bad, records, standards), doctest::Contains("unknown standard"));
}

TEST_CASE("route breakdown partitions attributed CVEs") {
  std::vector<AttributionResult> results;
  const std::vector<Route> routes = {Route::standard_name, Route::standard_name, Route::js_endpoint,
                                     Route::functionality_keyword};
  for (std::size_t i = 0; i < routes.size(); ++i) {
    AttributionResult r;
    r.cve_id = "CVE-2014-000" + std::to_string(i);
    r.status = Status::attributed;
    r.standards = {"X"};
    r.routes_used = {routes[i]};
    r.primary_route = routes[i];
    results.push_back(r);
  }
  results.push_back({"CVE-2014-0100", Status::unattributed, {}, {}, std::nullopt});
  const auto b = route_breakdown(results);
  CHECK(b.attributed == 4);
  CHECK(b.fraction(Route::standard_name) == doctest::Approx(0.5));
  double sum = 0;
  for (const auto& [route, _] : b.counts) sum += b.fraction(route);
  CHECK(sum == doctest::Approx(1.0));
  CHECK(route_breakdown({}).fraction(Route::js_endpoint) == 0.0);
}

TEST_CASE("rules CSV parse and validation") {
  const auto rules = parse_rules_csv("route,pattern,target_abbrev,negate\nstandard_name,SVG,SVG,false\n"
                                     "functionality_keyword,\"SVG image rendering\",SVG,true\n");
  REQUIRE(rules.size() == 2);
  CHECK(rules[1].negate);
  CHECK(parse_rules_csv(rules_csv(rules)) == rules);
  CHECK_THROWS_AS(parse_rules_csv("route,pattern,target_abbrev,negate\nguess,SVG,SVG,false\n"), ParseError);
  CHECK_THROWS_AS(parse_rules_csv("route,pattern,target_abbrev,negate\nstandard_name,,SVG,false\n"), ParseError);
  const std::vector<std::string> standards = {"SVG"};
  CHECK_NOTHROW(validate_rules(rules, standards));
  const std::vector<AttributionRule> bad = {{Route::standard_name, "x", "NOPE", false}};
  CHECK_THROWS_WITH(validate_rules(bad, standards), doctest::Contains("unknown standard 'NOPE'"));
}

TEST_CASE("attribute_all marks filtered records and sorts by id") {
  FilterConfig config;
  config.discard_keywords = {"QuickTime"};
  const std::vector<CveRecord> records = {rec("CVE-2014-0002", "SVG crash"), rec("CVE-2014-0001", "QuickTime SVG"),
                                          rec("CVE-2008-0001", "SVG crash")};
  const auto out = attribute_all(records, config, kRules);
  REQUIRE(out.size() == 3);
  CHECK(out[0].cve_id == "CVE-2008-0001");
  CHECK(out[0].status == Status::discarded);
  CHECK(out[1].status == Status::discarded);
  CHECK(out[2].status == Status::attributed);
  CHECK(parse_results_jsonl(results_jsonl(out)) == out);
}

TEST_CASE("native symbol suggestions come from exclusive functions") {
  using namespace surface::graph;
  const auto g = CallGraph::build(
      {{"b", "Binding::get", FunctionKind::binding, 1, "WEBGL", false},
       {"i", "mozilla::dom::WebGLContext::Flush", FunctionKind::implementation, 5, std::nullopt, false},
       {"j", "mozilla::dom::WebGLContext::Draw", FunctionKind::implementation, 5, std::nullopt, false}},
      {{"b", "i"}, {"b", "j"}});
  const std::vector<CveRecord> records = {rec("CVE-2014-0001", "Overflow in WebGLContext::Flush")};
  const std::vector<std::string> standards = {"WEBGL"};
  const auto suggested = suggest_native_symbol_rules(records, g, standards, {});
  REQUIRE(suggested.size() == 1);
  CHECK(suggested[0] == AttributionRule{Route::native_symbol, "WebGLContext::Flush", "WEBGL", false});
  CHECK(suggest_native_symbol_rules(records, g, standards, suggested).empty());
}

TEST_CASE("dedup matches brute force on random attributions") {
  std::mt19937_64 rng(4);
  const std::vector<std::string> standards = {"A", "B", "C", "D", "E"};
  for (int round = 0; round < 50; ++round) {
    std::vector<AttributionResult> results;
    std::vector<CveRecord> records;
    for (int i = 0; i < 40; ++i) {
      const auto id = "CVE-2014-" + std::to_string(1000 + i);
      records.push_back(rec(id, "", rng() % 2 ? Severity::high : Severity::low));
      AttributionResult r;
      r.cve_id = id;
      for (const auto& s : standards) {
        if (rng() % 4 == 0) r.standards.insert(s);
      }
      if (!r.standards.empty()) {
        r.status = Status::attributed;
        r.routes_used = {Route::standard_name};
        r.primary_route = Route::standard_name;
      }
      results.push_back(r);
    }
    const auto t = tally(results, records, standards);
    std::size_t sum = 0;
    bool multi = false;
    for (const auto& r : t.rows) sum += r.cve_count;
    for (const auto& r : results) multi = multi || r.standards.size() > 1;
    CHECK(t.dedup_total <= sum);
    CHECK((t.dedup_total == sum) == !multi);
    const std::set<std::string> all(standards.begin(), standards.end());
    CHECK(t.dedup_total == testing::brute_force_covered(results, all));
  }
}
