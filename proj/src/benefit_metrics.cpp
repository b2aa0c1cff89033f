#include "surface/benefit_metrics.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <map>
#include <set>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::benefit {

std::vector<SiteTest> parse_site_tests_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "site tests");
  const auto c_site = table.column("site");
  const auto c_std = table.column("standard_abbrev");
  const auto c_tester = table.column("tester");
  const auto c_score = table.column("score");
  std::vector<SiteTest> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      SiteTest t;
      t.site = std::string(text::trim(row[c_site]));
      t.standard = std::string(text::trim(row[c_std]));
      t.tester = std::string(text::trim(row[c_tester]));
      const auto score = text::parse_i64(text::trim(row[c_score]), "score");
      if (score < 1 || score > 3) throw ValidationError(fmt::format("score {} outside 1..3", score));
      t.score = static_cast<int>(score);
      if (t.site.empty() || t.standard.empty() || t.tester.empty()) throw ValidationError("empty field");
      out.push_back(std::move(t));
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("site tests: {}", e.what()), table.line_of(r), 1);
    }
  }
  return out;
}

std::vector<UsageRecord> parse_usage_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "usage");
  const auto c_std = table.column("standard_abbrev");
  const auto c_using = table.column("sites_using");
  const auto c_pop = table.find_column("population");
  std::vector<UsageRecord> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      UsageRecord u;
      u.standard = std::string(text::trim(row[c_std]));
      u.sites_using = text::parse_u64(text::trim(row[c_using]), "sites_using");
      if (c_pop && !text::trim(row[*c_pop]).empty()) {
        u.population = text::parse_u64(text::trim(row[*c_pop]), "population");
      }
      if (u.standard.empty()) throw ValidationError("empty standard");
      if (u.population == 0) throw ValidationError("population must be positive");
      if (u.sites_using > u.population) throw ValidationError("sites_using exceeds population");
      if (!seen.insert(u.standard).second) throw ValidationError(fmt::format("standard '{}' listed twice", u.standard));
      out.push_back(std::move(u));
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("usage: {}", e.what()), table.line_of(r), 1);
    }
  }
  return out;
}

std::vector<TestPair> pair_tests(std::span<const SiteTest> tests) {
  std::map<std::pair<std::string, std::string>, std::map<std::string, int>> groups;
  for (const auto& t : tests) {
    auto& g = groups[{t.standard, t.site}];
    if (!g.emplace(t.tester, t.score).second) {
      throw ValidationError(
          fmt::format("site tests: tester '{}' scored {} / {} twice", t.tester, t.site, t.standard));
    }
  }
  std::vector<TestPair> out;
  out.reserve(groups.size());
  for (const auto& [key, scores] : groups) {
    if (scores.size() != 2) {
      throw ValidationError(fmt::format("site tests: {} / {} has {} tester(s), expected 2", key.second, key.first,
                                        scores.size()));
    }
    out.push_back({key.second, key.first, scores.begin()->second, std::next(scores.begin())->second});
  }
  return out;
}

double agreement(std::span<const SiteTest> tests) {
  const auto pairs = pair_tests(tests);
  if (pairs.empty()) throw ValidationError("agreement: no paired tests");
  const auto equal = std::count_if(pairs.begin(), pairs.end(), [](const TestPair& p) { return p.first == p.second; });
  return static_cast<double>(equal) / static_cast<double>(pairs.size());
}

double raw_break_fraction(std::span<const SiteTest> tests, std::string_view standard) {
  std::vector<SiteTest> subset;
  for (const auto& t : tests) {
    if (t.standard == standard) subset.push_back(t);
  }
  if (subset.empty()) throw ValidationError(fmt::format("no data for standard '{}'", standard));
  const auto pairs = pair_tests(subset);
  const auto broken =
      std::count_if(pairs.begin(), pairs.end(), [](const TestPair& p) { return p.first == 3 && p.second == 3; });
  return static_cast<double>(broken) / static_cast<double>(pairs.size());
}

double weighted_break_rate(double raw, const UsageRecord& usage) {
  if (!(raw >= 0.0 && raw <= 1.0)) throw ValidationError(fmt::format("raw break fraction {} outside [0,1]", raw));
  if (usage.population == 0 || usage.sites_using > usage.population) {
    throw ValidationError(fmt::format("invalid usage record for '{}'", usage.standard));
  }
  return raw * static_cast<double>(usage.sites_using) / static_cast<double>(usage.population);
}

std::string render_break_rate(double weighted) {
  if (weighted == 0.0) return "0%";
  if (weighted < 0.01) return "<1%";
  return fmt::format("{}%", std::lround(weighted * 100.0));
}

std::vector<BreakRateResult> break_rate_table(std::span<const SiteTest> tests, std::span<const UsageRecord> usage) {
  std::map<std::string, std::vector<TestPair>> by_standard;
  for (auto& p : pair_tests(tests)) by_standard[p.standard].push_back(std::move(p));
  std::map<std::string, const UsageRecord*> usage_of;
  for (const auto& u : usage) {
    if (!usage_of.emplace(u.standard, &u).second) {
      throw ValidationError(fmt::format("usage: standard '{}' listed twice", u.standard));
    }
  }
  for (const auto& [s, _] : by_standard) {
    if (!usage_of.count(s)) throw ValidationError(fmt::format("no usage record for tested standard '{}'", s));
  }
  std::vector<BreakRateResult> out;
  for (const auto& [s, u] : usage_of) {
    BreakRateResult r;
    r.standard = s;
    r.sites_using = u->sites_using;
    r.population = u->population;
    auto it = by_standard.find(s);
    if (it == by_standard.end()) {
      if (u->sites_using > 0) throw ValidationError(fmt::format("no data for standard '{}'", s));
      out.push_back(std::move(r));
      continue;
    }
    const auto& pairs = it->second;
    r.paired_sites = pairs.size();
    std::size_t equal = 0;
    for (const auto& p : pairs) {
      if (p.first == 3 && p.second == 3) ++r.broken_sites;
      if (p.first == p.second) ++equal;
    }
    r.disputed = pairs.size() - equal;
    r.raw_break_fraction = static_cast<double>(r.broken_sites) / static_cast<double>(r.paired_sites);
    r.weighted_break_rate = weighted_break_rate(r.raw_break_fraction, *u);
    r.agreement = static_cast<double>(equal) / static_cast<double>(r.paired_sites);
    out.push_back(std::move(r));
  }
  return out;
}

std::string break_rate_csv(std::span<const BreakRateResult> rows) {
  std::string out =
      "standard,sites_using,population,paired_sites,broken_sites,disputed,raw_break_fraction,weighted_break_rate,"
      "agreement\n";
  for (const auto& r : rows) {
    append_csv_row(out, {r.standard, std::to_string(r.sites_using), std::to_string(r.population),
                         std::to_string(r.paired_sites), std::to_string(r.broken_sites), std::to_string(r.disputed),
                         text::format_double(r.raw_break_fraction), text::format_double(r.weighted_break_rate),
                         r.agreement ? text::format_double(*r.agreement) : std::string()});
  }
  return out;
}

std::string break_rate_json(std::span<const BreakRateResult> rows, double pooled_agreement) {
  nlohmann::ordered_json doc;
  doc["agreement"] = pooled_agreement;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    arr.push_back({{"standard", r.standard},
                   {"sites_using", r.sites_using},
                   {"population", r.population},
                   {"paired_sites", r.paired_sites},
                   {"broken_sites", r.broken_sites},
                   {"disputed", r.disputed},
                   {"raw_break_fraction", r.raw_break_fraction},
                   {"weighted_break_rate", r.weighted_break_rate},
                   {"agreement", r.agreement ? nlohmann::ordered_json(*r.agreement) : nullptr}});
  }
  doc["standards"] = arr;
  return doc.dump(2) + "\n";
}

std::vector<BreakRateResult> parse_break_rate_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "break rates");
  table.require_columns({"standard", "sites_using", "population", "paired_sites", "broken_sites", "disputed",
                         "raw_break_fraction", "weighted_break_rate", "agreement"});
  std::vector<BreakRateResult> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    auto cell = [&](std::string_view name) { return text::trim(row[table.column(name)]); };
    try {
      BreakRateResult b;
      b.standard = std::string(cell("standard"));
      b.sites_using = text::parse_u64(cell("sites_using"), "sites_using");
      b.population = text::parse_u64(cell("population"), "population");
      b.paired_sites = text::parse_u64(cell("paired_sites"), "paired_sites");
      b.broken_sites = text::parse_u64(cell("broken_sites"), "broken_sites");
      b.disputed = text::parse_u64(cell("disputed"), "disputed");
      b.raw_break_fraction = text::parse_double(cell("raw_break_fraction"), "raw_break_fraction");
      b.weighted_break_rate = text::parse_double(cell("weighted_break_rate"), "weighted_break_rate");
      if (auto a = cell("agreement"); !a.empty()) b.agreement = text::parse_double(a, "agreement");
      if (b.weighted_break_rate < 0.0 || b.weighted_break_rate > 1.0) {
        throw ValidationError("weighted_break_rate outside [0,1]");
      }
      out.push_back(std::move(b));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("break rates: {}", e.what()), table.line_of(r), 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.standard < b.standard; });
  return out;
}

}  // namespace surface::benefit
