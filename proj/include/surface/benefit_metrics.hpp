#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace surface::benefit {

// One tester's verdict on a site with one standard disabled: 1 means no
// perceptible difference, 3 means the site's task could not be completed.
struct SiteTest {
  std::string site;
  std::string standard;
  std::string tester;
  int score = 1;

  bool operator==(const SiteTest&) const = default;
};

struct UsageRecord {
  std::string standard;
  std::uint64_t sites_using = 0;
  std::uint64_t population = 10000;

  bool operator==(const UsageRecord&) const = default;
};

// CSV `site,standard_abbrev,tester,score`.
std::vector<SiteTest> parse_site_tests_csv(std::string_view text);
// CSV `standard_abbrev,sites_using,population`; population defaults to
// 10000 when the column is absent or the cell is empty.
std::vector<UsageRecord> parse_usage_csv(std::string_view text);

struct TestPair {
  std::string site;
  std::string standard;
  // Scores ordered by tester label.
  int first = 1;
  int second = 1;
};

// Groups tests by (site, standard). Each group must hold exactly two
// distinct testers. Output is sorted by (standard, site).
std::vector<TestPair> pair_tests(std::span<const SiteTest> tests);

// Fraction of pairs whose two scores are equal.
double agreement(std::span<const SiteTest> tests);

// Fraction of the standard's paired sites where both testers scored 3.
// Throws when the standard has no tests.
double raw_break_fraction(std::span<const SiteTest> tests, std::string_view standard);

double weighted_break_rate(double raw, const UsageRecord& usage);

// Table-style percentage: "0%" for exactly zero, "<1%" below one percent,
// otherwise the rounded whole percentage.
std::string render_break_rate(double weighted);

struct BreakRateResult {
  std::string standard;
  std::uint64_t sites_using = 0;
  std::uint64_t population = 10000;
  std::size_t paired_sites = 0;
  std::size_t broken_sites = 0;
  // Pairs whose scores differ.
  std::size_t disputed = 0;
  double raw_break_fraction = 0.0;
  double weighted_break_rate = 0.0;
  // Absent when the standard has no pairs.
  std::optional<double> agreement;

  bool operator==(const BreakRateResult&) const = default;
};

// One row per usage record, sorted by standard. A tested standard without a
// usage record is an error, as is a used standard without tests. Standards
// used by no site may go untested and get an all-zero row.
std::vector<BreakRateResult> break_rate_table(std::span<const SiteTest> tests, std::span<const UsageRecord> usage);

std::string break_rate_csv(std::span<const BreakRateResult> rows);
std::string break_rate_json(std::span<const BreakRateResult> rows, double pooled_agreement);
// Reads the CSV form back.
std::vector<BreakRateResult> parse_break_rate_csv(std::string_view text);

}  // namespace surface::benefit
