#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surface/callgraph_eloc.hpp"

namespace surface::cve {

enum class Severity { low, moderate, high, severe };

std::string_view to_string(Severity s);
Severity severity_from_string(std::string_view s);
// CVSS base score to severity: >= 9 severe, >= 7 high, >= 4 moderate.
Severity severity_from_cvss(double score);

// Listed in precedence order, highest first.
enum class Route { standard_name, js_endpoint, native_symbol, functionality_keyword };

std::string_view to_string(Route r);
Route route_from_string(std::string_view s);

struct CveRecord {
  std::string id;
  int year = 0;
  std::string description;
  Severity severity = Severity::low;
  std::string product_hint;

  bool operator==(const CveRecord&) const = default;
};

// Year embedded in a `CVE-YYYY-NNNN` identifier; throws on malformed ids.
int year_of_cve_id(std::string_view id);

// JSON lines `{id, description, severity, product_hint}`. `severity` may be
// a label or a numeric CVSS score; an explicit `year` must agree with the id.
// Duplicate ids are rejected.
std::vector<CveRecord> parse_cves_jsonl(std::string_view text);

struct FilterConfig {
  std::vector<std::string> discard_keywords;
  int year_floor = 2010;
};

// One keyword per line; blank lines and lines starting with '#' are ignored.
std::vector<std::string> parse_keyword_list(std::string_view text);

struct FilterResult {
  std::vector<CveRecord> kept;
  std::vector<CveRecord> discarded;
};

FilterResult filter_browser_cves(std::span<const CveRecord> records, const FilterConfig& config);

struct AttributionRule {
  Route route = Route::standard_name;
  std::string pattern;
  std::string target;
  // Exclusion rule: a match removes `target` from the result.
  bool negate = false;

  auto operator<=>(const AttributionRule&) const = default;
};

// CSV `route,pattern,target_abbrev,negate`.
std::vector<AttributionRule> parse_rules_csv(std::string_view text);
std::string rules_csv(std::span<const AttributionRule> rules);
// Rejects empty patterns and targets missing from `standards`.
void validate_rules(std::span<const AttributionRule> rules, std::span<const std::string> standards);

enum class Status { discarded, unattributed, attributed };

std::string_view to_string(Status s);

struct AttributionResult {
  std::string cve_id;
  Status status = Status::unattributed;
  std::set<std::string> standards;
  std::set<Route> routes_used;
  // Highest-precedence route among routes_used; set iff attributed.
  std::optional<Route> primary_route;

  bool operator==(const AttributionResult&) const = default;
};

// Fires every matching rule. Positive matches add their target, negative
// matches remove theirs; routes_used keeps the routes of surviving targets.
AttributionResult attribute(const CveRecord& record, std::span<const AttributionRule> rules);

// Filters, then attributes the kept records. Returns one result per input
// record, sorted by id; filtered records carry status `discarded`.
std::vector<AttributionResult> attribute_all(std::span<const CveRecord> records, const FilterConfig& filter,
                                             std::span<const AttributionRule> rules);

struct TallyRow {
  std::string standard;
  std::size_t cve_count = 0;
  std::size_t high_or_severe_count = 0;

  bool operator==(const TallyRow&) const = default;
};

struct Tally {
  // One row per standard, sorted; a CVE counts once for each of its standards.
  std::vector<TallyRow> rows;
  // Distinct attributed CVEs.
  std::size_t dedup_total = 0;
  std::size_t dedup_high_or_severe = 0;
};

// Every result must name a record; attributed standards must be in `standards`.
Tally tally(std::span<const AttributionResult> results, std::span<const CveRecord> records,
            std::span<const std::string> standards);

struct RouteBreakdown {
  std::size_t attributed = 0;
  std::map<Route, std::size_t> counts;

  double fraction(Route r) const;
};

// Labels each attributed CVE by its primary route.
RouteBreakdown route_breakdown(std::span<const AttributionResult> results);

// Proposes native_symbol rules for `Class::Method` names of each standard's
// exclusive functions that appear in some record's description. Rules
// already present are not repeated. Output is sorted.
std::vector<AttributionRule> suggest_native_symbol_rules(std::span<const CveRecord> records,
                                                         const graph::CallGraph& graph,
                                                         std::span<const std::string> standards,
                                                         std::span<const AttributionRule> existing);

std::string results_jsonl(std::span<const AttributionResult> results);
std::vector<AttributionResult> parse_results_jsonl(std::string_view text);
std::string tally_csv(const Tally& t);
std::string tally_json(const Tally& t, const RouteBreakdown& routes);
// Reads the CSV form back; dedup totals are not part of the CSV.
std::vector<TallyRow> parse_tally_csv(std::string_view text);

}  // namespace surface::cve
