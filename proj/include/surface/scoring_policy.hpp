#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "surface/benefit_metrics.hpp"
#include "surface/callgraph_eloc.hpp"
#include "surface/cve_attrib.hpp"
#include "surface/idl_catalog.hpp"

namespace surface::policy {

struct AttackCount {
  std::string standard;
  std::uint64_t papers = 0;

  bool operator==(const AttackCount&) const = default;
};

// CSV `standard_abbrev,attack_papers`.
std::vector<AttackCount> parse_attacks_csv(std::string_view text);

// One fused row. Fields are empty only in lenient mode, where a standard was
// missing from some input.
struct LedgerRow {
  std::string standard;
  std::optional<std::string> name;
  std::optional<std::uint64_t> sites_using;
  std::optional<double> weighted_break_rate;
  std::optional<std::uint64_t> cve_count;
  std::optional<std::uint64_t> high_or_severe_count;
  std::optional<std::uint64_t> eloc;
  std::optional<double> eloc_share;
  std::optional<std::uint64_t> attack_papers;

  bool operator==(const LedgerRow&) const = default;
};

enum class LedgerMode { strict, lenient };

// Fuses the four per-standard inputs. In strict mode every input must cover
// the same standards and the error lists the symmetric difference. Names come
// from `names` (abbreviation -> name) where present. Rows are sorted.
std::vector<LedgerRow> build_ledger(std::span<const graph::ElocResult> eloc, std::span<const cve::TallyRow> tally,
                                    std::span<const benefit::BreakRateResult> break_rates,
                                    std::span<const AttackCount> attacks, LedgerMode mode,
                                    const std::map<std::string, std::string>& names = {});

std::map<std::string, std::string> standard_names(const idl::FeatureCatalog& catalog);

std::string ledger_csv(std::span<const LedgerRow> rows);
std::string ledger_json(std::span<const LedgerRow> rows);
std::vector<LedgerRow> parse_ledger_csv(std::string_view text);

struct OriginRule {
  std::set<std::string> allow;
  std::set<std::string> block;

  bool operator==(const OriginRule&) const = default;
};

inline constexpr int kPolicyVersion = 1;

struct BlockPolicy {
  int version = kPolicyVersion;
  std::string name;
  std::set<std::string> blocked;
  std::set<std::string> whitelist{"WCR"};
  // origin pattern -> override
  std::map<std::string, OriginRule> per_origin;
  bool debug = false;

  bool operator==(const BlockPolicy&) const = default;
};

// `scheme://host[:port]` or `*.host`.
bool is_valid_origin_pattern(std::string_view pattern);
// Exact patterns match the same origin; `*.host` matches any origin on a
// subdomain of host, whatever the scheme or port.
bool origin_matches(std::string_view pattern, std::string_view origin);

// Throws ValidationError when an invariant is broken.
void validate_policy(const BlockPolicy& policy);

// Canonical JSON: fixed key order, sorted arrays, two-space indent, trailing
// newline.
std::string serialize_policy(const BlockPolicy& policy);
// Missing optional fields take their defaults; unknown fields and newer
// versions are rejected.
BlockPolicy parse_policy(std::string_view document);

// Standards blocked for `origin` after per-origin overrides. Overrides are
// applied from least to most specific: suffix patterns by increasing length,
// then the exact pattern. Whitelisted standards are never returned.
std::set<std::string> effective_blocked(const BlockPolicy& policy, std::optional<std::string_view> origin = {});

std::set<idl::FeatureId> blocked_features(const BlockPolicy& policy, const idl::FeatureCatalog& catalog,
                                          std::optional<std::string_view> origin = {});

struct CostPredicate {
  enum class Metric { cve, eloc_share, attacks };
  Metric metric = Metric::cve;
  // Satisfied when the metric is >= min.
  double min = 0.0;
};

CostPredicate::Metric cost_metric_from_string(std::string_view s);

// Blocks each standard whose weighted break rate is <= max_break_rate and
// whose cost satisfies the predicate, except whitelisted ones. Rows with an
// unknown break rate or cost are never blocked.
BlockPolicy generate_policy(std::span<const LedgerRow> ledger, double max_break_rate, const CostPredicate& cost,
                            std::string name = "generated",
                            std::set<std::string> whitelist = {"WCR"});

struct PolicyStats {
  std::size_t standards_blocked = 0;
  std::size_t cve_covered = 0;
  std::size_t cve_total = 0;
  double cve_fraction = 0.0;
  std::uint64_t eloc_removed = 0;
  std::uint64_t eloc_total = 0;
  double eloc_fraction = 0.0;
  // Sum of the blocked standards' weighted break rates. An estimate only;
  // real breakage needs browsing with the policy applied.
  double est_break_rate_sum = 0.0;
};

// Evaluates the global blocked set. CVEs attributed to several blocked
// standards count once.
PolicyStats evaluate_policy(const BlockPolicy& policy, std::span<const LedgerRow> ledger,
                            std::span<const cve::AttributionResult> attributions);

std::string policy_stats_json(const BlockPolicy& policy, const PolicyStats& stats);

std::vector<std::string> preset_names();
// Built-in presets "conservative" and "aggressive".
BlockPolicy preset(std::string_view name);

}  // namespace surface::policy
