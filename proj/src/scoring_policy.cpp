#include "surface/scoring_policy.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::policy {

std::vector<AttackCount> parse_attacks_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "attacks");
  const auto c_std = table.column("standard_abbrev");
  const auto c_papers = table.column("attack_papers");
  std::vector<AttackCount> out;
  std::set<std::string> seen;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      AttackCount a{std::string(text::trim(row[c_std])), text::parse_u64(text::trim(row[c_papers]), "attack_papers")};
      if (a.standard.empty()) throw ValidationError("empty standard");
      if (!seen.insert(a.standard).second) throw ValidationError(fmt::format("standard '{}' listed twice", a.standard));
      out.push_back(std::move(a));
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("attacks: {}", e.what()), table.line_of(r), 1);
    }
  }
  return out;
}

namespace {

template <typename Range, typename Key>
std::set<std::string> key_set(const Range& range, Key key, std::string_view what) {
  std::set<std::string> out;
  for (const auto& item : range) {
    if (!out.insert(key(item)).second) {
      throw ValidationError(fmt::format("ledger: standard '{}' appears twice in {}", key(item), what));
    }
  }
  return out;
}

std::string join(const std::set<std::string>& s) {
  std::string out;
  for (const auto& x : s) {
    if (!out.empty()) out += ", ";
    out += x;
  }
  return out;
}

}  // namespace

std::vector<LedgerRow> build_ledger(std::span<const graph::ElocResult> eloc, std::span<const cve::TallyRow> tally,
                                    std::span<const benefit::BreakRateResult> break_rates,
                                    std::span<const AttackCount> attacks, LedgerMode mode,
                                    const std::map<std::string, std::string>& names) {
  const std::vector<std::pair<std::string_view, std::set<std::string>>> inputs = {
      {"eloc", key_set(eloc, [](const auto& r) { return r.standard; }, "eloc")},
      {"cves", key_set(tally, [](const auto& r) { return r.standard; }, "cves")},
      {"benefit", key_set(break_rates, [](const auto& r) { return r.standard; }, "benefit")},
      {"attacks", key_set(attacks, [](const auto& r) { return r.standard; }, "attacks")},
  };
  std::set<std::string> all;
  for (const auto& [_, s] : inputs) all.insert(s.begin(), s.end());
  if (mode == LedgerMode::strict) {
    std::string diff;
    for (const auto& [what, s] : inputs) {
      std::set<std::string> missing;
      std::set_difference(all.begin(), all.end(), s.begin(), s.end(), std::inserter(missing, missing.end()));
      if (!missing.empty()) diff += fmt::format("{}{} lacks {}", diff.empty() ? "" : "; ", what, join(missing));
    }
    if (!diff.empty()) throw ValidationError(fmt::format("ledger: inputs cover different standards: {}", diff));
  }
  std::map<std::string, LedgerRow> rows;
  for (const auto& s : all) {
    rows[s].standard = s;
    if (auto it = names.find(s); it != names.end()) rows[s].name = it->second;
  }
  for (const auto& e : eloc) {
    rows[e.standard].eloc = e.eloc;
    rows[e.standard].eloc_share = e.eloc_share;
  }
  for (const auto& t : tally) {
    rows[t.standard].cve_count = t.cve_count;
    rows[t.standard].high_or_severe_count = t.high_or_severe_count;
  }
  for (const auto& b : break_rates) {
    rows[b.standard].sites_using = b.sites_using;
    rows[b.standard].weighted_break_rate = b.weighted_break_rate;
  }
  for (const auto& a : attacks) rows[a.standard].attack_papers = a.papers;
  std::vector<LedgerRow> out;
  out.reserve(rows.size());
  for (auto& [_, r] : rows) out.push_back(std::move(r));
  return out;
}

std::map<std::string, std::string> standard_names(const idl::FeatureCatalog& catalog) {
  std::map<std::string, std::string> out;
  for (const auto& s : catalog.standards()) out[s.abbreviation] = s.name;
  return out;
}

namespace {

template <typename T>
std::string opt_cell(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>) {
    return text::format_double(*v);
  } else if constexpr (std::is_same_v<T, std::string>) {
    return *v;
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
nlohmann::ordered_json opt_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

constexpr std::string_view kLedgerHeader =
    "standard_name,abbreviation,sites_using,weighted_break_rate,site_break_rate,cve_count,high_or_severe_count,"
    "eloc,eloc_share,attack_papers\n";

}  // namespace

std::string ledger_csv(std::span<const LedgerRow> rows) {
  std::string out(kLedgerHeader);
  for (const auto& r : rows) {
    append_csv_row(out, {opt_cell(r.name), r.standard, opt_cell(r.sites_using), opt_cell(r.weighted_break_rate),
                         r.weighted_break_rate ? benefit::render_break_rate(*r.weighted_break_rate) : std::string(),
                         opt_cell(r.cve_count), opt_cell(r.high_or_severe_count), opt_cell(r.eloc),
                         opt_cell(r.eloc_share), opt_cell(r.attack_papers)});
  }
  return out;
}

std::string ledger_json(std::span<const LedgerRow> rows) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    doc.push_back({{"standard", r.standard},
                   {"name", opt_json(r.name)},
                   {"sites_using", opt_json(r.sites_using)},
                   {"weighted_break_rate", opt_json(r.weighted_break_rate)},
                   {"site_break_rate", r.weighted_break_rate
                                           ? nlohmann::ordered_json(benefit::render_break_rate(*r.weighted_break_rate))
                                           : nlohmann::ordered_json(nullptr)},
                   {"cve_count", opt_json(r.cve_count)},
                   {"high_or_severe_count", opt_json(r.high_or_severe_count)},
                   {"eloc", opt_json(r.eloc)},
                   {"eloc_share", opt_json(r.eloc_share)},
                   {"attack_papers", opt_json(r.attack_papers)}});
  }
  return doc.dump(2) + "\n";
}

std::vector<LedgerRow> parse_ledger_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "ledger");
  table.require_columns({"standard_name", "abbreviation", "sites_using", "weighted_break_rate", "cve_count",
                         "high_or_severe_count", "eloc", "eloc_share", "attack_papers"});
  std::vector<LedgerRow> out;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& row = table.rows()[i];
    auto cell = [&](std::string_view name) { return text::trim(row[table.column(name)]); };
    auto u64 = [&](std::string_view name) -> std::optional<std::uint64_t> {
      auto c = cell(name);
      if (c.empty()) return std::nullopt;
      return text::parse_u64(c, name);
    };
    auto dbl = [&](std::string_view name) -> std::optional<double> {
      auto c = cell(name);
      if (c.empty()) return std::nullopt;
      return text::parse_double(c, name);
    };
    try {
      LedgerRow r;
      r.standard = std::string(cell("abbreviation"));
      if (r.standard.empty()) throw ValidationError("empty abbreviation");
      if (auto n = cell("standard_name"); !n.empty()) r.name = std::string(n);
      r.sites_using = u64("sites_using");
      r.weighted_break_rate = dbl("weighted_break_rate");
      r.cve_count = u64("cve_count");
      r.high_or_severe_count = u64("high_or_severe_count");
      r.eloc = u64("eloc");
      r.eloc_share = dbl("eloc_share");
      r.attack_papers = u64("attack_papers");
      if (!seen.insert(r.standard).second) throw ValidationError(fmt::format("standard '{}' listed twice", r.standard));
      out.push_back(std::move(r));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("ledger: {}", e.what()), table.line_of(i), 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.standard < b.standard; });
  return out;
}

namespace {

bool valid_host(std::string_view host) {
  if (host.empty() || host.size() > 253) return false;
  for (const auto& label : text::split(host, '.')) {
    if (label.empty() || label.size() > 63 || label.front() == '-' || label.back() == '-') return false;
    for (unsigned char c : label) {
      if (!std::isalnum(c) && c != '-') return false;
    }
  }
  return true;
}

struct Origin {
  std::string scheme;
  std::string host;
  std::string port;
};

std::optional<Origin> split_origin(std::string_view s) {
  const auto sep = s.find("://");
  if (sep == std::string_view::npos || sep == 0) return std::nullopt;
  Origin o;
  o.scheme = text::to_lower(s.substr(0, sep));
  if (!std::isalpha(static_cast<unsigned char>(o.scheme[0]))) return std::nullopt;
  for (unsigned char c : o.scheme) {
    if (!std::isalnum(c) && c != '+' && c != '-' && c != '.') return std::nullopt;
  }
  auto rest = s.substr(sep + 3);
  if (auto colon = rest.find(':'); colon != std::string_view::npos) {
    o.port = std::string(rest.substr(colon + 1));
    rest = rest.substr(0, colon);
    if (o.port.empty() || o.port.size() > 5 ||
        !std::all_of(o.port.begin(), o.port.end(), [](unsigned char c) { return std::isdigit(c); })) {
      return std::nullopt;
    }
    const auto port = std::stoul(o.port);
    if (port == 0 || port > 65535) return std::nullopt;
  }
  o.host = text::to_lower(rest);
  if (!valid_host(o.host)) return std::nullopt;
  return o;
}

bool is_suffix_pattern(std::string_view p) { return p.size() > 2 && p.substr(0, 2) == "*."; }

}  // namespace

bool is_valid_origin_pattern(std::string_view pattern) {
  if (is_suffix_pattern(pattern)) return valid_host(pattern.substr(2));
  return split_origin(pattern).has_value();
}

bool origin_matches(std::string_view pattern, std::string_view origin) {
  const auto o = split_origin(origin);
  if (!o) return false;
  if (is_suffix_pattern(pattern)) {
    const auto suffix = "." + text::to_lower(pattern.substr(2));
    return o->host.size() > suffix.size() && o->host.compare(o->host.size() - suffix.size(), suffix.size(), suffix) == 0;
  }
  const auto p = split_origin(pattern);
  return p && p->scheme == o->scheme && p->host == o->host && p->port == o->port;
}

void validate_policy(const BlockPolicy& policy) {
  if (policy.version < 1 || policy.version > kPolicyVersion) {
    throw ValidationError(fmt::format("policy: unsupported version {}", policy.version));
  }
  if (policy.name.empty()) throw ValidationError("policy: empty name");
  auto check_names = [](const std::set<std::string>& s, std::string_view where) {
    for (const auto& a : s) {
      if (text::trim(a).empty() || text::trim(a).size() != a.size()) {
        throw ValidationError(fmt::format("policy: invalid standard abbreviation '{}' in {}", a, where));
      }
    }
  };
  check_names(policy.blocked, "blocked");
  check_names(policy.whitelist, "whitelist");
  for (const auto& a : policy.blocked) {
    if (policy.whitelist.count(a)) {
      throw ValidationError(fmt::format("policy: standard '{}' is both blocked and whitelisted", a));
    }
  }
  for (const auto& [pattern, rule] : policy.per_origin) {
    if (!is_valid_origin_pattern(pattern)) {
      throw ValidationError(fmt::format("policy: invalid origin pattern '{}'", pattern));
    }
    check_names(rule.allow, pattern);
    check_names(rule.block, pattern);
    for (const auto& a : rule.block) {
      if (rule.allow.count(a)) {
        throw ValidationError(fmt::format("policy: standard '{}' both allowed and blocked for '{}'", a, pattern));
      }
      if (policy.whitelist.count(a)) {
        throw ValidationError(fmt::format("policy: whitelisted standard '{}' blocked for '{}'", a, pattern));
      }
    }
  }
}

std::string serialize_policy(const BlockPolicy& policy) {
  validate_policy(policy);
  nlohmann::ordered_json doc;
  doc["version"] = policy.version;
  doc["name"] = policy.name;
  doc["blocked"] = policy.blocked;
  doc["whitelist"] = policy.whitelist;
  auto per_origin = nlohmann::ordered_json::object();
  for (const auto& [pattern, rule] : policy.per_origin) {
    per_origin[pattern] = {{"allow", rule.allow}, {"block", rule.block}};
  }
  doc["per_origin"] = per_origin;
  doc["debug"] = policy.debug;
  return doc.dump(2) + "\n";
}

namespace {

void reject_unknown(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ValidationError(fmt::format("policy: unknown field '{}' in {}", key, where));
    }
  }
}

std::set<std::string> string_set(const nlohmann::json& arr, std::string_view where) {
  if (!arr.is_array()) throw ValidationError(fmt::format("policy: {} must be an array", where));
  std::set<std::string> out;
  for (const auto& v : arr) {
    if (!v.is_string()) throw ValidationError(fmt::format("policy: {} must contain strings", where));
    if (!out.insert(v.get<std::string>()).second) {
      throw ValidationError(fmt::format("policy: duplicate entry '{}' in {}", v.get<std::string>(), where));
    }
  }
  return out;
}

}  // namespace

BlockPolicy parse_policy(std::string_view document) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(fmt::format("policy: invalid JSON: {}", e.what()));
  }
  if (!doc.is_object()) throw ValidationError("policy: document must be an object");
  reject_unknown(doc, {"version", "name", "blocked", "whitelist", "per_origin", "debug"}, "policy");
  BlockPolicy p;
  if (auto it = doc.find("version"); it != doc.end()) {
    if (!it->is_number_integer()) throw ValidationError("policy: version must be an integer");
    p.version = it->get<int>();
    if (p.version > kPolicyVersion) {
      throw ValidationError(fmt::format("policy: version {} is newer than supported version {}", p.version,
                                        kPolicyVersion));
    }
  }
  auto name = doc.find("name");
  if (name == doc.end() || !name->is_string()) throw ValidationError("policy: missing string field 'name'");
  p.name = name->get<std::string>();
  if (auto it = doc.find("blocked"); it != doc.end()) p.blocked = string_set(*it, "blocked");
  if (auto it = doc.find("whitelist"); it != doc.end()) p.whitelist = string_set(*it, "whitelist");
  if (auto it = doc.find("per_origin"); it != doc.end()) {
    if (!it->is_object()) throw ValidationError("policy: per_origin must be an object");
    for (const auto& [pattern, rule] : it->items()) {
      if (!rule.is_object()) throw ValidationError(fmt::format("policy: per_origin '{}' must be an object", pattern));
      reject_unknown(rule, {"allow", "block"}, fmt::format("per_origin '{}'", pattern));
      OriginRule r;
      if (auto a = rule.find("allow"); a != rule.end()) r.allow = string_set(*a, pattern + " allow");
      if (auto b = rule.find("block"); b != rule.end()) r.block = string_set(*b, pattern + " block");
      p.per_origin.emplace(pattern, std::move(r));
    }
  }
  if (auto it = doc.find("debug"); it != doc.end()) {
    if (!it->is_boolean()) throw ValidationError("policy: debug must be a boolean");
    p.debug = it->get<bool>();
  }
  validate_policy(p);
  return p;
}

std::set<std::string> effective_blocked(const BlockPolicy& policy, std::optional<std::string_view> origin) {
  std::set<std::string> out = policy.blocked;
  if (origin) {
    std::vector<std::pair<std::size_t, const OriginRule*>> matching;
    for (const auto& [pattern, rule] : policy.per_origin) {
      if (!origin_matches(pattern, *origin)) continue;
      // Exact patterns sort after every suffix pattern.
      matching.emplace_back(is_suffix_pattern(pattern) ? pattern.size() : SIZE_MAX, &rule);
    }
    std::stable_sort(matching.begin(), matching.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& [_, rule] : matching) {
      for (const auto& a : rule->allow) out.erase(a);
      out.insert(rule->block.begin(), rule->block.end());
    }
  }
  for (const auto& w : policy.whitelist) out.erase(w);
  return out;
}

std::set<idl::FeatureId> blocked_features(const BlockPolicy& policy, const idl::FeatureCatalog& catalog,
                                          std::optional<std::string_view> origin) {
  const auto blocked = effective_blocked(policy, origin);
  for (const auto& s : blocked) {
    if (!catalog.has_standard(s)) throw ValidationError(fmt::format("policy: unknown standard '{}'", s));
  }
  std::set<idl::FeatureId> out;
  for (const auto& [feature, abbrev] : catalog.assignments()) {
    if (blocked.count(abbrev)) out.insert(feature);
  }
  return out;
}

CostPredicate::Metric cost_metric_from_string(std::string_view s) {
  if (s == "cve") return CostPredicate::Metric::cve;
  if (s == "eloc_share") return CostPredicate::Metric::eloc_share;
  if (s == "attacks") return CostPredicate::Metric::attacks;
  throw ValidationError(fmt::format("unknown cost metric '{}' (expected cve, eloc_share or attacks)", s));
}

BlockPolicy generate_policy(std::span<const LedgerRow> ledger, double max_break_rate, const CostPredicate& cost,
                            std::string name, std::set<std::string> whitelist) {
  BlockPolicy p;
  p.name = std::move(name);
  p.whitelist = std::move(whitelist);
  for (const auto& row : ledger) {
    if (!row.weighted_break_rate || *row.weighted_break_rate > max_break_rate) continue;
    std::optional<double> value;
    switch (cost.metric) {
      case CostPredicate::Metric::cve:
        if (row.cve_count) value = static_cast<double>(*row.cve_count);
        break;
      case CostPredicate::Metric::eloc_share:
        value = row.eloc_share;
        break;
      case CostPredicate::Metric::attacks:
        if (row.attack_papers) value = static_cast<double>(*row.attack_papers);
        break;
    }
    if (!value || *value < cost.min) continue;
    if (p.whitelist.count(row.standard)) continue;
    p.blocked.insert(row.standard);
  }
  validate_policy(p);
  return p;
}

PolicyStats evaluate_policy(const BlockPolicy& policy, std::span<const LedgerRow> ledger,
                            std::span<const cve::AttributionResult> attributions) {
  std::map<std::string_view, const LedgerRow*> rows;
  for (const auto& r : ledger) rows.emplace(r.standard, &r);
  PolicyStats s;
  for (const auto& b : policy.blocked) {
    auto it = rows.find(b);
    if (it == rows.end()) throw ValidationError(fmt::format("policy: unknown standard '{}'", b));
    const auto& row = *it->second;
    s.eloc_removed += row.eloc.value_or(0);
    s.est_break_rate_sum += row.weighted_break_rate.value_or(0.0);
  }
  s.standards_blocked = policy.blocked.size();
  for (const auto& r : ledger) s.eloc_total += r.eloc.value_or(0);
  std::set<std::string_view> total;
  std::set<std::string_view> covered;
  for (const auto& a : attributions) {
    if (a.status != cve::Status::attributed) continue;
    total.insert(a.cve_id);
    for (const auto& st : a.standards) {
      if (policy.blocked.count(st)) {
        covered.insert(a.cve_id);
        break;
      }
    }
  }
  s.cve_total = total.size();
  s.cve_covered = covered.size();
  if (s.cve_total) s.cve_fraction = static_cast<double>(s.cve_covered) / static_cast<double>(s.cve_total);
  if (s.eloc_total) s.eloc_fraction = static_cast<double>(s.eloc_removed) / static_cast<double>(s.eloc_total);
  return s;
}

std::string policy_stats_json(const BlockPolicy& policy, const PolicyStats& stats) {
  nlohmann::ordered_json doc;
  doc["policy"] = policy.name;
  doc["standards_blocked"] = stats.standards_blocked;
  doc["cve_covered"] = stats.cve_covered;
  doc["cve_total"] = stats.cve_total;
  doc["cve_fraction"] = stats.cve_fraction;
  doc["eloc_removed"] = stats.eloc_removed;
  doc["eloc_total"] = stats.eloc_total;
  doc["eloc_fraction"] = stats.eloc_fraction;
  doc["est_break_rate_sum"] = stats.est_break_rate_sum;
  doc["est_break_rate_note"] = "sum of per-standard weighted break rates; an estimate, not a measured rate";
  return doc.dump(2) + "\n";
}

namespace {

const std::vector<std::string> kConservative = {"BE",  "DOM-PS", "FULL", "HRT", "H-WS", "H-CM", "H-WW",
                                                "IDB", "PT2",    "RT",   "SVG", "UIE",  "WEBA", "WEBGL"};

const std::vector<std::string> kAggressiveExtra = {
    "ALS", "BA",   "CSS-CR", "CSS-FO", "CSS-VM", "DOM2-T", "EME", "EC", "F",   "FA",
    "GP",  "GEO",  "H-B",    "H-P",    "H-HI",   "H-WB",   "MCS", "MSE", "NT", "PT",
    "PL",  "PE",   "SEL",    "SO",     "TC",     "URL",    "UT2", "DOM4", "WN", "WRTC"};

}  // namespace

std::vector<std::string> preset_names() { return {"aggressive", "conservative"}; }

BlockPolicy preset(std::string_view name) {
  BlockPolicy p;
  if (name == "conservative") {
    p.name = "conservative";
    p.blocked.insert(kConservative.begin(), kConservative.end());
  } else if (name == "aggressive") {
    p.name = "aggressive";
    p.blocked.insert(kConservative.begin(), kConservative.end());
    p.blocked.insert(kAggressiveExtra.begin(), kAggressiveExtra.end());
  } else {
    throw ValidationError(fmt::format("unknown preset '{}' (expected conservative or aggressive)", name));
  }
  return p;
}

}  // namespace surface::policy
