#include "surface/cve_attrib.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <json.hpp>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::cve {

std::string_view to_string(Severity s) {
  switch (s) {
    case Severity::low: return "low";
    case Severity::moderate: return "moderate";
    case Severity::high: return "high";
    case Severity::severe: return "severe";
  }
  return "low";
}

Severity severity_from_string(std::string_view s) {
  const auto l = text::to_lower(text::trim(s));
  if (l == "low") return Severity::low;
  if (l == "moderate" || l == "medium") return Severity::moderate;
  if (l == "high") return Severity::high;
  if (l == "severe" || l == "critical") return Severity::severe;
  throw ValidationError(fmt::format("unknown severity '{}'", s));
}

Severity severity_from_cvss(double score) {
  if (!(score >= 0.0 && score <= 10.0)) throw ValidationError(fmt::format("CVSS score {} outside [0,10]", score));
  if (score >= 9.0) return Severity::severe;
  if (score >= 7.0) return Severity::high;
  if (score >= 4.0) return Severity::moderate;
  return Severity::low;
}

std::string_view to_string(Route r) {
  switch (r) {
    case Route::standard_name: return "standard_name";
    case Route::js_endpoint: return "js_endpoint";
    case Route::native_symbol: return "native_symbol";
    case Route::functionality_keyword: return "functionality_keyword";
  }
  return "standard_name";
}

Route route_from_string(std::string_view s) {
  if (s == "standard_name") return Route::standard_name;
  if (s == "js_endpoint") return Route::js_endpoint;
  if (s == "native_symbol") return Route::native_symbol;
  if (s == "functionality_keyword") return Route::functionality_keyword;
  throw ValidationError(fmt::format("unknown route '{}'", s));
}

std::string_view to_string(Status s) {
  switch (s) {
    case Status::discarded: return "discarded";
    case Status::unattributed: return "unattributed";
    case Status::attributed: return "attributed";
  }
  return "unattributed";
}

namespace {

Status status_from_string(std::string_view s) {
  if (s == "discarded") return Status::discarded;
  if (s == "unattributed") return Status::unattributed;
  if (s == "attributed") return Status::attributed;
  throw ValidationError(fmt::format("unknown status '{}'", s));
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

bool is_high_or_severe(Severity s) { return s == Severity::high || s == Severity::severe; }

}  // namespace

int year_of_cve_id(std::string_view id) {
  if (id.size() < 13 || id.substr(0, 4) != "CVE-" || id[8] != '-' || !all_digits(id.substr(4, 4)) ||
      !all_digits(id.substr(9))) {
    throw ValidationError(fmt::format("malformed CVE id '{}'", id));
  }
  return std::stoi(std::string(id.substr(4, 4)));
}

std::vector<CveRecord> parse_cves_jsonl(std::string_view text) {
  std::vector<CveRecord> out;
  std::set<std::string> seen;
  std::size_t line = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++line;
    const auto body = text::trim(raw);
    if (body.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(body);
      CveRecord r;
      r.id = j.at("id").get<std::string>();
      r.year = year_of_cve_id(r.id);
      if (auto it = j.find("year"); it != j.end() && it->get<int>() != r.year) {
        throw ValidationError(fmt::format("year {} does not match id {}", it->get<int>(), r.id));
      }
      r.description = j.value("description", std::string{});
      const auto& sev = j.at("severity");
      r.severity = sev.is_number() ? severity_from_cvss(sev.get<double>()) : severity_from_string(sev.get<std::string>());
      r.product_hint = j.value("product_hint", std::string{});
      if (!seen.insert(r.id).second) throw ValidationError(fmt::format("duplicate CVE id {}", r.id));
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("cves: {}", e.what()), line, 1);
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("cves: {}", e.what()), line, 1);
    }
  }
  return out;
}

std::vector<std::string> parse_keyword_list(std::string_view text) {
  std::vector<std::string> out;
  for (const auto& raw : text::split(text, '\n')) {
    const auto t = text::trim(raw);
    if (t.empty() || t.front() == '#') continue;
    out.emplace_back(t);
  }
  return out;
}

FilterResult filter_browser_cves(std::span<const CveRecord> records, const FilterConfig& config) {
  FilterResult out;
  for (const auto& r : records) {
    bool drop = r.year < config.year_floor;
    for (const auto& kw : config.discard_keywords) {
      if (drop) break;
      drop = text::contains_token(r.description, kw) || text::contains_token(r.product_hint, kw);
    }
    (drop ? out.discarded : out.kept).push_back(r);
  }
  return out;
}

std::vector<AttributionRule> parse_rules_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "rules");
  const auto c_route = table.column("route");
  const auto c_pattern = table.column("pattern");
  const auto c_target = table.column("target_abbrev");
  const auto c_negate = table.find_column("negate");
  std::vector<AttributionRule> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      AttributionRule rule;
      rule.route = route_from_string(text::trim(row[c_route]));
      rule.pattern = std::string(text::trim(row[c_pattern]));
      rule.target = std::string(text::trim(row[c_target]));
      if (c_negate) {
        const auto n = text::trim(row[*c_negate]);
        rule.negate = !n.empty() && text::parse_bool(n, "negate");
      }
      if (rule.pattern.empty()) throw ValidationError("empty pattern");
      if (rule.target.empty()) throw ValidationError("empty target");
      out.push_back(std::move(rule));
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("rules: {}", e.what()), table.line_of(r), 1);
    }
  }
  return out;
}

std::string rules_csv(std::span<const AttributionRule> rules) {
  std::string out = "route,pattern,target_abbrev,negate\n";
  for (const auto& r : rules) {
    append_csv_row(out, {to_string(r.route), r.pattern, r.target, r.negate ? "true" : "false"});
  }
  return out;
}

void validate_rules(std::span<const AttributionRule> rules, std::span<const std::string> standards) {
  for (const auto& r : rules) {
    if (text::trim(r.pattern).empty()) throw ValidationError("rules: empty pattern");
    if (std::find(standards.begin(), standards.end(), r.target) == standards.end()) {
      throw ValidationError(
          fmt::format("rules: rule '{}' targets unknown standard '{}'", r.pattern, r.target));
    }
  }
}

AttributionResult attribute(const CveRecord& record, std::span<const AttributionRule> rules) {
  AttributionResult out;
  out.cve_id = record.id;
  std::map<std::string, std::set<Route>> positive;
  std::set<std::string> negated;
  for (const auto& rule : rules) {
    if (!text::contains_token(record.description, rule.pattern)) continue;
    if (rule.negate) {
      negated.insert(rule.target);
    } else {
      positive[rule.target].insert(rule.route);
    }
  }
  for (const auto& [target, routes] : positive) {
    if (negated.count(target)) continue;
    out.standards.insert(target);
    out.routes_used.insert(routes.begin(), routes.end());
  }
  if (!out.standards.empty()) {
    out.status = Status::attributed;
    out.primary_route = *out.routes_used.begin();
  }
  return out;
}

std::vector<AttributionResult> attribute_all(std::span<const CveRecord> records, const FilterConfig& filter,
                                             std::span<const AttributionRule> rules) {
  const auto split = filter_browser_cves(records, filter);
  std::vector<AttributionResult> out;
  out.reserve(records.size());
  for (const auto& r : split.kept) out.push_back(attribute(r, rules));
  for (const auto& r : split.discarded) {
    AttributionResult d;
    d.cve_id = r.id;
    d.status = Status::discarded;
    out.push_back(std::move(d));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.cve_id < b.cve_id; });
  return out;
}

Tally tally(std::span<const AttributionResult> results, std::span<const CveRecord> records,
            std::span<const std::string> standards) {
  std::map<std::string_view, const CveRecord*> by_id;
  for (const auto& r : records) by_id.emplace(r.id, &r);
  std::map<std::string, TallyRow> rows;
  for (const auto& s : standards) rows[s].standard = s;
  Tally out;
  std::set<std::string_view> counted;
  for (const auto& res : results) {
    auto it = by_id.find(res.cve_id);
    if (it == by_id.end()) throw ValidationError(fmt::format("tally: result for unknown CVE '{}'", res.cve_id));
    if (!counted.insert(res.cve_id).second) {
      throw ValidationError(fmt::format("tally: CVE '{}' has more than one result", res.cve_id));
    }
    if (res.status != Status::attributed) continue;
    const bool hs = is_high_or_severe(it->second->severity);
    for (const auto& s : res.standards) {
      auto row = rows.find(s);
      if (row == rows.end()) {
        throw ValidationError(fmt::format("tally: CVE '{}' attributed to unknown standard '{}'", res.cve_id, s));
      }
      ++row->second.cve_count;
      if (hs) ++row->second.high_or_severe_count;
    }
    ++out.dedup_total;
    if (hs) ++out.dedup_high_or_severe;
  }
  for (auto& [_, row] : rows) out.rows.push_back(std::move(row));
  return out;
}

double RouteBreakdown::fraction(Route r) const {
  if (attributed == 0) return 0.0;
  auto it = counts.find(r);
  return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(attributed);
}

RouteBreakdown route_breakdown(std::span<const AttributionResult> results) {
  RouteBreakdown out;
  for (auto r : {Route::standard_name, Route::js_endpoint, Route::native_symbol, Route::functionality_keyword}) {
    out.counts[r] = 0;
  }
  for (const auto& res : results) {
    if (res.status != Status::attributed || !res.primary_route) continue;
    ++out.attributed;
    ++out.counts[*res.primary_route];
  }
  return out;
}

std::vector<AttributionRule> suggest_native_symbol_rules(std::span<const CveRecord> records,
                                                         const graph::CallGraph& graph,
                                                         std::span<const std::string> standards,
                                                         std::span<const AttributionRule> existing) {
  std::set<std::pair<std::string, std::string>> known;
  for (const auto& r : existing) {
    if (r.route == Route::native_symbol) known.emplace(text::to_lower(r.pattern), r.target);
  }
  std::set<AttributionRule> out;
  for (const auto& s : standards) {
    for (const auto& id : graph::exclusive_functions(graph, s, standards)) {
      const auto& name = graph.node(*graph.index_of(id)).display_name;
      // Keep the last two `::` segments: qualified enough to be specific,
      // short enough to appear in advisory prose.
      std::string symbol = name;
      if (auto last = name.rfind("::"); last != std::string::npos && last > 0) {
        auto prev = name.rfind("::", last - 1);
        symbol = prev == std::string::npos ? name : name.substr(prev + 2);
      }
      if (symbol.empty() || known.count({text::to_lower(symbol), s})) continue;
      const bool mentioned = std::any_of(records.begin(), records.end(), [&](const CveRecord& r) {
        return text::contains_token(r.description, symbol);
      });
      if (mentioned) out.insert(AttributionRule{Route::native_symbol, symbol, s, false});
    }
  }
  return {out.begin(), out.end()};
}

std::string results_jsonl(std::span<const AttributionResult> results) {
  std::string out;
  for (const auto& r : results) {
    nlohmann::ordered_json j;
    j["cve_id"] = r.cve_id;
    j["status"] = std::string(to_string(r.status));
    j["standards"] = r.standards;
    auto routes = nlohmann::ordered_json::array();
    for (auto route : r.routes_used) routes.push_back(std::string(to_string(route)));
    j["routes_used"] = routes;
    j["primary_route"] = r.primary_route ? nlohmann::ordered_json(std::string(to_string(*r.primary_route))) : nullptr;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<AttributionResult> parse_results_jsonl(std::string_view text) {
  std::vector<AttributionResult> out;
  std::size_t line = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++line;
    const auto body = text::trim(raw);
    if (body.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(body);
      AttributionResult r;
      r.cve_id = j.at("cve_id").get<std::string>();
      r.status = status_from_string(j.at("status").get<std::string>());
      for (const auto& s : j.at("standards")) r.standards.insert(s.get<std::string>());
      for (const auto& s : j.at("routes_used")) r.routes_used.insert(route_from_string(s.get<std::string>()));
      if (auto it = j.find("primary_route"); it != j.end() && !it->is_null()) {
        r.primary_route = route_from_string(it->get<std::string>());
      }
      if ((r.status == Status::attributed) == r.standards.empty()) {
        throw ValidationError("standards must be non-empty exactly when attributed");
      }
      if (r.status == Status::attributed &&
          (!r.primary_route || r.routes_used.empty() || *r.primary_route != *r.routes_used.begin())) {
        throw ValidationError("primary_route must be the highest-precedence route used");
      }
      out.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("attributions: {}", e.what()), line, 1);
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("attributions: {}", e.what()), line, 1);
    }
  }
  return out;
}

std::string tally_csv(const Tally& t) {
  std::string out = "standard,cve_count,high_or_severe_count\n";
  for (const auto& r : t.rows) {
    append_csv_row(out, {r.standard, std::to_string(r.cve_count), std::to_string(r.high_or_severe_count)});
  }
  return out;
}

std::string tally_json(const Tally& t, const RouteBreakdown& routes) {
  nlohmann::ordered_json doc;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"standard", r.standard},
                    {"cve_count", r.cve_count},
                    {"high_or_severe_count", r.high_or_severe_count}});
  }
  doc["standards"] = rows;
  doc["dedup_total"] = t.dedup_total;
  doc["dedup_high_or_severe"] = t.dedup_high_or_severe;
  nlohmann::ordered_json r;
  for (const auto& [route, count] : routes.counts) {
    r[std::string(to_string(route))] = {{"count", count}, {"fraction", routes.fraction(route)}};
  }
  doc["routes"] = r;
  return doc.dump(2) + "\n";
}

std::vector<TallyRow> parse_tally_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "cve tally");
  const auto c_std = table.column("standard");
  const auto c_count = table.column("cve_count");
  const auto c_hs = table.column("high_or_severe_count");
  std::vector<TallyRow> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      TallyRow t;
      t.standard = std::string(text::trim(row[c_std]));
      t.cve_count = text::parse_u64(text::trim(row[c_count]), "cve_count");
      t.high_or_severe_count = text::parse_u64(text::trim(row[c_hs]), "high_or_severe_count");
      if (t.high_or_severe_count > t.cve_count) throw ValidationError("high_or_severe_count exceeds cve_count");
      out.push_back(std::move(t));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("cve tally: {}", e.what()), table.line_of(r), 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.standard < b.standard; });
  return out;
}

}  // namespace surface::cve
