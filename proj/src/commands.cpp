#include "surface/commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <json.hpp>

#include "surface/error.hpp"
#include "surface/io.hpp"
#include "surface/text.hpp"

namespace surface::cmd {

Format format_from_string(std::string_view s) {
  if (s == "csv") return Format::csv;
  if (s == "json") return Format::json;
  throw ValidationError(fmt::format("unknown format '{}' (expected csv or json)", s));
}

namespace {

// Prefixes parse diagnostics with the file they came from.
template <typename F>
auto with_source(const fs::path& path, F&& f) -> decltype(f(std::string_view{})) {
  const auto content = read_file(path);
  try {
    return f(content);
  } catch (const ParseError& e) {
    throw ValidationError(fmt::format("{}:{}", path.string(), e.what()));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

graph::CallGraph load_graph(const fs::path& nodes, const fs::path& edges) {
  const auto node_text = read_file(nodes);
  const auto edge_text = read_file(edges);
  try {
    const auto first = text::trim(node_text);
    auto parsed = !first.empty() && first.front() == '{' ? graph::parse_nodes_jsonl(node_text)
                                                          : graph::parse_nodes_csv(node_text);
    std::vector<graph::Edge> edge_list;
    try {
      edge_list = graph::parse_edges_csv(edge_text);
    } catch (const ParseError& e) {
      throw ValidationError(fmt::format("{}:{}", edges.string(), e.what()));
    }
    return graph::CallGraph::build(std::move(parsed), std::move(edge_list));
  } catch (const ParseError& e) {
    throw ValidationError(fmt::format("{}:{}", nodes.string(), e.what()));
  }
}

cve::FilterConfig filter_config(const std::optional<fs::path>& discard_keywords, int year_floor) {
  cve::FilterConfig config;
  config.year_floor = year_floor;
  if (discard_keywords) config.discard_keywords = cve::parse_keyword_list(read_file(*discard_keywords));
  return config;
}

std::vector<policy::LedgerRow> load_ledger(const fs::path& path) {
  return with_source(path, [](std::string_view t) { return policy::parse_ledger_csv(t); });
}

}  // namespace

std::vector<idl::InterfaceDefinition> load_idl(const std::vector<fs::path>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    std::error_code ec;
    if (fs::is_directory(in, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(in, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".idl") found.push_back(entry.path());
      }
      if (ec) throw IoError(fmt::format("cannot list {}: {}", in.string(), ec.message()));
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  std::vector<idl::InterfaceDefinition> defs;
  for (const auto& f : files) {
    auto part = with_source(f, [](std::string_view t) { return idl::parse_webidl(t); });
    defs.insert(defs.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return defs;
}

idl::FeatureCatalog build_catalog_from_files(const std::vector<fs::path>& idl_inputs, const fs::path& mapping) {
  const auto defs = load_idl(idl_inputs);
  const auto map = with_source(mapping, [](std::string_view t) { return idl::parse_standard_mapping(t); });
  return idl::build_catalog(defs, map);
}

idl::FeatureCatalog load_catalog_json(const fs::path& catalog) {
  return with_source(catalog, [](std::string_view t) { return idl::FeatureCatalog::from_json(t); });
}

std::string catalog(const std::vector<fs::path>& idl_inputs, const fs::path& mapping) {
  return build_catalog_from_files(idl_inputs, mapping).to_json();
}

std::string eloc(const fs::path& nodes, const fs::path& edges, const fs::path& catalog, Format format,
                 bool include_third_party) {
  const auto cat = load_catalog_json(catalog);
  const auto g = load_graph(nodes, edges);
  graph::PruneOptions options;
  options.include_third_party = include_third_party;
  const auto table = graph::eloc_table(g, cat.abbreviations(), options);
  return format == Format::json ? graph::eloc_table_json(table) : graph::eloc_table_csv(table);
}

CvesOutput cves(const fs::path& cves, const fs::path& rules, const fs::path& catalog,
                const std::optional<fs::path>& discard_keywords, int year_floor, Format format) {
  const auto cat = load_catalog_json(catalog);
  const auto records = with_source(cves, [](std::string_view t) { return cve::parse_cves_jsonl(t); });
  const auto rule_list = with_source(rules, [](std::string_view t) { return cve::parse_rules_csv(t); });
  const auto standards = cat.abbreviations();
  with_source(rules, [&](std::string_view) {
    cve::validate_rules(rule_list, standards);
    return 0;
  });
  const auto results = cve::attribute_all(records, filter_config(discard_keywords, year_floor), rule_list);
  const auto t = cve::tally(results, records, standards);
  CvesOutput out;
  out.attributions_jsonl = cve::results_jsonl(results);
  out.tally = format == Format::json ? cve::tally_json(t, cve::route_breakdown(results)) : cve::tally_csv(t);
  return out;
}

std::string suggest_rules(const fs::path& cves, const fs::path& nodes, const fs::path& edges,
                          const fs::path& catalog, const std::optional<fs::path>& rules) {
  const auto cat = load_catalog_json(catalog);
  const auto records = with_source(cves, [](std::string_view t) { return cve::parse_cves_jsonl(t); });
  const auto g = load_graph(nodes, edges);
  std::vector<cve::AttributionRule> existing;
  if (rules) existing = with_source(*rules, [](std::string_view t) { return cve::parse_rules_csv(t); });
  return cve::rules_csv(cve::suggest_native_symbol_rules(records, g, cat.abbreviations(), existing));
}

std::string benefit(const fs::path& tests, const fs::path& usage, Format format) {
  const auto t = with_source(tests, [](std::string_view s) { return benefit::parse_site_tests_csv(s); });
  const auto u = with_source(usage, [](std::string_view s) { return benefit::parse_usage_csv(s); });
  const auto rows = benefit::break_rate_table(t, u);
  return format == Format::json ? benefit::break_rate_json(rows, benefit::agreement(t))
                                : benefit::break_rate_csv(rows);
}

std::string score(const fs::path& eloc_csv, const fs::path& tally_csv, const fs::path& break_rates_csv,
                  const fs::path& attacks, const std::optional<fs::path>& catalog, policy::LedgerMode mode,
                  Format format) {
  const auto e = with_source(eloc_csv, [](std::string_view t) { return graph::parse_eloc_csv(t); });
  const auto t = with_source(tally_csv, [](std::string_view s) { return cve::parse_tally_csv(s); });
  const auto b = with_source(break_rates_csv, [](std::string_view s) { return benefit::parse_break_rate_csv(s); });
  const auto a = with_source(attacks, [](std::string_view s) { return policy::parse_attacks_csv(s); });
  std::map<std::string, std::string> names;
  if (catalog) names = policy::standard_names(load_catalog_json(*catalog));
  const auto ledger = policy::build_ledger(e, t, b, a, mode, names);
  return format == Format::json ? policy::ledger_json(ledger) : policy::ledger_csv(ledger);
}

std::string policy_gen(const fs::path& ledger_csv, double max_break_rate, const policy::CostPredicate& cost,
                       const std::string& name, const std::vector<std::string>& whitelist) {
  const auto ledger = load_ledger(ledger_csv);
  return policy::serialize_policy(policy::generate_policy(ledger, max_break_rate, cost, name,
                                                          std::set<std::string>(whitelist.begin(), whitelist.end())));
}

std::string policy_eval(const fs::path& policy_path, const fs::path& ledger_csv, const fs::path& attributions) {
  const auto p = with_source(policy_path, [](std::string_view t) { return policy::parse_policy(t); });
  const auto ledger = load_ledger(ledger_csv);
  const auto results = with_source(attributions, [](std::string_view t) { return cve::parse_results_jsonl(t); });
  return policy::policy_stats_json(p, policy::evaluate_policy(p, ledger, results));
}

std::string policy_preset(std::string_view name) { return policy::serialize_policy(policy::preset(name)); }

std::string scatter(const fs::path& ledger_csv, report::ScatterX x) {
  return report::scatter_csv(load_ledger(ledger_csv), x);
}

Manifest load_manifest(const fs::path& path) {
  const auto base = path.parent_path();
  return with_source(path, [&](std::string_view content) {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(content);
    } catch (const nlohmann::json::parse_error& e) {
      throw ValidationError(fmt::format("invalid JSON: {}", e.what()));
    }
    if (!doc.is_object()) throw ValidationError("manifest must be an object");
    static const std::set<std::string> known = {"idl",   "mapping", "nodes", "edges",   "cves",    "rules",
                                                "discard_keywords", "tests", "usage", "attacks", "policies"};
    for (const auto& [key, _] : doc.items()) {
      if (!known.count(key)) throw ValidationError(fmt::format("unknown manifest field '{}'", key));
    }
    auto one = [&](const char* key) -> fs::path {
      auto it = doc.find(key);
      if (it == doc.end() || !it->is_string()) throw ValidationError(fmt::format("manifest needs string '{}'", key));
      return base / it->get<std::string>();
    };
    auto many = [&](const char* key, bool required) {
      std::vector<fs::path> out;
      auto it = doc.find(key);
      if (it == doc.end()) {
        if (required) throw ValidationError(fmt::format("manifest needs array '{}'", key));
        return out;
      }
      if (it->is_string()) {
        out.push_back(base / it->get<std::string>());
        return out;
      }
      if (!it->is_array()) throw ValidationError(fmt::format("manifest field '{}' must be an array", key));
      for (const auto& v : *it) {
        if (!v.is_string()) throw ValidationError(fmt::format("manifest field '{}' must hold strings", key));
        out.push_back(base / v.get<std::string>());
      }
      return out;
    };
    Manifest m;
    m.idl = many("idl", true);
    m.mapping = one("mapping");
    m.nodes = one("nodes");
    m.edges = one("edges");
    m.cves = one("cves");
    m.rules = one("rules");
    if (doc.contains("discard_keywords")) m.discard_keywords = one("discard_keywords");
    m.tests = one("tests");
    m.usage = one("usage");
    m.attacks = one("attacks");
    m.policies = many("policies", false);
    return m;
  });
}

std::optional<fs::path> default_manifest() {
  const char* dir = std::getenv("SURFACE_LEDGER_FIXTURES");
  if (!dir || !*dir) return std::nullopt;
  return fs::path(dir) / "manifest.json";
}

PipelineResult run_pipeline(const Manifest& m, const PipelineOptions& options) {
  PipelineResult r;
  r.catalog = build_catalog_from_files(m.idl, m.mapping);
  const auto standards = r.catalog.abbreviations();

  r.graph = load_graph(m.nodes, m.edges);
  graph::PruneOptions prune;
  prune.include_third_party = options.include_third_party;
  r.eloc = graph::eloc_table(r.graph, standards, prune);

  r.cves = with_source(m.cves, [](std::string_view t) { return cve::parse_cves_jsonl(t); });
  const auto rules = with_source(m.rules, [&](std::string_view t) {
    auto parsed = cve::parse_rules_csv(t);
    cve::validate_rules(parsed, standards);
    return parsed;
  });
  r.attributions = cve::attribute_all(r.cves, filter_config(m.discard_keywords, options.year_floor), rules);
  r.tally = cve::tally(r.attributions, r.cves, standards);
  r.routes = cve::route_breakdown(r.attributions);

  r.tests = with_source(m.tests, [](std::string_view t) { return benefit::parse_site_tests_csv(t); });
  const auto usage = with_source(m.usage, [](std::string_view t) { return benefit::parse_usage_csv(t); });
  r.agreement = benefit::agreement(r.tests);
  r.break_rates = benefit::break_rate_table(r.tests, usage);

  r.attacks = with_source(m.attacks, [](std::string_view t) { return policy::parse_attacks_csv(t); });
  r.ledger = policy::build_ledger(r.eloc, r.tally.rows, r.break_rates, r.attacks, options.mode,
                                  policy::standard_names(r.catalog));

  for (const auto& path : m.policies) {
    auto p = with_source(path, [](std::string_view t) { return policy::parse_policy(t); });
    auto stats = policy::evaluate_policy(p, r.ledger, r.attributions);
    r.policies.push_back({std::move(p), stats});
  }
  return r;
}

std::vector<std::pair<fs::path, std::string>> pipeline_outputs(const PipelineResult& r, const fs::path& out_dir) {
  std::vector<std::pair<fs::path, std::string>> out;
  out.emplace_back(out_dir / "catalog.json", r.catalog.to_json());
  out.emplace_back(out_dir / "eloc.csv", graph::eloc_table_csv(r.eloc));
  out.emplace_back(out_dir / "eloc.json", graph::eloc_table_json(r.eloc));
  out.emplace_back(out_dir / "attributions.jsonl", cve::results_jsonl(r.attributions));
  out.emplace_back(out_dir / "cve_tally.csv", cve::tally_csv(r.tally));
  out.emplace_back(out_dir / "cve_tally.json", cve::tally_json(r.tally, r.routes));
  out.emplace_back(out_dir / "break_rates.csv", benefit::break_rate_csv(r.break_rates));
  out.emplace_back(out_dir / "break_rates.json", benefit::break_rate_json(r.break_rates, r.agreement));
  out.emplace_back(out_dir / "ledger.csv", policy::ledger_csv(r.ledger));
  out.emplace_back(out_dir / "ledger.json", policy::ledger_json(r.ledger));
  out.emplace_back(out_dir / "ledger.txt", report::ledger_text(r.ledger));
  for (auto x : {report::ScatterX::cve, report::ScatterX::severe, report::ScatterX::eloc}) {
    out.emplace_back(out_dir / fmt::format("scatter_{}.csv", report::column_name(x)), report::scatter_csv(r.ledger, x));
  }
  std::set<std::string> stems;
  for (const auto& pe : r.policies) {
    // Policy names are free text; keep file names portable.
    std::string stem = pe.policy.name;
    for (auto& c : stem) {
      if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_') c = '_';
    }
    if (!stems.insert(stem).second) {
      throw ValidationError(fmt::format("two policies map to the output name '{}'", stem));
    }
    out.emplace_back(out_dir / "policies" / (stem + ".json"), policy::serialize_policy(pe.policy));
    out.emplace_back(out_dir / "policies" / (stem + ".stats.json"), policy::policy_stats_json(pe.policy, pe.stats));
  }
  return out;
}

}  // namespace surface::cmd
