// Command-line front end. Exit codes: 0 success, 1 invalid input or usage,
// 2 I/O failure.
#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "surface/commands.hpp"
#include "surface/error.hpp"
#include "surface/io.hpp"

namespace fs = std::filesystem;
using namespace surface;

namespace {

std::string one_line(std::string s) {
  for (auto& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
    std::cout.flush();
  } else {
    write_file_atomic(out_path, content);
  }
}

struct Common {
  std::string out;
  std::string format = "csv";
};

void add_out(CLI::App* sub, Common& c) {
  sub->add_option("--out,-o", c.out, "Output file (default: stdout)");
}

void add_format(CLI::App* sub, Common& c) {
  sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Web API standard cost-benefit ledger"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "surface-ledger 0.1.0");

  Common common;
  bool strict = false;
  bool lenient = false;
  bool include_third_party = false;
  int year_floor = 2010;

  auto add_mode = [&](CLI::App* sub) {
    auto* s = sub->add_flag("--strict", strict, "Every input must cover the same standards (default)");
    sub->add_flag("--lenient", lenient, "Fill standards missing from an input with nulls")->excludes(s);
  };

  // catalog
  std::vector<std::string> idl_inputs;
  std::string mapping;
  auto* c_catalog = app.add_subcommand("catalog", "Build the feature catalog from WebIDL files");
  c_catalog->add_option("--idl", idl_inputs, "IDL files or directories")->required();
  c_catalog->add_option("--mapping", mapping, "interface,standard_name,abbreviation CSV")->required();
  add_out(c_catalog, common);

  // eloc
  std::string nodes, edges, catalog_path;
  auto* c_eloc = app.add_subcommand("eloc", "Exclusive lines of code per standard");
  c_eloc->add_option("--nodes", nodes, "Node records (CSV or JSON lines)")->required();
  c_eloc->add_option("--edges", edges, "caller_id,callee_id CSV")->required();
  c_eloc->add_option("--catalog", catalog_path, "Catalog JSON")->required();
  c_eloc->add_flag("--include-third-party", include_third_party, "Count third-party lines");
  add_format(c_eloc, common);
  add_out(c_eloc, common);

  // cves
  std::string cves_path, rules_path, discard_path, attributions_out;
  auto* c_cves = app.add_subcommand("cves", "Filter, attribute and tally CVE records");
  c_cves->add_option("--cves", cves_path, "CVE JSON lines")->required();
  c_cves->add_option("--rules", rules_path, "Attribution rules CSV")->required();
  c_cves->add_option("--catalog", catalog_path, "Catalog JSON")->required();
  c_cves->add_option("--discard-keywords", discard_path, "Keywords marking non-browser CVEs");
  c_cves->add_option("--year-floor", year_floor, "Discard CVEs issued before this year");
  c_cves->add_option("--attributions", attributions_out, "Write per-CVE results (JSON lines) here");
  add_format(c_cves, common);
  add_out(c_cves, common);

  // suggest-rules
  auto* c_suggest = app.add_subcommand("suggest-rules", "Propose native_symbol rules from exclusive functions");
  c_suggest->add_option("--cves", cves_path, "CVE JSON lines")->required();
  c_suggest->add_option("--nodes", nodes, "Node records")->required();
  c_suggest->add_option("--edges", edges, "Edge CSV")->required();
  c_suggest->add_option("--catalog", catalog_path, "Catalog JSON")->required();
  c_suggest->add_option("--rules", rules_path, "Existing rules; suggestions already present are skipped");
  add_out(c_suggest, common);

  // benefit
  std::string tests_path, usage_path;
  auto* c_benefit = app.add_subcommand("benefit", "Agreement and weighted break rates");
  c_benefit->add_option("--tests", tests_path, "site,standard_abbrev,tester,score CSV")->required();
  c_benefit->add_option("--usage", usage_path, "standard_abbrev,sites_using,population CSV")->required();
  add_format(c_benefit, common);
  add_out(c_benefit, common);

  // score
  std::string eloc_csv, tally_csv, benefit_csv, attacks_path, ledger_path;
  auto* c_score = app.add_subcommand("score", "Fuse stage outputs into the per-standard ledger");
  c_score->add_option("--eloc", eloc_csv, "eloc CSV output")->required();
  c_score->add_option("--cves", tally_csv, "cves tally CSV output")->required();
  c_score->add_option("--benefit", benefit_csv, "benefit CSV output")->required();
  c_score->add_option("--attacks", attacks_path, "standard_abbrev,attack_papers CSV")->required();
  c_score->add_option("--catalog", catalog_path, "Catalog JSON, for standard names");
  add_mode(c_score);
  add_format(c_score, common);
  add_out(c_score, common);

  // policy
  auto* c_policy = app.add_subcommand("policy", "Generate, evaluate or print blocking policies");
  c_policy->require_subcommand(1);
  double max_break_rate = 0.0;
  std::string cost_metric = "cve";
  double cost_min = 0.0;
  std::string policy_name = "generated";
  std::vector<std::string> whitelist{"WCR"};
  auto* c_gen = c_policy->add_subcommand("gen", "Generate a policy from a ledger");
  c_gen->add_option("--ledger", ledger_path, "Ledger CSV")->required();
  c_gen->add_option("--max-break-rate", max_break_rate, "Block only standards at or below this weighted rate")
      ->check(CLI::Range(0.0, 1.0));
  c_gen->add_option("--cost-metric", cost_metric, "cve, eloc_share or attacks")
      ->check(CLI::IsMember({"cve", "eloc_share", "attacks"}));
  c_gen->add_option("--min", cost_min, "Block only standards whose cost metric is at least this");
  c_gen->add_option("--name", policy_name, "Policy name");
  c_gen->add_option("--whitelist", whitelist, "Standards that are never blocked");
  add_out(c_gen, common);

  std::string policy_path;
  auto* c_eval = c_policy->add_subcommand("eval", "Cost and benefit statistics for a policy");
  c_eval->add_option("--policy", policy_path, "Policy JSON")->required();
  c_eval->add_option("--ledger", ledger_path, "Ledger CSV")->required();
  c_eval->add_option("--attributions", attributions_out, "Per-CVE results from the cves stage")->required();
  add_out(c_eval, common);

  std::string preset_name;
  auto* c_preset = c_policy->add_subcommand("preset", "Print a built-in policy");
  c_preset->add_option("name", preset_name, "conservative or aggressive")->required();
  add_out(c_preset, common);

  // scatter
  std::string axis = "cve";
  auto* c_scatter = app.add_subcommand("scatter", "Cost versus break rate points");
  c_scatter->add_option("--ledger", ledger_path, "Ledger CSV")->required();
  c_scatter->add_option("--x", axis, "cve, severe or eloc")->check(CLI::IsMember({"cve", "severe", "eloc"}));
  add_out(c_scatter, common);

  // pipeline
  std::string manifest_path, out_dir;
  auto* c_pipeline = app.add_subcommand("pipeline", "Run every stage from a manifest");
  c_pipeline->add_option("--manifest", manifest_path,
                         "Manifest JSON (default: $SURFACE_LEDGER_FIXTURES/manifest.json)");
  c_pipeline->add_option("--out-dir", out_dir, "Directory for all outputs")->required();
  c_pipeline->add_flag("--include-third-party", include_third_party, "Count third-party lines");
  c_pipeline->add_option("--year-floor", year_floor, "Discard CVEs issued before this year");
  add_mode(c_pipeline);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "surface-ledger: " << one_line(e.what()) << "\n";
    return 1;
  }

  const auto mode = lenient ? policy::LedgerMode::lenient : policy::LedgerMode::strict;

  try {
    if (c_catalog->parsed()) {
      std::vector<fs::path> inputs(idl_inputs.begin(), idl_inputs.end());
      emit(common.out, cmd::catalog(inputs, mapping));
    } else if (c_eloc->parsed()) {
      emit(common.out, cmd::eloc(nodes, edges, catalog_path, cmd::format_from_string(common.format),
                                 include_third_party));
    } else if (c_cves->parsed()) {
      std::optional<fs::path> discard;
      if (!discard_path.empty()) discard = discard_path;
      const auto out = cmd::cves(cves_path, rules_path, catalog_path, discard, year_floor,
                                 cmd::format_from_string(common.format));
      if (!attributions_out.empty() && !common.out.empty() && common.out != "-") {
        write_files_atomic({{attributions_out, out.attributions_jsonl}, {common.out, out.tally}});
      } else {
        if (!attributions_out.empty()) write_file_atomic(attributions_out, out.attributions_jsonl);
        emit(common.out, out.tally);
      }
    } else if (c_suggest->parsed()) {
      std::optional<fs::path> rules;
      if (!rules_path.empty()) rules = rules_path;
      emit(common.out, cmd::suggest_rules(cves_path, nodes, edges, catalog_path, rules));
    } else if (c_benefit->parsed()) {
      emit(common.out, cmd::benefit(tests_path, usage_path, cmd::format_from_string(common.format)));
    } else if (c_score->parsed()) {
      std::optional<fs::path> cat;
      if (!catalog_path.empty()) cat = catalog_path;
      emit(common.out, cmd::score(eloc_csv, tally_csv, benefit_csv, attacks_path, cat, mode,
                                  cmd::format_from_string(common.format)));
    } else if (c_gen->parsed()) {
      policy::CostPredicate cost{policy::cost_metric_from_string(cost_metric), cost_min};
      emit(common.out, cmd::policy_gen(ledger_path, max_break_rate, cost, policy_name, whitelist));
    } else if (c_eval->parsed()) {
      emit(common.out, cmd::policy_eval(policy_path, ledger_path, attributions_out));
    } else if (c_preset->parsed()) {
      emit(common.out, cmd::policy_preset(preset_name));
    } else if (c_scatter->parsed()) {
      emit(common.out, cmd::scatter(ledger_path, report::scatter_x_from_string(axis)));
    } else if (c_pipeline->parsed()) {
      fs::path manifest = manifest_path;
      if (manifest.empty()) {
        auto def = cmd::default_manifest();
        if (!def) throw ValidationError("no --manifest given and SURFACE_LEDGER_FIXTURES is not set");
        manifest = *def;
      }
      cmd::PipelineOptions options;
      options.mode = mode;
      options.include_third_party = include_third_party;
      options.year_floor = year_floor;
      const auto result = cmd::run_pipeline(cmd::load_manifest(manifest), options);
      write_files_atomic(cmd::pipeline_outputs(result, out_dir));
    }
  } catch (const IoError& e) {
    std::cerr << "surface-ledger: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "surface-ledger: " << one_line(e.what()) << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "surface-ledger: " << one_line(e.what()) << "\n";
    return 1;
  }
  return 0;
}
