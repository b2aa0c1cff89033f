#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "surface/benefit_metrics.hpp"
#include "surface/callgraph_eloc.hpp"
#include "surface/cve_attrib.hpp"
#include "surface/idl_catalog.hpp"
#include "surface/report.hpp"
#include "surface/scoring_policy.hpp"

// File-level stages shared by the CLI and the Python module. Each returns the
// rendered output; callers decide where it goes.
namespace surface::cmd {

namespace fs = std::filesystem;

enum class Format { csv, json };

Format format_from_string(std::string_view s);

// Reads every `.idl` file named directly or found (non-recursively, in name
// order) in the listed directories.
std::vector<idl::InterfaceDefinition> load_idl(const std::vector<fs::path>& inputs);
idl::FeatureCatalog build_catalog_from_files(const std::vector<fs::path>& idl_inputs, const fs::path& mapping);
idl::FeatureCatalog load_catalog_json(const fs::path& catalog);

std::string catalog(const std::vector<fs::path>& idl_inputs, const fs::path& mapping);

std::string eloc(const fs::path& nodes, const fs::path& edges, const fs::path& catalog, Format format,
                 bool include_third_party);

struct CvesOutput {
  std::string attributions_jsonl;
  std::string tally;
};

CvesOutput cves(const fs::path& cves, const fs::path& rules, const fs::path& catalog,
                const std::optional<fs::path>& discard_keywords, int year_floor, Format format);

std::string suggest_rules(const fs::path& cves, const fs::path& nodes, const fs::path& edges,
                          const fs::path& catalog, const std::optional<fs::path>& rules);

std::string benefit(const fs::path& tests, const fs::path& usage, Format format);

// Inputs are the CSV outputs of eloc, cves and benefit plus the attacks CSV.
std::string score(const fs::path& eloc_csv, const fs::path& tally_csv, const fs::path& break_rates_csv,
                  const fs::path& attacks, const std::optional<fs::path>& catalog, policy::LedgerMode mode,
                  Format format);

std::string policy_gen(const fs::path& ledger_csv, double max_break_rate, const policy::CostPredicate& cost,
                       const std::string& name, const std::vector<std::string>& whitelist);
std::string policy_eval(const fs::path& policy, const fs::path& ledger_csv, const fs::path& attributions);
std::string policy_preset(std::string_view name);

std::string scatter(const fs::path& ledger_csv, report::ScatterX x);

// Input locations for a full run. Relative paths in the manifest file are
// resolved against its directory.
struct Manifest {
  std::vector<fs::path> idl;
  fs::path mapping;
  fs::path nodes;
  fs::path edges;
  fs::path cves;
  fs::path rules;
  std::optional<fs::path> discard_keywords;
  fs::path tests;
  fs::path usage;
  fs::path attacks;
  std::vector<fs::path> policies;
};

Manifest load_manifest(const fs::path& path);

// $SURFACE_LEDGER_FIXTURES/manifest.json, if the variable is set.
std::optional<fs::path> default_manifest();

struct PipelineOptions {
  policy::LedgerMode mode = policy::LedgerMode::strict;
  bool include_third_party = false;
  int year_floor = 2010;
};

struct PolicyEvaluation {
  policy::BlockPolicy policy;
  policy::PolicyStats stats;
};

struct PipelineResult {
  idl::FeatureCatalog catalog;
  graph::CallGraph graph;
  std::vector<graph::ElocResult> eloc;
  std::vector<cve::CveRecord> cves;
  std::vector<cve::AttributionResult> attributions;
  cve::Tally tally;
  cve::RouteBreakdown routes;
  std::vector<benefit::SiteTest> tests;
  double agreement = 0.0;
  std::vector<benefit::BreakRateResult> break_rates;
  std::vector<policy::AttackCount> attacks;
  std::vector<policy::LedgerRow> ledger;
  std::vector<PolicyEvaluation> policies;
};

PipelineResult run_pipeline(const Manifest& manifest, const PipelineOptions& options = {});

// Every artifact of a run as (path under out_dir, content).
std::vector<std::pair<fs::path, std::string>> pipeline_outputs(const PipelineResult& result, const fs::path& out_dir);

}  // namespace surface::cmd
