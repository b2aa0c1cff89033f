#include <doctest.h>

#include <filesystem>

#include "surface/commands.hpp"
#include "surface/error.hpp"
#include "surface/io.hpp"
#include "surface/report.hpp"

using namespace surface;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = SURFACE_LEDGER_FIXTURES_DIR;

}  // namespace

TEST_CASE("scatter of an empty ledger is the header alone") {
  CHECK(report::scatter_csv({}, report::ScatterX::cve) == "standard,cve_count,weighted_break_rate\n");
  CHECK(report::scatter_csv({}, report::ScatterX::eloc) == "standard,eloc,weighted_break_rate\n");
  CHECK_THROWS_AS(report::scatter_x_from_string("loc"), ValidationError);
}

TEST_CASE("scatter skips rows with missing values") {
  policy::LedgerRow a;
  a.standard = "A";
  a.cve_count = 3;
  a.weighted_break_rate = 0.5;
  policy::LedgerRow b;
  b.standard = "B";
  b.cve_count = 3;
  const std::vector<policy::LedgerRow> rows = {a, b};
  CHECK(report::scatter_csv(rows, report::ScatterX::cve) == "standard,cve_count,weighted_break_rate\nA,3,0.5\n");
  CHECK(report::scatter_csv(rows, report::ScatterX::severe) == "standard,high_or_severe_count,weighted_break_rate\n");
}

TEST_CASE("pipeline over the fixture manifest") {
  const auto manifest = cmd::load_manifest(kFixtures / "manifest.json");
  const auto run = cmd::run_pipeline(manifest);
  const auto scatter = report::scatter_csv(run.ledger, report::ScatterX::severe);
  const auto pos = scatter.find("\nWEBGL,22,");
  REQUIRE(pos != std::string::npos);
  const auto value = scatter.substr(pos + 10, scatter.find('\n', pos + 1) - pos - 10);
  CHECK(std::stod(value) < 0.01);
  CHECK(run.policies.size() == 2);

  const auto out = fs::temp_directory_path() / "surface_pipeline_test";
  fs::remove_all(out);
  const auto files = cmd::pipeline_outputs(run, out);
  write_files_atomic(files);
  for (const auto* name : {"catalog.json", "eloc.csv", "attributions.jsonl", "cve_tally.csv", "break_rates.csv",
                           "ledger.csv", "ledger.txt", "scatter_eloc.csv", "policies/conservative.json",
                           "policies/conservative.stats.json"}) {
    CHECK_MESSAGE(fs::exists(out / name), name);
  }
  // Stage commands reproduce the pipeline's files.
  CHECK(cmd::catalog(manifest.idl, manifest.mapping) == read_file(out / "catalog.json"));
  CHECK(cmd::eloc(manifest.nodes, manifest.edges, out / "catalog.json", cmd::Format::csv, false) ==
        read_file(out / "eloc.csv"));
  const auto cves = cmd::cves(manifest.cves, manifest.rules, out / "catalog.json", manifest.discard_keywords, 2010,
                              cmd::Format::csv);
  CHECK(cves.tally == read_file(out / "cve_tally.csv"));
  CHECK(cves.attributions_jsonl == read_file(out / "attributions.jsonl"));
  CHECK(cmd::benefit(manifest.tests, manifest.usage, cmd::Format::csv) == read_file(out / "break_rates.csv"));
  CHECK(cmd::score(out / "eloc.csv", out / "cve_tally.csv", out / "break_rates.csv", manifest.attacks,
                   out / "catalog.json", policy::LedgerMode::strict, cmd::Format::csv) == read_file(out / "ledger.csv"));
  CHECK(cmd::scatter(out / "ledger.csv", report::ScatterX::eloc) == read_file(out / "scatter_eloc.csv"));
  CHECK(cmd::policy_eval(kFixtures / "presets/conservative.json", out / "ledger.csv", out / "attributions.jsonl") ==
        read_file(out / "policies/conservative.stats.json"));
  fs::remove_all(out);
}

TEST_CASE("diagnostics name the offending file") {
  const auto dir = fs::temp_directory_path() / "surface_bad_input";
  fs::remove_all(dir);
  write_file_atomic(dir / "usage.csv", "standard_abbrev,sites_using\nX,abc\n");
  CHECK_THROWS_WITH(cmd::benefit(kFixtures / "site_tests.csv", dir / "usage.csv", cmd::Format::csv),
                    doctest::Contains("usage.csv"));
  CHECK_THROWS_AS(cmd::benefit(dir / "missing.csv", dir / "usage.csv", cmd::Format::csv), IoError);
  fs::remove_all(dir);
}

TEST_CASE("manifest validation") {
  const auto dir = fs::temp_directory_path() / "surface_bad_manifest";
  fs::remove_all(dir);
  write_file_atomic(dir / "m.json", R"({"idl": [], "surprise": 1})");
  CHECK_THROWS_AS(cmd::load_manifest(dir / "m.json"), ValidationError);
  fs::remove_all(dir);
}
