#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <string>
#include <vector>

#include "surface/benefit_metrics.hpp"
#include "surface/callgraph_eloc.hpp"
#include "surface/commands.hpp"
#include "surface/error.hpp"
#include "surface/io.hpp"
#include "surface/scoring_policy.hpp"

namespace py = pybind11;
namespace fs = std::filesystem;
using namespace surface;

namespace {

py::dict stats_dict(const policy::PolicyStats& s) {
  py::dict d;
  d["standards_blocked"] = s.standards_blocked;
  d["cve_covered"] = s.cve_covered;
  d["cve_total"] = s.cve_total;
  d["cve_fraction"] = s.cve_fraction;
  d["eloc_removed"] = s.eloc_removed;
  d["eloc_total"] = s.eloc_total;
  d["eloc_fraction"] = s.eloc_fraction;
  d["est_break_rate_sum"] = s.est_break_rate_sum;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Core bindings for surface_ledger";

  static py::exception<ValidationError> validation_error(m, "ValidationError", PyExc_ValueError);
  static py::exception<IoError> io_error(m, "IoError", PyExc_OSError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation_error, e.what());
    } catch (const IoError& e) {
      py::set_error(io_error, e.what());
    }
  });

  m.def(
      "build_catalog",
      [](const std::vector<fs::path>& idl, const fs::path& mapping) { return cmd::catalog(idl, mapping); },
      py::arg("idl"), py::arg("mapping"), "Catalog JSON built from IDL files or directories and a mapping CSV.");

  m.def(
      "exclusive_functions",
      [](const std::string& nodes, const std::string& edges, const std::string& standard,
         const std::vector<std::string>& known, bool include_third_party) {
        const auto g = graph::load_callgraph(nodes, edges);
        graph::PruneOptions o;
        o.include_third_party = include_third_party;
        const auto e = graph::exclusive_functions(g, standard, known, o);
        return std::vector<std::string>(e.begin(), e.end());
      },
      py::arg("nodes"), py::arg("edges"), py::arg("standard"), py::arg("known_standards"),
      py::arg("include_third_party") = false, "Sorted ids of the functions only `standard` reaches.");

  m.def(
      "eloc_table",
      [](const fs::path& nodes, const fs::path& edges, const fs::path& catalog, bool include_third_party) {
        return cmd::eloc(nodes, edges, catalog, cmd::Format::csv, include_third_party);
      },
      py::arg("nodes"), py::arg("edges"), py::arg("catalog"), py::arg("include_third_party") = false);

  m.def("render_break_rate", &benefit::render_break_rate, py::arg("rate"));

  m.def(
      "preset", [](const std::string& name) { return policy::serialize_policy(policy::preset(name)); },
      py::arg("name"));
  m.def(
      "parse_policy", [](const std::string& doc) { return policy::serialize_policy(policy::parse_policy(doc)); },
      py::arg("document"), "Validates a policy and returns its canonical form.");
  m.def(
      "serialize_policy",
      [](const std::string& name, const std::vector<std::string>& blocked, const std::vector<std::string>& whitelist) {
        policy::BlockPolicy p;
        p.name = name;
        p.blocked = {blocked.begin(), blocked.end()};
        p.whitelist = {whitelist.begin(), whitelist.end()};
        policy::validate_policy(p);
        return policy::serialize_policy(p);
      },
      py::arg("name"), py::arg("blocked"), py::arg("whitelist") = std::vector<std::string>{"WCR"});
  m.def(
      "effective_blocked",
      [](const std::string& doc, std::optional<std::string> origin) {
        const auto s = policy::effective_blocked(policy::parse_policy(doc),
                                                 origin ? std::optional<std::string_view>(*origin) : std::nullopt);
        return std::vector<std::string>(s.begin(), s.end());
      },
      py::arg("document"), py::arg("origin") = py::none());

  m.def(
      "evaluate_policy",
      [](const std::string& doc, const fs::path& manifest) {
        const auto run = cmd::run_pipeline(cmd::load_manifest(manifest));
        return stats_dict(policy::evaluate_policy(policy::parse_policy(doc), run.ledger, run.attributions));
      },
      py::arg("document"), py::arg("manifest"), "Statistics of a policy against a full run of the manifest.");

  m.def(
      "run_pipeline",
      [](const fs::path& manifest, std::optional<fs::path> out_dir) {
        const auto run = cmd::run_pipeline(cmd::load_manifest(manifest));
        if (out_dir) write_files_atomic(cmd::pipeline_outputs(run, *out_dir));
        py::dict d;
        d["standards"] = run.ledger.size();
        d["agreement"] = run.agreement;
        d["cve_attributed"] = run.tally.dedup_total;
        d["ledger_csv"] = policy::ledger_csv(run.ledger);
        py::dict policies;
        for (const auto& p : run.policies) policies[py::str(p.policy.name)] = stats_dict(p.stats);
        d["policies"] = policies;
        return d;
      },
      py::arg("manifest"), py::arg("out_dir") = py::none());
}
