#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "surface/callgraph_eloc.hpp"
#include "surface/cve_attrib.hpp"
#include "surface/idl_catalog.hpp"

namespace surface::testing {

// Independent formulation of exclusivity by plain reachability:
// reach(bindings of S) minus reach(external roots), where external roots are
// the other standards' bindings plus every implementation node that no
// binding at all can reach (this covers zero in-degree nodes and orphan
// cycles alike). Reachability only passes through implementation nodes.
std::set<std::string> oracle_exclusive(const graph::CallGraph& g, const std::string& standard);

// The narrower root set: other bindings plus zero in-degree implementation
// nodes. Agrees with oracle_exclusive on acyclic graphs.
std::set<std::string> oracle_exclusive_zero_indegree(const graph::CallGraph& g, const std::string& standard);

struct RandomGraphSpec {
  std::size_t max_nodes = 200;
  std::size_t standards = 3;
  double max_density = 0.1;
  bool acyclic = false;
  bool self_edges = true;
};

// Standards are named S0, S1, ...
graph::CallGraph random_graph(std::mt19937_64& rng, const RandomGraphSpec& spec);
std::vector<std::string> standard_names(std::size_t count);

// Random interface blocks in the supported IDL subset.
std::vector<idl::InterfaceDefinition> random_idl(std::mt19937_64& rng, std::size_t interfaces);

// Brute-force dedup: number of attributed CVEs with at least one standard in
// `blocked`, by scanning every pair.
std::size_t brute_force_covered(std::span<const cve::AttributionResult> results, const std::set<std::string>& blocked);

}  // namespace surface::testing
