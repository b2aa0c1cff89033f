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

namespace surface::graph {

enum class FunctionKind { binding, implementation };

std::string_view to_string(FunctionKind kind);

struct FunctionNode {
  std::string id;
  std::string display_name;
  FunctionKind kind = FunctionKind::implementation;
  std::uint64_t loc = 0;
  // Set exactly for binding nodes.
  std::optional<std::string> standard;
  bool third_party = false;

  bool operator==(const FunctionNode&) const = default;
};

struct Edge {
  std::string caller;
  std::string callee;

  auto operator<=>(const Edge&) const = default;
};

// Validated, immutable call graph. Nodes are stored sorted by id and edges
// are deduplicated, so results never depend on input order.
class CallGraph {
 public:
  CallGraph() = default;

  static CallGraph build(std::vector<FunctionNode> nodes, std::vector<Edge> edges);

  std::size_t size() const { return nodes_.size(); }
  const std::vector<FunctionNode>& nodes() const { return nodes_; }
  const FunctionNode& node(std::size_t index) const { return nodes_[index]; }
  std::optional<std::size_t> index_of(std::string_view id) const;
  std::vector<Edge> edges() const;

  const std::vector<std::size_t>& callers(std::size_t index) const { return callers_[index]; }
  const std::vector<std::size_t>& callees(std::size_t index) const { return callees_[index]; }

  std::vector<std::size_t> bindings_of(std::string_view standard) const;
  // Distinct standards named by binding nodes, sorted.
  std::vector<std::string> binding_standards() const;

 private:
  std::vector<FunctionNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<std::vector<std::size_t>> callers_;
  std::vector<std::vector<std::size_t>> callees_;
};

// CSV `id,display_name,kind,loc,standard,third_party`; the third_party
// column may be omitted.
std::vector<FunctionNode> parse_nodes_csv(std::string_view text);
// One JSON object per line with the same fields.
std::vector<FunctionNode> parse_nodes_jsonl(std::string_view text);
// CSV `caller_id,callee_id`.
std::vector<Edge> parse_edges_csv(std::string_view text);

// Picks the node parser from the content: JSON lines start with '{'.
CallGraph load_callgraph(std::string_view node_text, std::string_view edge_text);

struct PruneOptions {
  // When set, candidates are removed in an order drawn from this seed. The
  // result is the same for every order; this exists to test that.
  std::optional<std::uint64_t> worklist_seed;
  bool include_third_party = false;
};

// Greatest set of implementation nodes reachable from the standard's
// bindings whose every caller is in the set or is one of those bindings.
// A standard with no bindings yields the empty set if it appears in
// `known_standards` and is an error otherwise.
std::set<std::string> exclusive_functions(const CallGraph& graph, std::string_view standard,
                                          std::span<const std::string> known_standards,
                                          const PruneOptions& options = {});

// Sum of loc over the exclusive set; third-party nodes count only when
// options.include_third_party is set.
std::uint64_t exclusive_loc(const CallGraph& graph, std::string_view standard,
                            std::span<const std::string> known_standards, const PruneOptions& options = {});

struct ElocResult {
  std::string standard;
  std::set<std::string> exclusive_functions;
  std::uint64_t eloc = 0;
  double eloc_share = 0.0;

  bool operator==(const ElocResult&) const = default;
};

// One row per standard in `standards`, sorted by abbreviation. Every binding
// in the graph must belong to one of them.
std::vector<ElocResult> eloc_table(const CallGraph& graph, std::span<const std::string> standards,
                                   const PruneOptions& options = {});

std::string eloc_table_json(std::span<const ElocResult> table);
std::string eloc_table_csv(std::span<const ElocResult> table);
// Reads the CSV form back; exclusive_functions is left empty.
std::vector<ElocResult> parse_eloc_csv(std::string_view text);

}  // namespace surface::graph
