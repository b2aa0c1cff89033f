#include "surface/callgraph_eloc.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <json.hpp>
#include <random>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::graph {

std::string_view to_string(FunctionKind kind) {
  return kind == FunctionKind::binding ? "binding" : "implementation";
}

namespace {

FunctionKind kind_from_string(std::string_view s, std::size_t line) {
  if (s == "binding") return FunctionKind::binding;
  if (s == "implementation") return FunctionKind::implementation;
  throw ParseError(fmt::format("nodes: unknown kind '{}'", s), line, 1);
}

void sort_unique(std::vector<std::size_t>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

CallGraph CallGraph::build(std::vector<FunctionNode> nodes, std::vector<Edge> edges) {
  std::sort(nodes.begin(), nodes.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  CallGraph g;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const auto& n = nodes[i];
    if (n.id.empty()) throw ValidationError("call graph: node with empty id");
    if (i && nodes[i - 1].id == n.id) throw ValidationError(fmt::format("call graph: duplicate node id '{}'", n.id));
    if (n.kind == FunctionKind::binding && (!n.standard || n.standard->empty())) {
      throw ValidationError(fmt::format("call graph: binding node '{}' has no standard", n.id));
    }
    if (n.kind == FunctionKind::implementation && n.standard) {
      throw ValidationError(fmt::format("call graph: implementation node '{}' has a standard", n.id));
    }
    if (n.kind == FunctionKind::binding && n.third_party) {
      throw ValidationError(fmt::format("call graph: binding node '{}' is marked third-party", n.id));
    }
    g.index_.emplace(n.id, i);
  }
  g.nodes_ = std::move(nodes);
  g.callers_.resize(g.nodes_.size());
  g.callees_.resize(g.nodes_.size());
  for (const auto& e : edges) {
    const auto from = g.index_of(e.caller);
    const auto to = g.index_of(e.callee);
    if (!from || !to) {
      throw ValidationError(fmt::format("call graph: dangling edge {} -> {} (unknown node '{}')", e.caller, e.callee,
                                        from ? e.callee : e.caller));
    }
    g.callees_[*from].push_back(*to);
    g.callers_[*to].push_back(*from);
  }
  for (auto& v : g.callers_) sort_unique(v);
  for (auto& v : g.callees_) sort_unique(v);
  return g;
}

std::optional<std::size_t> CallGraph::index_of(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<Edge> CallGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (auto j : callees_[i]) out.push_back({nodes_[i].id, nodes_[j].id});
  }
  return out;
}

std::vector<std::size_t> CallGraph::bindings_of(std::string_view standard) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].kind == FunctionKind::binding && *nodes_[i].standard == standard) out.push_back(i);
  }
  return out;
}

std::vector<std::string> CallGraph::binding_standards() const {
  std::set<std::string> s;
  for (const auto& n : nodes_) {
    if (n.kind == FunctionKind::binding) s.insert(*n.standard);
  }
  return {s.begin(), s.end()};
}

std::vector<FunctionNode> parse_nodes_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "nodes");
  table.require_columns({"id", "display_name", "kind", "loc", "standard"});
  const auto c_id = table.column("id");
  const auto c_name = table.column("display_name");
  const auto c_kind = table.column("kind");
  const auto c_loc = table.column("loc");
  const auto c_std = table.column("standard");
  const auto c_tp = table.find_column("third_party");
  std::vector<FunctionNode> out;
  out.reserve(table.size());
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    const auto line = table.line_of(r);
    try {
      FunctionNode n;
      n.id = std::string(text::trim(row[c_id]));
      n.display_name = row[c_name];
      n.kind = kind_from_string(text::trim(row[c_kind]), line);
      n.loc = text::parse_u64(text::trim(row[c_loc]), "loc");
      if (auto s = text::trim(row[c_std]); !s.empty()) n.standard = std::string(s);
      if (c_tp) {
        auto tp = text::trim(row[*c_tp]);
        n.third_party = !tp.empty() && text::parse_bool(tp, "third_party");
      }
      out.push_back(std::move(n));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("nodes: {}", e.what()), line, 1);
    }
  }
  return out;
}

std::vector<FunctionNode> parse_nodes_jsonl(std::string_view text) {
  std::vector<FunctionNode> out;
  std::size_t line = 0;
  for (const auto& raw : text::split(text, '\n')) {
    ++line;
    const auto body = text::trim(raw);
    if (body.empty()) continue;
    try {
      const auto j = nlohmann::json::parse(body);
      FunctionNode n;
      n.id = j.at("id").get<std::string>();
      n.display_name = j.value("display_name", std::string{});
      n.kind = kind_from_string(j.at("kind").get<std::string>(), line);
      const auto loc = j.at("loc").get<std::int64_t>();
      if (loc < 0) throw ParseError("nodes: negative loc", line, 1);
      n.loc = static_cast<std::uint64_t>(loc);
      if (auto it = j.find("standard"); it != j.end() && !it->is_null()) {
        auto s = it->get<std::string>();
        if (!s.empty()) n.standard = std::move(s);
      }
      n.third_party = j.value("third_party", false);
      out.push_back(std::move(n));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(fmt::format("nodes: {}", e.what()), line, 1);
    }
  }
  return out;
}

std::vector<Edge> parse_edges_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "edges");
  const auto c_from = table.column("caller_id");
  const auto c_to = table.column("callee_id");
  std::vector<Edge> out;
  out.reserve(table.size());
  for (const auto& row : table.rows()) {
    out.push_back({std::string(text::trim(row[c_from])), std::string(text::trim(row[c_to]))});
  }
  return out;
}

CallGraph load_callgraph(std::string_view node_text, std::string_view edge_text) {
  const auto first = text::trim(node_text);
  auto nodes = !first.empty() && first.front() == '{' ? parse_nodes_jsonl(node_text) : parse_nodes_csv(node_text);
  return CallGraph::build(std::move(nodes), parse_edges_csv(edge_text));
}

std::set<std::string> exclusive_functions(const CallGraph& graph, std::string_view standard,
                                          std::span<const std::string> known_standards,
                                          const PruneOptions& options) {
  const auto bindings = graph.bindings_of(standard);
  if (bindings.empty()) {
    if (std::find(known_standards.begin(), known_standards.end(), standard) == known_standards.end()) {
      throw ValidationError(fmt::format("unknown standard '{}'", standard));
    }
    return {};
  }
  const std::size_t n = graph.size();
  std::vector<char> is_own_binding(n, 0);
  for (auto b : bindings) is_own_binding[b] = 1;

  // Seed: implementation nodes reachable through implementation nodes only.
  std::vector<char> in_set(n, 0);
  std::vector<std::size_t> stack(bindings.begin(), bindings.end());
  std::vector<std::size_t> candidates;
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (auto w : graph.callees(v)) {
      if (graph.node(w).kind != FunctionKind::implementation || in_set[w]) continue;
      in_set[w] = 1;
      candidates.push_back(w);
      stack.push_back(w);
    }
  }

  // Prune to the greatest fixpoint. A removal can only invalidate the
  // removed node's callees, so those are re-queued.
  std::vector<std::size_t> work(candidates);
  std::sort(work.begin(), work.end());
  std::optional<std::mt19937_64> rng;
  if (options.worklist_seed) {
    rng.emplace(*options.worklist_seed);
    std::shuffle(work.begin(), work.end(), *rng);
  }
  auto has_outside_caller = [&](std::size_t r) {
    for (auto c : graph.callers(r)) {
      if (c != r && !in_set[c] && !is_own_binding[c]) return true;
    }
    return false;
  };
  while (!work.empty()) {
    std::size_t r;
    if (rng) {
      std::uniform_int_distribution<std::size_t> pick(0, work.size() - 1);
      const auto k = pick(*rng);
      r = work[k];
      work[k] = work.back();
      work.pop_back();
    } else {
      r = work.back();
      work.pop_back();
    }
    if (!in_set[r] || !has_outside_caller(r)) continue;
    in_set[r] = 0;
    for (auto w : graph.callees(r)) {
      if (in_set[w]) work.push_back(w);
    }
  }

  std::set<std::string> out;
  for (auto c : candidates) {
    if (in_set[c]) out.insert(graph.node(c).id);
  }
  return out;
}

namespace {

std::uint64_t sum_loc(const CallGraph& graph, const std::set<std::string>& ids, bool include_third_party) {
  std::uint64_t total = 0;
  for (const auto& id : ids) {
    const auto& node = graph.node(*graph.index_of(id));
    if (node.third_party && !include_third_party) continue;
    total += node.loc;
  }
  return total;
}

}  // namespace

std::uint64_t exclusive_loc(const CallGraph& graph, std::string_view standard,
                            std::span<const std::string> known_standards, const PruneOptions& options) {
  return sum_loc(graph, exclusive_functions(graph, standard, known_standards, options), options.include_third_party);
}

std::vector<ElocResult> eloc_table(const CallGraph& graph, std::span<const std::string> standards,
                                   const PruneOptions& options) {
  std::vector<std::string> sorted(standards.begin(), standards.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (const auto& s : graph.binding_standards()) {
    if (!std::binary_search(sorted.begin(), sorted.end(), s)) {
      throw ValidationError(fmt::format("call graph: binding standard '{}' is not in the catalog", s));
    }
  }
  std::vector<ElocResult> out;
  out.reserve(sorted.size());
  std::uint64_t total = 0;
  for (const auto& s : sorted) {
    ElocResult r;
    r.standard = s;
    r.exclusive_functions = exclusive_functions(graph, s, sorted, options);
    r.eloc = sum_loc(graph, r.exclusive_functions, options.include_third_party);
    total += r.eloc;
    out.push_back(std::move(r));
  }
  if (total > 0) {
    for (auto& r : out) r.eloc_share = static_cast<double>(r.eloc) / static_cast<double>(total);
  }
  return out;
}

std::string eloc_table_json(std::span<const ElocResult> table) {
  auto doc = nlohmann::ordered_json::array();
  for (const auto& r : table) {
    doc.push_back({{"standard", r.standard},
                   {"exclusive_functions", r.exclusive_functions},
                   {"eloc", r.eloc},
                   {"eloc_share", r.eloc_share}});
  }
  return doc.dump(2) + "\n";
}

std::string eloc_table_csv(std::span<const ElocResult> table) {
  std::string out = "standard,eloc,eloc_share\n";
  for (const auto& r : table) {
    append_csv_row(out, {r.standard, std::to_string(r.eloc), text::format_double(r.eloc_share)});
  }
  return out;
}

std::vector<ElocResult> parse_eloc_csv(std::string_view text) {
  const auto table = CsvTable::parse(text, "eloc table");
  const auto c_std = table.column("standard");
  const auto c_eloc = table.column("eloc");
  const auto c_share = table.column("eloc_share");
  std::vector<ElocResult> out;
  for (std::size_t r = 0; r < table.size(); ++r) {
    const auto& row = table.rows()[r];
    try {
      ElocResult e;
      e.standard = std::string(text::trim(row[c_std]));
      e.eloc = text::parse_u64(text::trim(row[c_eloc]), "eloc");
      e.eloc_share = text::parse_double(text::trim(row[c_share]), "eloc_share");
      if (e.eloc_share < 0.0 || e.eloc_share > 1.0) throw ValidationError("eloc_share outside [0,1]");
      out.push_back(std::move(e));
    } catch (const ParseError&) {
      throw;
    } catch (const ValidationError& e) {
      throw ParseError(fmt::format("eloc table: {}", e.what()), table.line_of(r), 1);
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.standard < b.standard; });
  return out;
}

}  // namespace surface::graph
