#include "surface/report.hpp"

#include <fmt/format.h>

#include <optional>

#include "surface/csv.hpp"
#include "surface/error.hpp"
#include "surface/text.hpp"

namespace surface::report {

ScatterX scatter_x_from_string(std::string_view s) {
  if (s == "cve") return ScatterX::cve;
  if (s == "severe") return ScatterX::severe;
  if (s == "eloc") return ScatterX::eloc;
  throw ValidationError(fmt::format("unknown scatter axis '{}' (expected cve, severe or eloc)", s));
}

std::string_view column_name(ScatterX x) {
  switch (x) {
    case ScatterX::cve: return "cve_count";
    case ScatterX::severe: return "high_or_severe_count";
    case ScatterX::eloc: return "eloc";
  }
  return "cve_count";
}

std::string scatter_csv(std::span<const policy::LedgerRow> ledger, ScatterX x) {
  std::string out = fmt::format("standard,{},weighted_break_rate\n", column_name(x));
  for (const auto& row : ledger) {
    std::optional<std::uint64_t> value;
    switch (x) {
      case ScatterX::cve: value = row.cve_count; break;
      case ScatterX::severe: value = row.high_or_severe_count; break;
      case ScatterX::eloc: value = row.eloc; break;
    }
    if (!value || !row.weighted_break_rate) continue;
    append_csv_row(out, {row.standard, std::to_string(*value), text::format_double(*row.weighted_break_rate)});
  }
  return out;
}

std::string ledger_text(std::span<const policy::LedgerRow> ledger) {
  auto cell = [](const auto& v) -> std::string {
    if (!v) return "-";
    return fmt::format("{}", *v);
  };
  std::string out = fmt::format("{:<10} {:>7} {:>6} {:>6} {:>6} {:>8} {:>7} {:>7}  {}\n", "abbrev", "using",
                                "break", "cves", "h/s", "eloc", "%eloc", "attacks", "name");
  for (const auto& r : ledger) {
    out += fmt::format("{:<10} {:>7} {:>6} {:>6} {:>6} {:>8} {:>7} {:>7}  {}\n", r.standard, cell(r.sites_using),
                       r.weighted_break_rate ? benefit::render_break_rate(*r.weighted_break_rate) : "-",
                       cell(r.cve_count), cell(r.high_or_severe_count), cell(r.eloc),
                       r.eloc_share ? fmt::format("{:.2f}", *r.eloc_share * 100.0) : "-", cell(r.attack_papers),
                       r.name.value_or(""));
  }
  return out;
}

}  // namespace surface::report
