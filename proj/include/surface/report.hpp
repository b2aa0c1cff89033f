#pragma once

#include <span>
#include <string>
#include <string_view>

#include "surface/scoring_policy.hpp"

namespace surface::report {

enum class ScatterX { cve, severe, eloc };

ScatterX scatter_x_from_string(std::string_view s);
std::string_view column_name(ScatterX x);

// `standard,<x column>,weighted_break_rate`, one row per ledger row that has
// both values. An empty ledger yields the header alone.
std::string scatter_csv(std::span<const policy::LedgerRow> ledger, ScatterX x);

// Fixed-width text rendering of the ledger for terminals.
std::string ledger_text(std::span<const policy::LedgerRow> ledger);

}  // namespace surface::report
