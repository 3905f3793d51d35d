#pragma once

// Persistence formats: diagnostics CSV, field JSON, per-case series CSV.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gll/fields.hpp"
#include "gll/trajectory.hpp"

namespace gll {

/// 17 significant digits; parses back to the identical double.
std::string format_double(double v);

inline constexpr std::string_view kDiagnosticsHeader =
    "t,e1,e2,e3,h12,h22,w32,sup_ux,constraint_err,de2_residual";

void write_diagnostics_csv(std::ostream& os, std::span<const DiagnosticsRecord> records);
/// Throws BadParams on a header mismatch or malformed row.
std::vector<DiagnosticsRecord> read_diagnostics_csv(std::istream& is);

/// {"n_points", "sphere_dim", "seed", "samples": [[...], ...]}
nlohmann::json field_to_json(const SphereField& u, std::optional<std::uint64_t> seed = std::nullopt);
SphereField field_from_json(const nlohmann::json& j);

/// Generic numeric table with a header row.
void write_table_csv(std::ostream& os, std::span<const std::string> columns,
                     std::span<const std::vector<double>> rows);

}  // namespace gll
