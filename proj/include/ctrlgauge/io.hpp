#pragma once

#include "ctrlgauge/control.hpp"
#include "ctrlgauge/model.hpp"
#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/region.hpp"

#include <filesystem>
#include <string>

// JSON and file plumbing. Malformed documents raise Error(SchemaViolation).
namespace ctrlgauge::io {

struct ModelFile {
    LdtSystem system;
    NormalizationSpec bounds;
};

// {"name", "A": [[...]], "B": [[...]], "rated": {"u": [...], "x": [...]},
//  "target": {"x": [...]}}; "target" is optional.
ModelFile parse_model(const std::string& text);
ModelFile load_model(const std::filesystem::path& path);
std::string model_json(const ModelFile& model);

// Normalized model whose bounds are re-expressed in the new coordinates.
ModelFile normalize_model(const ModelFile& model, bool useTarget);

std::string region_summary_json(const RegionFamily& family);
std::string control_solution_json(const LdtSystem& sys, const ControlSolution& sol);
std::string not_reachable_json(const LdtSystem& sys, const Vector& x0, RegionKind kind,
                               const NotReachableError& err);
std::string comparison_json(const LdtSystem& first, const LdtSystem& second, RegionKind kind,
                            const AbilityVerdict& verdict);
std::string theorem_report_json(const LdtSystem& first, const LdtSystem& second, const TheoremReport& report);
std::string verification_json(const oracle::VerificationReport& report);

// Comma-separated numbers such as "1.5,-2,0".
Vector parse_vector(const std::string& text);

std::string read_file(const std::filesystem::path& path);
// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace ctrlgauge::io
