#pragma once

#include "ctrlgauge/model.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace ctrlgauge {

enum class RegionKind { Reach, Recover };

std::string_view to_string(RegionKind kind);
RegionKind parse_region_kind(std::string_view text);

// Generator entries beyond this magnitude abort with Error(UnstableGrowth).
constexpr double kGrowthLimit = 1e12;

// n x (steps * r) generator matrix; block i holds A^i B (reach) or
// A^{-i-1} B (recover), scaled by the amplitude bound.
Matrix region_generators(const LdtSystem& sys, RegionKind kind, int steps,
                         const ConstraintSpec& constraint = {});

// Nested controllability regions R(1) .. R(horizon) of one system.
struct RegionFamily {
    LdtSystem system;
    RegionKind kind = RegionKind::Reach;
    int horizon = 0;
    std::vector<Zonotope> stages;

    // 1-based stage access, stage(k) = R(k).
    const Zonotope& stage(int k) const;
};

RegionFamily reach_region(const LdtSystem& sys, int steps, const ConstraintSpec& constraint = {});
// Throws Error(SingularA).
RegionFamily recover_region(const LdtSystem& sys, int steps, const ConstraintSpec& constraint = {});
RegionFamily build_region(const LdtSystem& sys, RegionKind kind, int steps,
                          const ConstraintSpec& constraint = {});

struct ControllabilityReport {
    int rankPn = 0;
    double grammianMinEigen = 0.0;
    bool controllable = false;
    int nc = 0;
};

// rank [B, AB, ..., A^{N-1}B] and lambda_min of the Grammian; needs N >= n.
ControllabilityReport controllability_report(const LdtSystem& sys, int steps);

enum class ExpansionVerdict { StrictlyExpanding, WeaklyExpanding };

struct ExpansionResult {
    ExpansionVerdict verdict = ExpansionVerdict::WeaklyExpanding;
    // Rank of the generators added between the two stages.
    int addedRank = 0;
    // For weak expansion: a direction with zero support gap and the point of
    // R(N1) that touches the boundary of R(N2) along it.
    std::optional<Vector> contactDirection;
    std::optional<Vector> contactPoint;
    double contactGap = 0.0;
};

ExpansionResult expansion_check(const RegionFamily& family, int n1, int n2);

} // namespace ctrlgauge
