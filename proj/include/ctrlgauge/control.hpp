#pragma once

#include "ctrlgauge/error.hpp"
#include "ctrlgauge/model.hpp"
#include "ctrlgauge/region.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ctrlgauge {

constexpr int kDefaultMaxSteps = 50;
// LP margin at or below this value puts a state on the region boundary.
constexpr double kBoundaryMargin = 1e-9;
// Vertex-membership containment is exact up to this many generators per stage.
constexpr int kExactContainmentGenerators = 16;
constexpr int kContainmentDirections = 10000;

enum class BoundaryStatus { Boundary, Interior };

std::string_view to_string(BoundaryStatus status);

// Time-ordered steering matrix G_N with x0 = G_N [u_0; ...; u_{N-1}]:
// reach blocks A^{N-1-k} B, recover blocks -A^{-k-1} B.
Matrix steering_matrix(const LdtSystem& sys, RegionKind kind, int steps);

struct ControlSolution {
    RegionKind kind = RegionKind::Recover;
    Vector x0;
    int minSteps = 0;
    std::vector<Vector> inputs;
    int strategyDim = 0;
    int horizon = 0;
    BoundaryStatus boundaryStatus = BoundaryStatus::Interior;
    double margin = 1.0;
    // Separating direction proving x0 is outside R(minSteps - 1).
    std::optional<Vector> minimalityCertificate;
};

class NotReachableError : public Error {
public:
    NotReachableError(const std::string& what, int horizon, std::optional<Vector> certificate, double violation)
        : Error(ErrorCode::NotReachable, what), horizon_(horizon), certificate_(std::move(certificate)),
          violation_(violation)
    {
    }

    int horizon() const noexcept { return horizon_; }
    const std::optional<Vector>& certificate() const noexcept { return certificate_; }
    // d^T x0 - h_N(d) for the certificate direction.
    double violation() const noexcept { return violation_; }

private:
    int horizon_;
    std::optional<Vector> certificate_;
    double violation_;
};

// Fewest steps N* with x0 in R(N*), a witness input sequence, the boundary
// status of x0 in R(N*) and the strategy-space dimension at maxSteps.
ControlSolution min_time(const LdtSystem& sys, const Vector& x0, RegionKind kind, int maxSteps = kDefaultMaxSteps);

// Affine-hull dimension of { U in [-1,1]^{N r} : G_N U = x0 }. Throws
// Error(NotMember) when x0 is outside R(N).
int strategy_space_dim(const LdtSystem& sys, const Vector& x0, int steps, RegionKind kind);

struct Trajectory {
    std::vector<Vector> states;
    double terminalError = 0.0;
    bool inputsWithinBounds = true;
};

// Reach: iterate from the origin and compare the end state with x0.
// Recover: iterate from x0 and compare the end state with the origin.
Trajectory simulate(const LdtSystem& sys, const Vector& x0, const std::vector<Vector>& inputs, RegionKind kind);

enum class AbilityRelation { StrictlyStronger, NotWeaker, Equal, Incomparable };
enum class StrongerSystem { None, First, Second };

std::string_view to_string(AbilityRelation relation);
std::string_view to_string(StrongerSystem which);

struct StageContainment {
    int steps = 0;
    bool exact = true;
    bool firstInSecond = false;
    bool secondInFirst = false;
    // Smallest LP margin of the contained region's vertices (or smallest
    // support gap for sampled directions); negative when containment fails.
    double marginFirstInSecond = 0.0;
    double marginSecondInFirst = 0.0;
    std::optional<Vector> firstOutsideSecond;
    std::optional<Vector> secondOutsideFirst;
};

struct AbilityVerdict {
    AbilityRelation relation = AbilityRelation::Incomparable;
    StrongerSystem stronger = StrongerSystem::None;
    int atHorizon = 0;
    // False when some stage fell back to sampled support directions.
    bool exact = true;
    std::vector<StageContainment> stages;
    ShapeReport metricsFirst;
    ShapeReport metricsSecond;
    std::string note;
};

// Containment of R^(A)(k) and R^(B)(k) for k = 1..N in both directions.
AbilityVerdict compare_ability(const LdtSystem& first, const LdtSystem& second, int steps, RegionKind kind);

struct TheoremSample {
    Vector x0;
    int minStepsFirst = 0;
    int minStepsSecond = 0;
    int dimFirst = 0;
    int dimSecond = 0;
};

struct TheoremReport {
    int horizon = 0;
    RegionKind kind = RegionKind::Recover;
    std::uint64_t seed = 0;
    int states = 0;
    int timeViolations = 0;
    int timeStrictlyFaster = 0;
    int timeTies = 0;
    int dimViolations = 0;
    int dimLess = 0;
    int dimEqual = 0;
    std::vector<TheoremSample> samples;
    // Indices into samples.
    std::vector<std::size_t> timeViolationIndices;
    std::vector<std::size_t> dimViolationIndices;
};

// Samples all vertices of R^(A)(N) plus `samples` flat-Dirichlet convex
// combinations of them and checks N*_B <= N*_A and dim U^(A) <= dim U^(B).
// Throws Error(PreconditionNotMet) unless R^(A)(k) is contained in R^(B)(k)
// for every k <= N.
TheoremReport verify_theorem1(const LdtSystem& first, const LdtSystem& second, int steps, int samples,
                              RegionKind kind = RegionKind::Recover, std::uint64_t seed = 1);

} // namespace ctrlgauge
