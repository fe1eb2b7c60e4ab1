#pragma once

#include "ctrlgauge/linalg.hpp"
#include "ctrlgauge/model.hpp"
#include "ctrlgauge/region.hpp"
#include "ctrlgauge/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

// Slow reference implementations used to cross-check the main code paths.
namespace ctrlgauge::oracle {

constexpr int kSignBitsHardCap = 24;
constexpr long kMinMcSamples = 1000;

struct OracleConfig {
    int maxSignBits = 20;
    long mcSamples = 1'000'000;
    std::uint64_t seed = 1;

    // Throws Error(InvalidArgument) when a field is outside its limits.
    void check() const;
};

// Extreme points of the 2^m signed generator sums: monotone chain in the
// plane, gift wrapping in space, LP extremeness tests above three dimensions.
// Throws Error(TooManyGenerators) when m > cfg.maxSignBits.
std::vector<Vector> brute_vertices(const Matrix& generators, const OracleConfig& cfg = {});

// Convex hull of the signed generator sums, built with exact orientation
// tests, as half-spaces inside the span of the generators. Needs at most
// three state coordinates.
class SignSumHull {
public:
    explicit SignSumHull(const Matrix& generators, const OracleConfig& cfg = {});

    bool contains(const Vector& x) const;
    const std::vector<Vector>& vertices() const { return vertices_; }
    int facet_count() const { return static_cast<int>(normals_.size()); }

private:
    Matrix basis_;
    // Coordinates onto which the span projects injectively.
    std::vector<int> rows_;
    std::vector<Vector> vertices_;
    std::vector<Vector> normals_;
    std::vector<double> offsets_;
    double scale_ = 0.0;
};

struct VolumeEstimate {
    double estimate = 0.0;
    double standardError = 0.0;
    double boxVolume = 0.0;
    long samples = 0;
    long hits = 0;
};

// Box sampling with an LP hit test. Sample i draws from its own stream, so the
// estimate depends on (seed, samples) only. Throws Error(DegenerateZonotope).
VolumeEstimate mc_volume(const Matrix& generators, const OracleConfig& cfg);

// First N with x0 inside the hull of the signed sums of R(N). State dimension
// at most three. Throws Error(NotReachable).
int exhaustive_min_time(const LdtSystem& sys, const Vector& x0, RegionKind kind, int maxSteps,
                        const OracleConfig& cfg = {});

// Basic feasible solutions of { u : G u = x0, lower <= u <= upper }, found by
// trying every column basis and every bound assignment of the rest.
std::vector<Vector> box_polytope_vertices(const Matrix& g, const Vector& x0, const Vector& lower,
                                          const Vector& upper);

// Affine-hull dimension of the polytope above, -1 when it is empty.
int affine_hull_dim(const std::vector<Vector>& points);

// Random system with entries uniform in [-amplitude, amplitude]. Redraws until
// A is comfortably invertible and (A, B) is controllable.
LdtSystem random_system(SplitMix64& rng, int n, int r, double amplitude = 2.0);

// random_system redrawn until the region generators up to `horizon` stay
// within `limit` in magnitude.
LdtSystem random_bounded_system(SplitMix64& rng, int n, int r, RegionKind kind, int horizon, double limit = 1e6,
                                double amplitude = 2.0);

enum class Level { Quick, Full };
Level parse_level(const std::string& text);

struct CheckResult {
    std::string name;
    bool passed = true;
    double discrepancy = 0.0;
    int cases = 0;
    std::string detail;
};

struct VerificationReport {
    std::uint64_t seed = 0;
    Level level = Level::Quick;
    std::vector<CheckResult> checks;
    bool passed() const;
};

// Runs the agreement suites. `fault` names a deliberately perturbed quantity
// ("volume") for self-testing the harness; empty means none.
VerificationReport run_verification(std::uint64_t seed, Level level, const std::string& fault = {});

} // namespace ctrlgauge::oracle
