#pragma once

#include "ctrlgauge/linalg.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

// Dense bounded-variable primal simplex. Sizes here are desk scale (a few
// dozen columns), so the tableau is kept explicitly.
namespace ctrlgauge::lp {

constexpr double kPivotTolerance = 1e-10;
constexpr double kFeasibilityTolerance = 1e-9;
constexpr double kOptimalityTolerance = 1e-9;
constexpr double kResidualTolerance = 1e-7;

// min cost^T x  s.t.  A x = b,  lower <= x <= upper.
// Every variable needs at least one finite bound; upper may be +inf.
struct Problem {
    Matrix A;
    Vector b;
    Vector lower;
    Vector upper;
    Vector cost;
};

enum class Status { Optimal, Infeasible, Unbounded };

struct Solution {
    Status status = Status::Infeasible;
    Vector x;
    double objective = 0.0;
    // Phase-1 multipliers y; when infeasible, y^T b exceeds the maximum of
    // y^T A x over the bounds.
    Vector farkas;
    int iterations = 0;
};

struct Options {
    int maxIterations = 0; // 0 selects a size-based default
    std::ostream* trace = nullptr;
};

class SimplexSolver {
public:
    explicit SimplexSolver(Options options = {}) : options_(options) {}

    // Throws Error(IterationLimit) when the pivot budget is exhausted.
    Solution solve(const Problem& problem);

private:
    enum class VarState : unsigned char { Basic, AtLower, AtUpper };

    bool iterate(const std::vector<double>& cost, int phase, int& iterations, int maxIterations);
    void pivot(int row, int col);
    void refine(const Problem& problem);
    void dump(int phase, int iteration, int entering, int leavingRow, double step) const;

    Options options_;
    int rows_ = 0;
    int structural_ = 0;
    int cols_ = 0;
    std::vector<double> tableau_;
    std::vector<double> x_;
    std::vector<double> lo_;
    std::vector<double> hi_;
    std::vector<double> sign_;
    std::vector<int> basis_;
    std::vector<VarState> state_;
    std::vector<double> reduced_;
};

// Box-constrained equality system G u = x0, lower <= u <= upper. This is the
// stacked input sequence of a steering problem with unit amplitude bounds.
struct BoxLp {
    Matrix G;
    Vector x0;
    Vector lower;
    Vector upper;
    std::optional<Vector> objective;

    static BoxLp unit(Matrix g, Vector x0);
};

struct FeasibilityResult {
    bool feasible = false;
    std::optional<Vector> witness;
    // Direction d with d^T x0 > max_{u in box} d^T G u (infeasible case).
    std::optional<Vector> certificate;
};

struct MarginResult {
    double margin = 0.0;
    Vector witness;
};

struct OptimumResult {
    double value = 0.0;
    Vector argument;
};

FeasibilityResult feasible(const BoxLp& lp, const Options& options = {});

// max s  s.t.  G u = x0,  lower + s h <= u <= upper - s h,  0 <= s <= 1,
// with h the half-widths of the box. s* = 0 iff x0 is on the boundary of the
// image of the box. Throws Error(Infeasible).
MarginResult max_margin(const BoxLp& lp, const Options& options = {});

// Maximises objective^T u over the feasible set. Throws Error(Infeasible);
// unboundedness cannot occur with finite boxes and raises InternalError.
OptimumResult optimize(const BoxLp& lp, const Options& options = {});

// max_{u in box} d^T G u.
double box_support(const Matrix& g, const Vector& lower, const Vector& upper, const Vector& d);

// Membership of many right-hand sides against one generator matrix and box;
// reuses the solver workspace between calls.
class BoxMembership {
public:
    BoxMembership(Matrix g, Vector lower, Vector upper);
    static BoxMembership unit(Matrix g);

    FeasibilityResult test(const Vector& x0);
    bool contains(const Vector& x0) { return test(x0).feasible; }

private:
    Problem problem_;
    SimplexSolver solver_;
    double scale_ = 1.0;
};

} // namespace ctrlgauge::lp
