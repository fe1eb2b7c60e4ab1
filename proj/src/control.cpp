#include "ctrlgauge/control.hpp"
#include "ctrlgauge/error.hpp"
#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ctrlgauge {

namespace {

void check_state(const LdtSystem& sys, const Vector& x0)
{
    if (x0.size() != sys.n()) {
        throw Error(ErrorCode::DimensionMismatch, "state vector length differs from n");
    }
    if (!x0.allFinite()) {
        throw Error(ErrorCode::NonFinite, "state vector must be finite");
    }
}

// Time-ordered steering matrix from region generator blocks.
Matrix steering_from_blocks(const Matrix& blocks, RegionKind kind, int steps, int r)
{
    Matrix g(blocks.rows(), static_cast<Eigen::Index>(steps) * r);
    for (int k = 0; k < steps; ++k) {
        const int source = kind == RegionKind::Reach ? steps - 1 - k : k;
        g.middleCols(static_cast<Eigen::Index>(k) * r, r) = blocks.middleCols(static_cast<Eigen::Index>(source) * r, r);
    }
    if (kind == RegionKind::Recover) {
        g = -g;
    }
    return g;
}

struct Membership {
    bool contained = true;
    double margin = std::numeric_limits<double>::infinity();
    std::optional<Vector> outside;
};

// Vertices of `inner` tested for LP membership in the zonotope of `outer`.
Membership vertex_membership(const Zonotope& inner, const Matrix& outer)
{
    Membership res;
    lp::BoxMembership box = lp::BoxMembership::unit(outer);
    for (const Vector& v : vertices(inner)) {
        if (!box.contains(v)) {
            res.contained = false;
            res.margin = -1.0;
            res.outside = v;
            return res;
        }
        const double margin = lp::max_margin(lp::BoxLp::unit(outer, v)).margin;
        res.margin = std::min(res.margin, margin);
    }
    return res;
}

// Necessary containment test over pseudo-random unit directions.
Membership direction_membership(const Zonotope& inner, const Zonotope& outer, std::uint64_t seed)
{
    Membership res;
    SplitMix64 rng(seed);
    const int n = inner.dim();
    Vector d(n);
    for (int t = 0; t < kContainmentDirections; ++t) {
        for (int i = 0; i < n; ++i) {
            d[i] = rng.uniform(-1.0, 1.0);
        }
        if (d.norm() == 0.0) {
            continue;
        }
        d.normalize();
        const double gap = support(outer, d) - support(inner, d);
        res.margin = std::min(res.margin, gap);
        if (gap < -kBoundaryMargin * std::max(1.0, support(outer, d))) {
            res.contained = false;
            Vector v = Vector::Zero(n);
            const Matrix& g = inner.generators();
            for (Eigen::Index k = 0; k < g.cols(); ++k) {
                v += (d.dot(g.col(k)) >= 0.0 ? 1.0 : -1.0) * g.col(k);
            }
            res.outside = v;
            return res;
        }
    }
    return res;
}

} // namespace

std::string_view to_string(BoundaryStatus status)
{
    return status == BoundaryStatus::Boundary ? "boundary" : "interior";
}

std::string_view to_string(AbilityRelation relation)
{
    switch (relation) {
    case AbilityRelation::StrictlyStronger: return "StrictlyStronger";
    case AbilityRelation::NotWeaker: return "NotWeaker";
    case AbilityRelation::Equal: return "Equal";
    case AbilityRelation::Incomparable: return "Incomparable";
    }
    return "Unknown";
}

std::string_view to_string(StrongerSystem which)
{
    switch (which) {
    case StrongerSystem::None: return "none";
    case StrongerSystem::First: return "first";
    case StrongerSystem::Second: return "second";
    }
    return "none";
}

Matrix steering_matrix(const LdtSystem& sys, RegionKind kind, int steps)
{
    return steering_from_blocks(region_generators(sys, kind, steps), kind, steps, sys.r());
}

ControlSolution min_time(const LdtSystem& sys, const Vector& x0, RegionKind kind, int maxSteps)
{
    check_state(sys, x0);
    if (maxSteps < 1) {
        throw Error(ErrorCode::InvalidArgument, "maxSteps must be at least 1");
    }
    if (kind == RegionKind::Recover) {
        inverse_state_matrix(sys);
    }
    ControlSolution sol;
    sol.kind = kind;
    sol.x0 = x0;
    sol.horizon = maxSteps;

    const int r = sys.r();
    if (x0.cwiseAbs().maxCoeff() == 0.0) {
        sol.minSteps = 0;
        sol.boundaryStatus = BoundaryStatus::Interior;
        sol.margin = 1.0;
        sol.strategyDim = strategy_space_dim(sys, x0, maxSteps, kind);
        return sol;
    }

    const Matrix step = kind == RegionKind::Reach ? sys.A() : inverse_state_matrix(sys);
    Matrix blocks(sys.n(), 0);
    Matrix block = kind == RegionKind::Reach ? sys.B() : Matrix(step * sys.B());
    std::optional<Vector> lastCertificate;
    std::optional<Vector> witness;
    int found = 0;
    for (int steps = 1; steps <= maxSteps; ++steps) {
        if (linalg::max_abs(block) > kGrowthLimit || !block.allFinite()) {
            throw Error(ErrorCode::UnstableGrowth, "generator growth limit exceeded at step " + std::to_string(steps));
        }
        Matrix grown(sys.n(), blocks.cols() + r);
        grown << blocks, block;
        blocks = std::move(grown);
        block = step * block;

        const Matrix g = steering_from_blocks(blocks, kind, steps, r);
        lp::FeasibilityResult fr = lp::feasible(lp::BoxLp::unit(g, x0));
        if (fr.feasible) {
            found = steps;
            witness = std::move(fr.witness);
            break;
        }
        lastCertificate = std::move(fr.certificate);
    }
    if (found == 0) {
        double violation = 0.0;
        if (lastCertificate) {
            const Matrix g = steering_from_blocks(blocks, kind, maxSteps, r);
            violation = lastCertificate->dot(x0) - (g.transpose() * *lastCertificate).cwiseAbs().sum();
        }
        std::ostringstream os;
        os << "state is outside R(" << maxSteps << ")";
        throw NotReachableError(os.str(), maxSteps, lastCertificate, violation);
    }

    sol.minSteps = found;
    sol.minimalityCertificate = lastCertificate;
    for (int k = 0; k < found; ++k) {
        sol.inputs.push_back(witness->segment(static_cast<Eigen::Index>(k) * r, r));
    }
    const Matrix g = steering_from_blocks(blocks, kind, found, r);
    sol.margin = lp::max_margin(lp::BoxLp::unit(g, x0)).margin;
    sol.boundaryStatus = sol.margin <= kBoundaryMargin ? BoundaryStatus::Boundary : BoundaryStatus::Interior;
    sol.strategyDim = strategy_space_dim(sys, x0, maxSteps, kind);
    return sol;
}

int strategy_space_dim(const LdtSystem& sys, const Vector& x0, int steps, RegionKind kind)
{
    check_state(sys, x0);
    const Matrix g = steering_matrix(sys, kind, steps);
    lp::BoxLp box = lp::BoxLp::unit(g, x0);
    if (!lp::feasible(box).feasible) {
        throw Error(ErrorCode::NotMember, "state is outside R(" + std::to_string(steps) + ")");
    }
    const auto m = g.cols();
    std::vector<Eigen::Index> free;
    for (Eigen::Index k = 0; k < m; ++k) {
        box.objective = Vector::Unit(m, k);
        const double hi = lp::optimize(box).value;
        box.objective = -Vector::Unit(m, k);
        const double lo = -lp::optimize(box).value;
        if (hi - lo > 1e-9) {
            free.push_back(k);
        }
    }
    if (free.empty()) {
        return 0;
    }
    Matrix gf(g.rows(), static_cast<Eigen::Index>(free.size()));
    for (std::size_t t = 0; t < free.size(); ++t) {
        gf.col(static_cast<Eigen::Index>(t)) = g.col(free[t]);
    }
    return static_cast<int>(free.size()) - linalg::numeric_rank(gf);
}

Trajectory simulate(const LdtSystem& sys, const Vector& x0, const std::vector<Vector>& inputs, RegionKind kind)
{
    check_state(sys, x0);
    if (kind == RegionKind::Recover) {
        inverse_state_matrix(sys);
    }
    Trajectory traj;
    Vector x = kind == RegionKind::Reach ? Vector(Vector::Zero(sys.n())) : x0;
    traj.states.push_back(x);
    for (const Vector& u : inputs) {
        if (u.size() != sys.r()) {
            throw Error(ErrorCode::DimensionMismatch, "input vector length differs from r");
        }
        if (u.size() > 0 && u.cwiseAbs().maxCoeff() > 1.0 + 1e-9) {
            traj.inputsWithinBounds = false;
        }
        x = sys.A() * x + sys.B() * u;
        traj.states.push_back(x);
    }
    const Vector target = kind == RegionKind::Reach ? x0 : Vector(Vector::Zero(sys.n()));
    traj.terminalError = (x - target).cwiseAbs().maxCoeff();
    return traj;
}

AbilityVerdict compare_ability(const LdtSystem& first, const LdtSystem& second, int steps, RegionKind kind)
{
    if (first.n() != second.n()) {
        throw Error(ErrorCode::DimensionMismatch, "compared systems must share the state dimension");
    }
    const RegionFamily fa = build_region(first, kind, steps);
    const RegionFamily fb = build_region(second, kind, steps);

    AbilityVerdict verdict;
    verdict.atHorizon = steps;
    verdict.note = "comparison assumes both systems are normalized to unit input and state bounds";
    bool allFirstInSecond = true;
    bool allSecondInFirst = true;
    bool strictFirstInSecond = true;
    bool strictSecondInFirst = true;
    for (int k = 1; k <= steps; ++k) {
        const Zonotope& za = fa.stage(k);
        const Zonotope& zb = fb.stage(k);
        StageContainment sc;
        sc.steps = k;
        sc.exact = std::max(za.size(), zb.size()) <= kExactContainmentGenerators;
        const Membership ab = sc.exact ? vertex_membership(za, zb.generators())
                                       : direction_membership(za, zb, 0xA5A5u + static_cast<std::uint64_t>(k));
        const Membership ba = sc.exact ? vertex_membership(zb, za.generators())
                                       : direction_membership(zb, za, 0x5A5Au + static_cast<std::uint64_t>(k));
        sc.firstInSecond = ab.contained;
        sc.secondInFirst = ba.contained;
        sc.marginFirstInSecond = ab.margin;
        sc.marginSecondInFirst = ba.margin;
        sc.firstOutsideSecond = ab.outside;
        sc.secondOutsideFirst = ba.outside;
        verdict.exact = verdict.exact && sc.exact;

        allFirstInSecond = allFirstInSecond && ab.contained;
        allSecondInFirst = allSecondInFirst && ba.contained;
        strictFirstInSecond = strictFirstInSecond && ab.contained && ab.margin > kBoundaryMargin;
        strictSecondInFirst = strictSecondInFirst && ba.contained && ba.margin > kBoundaryMargin;
        verdict.stages.push_back(std::move(sc));
    }

    if (allFirstInSecond && allSecondInFirst) {
        verdict.relation = AbilityRelation::Equal;
    } else if (allFirstInSecond) {
        verdict.stronger = StrongerSystem::Second;
        verdict.relation = strictFirstInSecond ? AbilityRelation::StrictlyStronger : AbilityRelation::NotWeaker;
    } else if (allSecondInFirst) {
        verdict.stronger = StrongerSystem::First;
        verdict.relation = strictSecondInFirst ? AbilityRelation::StrictlyStronger : AbilityRelation::NotWeaker;
    } else {
        verdict.relation = AbilityRelation::Incomparable;
    }
    if (!verdict.exact) {
        verdict.note += "; stages beyond " + std::to_string(kExactContainmentGenerators)
            + " generators use sampled support directions (probable verdict)";
    }
    verdict.metricsFirst = shape_report(fa.stage(steps));
    verdict.metricsSecond = shape_report(fb.stage(steps));
    return verdict;
}

TheoremReport verify_theorem1(const LdtSystem& first, const LdtSystem& second, int steps, int samples,
                              RegionKind kind, std::uint64_t seed)
{
    if (samples < 0) {
        throw Error(ErrorCode::InvalidArgument, "sample count must be nonnegative");
    }
    const AbilityVerdict verdict = compare_ability(first, second, steps, kind);
    const bool nested = verdict.relation == AbilityRelation::Equal || verdict.stronger == StrongerSystem::Second;
    if (!nested) {
        throw Error(ErrorCode::PreconditionNotMet,
                    "the first system's regions are not contained in the second's for every k <= N");
    }

    TheoremReport rep;
    rep.horizon = steps;
    rep.kind = kind;
    rep.seed = seed;

    const std::vector<Vector> verts = vertices(build_region(first, kind, steps).stage(steps));
    std::vector<Vector> states = verts;
    SplitMix64 rng(seed);
    for (int s = 0; s < samples; ++s) {
        Vector x = Vector::Zero(first.n());
        double total = 0.0;
        for (const Vector& v : verts) {
            const double w = rng.exponential();
            x += w * v;
            total += w;
        }
        states.push_back(x / total);
    }

    for (const Vector& x0 : states) {
        TheoremSample smp;
        smp.x0 = x0;
        const ControlSolution a = min_time(first, x0, kind, steps);
        const ControlSolution b = min_time(second, x0, kind, steps);
        smp.minStepsFirst = a.minSteps;
        smp.minStepsSecond = b.minSteps;
        smp.dimFirst = a.strategyDim;
        smp.dimSecond = b.strategyDim;

        const std::size_t idx = rep.samples.size();
        if (smp.minStepsSecond > smp.minStepsFirst) {
            ++rep.timeViolations;
            rep.timeViolationIndices.push_back(idx);
        } else if (smp.minStepsSecond < smp.minStepsFirst) {
            ++rep.timeStrictlyFaster;
        } else {
            ++rep.timeTies;
        }
        if (smp.dimFirst > smp.dimSecond) {
            ++rep.dimViolations;
            rep.dimViolationIndices.push_back(idx);
        } else if (smp.dimFirst < smp.dimSecond) {
            ++rep.dimLess;
        } else {
            ++rep.dimEqual;
        }
        rep.samples.push_back(std::move(smp));
    }
    rep.states = static_cast<int>(rep.samples.size());
    return rep;
}

} // namespace ctrlgauge
