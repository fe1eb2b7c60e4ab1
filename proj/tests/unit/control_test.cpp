#include "fixtures.hpp"

#include "ctrlgauge/control.hpp"
#include "ctrlgauge/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace ctrlgauge;
using namespace fixtures;

namespace {

// Vertex of R(6) of the planar pair's recover family that lies outside R(5),
// from an independent sign-sum hull.
const Vector kSixStepVertex = vec({5.133815811919233, -0.916650083530895});

Vector library_vertex_near(const Zonotope& z, const Vector& target)
{
    Vector best = z.generators().col(0);
    double d = 1e300;
    for (const Vector& v : vertices(z)) {
        if ((v - target).norm() < d) {
            d = (v - target).norm();
            best = v;
        }
    }
    return best;
}

} // namespace

TEST_SUITE("control") {

TEST_CASE("steering matrix blocks")
{
    const LdtSystem pair = planar_pair();
    const Matrix reach = steering_matrix(pair, RegionKind::Reach, 3);
    CHECK((reach.col(2) - pair.B()).norm() == 0.0);
    CHECK((reach.col(0) - pair.A() * pair.A() * pair.B()).norm() < 1e-12);
    const Matrix recover = steering_matrix(pair, RegionKind::Recover, 2);
    const Matrix ainv = inverse_state_matrix(pair);
    CHECK((recover.col(0) + ainv * pair.B()).norm() < 1e-12);
    CHECK((recover.col(1) + ainv * ainv * pair.B()).norm() < 1e-12);
}

TEST_CASE("origin needs no steps")
{
    const ControlSolution sol = min_time(planar_pair(), vec({0, 0}), RegionKind::Recover);
    CHECK(sol.minSteps == 0);
    CHECK(sol.inputs.empty());
    CHECK(sol.boundaryStatus == BoundaryStatus::Interior);
}

TEST_CASE("scalar chain needs ceil(|x0|) steps")
{
    const ControlSolution sol = min_time(scalar_chain(), vec({2.5}), RegionKind::Recover, 10);
    CHECK(sol.minSteps == 3);
    REQUIRE(sol.inputs.size() == 3);
    CHECK(simulate(scalar_chain(), vec({2.5}), sol.inputs, RegionKind::Recover).terminalError < 1e-9);
    REQUIRE(sol.minimalityCertificate);

    const ControlSolution edge = min_time(scalar_chain(), vec({3}), RegionKind::Recover, 10);
    CHECK(edge.minSteps == 3);
    CHECK(edge.boundaryStatus == BoundaryStatus::Boundary);
}

TEST_CASE("six-step vertex of the planar pair")
{
    const RegionFamily fam = recover_region(planar_pair(), 6);
    const Vector v = library_vertex_near(fam.stage(6), kSixStepVertex);
    CHECK((v - kSixStepVertex).cwiseAbs().maxCoeff() < 1e-9);
    const ControlSolution sol = min_time(planar_pair(), v, RegionKind::Recover);
    CHECK(sol.minSteps == 6);
    CHECK(sol.boundaryStatus == BoundaryStatus::Boundary);
    CHECK(oracle::exhaustive_min_time(planar_pair(), v, RegionKind::Recover, 10) == 6);
    const Trajectory tr = simulate(planar_pair(), v, sol.inputs, RegionKind::Recover);
    CHECK(tr.terminalError <= 1e-6);
    CHECK(tr.inputsWithinBounds);
    CHECK(tr.states.size() == 7);
}

TEST_CASE("unreachable states carry a separating certificate")
{
    try {
        min_time(scalar_chain(), vec({100}), RegionKind::Recover, 5);
        FAIL("expected NotReachableError");
    } catch (const NotReachableError& e) {
        CHECK(e.code() == ErrorCode::NotReachable);
        CHECK(e.horizon() == 5);
        REQUIRE(e.certificate());
        CHECK(e.violation() == doctest::Approx(95.0));
    }
}

TEST_CASE("bad states")
{
    CHECK(error_code([] { min_time(planar_pair(), vec({1}), RegionKind::Reach); }) == ErrorCode::DimensionMismatch);
    CHECK(error_code([] { min_time(planar_pair(), vec({NAN, 0}), RegionKind::Reach); }) == ErrorCode::NonFinite);
    CHECK(error_code([] { min_time(planar_pair(), vec({1, 0}), RegionKind::Reach, 0); })
          == ErrorCode::InvalidArgument);
}

TEST_CASE("strategy space dimension")
{
    CHECK(strategy_space_dim(scalar_chain(), vec({3}), 3, RegionKind::Reach) == 0);
    CHECK(strategy_space_dim(scalar_chain(), vec({2}), 3, RegionKind::Reach) == 2);
    CHECK(strategy_space_dim(scalar_chain(), vec({0}), 3, RegionKind::Reach) == 2);
    CHECK(error_code([] { strategy_space_dim(scalar_chain(), vec({4}), 3, RegionKind::Reach); })
          == ErrorCode::NotMember);
}

TEST_CASE("strategy space dimension matches the affine hull of the feasible vertices")
{
    SplitMix64 rng(29);
    for (int t = 0; t < 20; ++t) {
        const RegionKind kind = t % 2 ? RegionKind::Reach : RegionKind::Recover;
        const LdtSystem sys = oracle::random_bounded_system(rng, 2, 1, kind, 8);
        const int steps = rng.integer(2, 8);
        const Matrix g = steering_matrix(sys, kind, steps);
        const Vector x0 = g * unit_box(rng, steps);
        const Vector ones = Vector::Ones(steps);
        CHECK(strategy_space_dim(sys, x0, steps, kind)
              == oracle::affine_hull_dim(oracle::box_polytope_vertices(g, x0, -ones, ones)));
    }
}

TEST_CASE("simulation")
{
    const Trajectory empty = simulate(scalar_chain(), vec({1.5}), {}, RegionKind::Recover);
    CHECK(empty.states.size() == 1);
    CHECK(empty.states[0] == vec({1.5}));
    const Trajectory down = simulate(scalar_chain(), vec({3}), {vec({-1}), vec({-1}), vec({-1})}, RegionKind::Recover);
    CHECK(down.terminalError == 0.0);
    CHECK(down.inputsWithinBounds);
    const Trajectory over = simulate(scalar_chain(), vec({3}), {vec({-3})}, RegionKind::Recover);
    CHECK_FALSE(over.inputsWithinBounds);
    CHECK(error_code([] { simulate(scalar_chain(), vec({3}), {vec({1, 1})}, RegionKind::Recover); })
          == ErrorCode::DimensionMismatch);
}

TEST_CASE("comparing a system with itself")
{
    const AbilityVerdict v = compare_ability(planar_pair(), planar_pair(), 4, RegionKind::Recover);
    CHECK(v.relation == AbilityRelation::Equal);
    CHECK(v.stronger == StrongerSystem::None);
    CHECK(v.exact);
    CHECK(v.stages.size() == 4);
}

TEST_CASE("larger input is strictly stronger at every step")
{
    const AbilityVerdict v = compare_ability(scalar_chain(2.0), scalar_chain(1.0), 5, RegionKind::Reach);
    CHECK(v.relation == AbilityRelation::StrictlyStronger);
    CHECK(v.stronger == StrongerSystem::First);
    for (const StageContainment& s : v.stages) {
        CHECK(s.secondInFirst);
        CHECK_FALSE(s.firstInSecond);
        CHECK(s.marginSecondInFirst > 0.0);
    }
    const AbilityVerdict w = compare_ability(scalar_chain(1.0), scalar_chain(2.0), 5, RegionKind::Reach);
    CHECK(w.stronger == StrongerSystem::Second);
}

TEST_CASE("crossed regions are incomparable")
{
    const LdtSystem x("x", Matrix::Identity(2, 2), mat({{2}, {0.1}}));
    const LdtSystem y("y", Matrix::Identity(2, 2), mat({{0.1}, {2}}));
    const AbilityVerdict v = compare_ability(x, y, 2, RegionKind::Reach);
    CHECK(v.relation == AbilityRelation::Incomparable);
    CHECK(v.stages[0].firstOutsideSecond);
    CHECK(v.stages[0].secondOutsideFirst);
}

TEST_CASE("normalized DC motor has the larger ten-step volume at rated bounds")
{
    const LdtSystem dc = normalize_full(dc_motor(), dc_bounds(), false);
    const LdtSystem ac = normalize_full(ac_motor(), ac_bounds(), false);
    const AbilityVerdict v = compare_ability(dc, ac, 10, RegionKind::Reach);
    // 8 * sum of |det| over generator triples, from an independent evaluation.
    CHECK(v.metricsFirst.volume == doctest::Approx(328676.9889766887).epsilon(1e-10));
    CHECK(v.metricsSecond.volume == doctest::Approx(271177.747557848).epsilon(1e-10));
    CHECK(v.metricsFirst.volume > v.metricsSecond.volume);
    CHECK(v.atHorizon == 10);
}

TEST_CASE("ten-step volumes at target bounds")
{
    const double dc = volume(reach_region(normalize_full(dc_motor(), dc_bounds(), true), 10).stage(10));
    const double ac = volume(reach_region(normalize_full(ac_motor(), ac_bounds(), true), 10).stage(10));
    CHECK(dc == doctest::Approx(365196.65441854164).epsilon(1e-10));
    CHECK(ac == doctest::Approx(404255.7162667905).epsilon(1e-10));
}

TEST_CASE("input-scaled copy: identical systems tie everywhere")
{
    const TheoremReport rep = verify_theorem1(planar_pair(), planar_pair(), 4, 20);
    CHECK(rep.timeViolations == 0);
    CHECK(rep.dimViolations == 0);
    CHECK(rep.timeStrictlyFaster == 0);
    CHECK(rep.timeTies == rep.states);
    CHECK(rep.dimEqual == rep.states);
}

TEST_CASE("scalar chain with doubled input")
{
    const TheoremReport rep = verify_theorem1(scalar_chain(1.0), scalar_chain(2.0), 6, 100);
    CHECK(rep.states >= 100);
    CHECK(rep.timeViolations == 0);
    for (const TheoremSample& s : rep.samples) {
        const double x = std::abs(s.x0[0]);
        CHECK(s.minStepsFirst == static_cast<int>(std::ceil(x - 1e-9)));
        CHECK(s.minStepsSecond == static_cast<int>(std::ceil(x / 2 - 1e-9)));
        CHECK(s.minStepsSecond <= s.minStepsFirst);
    }
}

TEST_CASE("nested planar pairs")
{
    SplitMix64 rng(31);
    for (int t = 0; t < 5; ++t) {
        const LdtSystem a = oracle::random_bounded_system(rng, 2, 1, RegionKind::Recover, 8);
        const LdtSystem b("scaled", a.A(), a.B() * 1.5);
        const TheoremReport rep = verify_theorem1(a, b, 8, 30, RegionKind::Recover, 100 + t);
        CHECK(rep.timeViolations == 0);
        CHECK(rep.dimViolations == 0);
        for (const TheoremSample& s : rep.samples) {
            CHECK(s.minStepsSecond == oracle::exhaustive_min_time(b, s.x0, RegionKind::Recover, 8));
        }
    }
    CHECK(error_code([] { verify_theorem1(scalar_chain(2.0), scalar_chain(1.0), 3, 5); })
          == ErrorCode::PreconditionNotMet);
}

}
