#include "fixtures.hpp"

#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/region.hpp"

#include <doctest.h>

using namespace ctrlgauge;
using namespace fixtures;

namespace {
constexpr double kBoundaryMarginForTest = 1e-9;
}

TEST_SUITE("region") {

TEST_CASE("repeated generator for the identity plant")
{
    const LdtSystem sys("id", Matrix::Identity(2, 2), mat({{1}, {0}}));
    const RegionFamily fam = reach_region(sys, 3);
    CHECK(fam.stages.size() == 3);
    CHECK(fam.stage(3).generators() == mat({{1, 1, 1}, {0, 0, 0}}));
    CHECK(set_distance(vertices(fam.stage(3)), {vec({-3, 0}), vec({3, 0})}) == 0.0);
    CHECK(fam.stage(1).generators() == sys.B());
    CHECK(error_code([&] { fam.stage(0); }) == ErrorCode::BadRange);
    CHECK(error_code([&] { fam.stage(4); }) == ErrorCode::BadRange);
}

TEST_CASE("stage k has k r generators")
{
    const LdtSystem sys("multi", mat({{0.5, 1}, {0, 0.8}}), mat({{1, 0}, {0, 1}}));
    const RegionFamily fam = recover_region(sys, 4);
    for (int k = 1; k <= 4; ++k) {
        CHECK(fam.stage(k).size() == 2 * k);
    }
}

TEST_CASE("recover region of the identity plant equals the reach region")
{
    const LdtSystem sys("id", Matrix::Identity(2, 2), mat({{1}, {2}}));
    CHECK(recover_region(sys, 3).stage(3).generators() == reach_region(sys, 3).stage(3).generators());
}

TEST_CASE("scalar recover series")
{
    const RegionFamily fam = recover_region(scalar_chain(1.0, 2.0), 2);
    CHECK(fam.stage(2).generators() == mat({{0.5, 0.25}}));
    CHECK(support(fam.stage(2), vec({1})) == 0.75);
}

TEST_CASE("recover needs an invertible plant")
{
    const LdtSystem sys("singular", mat({{0, 0}, {0, 1}}), mat({{1}, {1}}));
    CHECK(error_code([&] { recover_region(sys, 2); }) == ErrorCode::SingularA);
}

TEST_CASE("divergent plants stop at the growth limit")
{
    CHECK(error_code([] { reach_region(scalar_chain(1.0, 1e4), 5); }) == ErrorCode::UnstableGrowth);
    CHECK_NOTHROW(reach_region(scalar_chain(1.0, 1e4), 3));
}

TEST_CASE("planar pair regions agree with sign enumeration")
{
    for (RegionKind kind : {RegionKind::Reach, RegionKind::Recover}) {
        for (int steps : {2, 6}) {
            const Matrix g = region_generators(planar_pair(), kind, steps);
            CHECK(set_distance(vertices(Zonotope(g)), oracle::brute_vertices(g)) < 1e-9);
        }
    }
    // 4 * sum of |det| over generator pairs of A^{-k-1} b, k < 6.
    CHECK(volume(recover_region(planar_pair(), 6).stage(6)) == doctest::Approx(7.423857231368593).epsilon(1e-12));
}

TEST_CASE("recover vertices map through the inverse")
{
    SplitMix64 rng(5);
    for (int t = 0; t < 10; ++t) {
        const LdtSystem sys = oracle::random_system(rng, rng.integer(2, 3), 1);
        const int steps = rng.integer(1, 8);
        const Matrix ainv = inverse_state_matrix(sys);
        Matrix g(sys.n(), steps);
        Matrix p = Matrix::Identity(sys.n(), sys.n());
        for (int k = 0; k < steps; ++k) {
            g.col(k) = p * sys.B();
            p = ainv * p;
        }
        std::vector<Vector> mapped;
        for (const Vector& v : vertices(Zonotope(g))) {
            mapped.push_back(ainv * v);
        }
        CHECK(set_distance(vertices(recover_region(sys, steps).stage(steps)), mapped) < 1e-7);
    }
}

TEST_CASE("stages are nested, and strictly so n steps apart for controllable plants")
{
    const RegionFamily fam = recover_region(planar_pair(), 8);
    int touching = 0;
    for (int k = 1; k < 8; ++k) {
        for (const Vector& v : vertices(fam.stage(k))) {
            const double next = lp::max_margin(lp::BoxLp::unit(fam.stage(k + 1).generators(), v)).margin;
            CHECK(next >= 0.0);
            touching += next <= kBoundaryMarginForTest;
            if (k + 2 <= 8) {
                CHECK(lp::max_margin(lp::BoxLp::unit(fam.stage(k + 2).generators(), v)).margin > 1e-9);
            }
        }
    }
    // One added generator cannot lift every vertex off the boundary.
    CHECK(touching > 0);
}

TEST_CASE("controllability report")
{
    const ControllabilityReport id = controllability_report(LdtSystem("id", Matrix::Identity(2, 2), mat({{1}, {0}})), 4);
    CHECK(id.rankPn == 1);
    CHECK_FALSE(id.controllable);
    CHECK(id.grammianMinEigen == doctest::Approx(0.0));

    const ControllabilityReport pair = controllability_report(planar_pair(), 2);
    CHECK(pair.controllable);
    CHECK(pair.nc == 2);
    CHECK(pair.grammianMinEigen > 0.0);

    const ControllabilityReport dc = controllability_report(normalize_full(dc_motor(), dc_bounds(), false), 3);
    CHECK(dc.rankPn == 3);
    CHECK(error_code([] { controllability_report(dc_motor(), 2); }) == ErrorCode::HorizonTooShort);
}

TEST_CASE("controllability agrees with the volume of stage n")
{
    SplitMix64 rng(9);
    for (int t = 0; t < 10; ++t) {
        const LdtSystem sys = oracle::random_system(rng, 3, 1);
        CHECK(controllability_report(sys, 3).controllable == (volume(reach_region(sys, 3).stage(3)) > 0.0));
    }
    const LdtSystem id("id", Matrix::Identity(3, 3), mat({{1}, {1}, {0}}));
    CHECK_FALSE(controllability_report(id, 3).controllable);
    CHECK(volume(reach_region(id, 3).stage(3)) == 0.0);
}

TEST_CASE("expansion check")
{
    const RegionFamily pair = recover_region(planar_pair(), 6);
    const ExpansionResult strict = expansion_check(pair, 2, 6);
    CHECK(strict.verdict == ExpansionVerdict::StrictlyExpanding);
    CHECK(strict.addedRank == 2);

    const RegionFamily id = reach_region(LdtSystem("id", Matrix::Identity(2, 2), mat({{1}, {0}})), 5);
    for (int n1 = 1; n1 < 5; ++n1) {
        for (int n2 = n1 + 1; n2 <= 5; ++n2) {
            const ExpansionResult weak = expansion_check(id, n1, n2);
            CHECK(weak.verdict == ExpansionVerdict::WeaklyExpanding);
            REQUIRE(weak.contactDirection);
            REQUIRE(weak.contactPoint);
            CHECK(weak.contactGap == doctest::Approx(0.0));
            CHECK(weak.contactDirection->dot(*weak.contactPoint)
                  == doctest::Approx(support(id.stage(n2), *weak.contactDirection)));
        }
    }
    CHECK(error_code([&] { expansion_check(pair, 3, 3); }) == ErrorCode::BadRange);
    CHECK(error_code([&] { expansion_check(pair, 2, 7); }) == ErrorCode::BadRange);
}

TEST_CASE("random controllable 3-D systems expand strictly in every sampled direction")
{
    SplitMix64 rng(13);
    for (int t = 0; t < 5; ++t) {
        const LdtSystem sys = oracle::random_system(rng, 3, 1);
        const RegionFamily fam = reach_region(sys, 6);
        CHECK(expansion_check(fam, 3, 6).verdict == ExpansionVerdict::StrictlyExpanding);
        for (int k = 0; k < 1000; ++k) {
            const Vector d = unit_box(rng, 3);
            CHECK(support(fam.stage(6), d) > support(fam.stage(3), d));
        }
    }
}

TEST_CASE("region kind names")
{
    CHECK(parse_region_kind("reach") == RegionKind::Reach);
    CHECK(parse_region_kind("recover") == RegionKind::Recover);
    CHECK(to_string(RegionKind::Recover) == "recover");
    CHECK(error_code([] { parse_region_kind("forward"); }) == ErrorCode::InvalidArgument);
}

}
