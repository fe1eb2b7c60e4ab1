#include "fixtures.hpp"

#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/oracle.hpp"

#include <doctest.h>

#include <limits>
#include <sstream>

using namespace ctrlgauge;
using namespace fixtures;

TEST_SUITE("lp") {

TEST_CASE("sum of generators is feasible with all inputs at the upper bound")
{
    const Matrix g = mat({{1, 0.5}, {0.2, 2}});
    const lp::FeasibilityResult r = lp::feasible(lp::BoxLp::unit(g, g.col(0) + g.col(1)));
    REQUIRE(r.feasible);
    CHECK((*r.witness - vec({1, 1})).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scalar point outside the interval")
{
    const lp::FeasibilityResult r = lp::feasible(lp::BoxLp::unit(mat({{1}}), vec({2})));
    CHECK_FALSE(r.feasible);
    REQUIRE(r.certificate);
    const Vector& d = *r.certificate;
    CHECK(d.dot(vec({2})) > lp::box_support(mat({{1}}), vec({-1}), vec({1}), d));
}

TEST_CASE("infeasibility certificates separate in random instances")
{
    SplitMix64 rng(17);
    int infeasible = 0;
    for (int t = 0; t < 200; ++t) {
        Matrix g(2, 4);
        for (auto& v : g.reshaped()) {
            v = rng.uniform(-1.0, 1.0);
        }
        const Vector x0 = vec({rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
        const lp::FeasibilityResult r = lp::feasible(lp::BoxLp::unit(g, x0));
        if (!r.feasible) {
            ++infeasible;
            REQUIRE(r.certificate);
            const Vector ones = Vector::Ones(4);
            CHECK(r.certificate->dot(x0) > lp::box_support(g, -ones, ones, *r.certificate));
        }
    }
    CHECK(infeasible > 0);
}

TEST_CASE("feasibility verdicts match feasible-polytope vertex enumeration")
{
    SplitMix64 rng(19);
    for (int t = 0; t < 100; ++t) {
        Matrix g(3, 10);
        for (auto& v : g.reshaped()) {
            v = rng.uniform(-1.0, 1.0);
        }
        Vector x0(3);
        for (auto& v : x0) {
            v = rng.uniform(-4.0, 4.0);
        }
        const Vector ones = Vector::Ones(10);
        const bool ref = !oracle::box_polytope_vertices(g, x0, -ones, ones).empty();
        const lp::FeasibilityResult r = lp::feasible(lp::BoxLp::unit(g, x0));
        CHECK(r.feasible == ref);
        if (r.feasible) {
            CHECK((g * *r.witness - x0).cwiseAbs().maxCoeff() <= lp::kResidualTolerance);
            CHECK(r.witness->cwiseAbs().maxCoeff() <= 1.0 + 1e-9);
        }
    }
}

TEST_CASE("margin")
{
    const Matrix g = mat({{1, 0.5}, {0.2, 2}});
    CHECK(lp::max_margin(lp::BoxLp::unit(g, vec({0, 0}))).margin == doctest::Approx(1.0));
    CHECK(lp::max_margin(lp::BoxLp::unit(g, g.col(0) + g.col(1))).margin == doctest::Approx(0.0).epsilon(1e-9));
    const lp::MarginResult chain = lp::max_margin(lp::BoxLp::unit(Matrix::Ones(1, 4), vec({2})));
    CHECK(chain.margin == doctest::Approx(0.5));
    CHECK(chain.witness.sum() == doctest::Approx(2.0));
    CHECK(chain.witness.cwiseAbs().maxCoeff() <= 0.5 + 1e-9);
    CHECK(error_code([] { lp::max_margin(lp::BoxLp::unit(Matrix::Ones(1, 2), vec({3}))); }) == ErrorCode::Infeasible);
}

TEST_CASE("optimize")
{
    lp::BoxLp free = lp::BoxLp::unit(Matrix::Zero(0, 2), Vector::Zero(0));
    free.objective = vec({1, 0});
    const lp::OptimumResult a = lp::optimize(free);
    CHECK(a.value == doctest::Approx(1.0));
    CHECK(a.argument[0] == doctest::Approx(1.0));

    lp::BoxLp balanced = lp::BoxLp::unit(mat({{1, 1}}), vec({0}));
    balanced.objective = vec({1, 0});
    const lp::OptimumResult b = lp::optimize(balanced);
    CHECK(b.value == doctest::Approx(1.0));
    CHECK((b.argument - vec({1, -1})).cwiseAbs().maxCoeff() < 1e-9);

    CHECK(error_code([] { lp::optimize(lp::BoxLp::unit(mat({{1}}), vec({0}))); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("optimum matches vertex enumeration on small instances")
{
    SplitMix64 rng(23);
    for (int t = 0; t < 100; ++t) {
        const int m = rng.integer(2, 8);
        Matrix g(2, m);
        for (auto& v : g.reshaped()) {
            v = rng.uniform(-2.0, 2.0);
        }
        const Vector x0 = g * unit_box(rng, m);
        lp::BoxLp box = lp::BoxLp::unit(g, x0);
        box.objective = unit_box(rng, m);
        const auto verts = oracle::box_polytope_vertices(g, x0, box.lower, box.upper);
        REQUIRE_FALSE(verts.empty());
        double ref = -std::numeric_limits<double>::infinity();
        for (const Vector& v : verts) {
            ref = std::max(ref, box.objective->dot(v));
        }
        CHECK(lp::optimize(box).value == doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("general problems through the simplex solver")
{
    lp::Problem p;
    p.A = mat({{1, 1, 1}});
    p.b = vec({4});
    p.lower = vec({0, 0, 0});
    p.upper = vec({std::numeric_limits<double>::infinity(), 3, 3});
    p.cost = vec({1, -1, -2});
    std::ostringstream trace;
    lp::Options opt;
    opt.trace = &trace;
    const lp::Solution s = lp::SimplexSolver(opt).solve(p);
    CHECK(s.status == lp::Status::Optimal);
    CHECK(s.objective == doctest::Approx(-7.0));
    CHECK_FALSE(trace.str().empty());

    p.cost = vec({-1, 0, 0});
    CHECK(lp::SimplexSolver().solve(p).status == lp::Status::Optimal);
    p.A = mat({{1, -1, 0}});
    p.b = vec({0});
    p.upper[1] = std::numeric_limits<double>::infinity();
    CHECK(lp::SimplexSolver().solve(p).status == lp::Status::Unbounded);

    p.A = mat({{0, 1, 1}});
    p.b = vec({7});
    p.upper[1] = 3;
    const lp::Solution inf = lp::SimplexSolver().solve(p);
    CHECK(inf.status == lp::Status::Infeasible);
    CHECK(inf.farkas.size() == 1);
}

TEST_CASE("bad input")
{
    lp::BoxLp box = lp::BoxLp::unit(mat({{1, 2}}), vec({0}));
    box.lower = vec({1, 0});
    box.upper = vec({0, 1});
    CHECK(error_code([&] { lp::feasible(box); }) == ErrorCode::InvalidArgument);
    CHECK(error_code([] { lp::feasible(lp::BoxLp::unit(mat({{1, 2}}), vec({0, 1}))); })
          == ErrorCode::DimensionMismatch);
    lp::Problem p;
    p.A = mat({{1, 1}});
    p.b = vec({1});
    p.lower = vec({-std::numeric_limits<double>::infinity(), 0});
    p.upper = vec({std::numeric_limits<double>::infinity(), 1});
    p.cost = vec({0, 0});
    CHECK(error_code([&] { lp::SimplexSolver().solve(p); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("membership reuses one workspace")
{
    lp::BoxMembership member = lp::BoxMembership::unit(mat({{1, 0, 1}, {0, 1, 1}}));
    CHECK(member.contains(vec({0, 0})));
    CHECK(member.contains(vec({2, 2})));
    CHECK_FALSE(member.contains(vec({2.1, 2})));
    CHECK(member.contains(vec({-1.5, 0.5})));
    CHECK(error_code([&] { member.test(vec({1})); }) == ErrorCode::DimensionMismatch);
}

}
