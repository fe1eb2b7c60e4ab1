#include "fixtures.hpp"

#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/region.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <doctest.h>

#include <cmath>

using namespace ctrlgauge;
using namespace fixtures;

namespace {

std::vector<Vector> as_vectors(const Polygon& p)
{
    std::vector<Vector> out;
    for (const auto& v : p.vertices) {
        out.emplace_back(Vector(v));
    }
    return out;
}

Matrix pair_generators(int steps)
{
    return region_generators(planar_pair(), RegionKind::Reach, steps);
}

} // namespace

TEST_SUITE("zonotope") {

TEST_CASE("a single generator gives a segment")
{
    const Vector b = vec({1.8182, -0.8182});
    const auto v = vertices(Zonotope(Matrix(b)));
    REQUIRE(v.size() == 2);
    CHECK(set_distance(v, {b, -b}) == 0.0);
}

TEST_CASE("unit generators give the square corners")
{
    const auto v = vertices(Zonotope(Matrix::Identity(2, 2)));
    CHECK(set_distance(v, {vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})}) == 0.0);
}

TEST_CASE("two-step region of the planar pair has four vertices")
{
    const Matrix g = pair_generators(2);
    const Vector b = g.col(0);
    const Vector ab = g.col(1);
    const auto v = vertices(Zonotope(g));
    CHECK(set_distance(v, {b + ab, -(b + ab), b - ab, ab - b}) < 1e-12);
    CHECK(set_distance(v, oracle::brute_vertices(g)) < 1e-9);
}

TEST_CASE("vertices are sorted and distinct")
{
    const auto v = vertices(Zonotope(pair_generators(6)));
    for (std::size_t i = 1; i < v.size(); ++i) {
        CHECK(std::lexicographical_compare(v[i - 1].begin(), v[i - 1].end(), v[i].begin(), v[i].end()));
    }
}

TEST_CASE("parallel and zero generators")
{
    Matrix g(2, 4);
    g << 1, 2, 0, 0, 1, 2, 0, 1;
    CHECK(set_distance(vertices(Zonotope(g)), oracle::brute_vertices(g)) < 1e-12);
    CHECK(vertices(Zonotope(Matrix::Zero(2, 3))).size() == 1);
}

TEST_CASE("support")
{
    const Zonotope square(Matrix::Identity(2, 2));
    CHECK(support(square, vec({1, 0})) == 1.0);
    const Zonotope pair(pair_generators(2));
    const Vector d = vec({0.3, -1.7});
    CHECK(support(pair, d) == support(pair, -d));
    // |b_1| + |(A b)_1| of the planar pair.
    CHECK(support(pair, vec({1, 0})) == doctest::Approx(4.34349394).epsilon(1e-14));
    CHECK(error_code([&] { support(pair, vec({0, 0})); }) == ErrorCode::ZeroDirection);
    CHECK(error_code([&] { support(pair, vec({1, 0, 0})); }) == ErrorCode::DimensionMismatch);
}

TEST_CASE("support equals the best vertex")
{
    SplitMix64 rng(7);
    const Zonotope z(pair_generators(6));
    const auto v = vertices(z);
    for (int t = 0; t < 50; ++t) {
        const Vector d = unit_box(rng, 2);
        double best = -1e300;
        for (const Vector& p : v) {
            best = std::max(best, d.dot(p));
        }
        CHECK(support(z, d) == doctest::Approx(best).epsilon(1e-12));
    }
}

TEST_CASE("volume")
{
    CHECK(volume(Zonotope(Matrix::Identity(2, 2))) == 4.0);
    CHECK(volume(Zonotope(vec({1, 2}))) == 0.0);
    CHECK(volume(Zonotope(Matrix::Identity(3, 3))) == 8.0);
    // 4 * sum of |det| over generator pairs of the six-step planar pair.
    CHECK(volume(Zonotope(pair_generators(6))) == doctest::Approx(299.42848257848163).epsilon(1e-12));
}

TEST_CASE("projection")
{
    const Polygon sq = project_2d(Zonotope(Matrix::Identity(3, 3)), 0, 1);
    CHECK_FALSE(sq.degenerate);
    CHECK(set_distance(as_vectors(sq), {vec({1, 1}), vec({1, -1}), vec({-1, 1}), vec({-1, -1})}) == 0.0);
    CHECK(polygon_area(sq) == 4.0);

    const Polygon seg = project_2d(Zonotope(vec({1, 2, 3})), 0, 2);
    CHECK(seg.degenerate);
    CHECK(seg.vertices.size() == 2);
    CHECK(polygon_area(seg) == 0.0);

    CHECK(error_code([] { project_2d(Zonotope(Matrix::Identity(3, 3)), 1, 1); }) == ErrorCode::BadAxes);
    CHECK(error_code([] { project_2d(Zonotope(Matrix::Identity(3, 3)), 0, 3); }) == ErrorCode::BadAxes);
}

TEST_CASE("projection of the normalized DC motor region matches sign enumeration")
{
    const LdtSystem dc = normalize_full(dc_motor(), dc_bounds(), false);
    const Zonotope z(region_generators(dc, RegionKind::Reach, 8));
    const Polygon p = project_2d(z, 0, 1);
    const auto ref = oracle::brute_vertices(z.generators().topRows(2));
    CHECK(p.vertices.size() == 14);
    const auto got = as_vectors(p);
    double scale = 1.0;
    for (const Vector& v : ref) {
        scale = std::max(scale, v.cwiseAbs().maxCoeff());
    }
    CHECK(set_distance(got, ref) <= 1e-9 * scale);
}

TEST_CASE("polygon area")
{
    Polygon cw;
    cw.vertices = {{1, 1}, {1, -1}, {-1, -1}, {-1, 1}};
    CHECK(error_code([&] { polygon_area(cw); }) == ErrorCode::NotConvex);
    Polygon dart;
    dart.vertices = {{0, 0}, {2, 0}, {0.5, 0.5}, {0, 2}};
    CHECK(error_code([&] { polygon_area(dart); }) == ErrorCode::NotConvex);

    SplitMix64 rng(11);
    Matrix g(2, 5);
    for (auto& v : g.reshaped()) {
        v = rng.uniform(-2.0, 2.0);
    }
    double expansion = 0.0;
    for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) {
            expansion += 4.0 * std::abs(g(0, i) * g(1, j) - g(1, i) * g(0, j));
        }
    }
    CHECK(polygon_area(planar_polygon(g)) == doctest::Approx(expansion).epsilon(1e-12));
}

TEST_CASE("shape report")
{
    const ShapeReport box = shape_report(Zonotope(Matrix::Identity(2, 2)));
    CHECK(box.sideLengths == vec({1, 1}));
    CHECK(box.overallShapeFactor == 1.0);
    CHECK(box.planarShapeFactors.at({0, 1}) == 1.0);
    CHECK(box.rank == 2);

    const ShapeReport seg = shape_report(Zonotope(vec({1, 1})));
    CHECK(seg.overallShapeFactor == 0.0);
    CHECK(seg.rank == 1);

    const Zonotope z(region_generators(dc_motor(), RegionKind::Reach, 6));
    const ShapeReport a = shape_report(z);
    const ShapeReport b = shape_report(z.scaled(vec({2, 2, 2})));
    CHECK(b.overallShapeFactor == doctest::Approx(a.overallShapeFactor).epsilon(1e-12));
    for (const auto& [axes, f] : a.planarShapeFactors) {
        CHECK(b.planarShapeFactors.at(axes) == doctest::Approx(f).epsilon(1e-12));
    }
    CHECK(b.volume == doctest::Approx(8 * a.volume).epsilon(1e-12));
}

TEST_CASE("csv and svg output")
{
    const Polygon sq = project_2d(Zonotope(Matrix::Identity(2, 2)), 0, 1);
    const std::string csv = polygon_csv(sq);
    CHECK(csv.rfind("x,y\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);

    const Polygon inner = project_2d(Zonotope(pair_generators(2)), 0, 1);
    const Polygon outer = project_2d(Zonotope(pair_generators(6)), 0, 1);
    const std::string svg = polygon_svg({{inner, "N=2"}, {outer, "N=6"}});
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("viewBox") != std::string::npos);
    std::size_t paths = 0;
    for (std::size_t pos = svg.find("<path"); pos != std::string::npos; pos = svg.find("<path", pos + 1)) {
        ++paths;
    }
    CHECK(paths == 2);
}

}
