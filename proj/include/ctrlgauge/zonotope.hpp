#pragma once

#include "ctrlgauge/linalg.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace ctrlgauge {

// Origin-centred zonotope { sum_k z_k g_k : |z_k| <= 1 }; generators are the
// columns of an n x m matrix.
class Zonotope {
public:
    explicit Zonotope(Matrix generators);

    int dim() const noexcept { return static_cast<int>(generators_.rows()); }
    int size() const noexcept { return static_cast<int>(generators_.cols()); }
    const Matrix& generators() const noexcept { return generators_; }

    // diag(scale) * generators.
    Zonotope scaled(const Vector& scale) const;
    Zonotope with_generators(const Matrix& extra) const;

private:
    Matrix generators_;
};

constexpr double kVertexTolerance = 1e-9;
// Relative sine below which two generators count as parallel and a generator
// counts as lying in a hyperplane.
constexpr double kParallelTolerance = 1e-9;

using SignPattern = std::vector<signed char>;

// Sign vectors s with sum_k s_k g_k a vertex, one per vertex. Found by walking
// the arrangement of hyperplanes d^T g_k = 0: every ray cut out by n-1
// generators fixes the signs of the generators off the hyperplane, and the
// tied generators are resolved recursively inside the hyperplane.
std::vector<SignPattern> vertex_sign_patterns(const Zonotope& z);

// Vertices sorted lexicographically, deduplicated at kVertexTolerance.
std::vector<Vector> vertices(const Zonotope& z);

// h(d) = sum_k |d^T g_k|.
double support(const Zonotope& z, const Vector& d);

// 2^n * sum over n-subsets S of |det G_S|; zero when rank < n.
double volume(const Zonotope& z);

struct Polygon {
    // Counter-clockwise, closing vertex not repeated.
    std::vector<Eigen::Vector2d> vertices;
    bool degenerate = false;
};

// Planar zonotope of the generators projected on coordinates (i, j), 0-based.
Polygon project_2d(const Zonotope& z, int i, int j);

// Planar zonotope polygon of a 2 x m generator matrix.
Polygon planar_polygon(const Matrix& generators2d);

// Shoelace area; throws Error(NotConvex) for non-convex or clockwise input.
double polygon_area(const Polygon& poly);

struct ShapeReport {
    double volume = 0.0;
    // Half side lengths of the circumscribed axis-aligned box, support(e_i).
    Vector sideLengths;
    // volume / box volume.
    double overallShapeFactor = 0.0;
    // projected area / projected box area, keyed by 0-based axis pairs i < j.
    std::map<std::pair<int, int>, double> planarShapeFactors;
    int rank = 0;
};

ShapeReport shape_report(const Zonotope& z);

// "x,y" header, one vertex per line, counter-clockwise.
std::string polygon_csv(const Polygon& poly);

struct SvgLayer {
    Polygon polygon;
    std::string label;
};

// One <path> per layer; viewBox is the joint bounding box with a 5% margin.
std::string polygon_svg(const std::vector<SvgLayer>& layers);

} // namespace ctrlgauge
