#include "ctrlgauge/zonotope.hpp"
#include "ctrlgauge/error.hpp"
#include "exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace ctrlgauge {

namespace {

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b)
{
    return a.x() * b.y() - a.y() * b.x();
}

// Planar zonotope: generators folded into the upper half-plane, sorted by
// angle, parallel ones grouped. The resulting walk is counter-clockwise.
// Angle order and parallelism are decided by exact cross-product signs.
std::vector<SignPattern> planar_patterns(const Matrix& h)
{
    const int m = static_cast<int>(h.cols());
    struct Item {
        int k;
        signed char sigma;
        Eigen::Vector2d v;
    };
    std::vector<Item> items;
    items.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
        Eigen::Vector2d v = h.col(k);
        if (v.x() == 0.0 && v.y() == 0.0) {
            continue;
        }
        signed char sigma = (v.y() < 0.0 || (v.y() == 0.0 && v.x() < 0.0)) ? -1 : 1;
        v *= sigma;
        items.push_back({k, sigma, v});
    }
    SignPattern base(static_cast<std::size_t>(m), 1);
    if (items.empty()) {
        return {base};
    }
    auto turn = [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return exact::sign_det2(a.x(), a.y(), b.x(), b.y());
    };
    std::stable_sort(items.begin(), items.end(), [&](const Item& a, const Item& b) { return turn(a.v, b.v) > 0; });

    std::vector<std::vector<Item>> groups;
    for (const Item& it : items) {
        if (!groups.empty() && turn(groups.back().front().v, it.v) == 0) {
            groups.back().push_back(it);
        } else {
            groups.push_back({it});
        }
    }

    for (const auto& g : groups) {
        for (const Item& it : g) {
            base[static_cast<std::size_t>(it.k)] = static_cast<signed char>(-it.sigma);
        }
    }
    std::vector<SignPattern> out;
    out.reserve(2 * groups.size());
    SignPattern cur = base;
    out.push_back(cur);
    for (std::size_t g = 0; g < groups.size(); ++g) {
        for (const Item& it : groups[g]) {
            cur[static_cast<std::size_t>(it.k)] = it.sigma;
        }
        out.push_back(cur);
    }
    for (std::size_t g = 0; g + 1 < groups.size(); ++g) {
        for (const Item& it : groups[g]) {
            cur[static_cast<std::size_t>(it.k)] = static_cast<signed char>(-it.sigma);
        }
        out.push_back(cur);
    }
    return out;
}

SignPattern negated(SignPattern s)
{
    for (auto& v : s) {
        v = static_cast<signed char>(-v);
    }
    return s;
}

std::vector<SignPattern> low_dim_patterns(const Matrix& h);

// Three-dimensional span: every non-parallel pair spans a plane whose normal
// splits the generators into fixed signs and a tied set lying in the plane.
std::vector<SignPattern> spatial_patterns(const Matrix& h)
{
    const int m = static_cast<int>(h.cols());
    std::vector<Eigen::Vector3d> cols;
    for (int k = 0; k < m; ++k) {
        cols.emplace_back(h.col(k));
    }
    std::set<SignPattern> out;
    std::set<std::vector<int>> seen;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            const Eigen::Vector3d& a = cols[static_cast<std::size_t>(i)];
            const Eigen::Vector3d& b = cols[static_cast<std::size_t>(j)];
            const bool parallel = exact::sign_det2(a[0], a[1], b[0], b[1]) == 0
                && exact::sign_det2(a[0], a[2], b[0], b[2]) == 0 && exact::sign_det2(a[1], a[2], b[1], b[2]) == 0;
            if (parallel) {
                continue;
            }
            std::vector<int> tied;
            SignPattern fixed(static_cast<std::size_t>(m), 0);
            for (int k = 0; k < m; ++k) {
                const int side = exact::sign_det3(a, b, cols[static_cast<std::size_t>(k)]);
                if (side == 0) {
                    tied.push_back(k);
                } else {
                    fixed[static_cast<std::size_t>(k)] = static_cast<signed char>(side);
                }
            }
            if (!seen.insert(tied).second) {
                continue;
            }
            Matrix ht(3, static_cast<Eigen::Index>(tied.size()));
            for (std::size_t t = 0; t < tied.size(); ++t) {
                ht.col(static_cast<Eigen::Index>(t)) = h.col(tied[t]);
            }
            for (const SignPattern& sub : low_dim_patterns(ht)) {
                SignPattern s = fixed;
                for (std::size_t t = 0; t < tied.size(); ++t) {
                    s[static_cast<std::size_t>(tied[t])] = sub[t];
                }
                out.insert(s);
                out.insert(negated(std::move(s)));
            }
        }
    }
    return {out.begin(), out.end()};
}

// At most three coordinates; the exact rank picks coordinate rows onto which
// the span projects injectively, so no rounding enters the combinatorics.
std::vector<SignPattern> low_dim_patterns(const Matrix& h)
{
    const int m = static_cast<int>(h.cols());
    const std::vector<int> rows = exact::spanning_rows(h);
    const Matrix hp = h(rows, Eigen::all);
    switch (rows.size()) {
    case 0:
        return {SignPattern(static_cast<std::size_t>(m), 1)};
    case 1: {
        SignPattern s(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            s[static_cast<std::size_t>(k)] = hp(0, k) >= 0.0 ? 1 : -1;
        }
        return {s, negated(s)};
    }
    case 2:
        return planar_patterns(hp);
    default:
        return spatial_patterns(hp);
    }
}

// h: nonzero generators as columns.
std::vector<SignPattern> patterns_of(const Matrix& h)
{
    const int m = static_cast<int>(h.cols());
    if (m == 0) {
        return {SignPattern{}};
    }
    if (h.rows() <= 3) {
        return low_dim_patterns(h);
    }
    const Matrix q = linalg::orthonormal_span(h, kParallelTolerance);
    const int rho = static_cast<int>(q.cols());
    const Matrix hr = q.transpose() * h;
    if (rho <= 3) {
        return low_dim_patterns(hr);
    }

    std::set<SignPattern> out;
    std::set<std::vector<int>> seen;
    Vector norms(m);
    for (int k = 0; k < m; ++k) {
        norms[k] = hr.col(k).norm();
    }
    linalg::for_each_combination(m, rho - 1, [&](std::span<const int> subset) {
        Matrix sub(rho, rho - 1);
        for (int c = 0; c < rho - 1; ++c) {
            sub.col(c) = hr.col(subset[static_cast<std::size_t>(c)]);
        }
        const Matrix comp = linalg::orthogonal_complement(sub, kParallelTolerance);
        if (comp.cols() != 1) {
            return true;
        }
        const Vector d = comp.col(0);
        std::vector<int> tied;
        SignPattern fixed(static_cast<std::size_t>(m), 0);
        for (int k = 0; k < m; ++k) {
            const double dot = d.dot(hr.col(k));
            if (std::abs(dot) <= kParallelTolerance * norms[k]) {
                tied.push_back(k);
            } else {
                fixed[static_cast<std::size_t>(k)] = dot > 0.0 ? 1 : -1;
            }
        }
        if (!seen.insert(tied).second) {
            return true;
        }
        const Matrix plane = linalg::orthogonal_complement(d);
        Matrix ht(plane.cols(), static_cast<Eigen::Index>(tied.size()));
        for (std::size_t t = 0; t < tied.size(); ++t) {
            ht.col(static_cast<Eigen::Index>(t)) = plane.transpose() * hr.col(tied[t]);
        }
        for (const SignPattern& sub_pattern : patterns_of(ht)) {
            SignPattern s = fixed;
            for (std::size_t t = 0; t < tied.size(); ++t) {
                s[static_cast<std::size_t>(tied[t])] = sub_pattern[t];
            }
            out.insert(s);
            out.insert(negated(std::move(s)));
        }
        return true;
    });
    return {out.begin(), out.end()};
}

bool lex_less(const Vector& a, const Vector& b)
{
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

Vector apply_signs(const Matrix& g, const SignPattern& s)
{
    Vector v = Vector::Zero(g.rows());
    for (Eigen::Index k = 0; k < g.cols(); ++k) {
        v += static_cast<double>(s[static_cast<std::size_t>(k)]) * g.col(k);
    }
    return v;
}

} // namespace

Zonotope::Zonotope(Matrix generators) : generators_(std::move(generators))
{
    if (generators_.rows() < 1) {
        throw Error(ErrorCode::DimensionMismatch, "zonotope needs ambient dimension >= 1");
    }
    if (!linalg::all_finite(generators_)) {
        throw Error(ErrorCode::NonFinite, "zonotope generators must be finite");
    }
}

Zonotope Zonotope::scaled(const Vector& scale) const
{
    if (scale.size() != generators_.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "scale vector length differs from dimension");
    }
    return Zonotope(scale.asDiagonal() * generators_);
}

Zonotope Zonotope::with_generators(const Matrix& extra) const
{
    if (extra.rows() != generators_.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "appended generators have wrong dimension");
    }
    Matrix g(generators_.rows(), generators_.cols() + extra.cols());
    g << generators_, extra;
    return Zonotope(std::move(g));
}

std::vector<SignPattern> vertex_sign_patterns(const Zonotope& z)
{
    const Matrix& g = z.generators();
    std::vector<int> live;
    for (Eigen::Index k = 0; k < g.cols(); ++k) {
        if (g.col(k).cwiseAbs().maxCoeff() > 0.0) {
            live.push_back(static_cast<int>(k));
        }
    }
    Matrix h(g.rows(), static_cast<Eigen::Index>(live.size()));
    for (std::size_t t = 0; t < live.size(); ++t) {
        h.col(static_cast<Eigen::Index>(t)) = g.col(live[t]);
    }
    std::vector<SignPattern> out;
    for (const SignPattern& p : patterns_of(h)) {
        SignPattern full(static_cast<std::size_t>(g.cols()), 1);
        for (std::size_t t = 0; t < live.size(); ++t) {
            full[static_cast<std::size_t>(live[t])] = p[t];
        }
        out.push_back(std::move(full));
    }
    return out;
}

std::vector<Vector> vertices(const Zonotope& z)
{
    std::vector<Vector> pts;
    for (const SignPattern& s : vertex_sign_patterns(z)) {
        pts.push_back(apply_signs(z.generators(), s));
    }
    std::sort(pts.begin(), pts.end(), lex_less);
    std::vector<Vector> out;
    for (Vector& p : pts) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Vector& q) {
            return (q - p).cwiseAbs().maxCoeff() <= kVertexTolerance;
        });
        if (!dup) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

double support(const Zonotope& z, const Vector& d)
{
    if (d.size() != z.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "direction has wrong dimension");
    }
    if (!d.allFinite()) {
        throw Error(ErrorCode::NonFinite, "direction must be finite");
    }
    if (d.cwiseAbs().maxCoeff() == 0.0) {
        throw Error(ErrorCode::ZeroDirection, "support needs a nonzero direction");
    }
    return (z.generators().transpose() * d).cwiseAbs().sum();
}

double volume(const Zonotope& z)
{
    const Matrix& g = z.generators();
    const int n = z.dim();
    const int m = z.size();
    if (m < n || linalg::numeric_rank(g) < n) {
        return 0.0;
    }
    double sum = 0.0;
    if (n == 1) {
        sum = g.cwiseAbs().sum();
    } else if (n == 2) {
        for (int a = 0; a < m; ++a) {
            for (int b = a + 1; b < m; ++b) {
                sum += std::abs(g(0, a) * g(1, b) - g(1, a) * g(0, b));
            }
        }
    } else if (n == 3) {
        linalg::for_each_combination(m, 3, [&](std::span<const int> s) {
            Eigen::Matrix3d sub;
            sub << g.col(s[0]), g.col(s[1]), g.col(s[2]);
            sum += std::abs(sub.determinant());
            return true;
        });
    } else {
        Matrix sub(n, n);
        linalg::for_each_combination(m, n, [&](std::span<const int> s) {
            for (int c = 0; c < n; ++c) {
                sub.col(c) = g.col(s[static_cast<std::size_t>(c)]);
            }
            sum += std::abs(sub.partialPivLu().determinant());
            return true;
        });
    }
    return std::ldexp(sum, n);
}

Polygon planar_polygon(const Matrix& g2)
{
    if (g2.rows() != 2) {
        throw Error(ErrorCode::DimensionMismatch, "planar polygon needs 2-D generators");
    }
    Polygon poly;
    std::vector<int> live;
    for (Eigen::Index k = 0; k < g2.cols(); ++k) {
        if (g2.col(k).cwiseAbs().maxCoeff() > 0.0) {
            live.push_back(static_cast<int>(k));
        }
    }
    if (live.empty()) {
        poly.degenerate = true;
        return poly;
    }
    Matrix h(2, static_cast<Eigen::Index>(live.size()));
    for (std::size_t t = 0; t < live.size(); ++t) {
        h.col(static_cast<Eigen::Index>(t)) = g2.col(live[t]);
    }
    for (const SignPattern& s : planar_patterns(h)) {
        poly.vertices.push_back(apply_signs(h, s));
    }
    poly.degenerate = poly.vertices.size() < 3;
    return poly;
}

Polygon project_2d(const Zonotope& z, int i, int j)
{
    if (i == j || i < 0 || j < 0 || i >= z.dim() || j >= z.dim()) {
        throw Error(ErrorCode::BadAxes, "projection axes must be distinct and below the dimension");
    }
    Matrix g2(2, z.size());
    g2.row(0) = z.generators().row(i);
    g2.row(1) = z.generators().row(j);
    return planar_polygon(g2);
}

double polygon_area(const Polygon& poly)
{
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) {
        return 0.0;
    }
    double twice = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const Eigen::Vector2d& a = v[k];
        const Eigen::Vector2d& b = v[(k + 1) % n];
        const Eigen::Vector2d& c = v[(k + 2) % n];
        const Eigen::Vector2d e1 = b - a;
        const Eigen::Vector2d e2 = c - b;
        if (cross2(e1, e2) < -kParallelTolerance * e1.norm() * e2.norm()) {
            throw Error(ErrorCode::NotConvex, "polygon is not convex and counter-clockwise");
        }
        twice += cross2(a, b);
    }
    if (twice < 0.0) {
        throw Error(ErrorCode::NotConvex, "polygon is clockwise");
    }
    return 0.5 * twice;
}

ShapeReport shape_report(const Zonotope& z)
{
    const int n = z.dim();
    ShapeReport rep;
    rep.volume = volume(z);
    rep.rank = linalg::numeric_rank(z.generators());
    rep.sideLengths = z.generators().cwiseAbs().rowwise().sum();
    const bool boxed = (rep.sideLengths.array() > 0.0).all();
    if (boxed && rep.volume > 0.0) {
        rep.overallShapeFactor = std::clamp(rep.volume / (std::ldexp(1.0, n) * rep.sideLengths.prod()), 0.0, 1.0);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double f = 0.0;
            const double box = 4.0 * rep.sideLengths[i] * rep.sideLengths[j];
            if (box > 0.0) {
                f = std::clamp(polygon_area(project_2d(z, i, j)) / box, 0.0, 1.0);
            }
            rep.planarShapeFactors[{i, j}] = f;
        }
    }
    return rep;
}

std::string polygon_csv(const Polygon& poly)
{
    std::ostringstream os;
    os << "x,y\n";
    char buf[64];
    for (const auto& v : poly.vertices) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.x(), v.y());
        os << buf;
    }
    return os.str();
}

std::string polygon_svg(const std::vector<SvgLayer>& layers)
{
    double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;
    bool first = true;
    for (const auto& layer : layers) {
        for (const auto& v : layer.polygon.vertices) {
            if (first) {
                xmin = xmax = v.x();
                ymin = ymax = v.y();
                first = false;
            }
            xmin = std::min(xmin, v.x());
            xmax = std::max(xmax, v.x());
            ymin = std::min(ymin, v.y());
            ymax = std::max(ymax, v.y());
        }
    }
    double w = xmax - xmin;
    double h = ymax - ymin;
    if (w <= 0.0) {
        w = std::max(1.0, h);
        xmin -= 0.5 * w;
    }
    if (h <= 0.0) {
        h = std::max(1.0, w);
        ymin -= 0.5 * h;
    }
    const double mx = 0.05 * w;
    const double my = 0.05 * h;
    // SVG's y axis points down; plot (x, -y).
    char buf[160];
    std::ostringstream os;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.9g %.9g %.9g %.9g\">\n",
                  xmin - mx, -(ymin + h) - my, w + 2 * mx, h + 2 * my);
    os << buf;
    static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};
    const double stroke = 0.004 * std::max(w, h);
    for (std::size_t l = 0; l < layers.size(); ++l) {
        const auto& verts = layers[l].polygon.vertices;
        if (verts.empty()) {
            continue;
        }
        os << "  <path data-label=\"" << layers[l].label << "\" d=\"";
        for (std::size_t k = 0; k < verts.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%s%.9g %.9g ", k == 0 ? "M" : "L", verts[k].x(), -verts[k].y());
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "Z\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.6g\"/>\n",
                      kColors[l % 4], stroke);
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace ctrlgauge
