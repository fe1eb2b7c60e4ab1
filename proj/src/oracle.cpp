#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/control.hpp"
#include "ctrlgauge/error.hpp"
#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/zonotope.hpp"
#include "exact.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace ctrlgauge::oracle {

namespace {

constexpr double kHullTolerance = 1e-9;
constexpr double kRoundoff = 2.3e-16;

using Vec3 = Eigen::Vector3d;
using exact::Rational3;

bool lex_less(const Vector& a, const Vector& b)
{
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

int sign_of(double v)
{
    return (v > 0.0) - (v < 0.0);
}

double permanent(const Vec3& a, const Vec3& b, const Vec3& c)
{
    return a[0] * (b[1] * c[2] + b[2] * c[1]) + a[1] * (b[0] * c[2] + b[2] * c[0])
        + a[2] * (b[0] * c[1] + b[1] * c[0]);
}

// The 2^m signed sums of at most three coordinate rows, with floating-point
// values, per-coordinate error bounds and exact values on demand.
class SignSums {
public:
    SignSums(const Matrix& g, const OracleConfig& cfg) : dim_(static_cast<int>(g.rows()))
    {
        cfg.check();
        const auto m = g.cols();
        if (m > cfg.maxSignBits) {
            throw Error(ErrorCode::TooManyGenerators, std::to_string(m) + " generators exceed the enumeration cap of "
                                                          + std::to_string(cfg.maxSignBits));
        }
        g_ = Matrix::Zero(3, m);
        g_.topRows(dim_) = g;
        for (Eigen::Index k = 0; k < m; ++k) {
            gq_.push_back(exact::to_rational(Vec3(g_.col(k))));
        }
        const Vec3 err = 1e-15 * static_cast<double>(m + 1) * Vec3(g_.cwiseAbs().rowwise().sum());
        std::vector<std::pair<Vec3, std::uint64_t>> raw;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            Vec3 s = Vec3::Zero();
            for (Eigen::Index k = 0; k < m; ++k) {
                s += ((mask >> k) & 1U ? 1.0 : -1.0) * g_.col(k);
            }
            raw.emplace_back(s, mask);
        }
        std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
            return std::lexicographical_compare(a.first.data(), a.first.data() + 3, b.first.data(), b.first.data() + 3);
        });
        for (const auto& [p, mask] : raw) {
            if (!approx_.empty() && same(approx_.back(), p, err)) {
                continue;
            }
            approx_.push_back(p);
            masks_.push_back(mask);
            err_.push_back(err);
        }
        exact_.resize(approx_.size());
    }

    int size() const { return static_cast<int>(masks_.size()); }
    int dim() const { return dim_; }
    const Vec3& approx(int i) const { return approx_[static_cast<std::size_t>(i)]; }

    // Adds a point that is not a signed sum: point `base` shifted by `offset`.
    int add_virtual(int base, const Vec3& offset)
    {
        approx_.push_back(approx(base) + offset);
        err_.push_back(err_[static_cast<std::size_t>(base)] + kRoundoff * approx_.back().cwiseAbs());
        masks_.push_back(0);
        Rational3 q = exact_point(base);
        const Rational3 o = exact::to_rational(offset);
        for (int c = 0; c < 3; ++c) {
            q[c] += o[c];
        }
        exact_.emplace_back(std::move(q));
        return size() - 1;
    }

    const Rational3& exact_point(int i) const
    {
        auto& slot = exact_[static_cast<std::size_t>(i)];
        if (!slot) {
            Rational3 q{mpq_class(0), mpq_class(0), mpq_class(0)};
            const std::uint64_t mask = masks_[static_cast<std::size_t>(i)];
            for (std::size_t k = 0; k < gq_.size(); ++k) {
                for (int c = 0; c < 3; ++c) {
                    if ((mask >> k) & 1U) {
                        q[c] += gq_[k][c];
                    } else {
                        q[c] -= gq_[k][c];
                    }
                }
            }
            slot = std::move(q);
        }
        return *slot;
    }

    // sign of coordinate c of (p_i - p_j)
    int compare(int i, int j, int c) const
    {
        const double d = approx(i)[c] - approx(j)[c];
        if (std::abs(d) > err(i)[c] + err(j)[c] + kRoundoff * std::abs(d)) {
            return sign_of(d);
        }
        return sgn(exact_point(i)[c] - exact_point(j)[c]);
    }

    // sign of det [p_j - p_i, p_k - p_i, p_l - p_i]
    int orient(int i, int j, int k, int l) const
    {
        const Vec3 a = approx(j) - approx(i);
        const Vec3 b = approx(k) - approx(i);
        const Vec3 c = approx(l) - approx(i);
        const double det = a.dot(b.cross(c));
        const Vec3 da = a.cwiseAbs() + err(i) + err(j) + kRoundoff * a.cwiseAbs();
        const Vec3 db = b.cwiseAbs() + err(i) + err(k) + kRoundoff * b.cwiseAbs();
        const Vec3 dc = c.cwiseAbs() + err(i) + err(l) + kRoundoff * c.cwiseAbs();
        const double p1 = permanent(da, db, dc);
        const double bound = 2.0 * (p1 - permanent(a.cwiseAbs(), b.cwiseAbs(), c.cwiseAbs())) + 1e-14 * p1;
        if (std::abs(det) > bound) {
            return sign_of(det);
        }
        return exact::sign_det3(diff(j, i), diff(k, i), diff(l, i));
    }

    // sign of the (u, v) minor of [p_j - p_i, p_k - p_i]
    int orient2(int i, int j, int k, int u, int v) const
    {
        const Vec3 a = approx(j) - approx(i);
        const Vec3 b = approx(k) - approx(i);
        const double det = a[u] * b[v] - a[v] * b[u];
        auto widen = [&](const Vec3& x, int p, int q, int c) {
            return std::abs(x[c]) * (1.0 + kRoundoff) + err(p)[c] + err(q)[c];
        };
        const double loose = widen(a, i, j, u) * widen(b, i, k, v) + widen(a, i, j, v) * widen(b, i, k, u);
        const double tight = std::abs(a[u] * b[v]) + std::abs(a[v] * b[u]);
        if (std::abs(det) > 2.0 * (loose - tight) + 1e-15 * loose) {
            return sign_of(det);
        }
        const Rational3 qa = diff(j, i);
        const Rational3 qb = diff(k, i);
        return sgn(qa[u] * qb[v] - qa[v] * qb[u]);
    }

    bool collinear(int i, int j, int k) const
    {
        return orient2(i, j, k, 0, 1) == 0 && orient2(i, j, k, 0, 2) == 0 && orient2(i, j, k, 1, 2) == 0;
    }

    Rational3 diff(int a, int b) const
    {
        const Rational3& p = exact_point(a);
        const Rational3& q = exact_point(b);
        return {p[0] - q[0], p[1] - q[1], p[2] - q[2]};
    }

    // Original-coordinate value of a point: the signed sum in double.
    Vector value(int i, const Matrix& original) const
    {
        Vector s = Vector::Zero(original.rows());
        const std::uint64_t mask = masks_[static_cast<std::size_t>(i)];
        for (Eigen::Index k = 0; k < original.cols(); ++k) {
            s += ((mask >> k) & 1U ? 1.0 : -1.0) * original.col(k);
        }
        return s;
    }

private:
    const Vec3& err(int i) const { return err_[static_cast<std::size_t>(i)]; }

    // Within the rounding bounds of each other; exact duplicates always are.
    static bool same(const Vec3& a, const Vec3& b, const Vec3& err)
    {
        return ((a - b).cwiseAbs().array() <= 2.0 * err.array()).all();
    }

    int dim_;
    Matrix g_;
    std::vector<Rational3> gq_;
    std::vector<Vec3> approx_;
    std::vector<Vec3> err_;
    std::vector<std::uint64_t> masks_;
    mutable std::vector<std::optional<Rational3>> exact_;
};

// Exact monotone chain on coordinates (u, v) of the listed points;
// counter-clockwise, collinear points dropped.
std::vector<int> planar_hull(const SignSums& pts, std::vector<int> idx, int u, int v)
{
    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const int cu = pts.compare(a, b, u);
        return cu < 0 || (cu == 0 && pts.compare(a, b, v) < 0);
    });
    if (idx.size() < 3) {
        return idx;
    }
    std::vector<int> hull(2 * idx.size());
    std::size_t k = 0;
    for (int i : idx) {
        while (k >= 2 && pts.orient2(hull[k - 2], hull[k - 1], i, u, v) <= 0) {
            --k;
        }
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (auto it = idx.rbegin() + 1; it != idx.rend(); ++it) {
        while (k >= lower && pts.orient2(hull[k - 2], hull[k - 1], *it, u, v) <= 0) {
            --k;
        }
        hull[k++] = *it;
    }
    hull.resize(k - 1);
    return hull;
}

struct Facet {
    // Counter-clockwise seen from outside.
    std::vector<int> ring;
    Vec3 normal;
    double offset = 0.0;
};

// Gift wrapping with exact orientation tests.
class GiftWrap {
public:
    explicit GiftWrap(SignSums& pts) : pts_(pts), count_(pts.size()) {}

    std::vector<Facet> run()
    {
        const Facet first = initial_facet();
        std::vector<Facet> facets;
        std::set<std::vector<int>> seen;
        std::deque<Facet> queue;
        auto enqueue = [&](Facet f) {
            std::vector<int> key = f.ring;
            std::sort(key.begin(), key.end());
            if (seen.insert(std::move(key)).second) {
                queue.push_back(std::move(f));
            }
        };
        enqueue(first);
        while (!queue.empty()) {
            Facet f = std::move(queue.front());
            queue.pop_front();
            const std::size_t k = f.ring.size();
            for (std::size_t t = 0; t < k; ++t) {
                const int p = f.ring[t];
                const int q = f.ring[(t + 1) % k];
                enqueue(facet_on(q, p, wrap(q, p)));
            }
            facets.push_back(std::move(f));
            if (facets.size() > 4 * static_cast<std::size_t>(count_) + 16) {
                throw Error(ErrorCode::InternalError, "gift wrapping did not close");
            }
        }
        return facets;
    }

private:
    // Point c such that every point x satisfies orient(p, q, c, x) <= 0;
    // (q - p) x (c - p) is then an outward normal.
    int wrap(int p, int q) const
    {
        int c = -1;
        for (int x = 0; x < count_; ++x) {
            if (x == p || x == q || pts_.collinear(p, q, x)) {
                continue;
            }
            if (c < 0 || pts_.orient(p, q, c, x) > 0) {
                c = x;
            }
        }
        if (c < 0) {
            throw Error(ErrorCode::InternalError, "gift wrapping found no pivot point");
        }
        return c;
    }

    Facet facet_on(int p, int q, int c) const
    {
        std::vector<int> on;
        for (int x = 0; x < count_; ++x) {
            if (x == p || x == q || x == c || pts_.orient(p, q, c, x) == 0) {
                on.push_back(x);
            }
        }
        const Rational3 a = pts_.diff(q, p);
        const Rational3 b = pts_.diff(c, p);
        const Rational3 n{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
        int axis = 0;
        for (int t = 1; t < 3; ++t) {
            if (abs(n[t]) > abs(n[axis])) {
                axis = t;
            }
        }
        Facet f;
        f.ring = planar_hull(pts_, on, (axis + 1) % 3, (axis + 2) % 3);
        if (sgn(n[axis]) < 0) {
            std::reverse(f.ring.begin(), f.ring.end());
        }
        f.ring.erase(std::remove_if(f.ring.begin(), f.ring.end(), [&](int i) { return i >= count_; }), f.ring.end());
        f.normal = Vec3(n[0].get_d(), n[1].get_d(), n[2].get_d()).normalized();
        f.offset = -std::numeric_limits<double>::infinity();
        for (int i : f.ring) {
            f.offset = std::max(f.offset, f.normal.dot(pts_.approx(i)));
        }
        return f;
    }

    // The sign pattern of a generic direction picks a vertex a. A line through
    // a inside its supporting plane wraps onto a face; when that face is an
    // edge, wrapping around the edge gives a facet.
    Facet initial_facet()
    {
        const Vec3 dir(0.5772156649015329, 0.3183098861837907, 0.7071067811865476);
        int a = 0;
        for (int i = 1; i < count_; ++i) {
            if (dir.dot(pts_.approx(i)) > dir.dot(pts_.approx(a))) {
                a = i;
            }
        }
        const int v = pts_.add_virtual(a, Vec3(dir[1], -dir[0], 0.0));
        const int c = wrap(a, v);
        std::vector<int> line{a, c};
        for (int x = 0; x < count_; ++x) {
            if (x != a && x != c && pts_.orient(a, v, c, x) == 0) {
                if (!pts_.collinear(a, c, x)) {
                    Facet f = facet_on(a, v, c);
                    if (f.ring.size() >= 3) {
                        return f;
                    }
                }
            }
        }
        return facet_on(a, c, wrap(a, c));
    }

    SignSums& pts_;
    int count_;
};

// Points not expressible as convex combinations of the others.
std::vector<int> lp_extreme_points(const std::vector<Vector>& pts)
{
    std::vector<int> out;
    const int count = static_cast<int>(pts.size());
    const auto dim = pts.empty() ? 0 : pts[0].size();
    lp::SimplexSolver solver;
    for (int i = 0; i < count; ++i) {
        lp::Problem prob;
        prob.A = Matrix::Zero(dim + 1, count - 1);
        prob.b = Vector::Zero(dim + 1);
        prob.b.head(dim) = pts[i];
        prob.b[dim] = 1.0;
        for (int j = 0, c = 0; j < count; ++j) {
            if (j == i) {
                continue;
            }
            prob.A.col(c).head(dim) = pts[j];
            prob.A(dim, c) = 1.0;
            ++c;
        }
        prob.lower = Vector::Zero(count - 1);
        prob.upper = Vector::Constant(count - 1, std::numeric_limits<double>::infinity());
        prob.cost = Vector::Zero(count - 1);
        if (solver.solve(prob).status == lp::Status::Infeasible) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<Vector> distinct(std::vector<Vector> pts)
{
    std::sort(pts.begin(), pts.end(), lex_less);
    double scale = 0.0;
    for (const Vector& p : pts) {
        scale = std::max(scale, p.cwiseAbs().maxCoeff());
    }
    std::vector<Vector> out;
    for (Vector& p : pts) {
        if (out.empty() || (p - out.back()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1.0)) {
            out.push_back(std::move(p));
        }
    }
    return out;
}

// Hull of the signed sums of `g` (at most three rows) in the coordinates
// `rows`, which span injectively. Returns vertex indices and half-spaces in
// those coordinates.
struct LowDimHull {
    std::vector<int> vertices;
    std::vector<Vector> normals;
    std::vector<double> offsets;
};

LowDimHull low_dim_hull(SignSums& pts)
{
    LowDimHull h;
    const int count = pts.size();
    auto add = [&](Vector n, double off) {
        h.normals.push_back(std::move(n));
        h.offsets.push_back(off);
    };
    switch (pts.dim()) {
    case 0:
        h.vertices = {0};
        break;
    case 1: {
        int lo = 0;
        int hi = 0;
        for (int i = 1; i < count; ++i) {
            lo = pts.compare(i, lo, 0) < 0 ? i : lo;
            hi = pts.compare(i, hi, 0) > 0 ? i : hi;
        }
        h.vertices = {lo, hi};
        add(Vector::Constant(1, 1.0), pts.approx(hi)[0]);
        add(Vector::Constant(1, -1.0), -pts.approx(lo)[0]);
        break;
    }
    case 2: {
        std::vector<int> idx(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            idx[static_cast<std::size_t>(i)] = i;
        }
        h.vertices = planar_hull(pts, idx, 0, 1);
        const std::size_t k = h.vertices.size();
        for (std::size_t t = 0; t < k; ++t) {
            const Vec3& p = pts.approx(h.vertices[t]);
            const Vec3& q = pts.approx(h.vertices[(t + 1) % k]);
            Vector n(2);
            n << (q - p).y(), -(q - p).x();
            n.normalize();
            add(n, n[0] * p.x() + n[1] * p.y());
        }
        break;
    }
    default: {
        std::vector<bool> used(static_cast<std::size_t>(count), false);
        for (const Facet& f : GiftWrap(pts).run()) {
            add(Vector(f.normal), f.offset);
            for (int i : f.ring) {
                used[static_cast<std::size_t>(i)] = true;
            }
        }
        for (int i = 0; i < count; ++i) {
            if (used[static_cast<std::size_t>(i)]) {
                h.vertices.push_back(i);
            }
        }
    }
    }
    return h;
}

} // namespace

void OracleConfig::check() const
{
    if (maxSignBits < 1 || maxSignBits > kSignBitsHardCap) {
        throw Error(ErrorCode::InvalidArgument, "maxSignBits must lie in [1, 24]");
    }
    if (mcSamples < kMinMcSamples) {
        throw Error(ErrorCode::InvalidArgument, "mcSamples must be at least 1000");
    }
}

std::vector<Vector> brute_vertices(const Matrix& generators, const OracleConfig& cfg)
{
    std::vector<Vector> out;
    if (generators.rows() <= 3) {
        SignSums pts(generators(exact::spanning_rows(generators), Eigen::all), cfg);
        for (int i : low_dim_hull(pts).vertices) {
            out.push_back(pts.value(i, generators));
        }
    } else {
        cfg.check();
        if (generators.cols() > cfg.maxSignBits) {
            throw Error(ErrorCode::TooManyGenerators, std::to_string(generators.cols())
                                                          + " generators exceed the enumeration cap of "
                                                          + std::to_string(cfg.maxSignBits));
        }
        const Matrix basis = linalg::orthonormal_span(generators);
        const auto m = generators.cols();
        std::vector<Vector> sums;
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
            Vector s = Vector::Zero(generators.rows());
            for (Eigen::Index k = 0; k < m; ++k) {
                s += ((mask >> k) & 1U ? 1.0 : -1.0) * generators.col(k);
            }
            sums.push_back(std::move(s));
        }
        sums = distinct(std::move(sums));
        std::vector<Vector> coords;
        for (const Vector& p : sums) {
            coords.push_back(basis.transpose() * p);
        }
        if (basis.cols() == 0) {
            out.push_back(sums.front());
        } else {
            for (int i : lp_extreme_points(coords)) {
                out.push_back(sums[static_cast<std::size_t>(i)]);
            }
        }
    }
    std::sort(out.begin(), out.end(), lex_less);
    return out;
}

SignSumHull::SignSumHull(const Matrix& generators, const OracleConfig& cfg)
{
    if (generators.rows() > 3) {
        throw Error(ErrorCode::NotImplemented, "hull containment supports at most three coordinates");
    }
    basis_ = linalg::orthonormal_span(generators);
    rows_ = exact::spanning_rows(generators);
    SignSums pts(generators(rows_, Eigen::all), cfg);
    LowDimHull h = low_dim_hull(pts);
    for (int i : h.vertices) {
        vertices_.push_back(pts.value(i, generators));
        scale_ = std::max(scale_, vertices_.back().norm());
    }
    std::sort(vertices_.begin(), vertices_.end(), lex_less);
    normals_ = std::move(h.normals);
    offsets_ = std::move(h.offsets);
}

bool SignSumHull::contains(const Vector& x) const
{
    const double tol = kHullTolerance * std::max({scale_, x.norm(), 1.0});
    if ((x - basis_ * (basis_.transpose() * x)).norm() > tol) {
        return false;
    }
    const Vector y = x(rows_);
    for (std::size_t f = 0; f < normals_.size(); ++f) {
        if (normals_[f].dot(y) > offsets_[f] + tol) {
            return false;
        }
    }
    return true;
}

VolumeEstimate mc_volume(const Matrix& generators, const OracleConfig& cfg)
{
    cfg.check();
    const auto n = generators.rows();
    if (n == 0 || linalg::numeric_rank(generators) < n) {
        throw Error(ErrorCode::DegenerateZonotope, "Monte Carlo volume needs full-rank generators");
    }
    const Vector half = generators.cwiseAbs().rowwise().sum();
    VolumeEstimate est;
    est.samples = cfg.mcSamples;
    est.boxVolume = (2.0 * half).prod();
    lp::BoxMembership box = lp::BoxMembership::unit(generators);
    Vector x(n);
    for (long i = 0; i < cfg.mcSamples; ++i) {
        SplitMix64 rng = SplitMix64::stream(cfg.seed, static_cast<std::uint64_t>(i));
        for (Eigen::Index j = 0; j < n; ++j) {
            x[j] = rng.uniform(-half[j], half[j]);
        }
        if (box.contains(x)) {
            ++est.hits;
        }
    }
    const double rate = static_cast<double>(est.hits) / static_cast<double>(est.samples);
    est.estimate = est.boxVolume * rate;
    est.standardError = est.boxVolume * std::sqrt(rate * (1.0 - rate) / static_cast<double>(est.samples));
    return est;
}

int exhaustive_min_time(const LdtSystem& sys, const Vector& x0, RegionKind kind, int maxSteps,
                        const OracleConfig& cfg)
{
    if (sys.n() > 3) {
        throw Error(ErrorCode::NotImplemented, "exhaustive minimum time supports n <= 3");
    }
    if (x0.size() != sys.n()) {
        throw Error(ErrorCode::DimensionMismatch, "state vector length differs from n");
    }
    if (x0.cwiseAbs().maxCoeff() == 0.0) {
        return 0;
    }
    for (int steps = 1; steps <= maxSteps; ++steps) {
        if (SignSumHull(region_generators(sys, kind, steps), cfg).contains(x0)) {
            return steps;
        }
    }
    throw Error(ErrorCode::NotReachable, "state is outside R(" + std::to_string(maxSteps) + ")");
}

std::vector<Vector> box_polytope_vertices(const Matrix& g, const Vector& x0, const Vector& lower,
                                          const Vector& upper)
{
    const int m = static_cast<int>(g.cols());
    if (g.rows() != x0.size() || lower.size() != m || upper.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "box polytope dimensions disagree");
    }
    const int rho = linalg::numeric_rank(g);
    const double boundTol = 1e-9 * std::max({1.0, lower.cwiseAbs().maxCoeff(), upper.cwiseAbs().maxCoeff()});
    // Rounding bound for x0 - G u, with a wide safety factor; anything larger is
    // a genuine miss even when the region is very thin in some direction.
    const double bmax = std::max({1.0, lower.cwiseAbs().maxCoeff(), upper.cwiseAbs().maxCoeff()});
    const double residualTol
        = 1e-12 * (1.0 + (x0.size() ? x0.cwiseAbs().maxCoeff() : 0.0) + linalg::max_abs(g) * m * bmax);
    std::vector<Vector> out;
    auto try_basis = [&](std::span<const int> basic) {
        std::vector<int> rest;
        std::vector<bool> isBasic(m, false);
        for (int b : basic) {
            isBasic[b] = true;
        }
        for (int k = 0; k < m; ++k) {
            if (!isBasic[k]) {
                rest.push_back(k);
            }
        }
        Matrix gb(g.rows(), static_cast<Eigen::Index>(basic.size()));
        for (std::size_t t = 0; t < basic.size(); ++t) {
            gb.col(static_cast<Eigen::Index>(t)) = g.col(basic[t]);
        }
        if (!basic.empty() && linalg::numeric_rank(gb) < static_cast<int>(basic.size())) {
            return true;
        }
        const auto qr = gb.colPivHouseholderQr();
        // Forward error of the basic values grows with the conditioning of the
        // basis; values that close to a bound are the bound.
        double tol = boundTol;
        if (!basic.empty()) {
            const Vector sv = Eigen::JacobiSVD<Matrix>(gb).singularValues();
            tol = std::max(tol, 64.0 * std::numeric_limits<double>::epsilon() * bmax * sv[0] / sv[sv.size() - 1]);
        }
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << rest.size()); ++mask) {
            Vector u(m);
            for (std::size_t t = 0; t < rest.size(); ++t) {
                u[rest[t]] = ((mask >> t) & 1U) ? upper[rest[t]] : lower[rest[t]];
            }
            Vector rhs = x0;
            for (int k : rest) {
                rhs -= g.col(k) * u[k];
            }
            if (!basic.empty()) {
                const Vector ub = qr.solve(rhs);
                for (std::size_t t = 0; t < basic.size(); ++t) {
                    u[basic[t]] = ub[static_cast<Eigen::Index>(t)];
                }
                rhs = x0 - g * u;
            }
            if (rhs.size() > 0 && rhs.cwiseAbs().maxCoeff() > residualTol) {
                continue;
            }
            bool inside = true;
            for (int k = 0; k < m && inside; ++k) {
                inside = u[k] >= lower[k] - tol && u[k] <= upper[k] + tol;
                if (std::abs(u[k] - lower[k]) <= tol) {
                    u[k] = lower[k];
                } else if (std::abs(u[k] - upper[k]) <= tol) {
                    u[k] = upper[k];
                }
            }
            if (inside) {
                out.push_back(u);
            }
        }
        return true;
    };
    if (rho == 0) {
        try_basis({});
    } else {
        linalg::for_each_combination(m, rho, try_basis);
    }
    return distinct(std::move(out));
}

int affine_hull_dim(const std::vector<Vector>& points)
{
    if (points.empty()) {
        return -1;
    }
    Matrix diffs(points[0].size(), static_cast<Eigen::Index>(points.size()));
    for (std::size_t i = 0; i < points.size(); ++i) {
        diffs.col(static_cast<Eigen::Index>(i)) = points[i] - points[0];
    }
    if (linalg::max_abs(diffs) <= 1e-9) {
        return 0;
    }
    return linalg::numeric_rank(diffs);
}

LdtSystem random_system(SplitMix64& rng, int n, int r, double amplitude)
{
    for (;;) {
        Matrix a(n, n);
        Matrix b(n, r);
        for (auto& v : a.reshaped()) {
            v = rng.uniform(-amplitude, amplitude);
        }
        for (auto& v : b.reshaped()) {
            v = rng.uniform(-amplitude, amplitude);
        }
        const ValidationReport rep = validate(a, b);
        if (!rep.ok() || rep.relativeDeterminant < 1e-3) {
            continue;
        }
        LdtSystem sys("random", a, b);
        if (controllability_report(sys, n).rankPn == n) {
            return sys;
        }
    }
}

LdtSystem random_bounded_system(SplitMix64& rng, int n, int r, RegionKind kind, int horizon, double limit,
                                double amplitude)
{
    for (;;) {
        LdtSystem sys = random_system(rng, n, r, amplitude);
        try {
            if (linalg::max_abs(region_generators(sys, kind, horizon)) <= limit) {
                return sys;
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::UnstableGrowth) {
                throw;
            }
        }
    }
}

Level parse_level(const std::string& text)
{
    if (text == "quick") {
        return Level::Quick;
    }
    if (text == "full") {
        return Level::Full;
    }
    throw Error(ErrorCode::InvalidArgument, "level must be quick or full, got '" + text + "'");
}

bool VerificationReport::passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

} // namespace ctrlgauge::oracle
