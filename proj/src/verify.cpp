#include "ctrlgauge/control.hpp"
#include "ctrlgauge/error.hpp"
#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/oracle.hpp"
#include "ctrlgauge/zonotope.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ctrlgauge::oracle {

namespace {

double set_distance(const std::vector<Vector>& a, const std::vector<Vector>& b)
{
    if (a.size() != b.size()) {
        return std::numeric_limits<double>::infinity();
    }
    double worst = 0.0;
    for (const Vector& p : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const Vector& q : b) {
            best = std::min(best, (p - q).cwiseAbs().maxCoeff());
        }
        worst = std::max(worst, best);
    }
    return worst;
}

Vector random_unit_box(SplitMix64& rng, Eigen::Index m)
{
    Vector u(m);
    for (auto& v : u) {
        v = rng.uniform(-1.0, 1.0);
    }
    return u;
}

CheckResult named(std::string name)
{
    CheckResult c;
    c.name = std::move(name);
    return c;
}

void fail(CheckResult& c, const std::string& what)
{
    c.passed = false;
    if (c.detail.empty()) {
        c.detail = what;
    }
}

CheckResult check_vertices(SplitMix64& rng, int cases, int maxSteps)
{
    CheckResult c = named("vertices");
    for (int t = 0; t < cases; ++t) {
        const LdtSystem sys = random_system(rng, rng.integer(2, 3), 1);
        const int steps = rng.integer(1, maxSteps);
        const Zonotope z(region_generators(sys, RegionKind::Reach, steps));
        const std::vector<Vector> main = vertices(z);
        const std::vector<Vector> ref = brute_vertices(z.generators());
        const double d = set_distance(main, ref);
        c.discrepancy = std::max(c.discrepancy, d);
        if (!(d <= 1e-9)) {
            std::ostringstream os;
            os << "case " << t << ": " << main.size() << " vertices vs " << ref.size() << " from sign sums";
            fail(c, os.str());
        }
        ++c.cases;
    }
    return c;
}

CheckResult check_planar_volume(SplitMix64& rng, int cases, double perturb)
{
    CheckResult c = named("planar_volume");
    for (int t = 0; t < cases; ++t) {
        const int n = rng.integer(2, 3);
        const LdtSystem sys = random_system(rng, n, 1);
        const Zonotope z(region_generators(sys, RegionKind::Reach, rng.integer(1, 8)));
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const Matrix g2 = z.generators()(std::vector<int>{i, j}, Eigen::all);
                double expansion = 0.0;
                for (Eigen::Index p = 0; p < g2.cols(); ++p) {
                    for (Eigen::Index q = p + 1; q < g2.cols(); ++q) {
                        expansion += 4.0 * std::abs(g2(0, p) * g2(1, q) - g2(1, p) * g2(0, q));
                    }
                }
                const double area = polygon_area(project_2d(z, i, j)) * perturb;
                const double viaVolume = volume(Zonotope(g2)) * perturb;
                const double d = std::max(std::abs(area - expansion), std::abs(viaVolume - expansion))
                    / std::max(1.0, expansion);
                c.discrepancy = std::max(c.discrepancy, d);
                if (!(d <= 1e-9)) {
                    fail(c, "case " + std::to_string(t) + " axes " + std::to_string(i) + "," + std::to_string(j));
                }
                ++c.cases;
            }
        }
    }
    return c;
}

CheckResult check_mc_volume(SplitMix64& rng, int cases, long samples, double perturb)
{
    CheckResult c = named("mc_volume");
    for (int t = 0; t < cases; ++t) {
        const int n = rng.integer(2, 3);
        const LdtSystem sys = random_system(rng, n, 1);
        const Zonotope z(region_generators(sys, RegionKind::Reach, rng.integer(n, n + 2)));
        OracleConfig cfg;
        cfg.mcSamples = samples;
        cfg.seed = rng.next();
        const VolumeEstimate est = mc_volume(z.generators(), cfg);
        const double sigmas = std::abs(volume(z) * perturb - est.estimate) / est.standardError;
        c.discrepancy = std::max(c.discrepancy, sigmas);
        if (!(sigmas <= 3.0)) {
            fail(c, "case " + std::to_string(t) + " is " + std::to_string(sigmas) + " standard errors off");
        }
        ++c.cases;
    }
    return c;
}

CheckResult check_min_time(SplitMix64& rng, int cases)
{
    CheckResult c = named("min_time");
    for (int t = 0; t < cases; ++t) {
        const RegionKind kind = t % 2 == 0 ? RegionKind::Reach : RegionKind::Recover;
        const LdtSystem sys = random_bounded_system(rng, 2, 1, kind, 8);
        const int steps = rng.integer(1, 6);
        const Matrix g = steering_matrix(sys, kind, steps);
        const Vector x0 = g * random_unit_box(rng, g.cols());
        const ControlSolution sol = min_time(sys, x0, kind, 8);
        const int ref = exhaustive_min_time(sys, x0, kind, 8);
        const Trajectory tr = simulate(sys, x0, sol.inputs, kind);
        c.discrepancy = std::max({c.discrepancy, static_cast<double>(std::abs(sol.minSteps - ref)), tr.terminalError});
        if (sol.minSteps != ref || tr.terminalError > 1e-6 || !tr.inputsWithinBounds) {
            fail(c, "case " + std::to_string(t) + ": " + std::to_string(sol.minSteps) + " vs "
                        + std::to_string(ref));
        }
        ++c.cases;
    }
    return c;
}

CheckResult check_lp(SplitMix64& rng, int cases)
{
    CheckResult c = named("lp");
    for (int t = 0; t < cases; ++t) {
        const int rows = rng.integer(1, 3);
        const int m = rng.integer(1, 8);
        Matrix g(rows, m);
        for (auto& v : g.reshaped()) {
            v = rng.uniform(-2.0, 2.0);
        }
        if (rows > 1 && t % 7 == 0) {
            g.row(rows - 1) = g.row(0);
        }
        Vector lower(m);
        Vector upper(m);
        for (int k = 0; k < m; ++k) {
            lower[k] = rng.uniform(-2.0, 0.0);
            upper[k] = lower[k] + rng.uniform(0.1, 2.0);
        }
        Vector x0(rows);
        if (t % 2 == 0) {
            Vector u(m);
            for (int k = 0; k < m; ++k) {
                u[k] = rng.uniform(lower[k], upper[k]);
            }
            x0 = g * u;
        } else {
            for (auto& v : x0) {
                v = rng.uniform(-4.0, 4.0);
            }
        }
        lp::BoxLp box{g, x0, lower, upper, std::nullopt};
        const std::vector<Vector> verts = box_polytope_vertices(g, x0, lower, upper);
        const lp::FeasibilityResult fr = lp::feasible(box);
        ++c.cases;
        if (fr.feasible != !verts.empty()) {
            fail(c, "case " + std::to_string(t) + ": feasibility verdict differs");
            continue;
        }
        if (!fr.feasible) {
            continue;
        }
        const double residual = (g * *fr.witness - x0).cwiseAbs().maxCoeff();
        c.discrepancy = std::max(c.discrepancy, residual);
        if (residual > 1e-7) {
            fail(c, "case " + std::to_string(t) + ": witness residual " + std::to_string(residual));
        }
        Vector w(m);
        for (auto& v : w) {
            v = rng.uniform(-1.0, 1.0);
        }
        box.objective = w;
        const double best = lp::optimize(box).value;
        double ref = -std::numeric_limits<double>::infinity();
        for (const Vector& v : verts) {
            ref = std::max(ref, w.dot(v));
        }
        const double d = std::abs(best - ref) / std::max(1.0, std::abs(ref));
        c.discrepancy = std::max(c.discrepancy, d);
        if (d > 1e-7) {
            fail(c, "case " + std::to_string(t) + ": optimum differs by " + std::to_string(d));
        }
    }
    return c;
}

CheckResult check_strategy_dim(SplitMix64& rng, int cases)
{
    CheckResult c = named("strategy_dim");
    for (int t = 0; t < cases; ++t) {
        const RegionKind kind = t % 2 == 0 ? RegionKind::Reach : RegionKind::Recover;
        const LdtSystem sys = random_bounded_system(rng, 2, 1, kind, 8);
        const int horizon = rng.integer(2, 8);
        const Matrix g = steering_matrix(sys, kind, horizon);
        Vector u = random_unit_box(rng, g.cols());
        if (t % 3 == 0) {
            // Push the state onto the boundary of R(horizon) to exercise pinned inputs.
            const Vector d = random_unit_box(rng, 2);
            for (Eigen::Index k = 0; k < u.size(); ++k) {
                u[k] = d.dot(g.col(k)) >= 0 ? 1.0 : -1.0;
            }
        }
        const Vector x0 = g * u;
        const int main = strategy_space_dim(sys, x0, horizon, kind);
        const int ref = affine_hull_dim(box_polytope_vertices(g, x0, -Vector::Ones(g.cols()), Vector::Ones(g.cols())));
        c.discrepancy = std::max(c.discrepancy, static_cast<double>(std::abs(main - ref)));
        if (main != ref) {
            fail(c, "case " + std::to_string(t) + ": " + std::to_string(main) + " vs " + std::to_string(ref));
        }
        ++c.cases;
    }
    return c;
}

} // namespace

VerificationReport run_verification(std::uint64_t seed, Level level, const std::string& fault)
{
    if (!fault.empty() && fault != "volume") {
        throw Error(ErrorCode::InvalidArgument, "unknown fault '" + fault + "'");
    }
    const double perturb = fault == "volume" ? 1.0 + 1e-3 : 1.0;
    const bool full = level == Level::Full;
    VerificationReport rep;
    rep.seed = seed;
    rep.level = level;
    SplitMix64 rng(seed);
    auto guarded = [&](const std::string& name, auto&& run) {
        try {
            rep.checks.push_back(run());
        } catch (const std::exception& e) {
            CheckResult c = named(name);
            fail(c, e.what());
            rep.checks.push_back(c);
        }
    };
    guarded("vertices", [&] { return check_vertices(rng, full ? 200 : 20, full ? 12 : 8); });
    guarded("planar_volume", [&] { return check_planar_volume(rng, full ? 100 : 20, perturb); });
    if (full || !fault.empty()) {
        guarded("mc_volume", [&] { return check_mc_volume(rng, full ? 5 : 2, full ? 200'000 : 20'000, perturb); });
    }
    guarded("min_time", [&] { return check_min_time(rng, full ? 50 : 10); });
    guarded("lp", [&] { return check_lp(rng, full ? 500 : 50); });
    guarded("strategy_dim", [&] { return check_strategy_dim(rng, full ? 40 : 10); });
    return rep;
}

} // namespace ctrlgauge::oracle
