#pragma once

#include "ctrlgauge/error.hpp"
#include "ctrlgauge/model.hpp"
#include "ctrlgauge/rng.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <vector>

namespace fixtures {

using ctrlgauge::LdtSystem;
using ctrlgauge::Matrix;
using ctrlgauge::NormalizationSpec;
using ctrlgauge::Vector;

inline Matrix mat(std::initializer_list<std::initializer_list<double>> rows)
{
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& row : rows) {
        Eigen::Index j = 0;
        for (double v : row) {
            m(i, j++) = v;
        }
        ++i;
    }
    return m;
}

inline Vector vec(std::initializer_list<double> values)
{
    Vector v(static_cast<Eigen::Index>(values.size()));
    std::copy(values.begin(), values.end(), v.begin());
    return v;
}

inline LdtSystem dc_motor()
{
    return {"DC motor", mat({{0, 1, 0}, {0, 0, 1}, {0.69527, -2.3565, 2.660}}), mat({{0}, {0}, {8.74}})};
}

inline LdtSystem ac_motor()
{
    return {"AC motor", mat({{0, 1, 0}, {0, 0, 1}, {0.65711, -2.2691, 2.610}}), mat({{0}, {0}, {19.17}})};
}

inline NormalizationSpec dc_bounds()
{
    return {vec({24}), vec({30, 200, 30}), vec({30, 180, 30})};
}

inline NormalizationSpec ac_bounds()
{
    return {vec({12}), vec({30, 230, 35}), vec({30, 180, 30})};
}

// Planar pair whose regions are drawn nested for two and six steps.
inline LdtSystem planar_pair()
{
    return {"planar pair", mat({{1.1616, -0.5051}, {-0.0505, 1.6162}}), mat({{1.8182}, {-0.8182}})};
}

inline LdtSystem scalar_chain(double b = 1.0, double a = 1.0)
{
    return {"scalar chain", mat({{a}}), mat({{b}})};
}

// Largest distance from a point of one set to the nearest point of the other;
// infinity when the sizes differ.
inline double set_distance(const std::vector<Vector>& a, const std::vector<Vector>& b)
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

inline Vector unit_box(ctrlgauge::SplitMix64& rng, Eigen::Index m)
{
    Vector u(m);
    for (auto& v : u) {
        v = rng.uniform(-1.0, 1.0);
    }
    return u;
}

// Error code raised by `fn`, or nothing when it returns normally.
template <class Fn>
std::optional<ctrlgauge::ErrorCode> error_code(Fn&& fn)
{
    try {
        fn();
    } catch (const ctrlgauge::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace fixtures
