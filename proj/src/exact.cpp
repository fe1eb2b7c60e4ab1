#include "exact.hpp"

#include <algorithm>
#include <cmath>

namespace ctrlgauge::exact {

namespace {

int sign_of(const mpq_class& q)
{
    return sgn(q);
}

int sign_of(double v)
{
    return (v > 0.0) - (v < 0.0);
}

mpq_class det3(const Rational3& a, const Rational3& b, const Rational3& c)
{
    return a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0]);
}

std::vector<std::vector<mpq_class>> rational_rows(const Matrix& m)
{
    std::vector<std::vector<mpq_class>> rows(static_cast<std::size_t>(m.rows()));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            rows[static_cast<std::size_t>(i)].emplace_back(m(i, j));
        }
    }
    return rows;
}

// Row echelon elimination; returns the indices of the original rows that
// produced pivots.
std::vector<int> pivot_rows(const Matrix& m)
{
    auto rows = rational_rows(m);
    std::vector<int> origin(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        origin[i] = static_cast<int>(i);
    }
    std::vector<int> picked;
    std::size_t top = 0;
    for (Eigen::Index col = 0; col < m.cols() && top < rows.size(); ++col) {
        std::size_t piv = top;
        while (piv < rows.size() && sgn(rows[piv][static_cast<std::size_t>(col)]) == 0) {
            ++piv;
        }
        if (piv == rows.size()) {
            continue;
        }
        std::swap(rows[top], rows[piv]);
        std::swap(origin[top], origin[piv]);
        for (std::size_t i = top + 1; i < rows.size(); ++i) {
            if (sgn(rows[i][static_cast<std::size_t>(col)]) == 0) {
                continue;
            }
            const mpq_class f = rows[i][static_cast<std::size_t>(col)] / rows[top][static_cast<std::size_t>(col)];
            for (std::size_t j = static_cast<std::size_t>(col); j < rows[i].size(); ++j) {
                rows[i][j] -= f * rows[top][j];
            }
        }
        picked.push_back(origin[top]);
        ++top;
    }
    return picked;
}

} // namespace

int sign_det2(double a, double b, double c, double d)
{
    const double ad = a * d;
    const double bc = b * c;
    const double det = ad - bc;
    const double bound = 1e-15 * (std::abs(ad) + std::abs(bc));
    if (std::abs(det) > bound) {
        return sign_of(det);
    }
    return sign_of(mpq_class(a) * mpq_class(d) - mpq_class(b) * mpq_class(c));
}

int sign_det3(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c)
{
    const double det = a.dot(b.cross(c));
    const Eigen::Vector3d aa = a.cwiseAbs();
    const Eigen::Vector3d ba = b.cwiseAbs();
    const Eigen::Vector3d ca = c.cwiseAbs();
    const double permanent = aa[0] * (ba[1] * ca[2] + ba[2] * ca[1]) + aa[1] * (ba[0] * ca[2] + ba[2] * ca[0])
        + aa[2] * (ba[0] * ca[1] + ba[1] * ca[0]);
    if (std::abs(det) > 1e-14 * permanent) {
        return sign_of(det);
    }
    return sign_of(det3(to_rational(a), to_rational(b), to_rational(c)));
}

int sign_det3(const Rational3& a, const Rational3& b, const Rational3& c)
{
    return sign_of(det3(a, b, c));
}

int rank(const Matrix& m)
{
    return static_cast<int>(pivot_rows(m.transpose()).size());
}

std::vector<int> spanning_rows(const Matrix& m)
{
    std::vector<int> rows = pivot_rows(m);
    std::sort(rows.begin(), rows.end());
    return rows;
}

Rational3 to_rational(const Eigen::Vector3d& v)
{
    return {mpq_class(v[0]), mpq_class(v[1]), mpq_class(v[2])};
}

} // namespace ctrlgauge::exact
