#include "ctrlgauge/linalg.hpp"
#include "ctrlgauge/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ctrlgauge {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NonPositiveBound: return "NonPositiveBound";
    case ErrorCode::MissingTarget: return "MissingTarget";
    case ErrorCode::NotImplemented: return "NotImplemented";
    case ErrorCode::ZeroDirection: return "ZeroDirection";
    case ErrorCode::BadAxes: return "BadAxes";
    case ErrorCode::NotConvex: return "NotConvex";
    case ErrorCode::UnstableGrowth: return "UnstableGrowth";
    case ErrorCode::SingularA: return "SingularA";
    case ErrorCode::HorizonTooShort: return "HorizonTooShort";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::IterationLimit: return "IterationLimit";
    case ErrorCode::InternalError: return "InternalError";
    case ErrorCode::NotReachable: return "NotReachable";
    case ErrorCode::NotMember: return "NotMember";
    case ErrorCode::PreconditionNotMet: return "PreconditionNotMet";
    case ErrorCode::TooManyGenerators: return "TooManyGenerators";
    case ErrorCode::DegenerateZonotope: return "DegenerateZonotope";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    }
    return "Unknown";
}

namespace linalg {

bool all_finite(const Matrix& m)
{
    return m.size() == 0 || m.allFinite();
}

int numeric_rank(const Matrix& m, double tol)
{
    if (m.size() == 0 || max_abs(m) == 0.0) {
        return 0;
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    qr.setThreshold(tol);
    return static_cast<int>(qr.rank());
}

Matrix orthonormal_span(const Matrix& m, double tol)
{
    const int rank = numeric_rank(m, tol);
    if (rank == 0) {
        return Matrix(m.rows(), 0);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    qr.setThreshold(tol);
    Matrix q = qr.householderQ();
    return q.leftCols(rank);
}

Matrix orthogonal_complement(const Matrix& m, double tol)
{
    const auto n = m.rows();
    if (m.cols() == 0 || max_abs(m) == 0.0) {
        return Matrix::Identity(n, n);
    }
    Eigen::ColPivHouseholderQR<Matrix> qr(m);
    qr.setThreshold(tol);
    const auto rank = qr.rank();
    Matrix q = qr.householderQ();
    return q.rightCols(n - rank);
}

double max_abs(const Matrix& m)
{
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void for_each_combination(int n, int k, const std::function<bool(std::span<const int>)>& fn)
{
    if (k < 0 || k > n) {
        return;
    }
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::iota(idx.begin(), idx.end(), 0);
    while (true) {
        if (!fn(idx)) {
            return;
        }
        int i = k - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) {
            --i;
        }
        if (i < 0) {
            return;
        }
        ++idx[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) {
            idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
        }
    }
}

Vector jacobi_eigenvalues(const Matrix& sym, double tol, int max_sweeps)
{
    if (sym.rows() != sym.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "Jacobi iteration needs a square matrix");
    }
    Matrix a = 0.5 * (sym + sym.transpose());
    const auto n = a.rows();
    const double scale = std::max(1.0, a.norm());
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                off += a(p, q) * a(p, q);
            }
        }
        if (std::sqrt(off) <= tol * scale) {
            break;
        }
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) {
                    continue;
                }
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0)
                    / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    Vector ev = a.diagonal();
    std::sort(ev.data(), ev.data() + ev.size());
    return ev;
}

} // namespace linalg
} // namespace ctrlgauge
