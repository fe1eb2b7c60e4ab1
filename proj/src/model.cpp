#include "ctrlgauge/model.hpp"
#include "ctrlgauge/error.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace ctrlgauge {

namespace {

void check_bounds(const Vector& v, Eigen::Index expected, const char* what)
{
    if (v.size() != expected) {
        std::ostringstream os;
        os << what << " has length " << v.size() << ", expected " << expected;
        throw Error(ErrorCode::DimensionMismatch, os.str());
    }
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i]) || v[i] <= 0.0) {
            std::ostringstream os;
            os << what << "[" << i << "] = " << v[i] << " must be positive and finite";
            throw Error(ErrorCode::NonPositiveBound, os.str());
        }
    }
}

} // namespace

LdtSystem::LdtSystem(std::string name, Matrix a, Matrix b)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b))
{
    if (a_.rows() < 1 || a_.rows() != a_.cols()) {
        throw Error(ErrorCode::DimensionMismatch, "state matrix must be square with n >= 1");
    }
    if (b_.cols() < 1 || b_.rows() != a_.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "input matrix must be n x r with r >= 1");
    }
    if (!linalg::all_finite(a_) || !linalg::all_finite(b_)) {
        throw Error(ErrorCode::NonFinite, "system matrices contain NaN or Inf");
    }
}

NormalizationSpec NormalizationSpec::identity(int n, int r)
{
    return {Vector::Ones(r), Vector::Ones(n), std::nullopt};
}

void require_supported(const ConstraintSpec& constraint)
{
    if (!(constraint.bound > 0.0) || !std::isfinite(constraint.bound)) {
        throw Error(ErrorCode::NonPositiveBound, "constraint bound must be positive and finite");
    }
    switch (constraint.kind) {
    case ConstraintKind::UnitAmplitude:
        return;
    case ConstraintKind::UnitTotalFuel:
        throw Error(ErrorCode::NotImplemented, "total-fuel constrained regions are not implemented");
    case ConstraintKind::UnitTotalEnergy:
        throw Error(ErrorCode::NotImplemented, "total-energy constrained regions are not implemented");
    }
}

ValidationReport validate(const Matrix& a, const Matrix& b)
{
    ValidationReport rep;
    rep.finite = linalg::all_finite(a) && linalg::all_finite(b);
    rep.square = a.rows() >= 1 && a.rows() == a.cols();
    rep.shapesAgree = rep.square && b.rows() == a.rows() && b.cols() >= 1;
    if (!rep.finite) {
        rep.findings.emplace_back("non-finite entries");
    }
    if (!rep.square) {
        rep.findings.emplace_back("state matrix is not square");
    }
    if (rep.square && !rep.shapesAgree) {
        rep.findings.emplace_back("input matrix row count differs from state dimension");
    }
    if (!rep.square || !rep.finite) {
        rep.conditionEstimate = std::numeric_limits<double>::infinity();
        return rep;
    }

    rep.determinant = a.determinant();
    double rowNormProduct = 1.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        rowNormProduct *= a.row(i).norm();
    }
    rep.relativeDeterminant = rowNormProduct > 0.0 ? std::abs(rep.determinant) / rowNormProduct : 0.0;
    rep.invertible = rep.relativeDeterminant >= kSingularThreshold;

    Eigen::JacobiSVD<Matrix> svd(a);
    const Vector& sv = svd.singularValues();
    const double smin = sv[sv.size() - 1];
    rep.conditionEstimate = smin > 0.0 ? sv[0] / smin : std::numeric_limits<double>::infinity();
    if (!rep.invertible) {
        rep.findings.emplace_back("state matrix is singular; recover regions are undefined");
    }
    return rep;
}

ValidationReport validate(const LdtSystem& sys)
{
    return validate(sys.A(), sys.B());
}

Matrix inverse_state_matrix(const LdtSystem& sys)
{
    if (!validate(sys).invertible) {
        throw Error(ErrorCode::SingularA, "state matrix of '" + sys.name() + "' is singular");
    }
    return sys.A().partialPivLu().inverse();
}

LdtSystem normalize_input_only(const LdtSystem& sys, const Vector& inputRated)
{
    check_bounds(inputRated, sys.r(), "inputRated");
    return LdtSystem(sys.name(), sys.A(), sys.B() * inputRated.asDiagonal());
}

LdtSystem normalize_full(const LdtSystem& sys, const NormalizationSpec& spec, bool useTarget)
{
    check_bounds(spec.inputRated, sys.r(), "inputRated");
    check_bounds(spec.stateRated, sys.n(), "stateRated");
    if (spec.stateTarget) {
        check_bounds(*spec.stateTarget, sys.n(), "stateTarget");
    }
    if (useTarget && !spec.stateTarget) {
        throw Error(ErrorCode::MissingTarget, "target normalization requested without target bounds");
    }
    const Vector& p = useTarget ? *spec.stateTarget : spec.stateRated;
    const Vector pinv = p.cwiseInverse();
    Matrix a = pinv.asDiagonal() * sys.A() * p.asDiagonal();
    Matrix b = pinv.asDiagonal() * sys.B() * spec.inputRated.asDiagonal();
    return LdtSystem(sys.name(), std::move(a), std::move(b));
}

} // namespace ctrlgauge
