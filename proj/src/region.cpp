#include "ctrlgauge/region.hpp"
#include "ctrlgauge/error.hpp"

#include <string>

namespace ctrlgauge {

std::string_view to_string(RegionKind kind)
{
    return kind == RegionKind::Reach ? "reach" : "recover";
}

RegionKind parse_region_kind(std::string_view text)
{
    if (text == "reach") {
        return RegionKind::Reach;
    }
    if (text == "recover") {
        return RegionKind::Recover;
    }
    throw Error(ErrorCode::InvalidArgument, "region kind must be 'reach' or 'recover', got '" + std::string(text) + "'");
}

Matrix region_generators(const LdtSystem& sys, RegionKind kind, int steps, const ConstraintSpec& constraint)
{
    require_supported(constraint);
    if (steps < 1) {
        throw Error(ErrorCode::InvalidArgument, "region horizon must be at least one step");
    }
    const int n = sys.n();
    const int r = sys.r();
    const Matrix step = kind == RegionKind::Reach ? sys.A() : inverse_state_matrix(sys);
    Matrix block = kind == RegionKind::Reach ? sys.B() : Matrix(step * sys.B());
    block *= constraint.bound;

    Matrix g(n, steps * r);
    for (int i = 0; i < steps; ++i) {
        if (linalg::max_abs(block) > kGrowthLimit || !block.allFinite()) {
            throw Error(ErrorCode::UnstableGrowth,
                        "generator block " + std::to_string(i) + " exceeds the growth limit");
        }
        g.middleCols(static_cast<Eigen::Index>(i) * r, r) = block;
        block = step * block;
    }
    return g;
}

const Zonotope& RegionFamily::stage(int k) const
{
    if (k < 1 || k > horizon) {
        throw Error(ErrorCode::BadRange, "stage index outside 1..horizon");
    }
    return stages[static_cast<std::size_t>(k - 1)];
}

RegionFamily build_region(const LdtSystem& sys, RegionKind kind, int steps, const ConstraintSpec& constraint)
{
    const Matrix g = region_generators(sys, kind, steps, constraint);
    RegionFamily fam{sys, kind, steps, {}};
    fam.stages.reserve(static_cast<std::size_t>(steps));
    for (int k = 1; k <= steps; ++k) {
        fam.stages.emplace_back(g.leftCols(static_cast<Eigen::Index>(k) * sys.r()));
    }
    return fam;
}

RegionFamily reach_region(const LdtSystem& sys, int steps, const ConstraintSpec& constraint)
{
    return build_region(sys, RegionKind::Reach, steps, constraint);
}

RegionFamily recover_region(const LdtSystem& sys, int steps, const ConstraintSpec& constraint)
{
    return build_region(sys, RegionKind::Recover, steps, constraint);
}

ControllabilityReport controllability_report(const LdtSystem& sys, int steps)
{
    if (steps < sys.n()) {
        throw Error(ErrorCode::HorizonTooShort, "controllability needs N >= n");
    }
    const Matrix pn = region_generators(sys, RegionKind::Reach, steps);
    ControllabilityReport rep;
    rep.rankPn = linalg::numeric_rank(pn);
    rep.nc = rep.rankPn;
    rep.controllable = rep.rankPn == sys.n();
    const Matrix grammian = pn * pn.transpose();
    rep.grammianMinEigen = std::max(0.0, linalg::jacobi_eigenvalues(grammian)[0]);
    return rep;
}

ExpansionResult expansion_check(const RegionFamily& family, int n1, int n2)
{
    if (n1 < 1 || n1 >= n2 || n2 > family.horizon) {
        throw Error(ErrorCode::BadRange, "expansion check needs 1 <= N1 < N2 <= horizon");
    }
    const int r = family.system.r();
    const Matrix& all = family.stage(n2).generators();
    const Matrix added = all.middleCols(static_cast<Eigen::Index>(n1) * r, static_cast<Eigen::Index>(n2 - n1) * r);
    // With A invertible the added block is A^{+-N1} times the first N2-N1 stages,
    // whose rank is measured without the large power in front.
    const bool invertible = validate(family.system).invertible;
    Matrix shift;
    Matrix low;
    if (invertible) {
        const Matrix step = family.kind == RegionKind::Reach ? family.system.A() : inverse_state_matrix(family.system);
        shift = Matrix::Identity(family.system.n(), family.system.n());
        for (int k = 0; k < n1; ++k) {
            shift = step * shift;
        }
        low = family.stage(n2 - n1).generators();
    }
    ExpansionResult res;
    res.addedRank = linalg::numeric_rank(invertible ? low : added);
    if (res.addedRank == family.system.n()) {
        res.verdict = ExpansionVerdict::StrictlyExpanding;
        return res;
    }
    res.verdict = ExpansionVerdict::WeaklyExpanding;
    Vector d;
    if (invertible) {
        d = shift.transpose().fullPivLu().solve(Vector(linalg::orthogonal_complement(low).col(0)));
        d.normalize();
    } else {
        d = linalg::orthogonal_complement(added).col(0);
    }
    const Matrix& inner = family.stage(n1).generators();
    Vector contact = Vector::Zero(inner.rows());
    for (Eigen::Index k = 0; k < inner.cols(); ++k) {
        contact += (d.dot(inner.col(k)) >= 0.0 ? 1.0 : -1.0) * inner.col(k);
    }
    res.contactDirection = d;
    res.contactPoint = contact;
    res.contactGap = (added.transpose() * d).cwiseAbs().sum();
    return res;
}

} // namespace ctrlgauge
