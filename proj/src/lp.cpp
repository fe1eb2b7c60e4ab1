#include "ctrlgauge/lp.hpp"
#include "ctrlgauge/error.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

namespace ctrlgauge::lp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double problem_scale(const Matrix& a, const Vector& b)
{
    double s = std::max(1.0, linalg::max_abs(a));
    if (b.size() > 0) {
        s = std::max(s, b.cwiseAbs().maxCoeff());
    }
    return s;
}

void check_problem(const Problem& p)
{
    const auto m = p.A.cols();
    if (p.b.size() != p.A.rows() || p.lower.size() != m || p.upper.size() != m || p.cost.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "LP data sizes are inconsistent");
    }
    if (!linalg::all_finite(p.A) || !linalg::all_finite(p.b) || !linalg::all_finite(p.cost)) {
        throw Error(ErrorCode::NonFinite, "LP data contains NaN or Inf");
    }
    for (Eigen::Index j = 0; j < m; ++j) {
        if (std::isnan(p.lower[j]) || std::isnan(p.upper[j]) || p.lower[j] > p.upper[j]) {
            throw Error(ErrorCode::InvalidArgument, "LP bounds must satisfy lower <= upper");
        }
        if (!std::isfinite(p.lower[j]) && !std::isfinite(p.upper[j])) {
            throw Error(ErrorCode::InvalidArgument, "free LP variables are not supported");
        }
    }
}

void check_box(const BoxLp& lp)
{
    const auto m = lp.G.cols();
    if (lp.x0.size() != lp.G.rows() || lp.lower.size() != m || lp.upper.size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "box LP sizes are inconsistent");
    }
    if (lp.objective && lp.objective->size() != m) {
        throw Error(ErrorCode::DimensionMismatch, "objective length differs from column count");
    }
    if (!linalg::all_finite(lp.G) || !linalg::all_finite(lp.x0) || !linalg::all_finite(lp.lower)
        || !linalg::all_finite(lp.upper)) {
        throw Error(ErrorCode::NonFinite, "box LP data must be finite");
    }
    if ((lp.lower.array() > lp.upper.array()).any()) {
        throw Error(ErrorCode::InvalidArgument, "box LP needs lower <= upper");
    }
}

// Post-hoc witness check; the solver never hands back an unverified point.
void verify_witness(const Matrix& g, const Vector& x0, const Vector& lower, const Vector& upper,
                    const Vector& u, double boundSlack = kFeasibilityTolerance)
{
    const double scale = problem_scale(g, x0);
    double residual = 0.0;
    if (x0.size() > 0) {
        residual = g.cols() == 0 ? x0.cwiseAbs().maxCoeff() : (g * u - x0).cwiseAbs().maxCoeff();
    }
    if (x0.size() > 0 && residual > kResidualTolerance * scale) {
        std::ostringstream os;
        os << "witness residual " << residual << " exceeds " << kResidualTolerance * scale;
        throw Error(ErrorCode::InternalError, os.str());
    }
    for (Eigen::Index j = 0; j < u.size(); ++j) {
        if (u[j] < lower[j] - boundSlack || u[j] > upper[j] + boundSlack) {
            std::ostringstream os;
            os << "witness coordinate " << j << " = " << u[j] << " violates its bounds";
            throw Error(ErrorCode::InternalError, os.str());
        }
    }
}

Vector clamp_to(const Vector& u, const Vector& lower, const Vector& upper)
{
    return u.cwiseMax(lower).cwiseMin(upper);
}

} // namespace

Solution SimplexSolver::solve(const Problem& problem)
{
    check_problem(problem);
    rows_ = static_cast<int>(problem.A.rows());
    structural_ = static_cast<int>(problem.A.cols());
    cols_ = structural_ + rows_;

    tableau_.assign(static_cast<std::size_t>(rows_) * cols_, 0.0);
    x_.assign(cols_, 0.0);
    lo_.assign(cols_, 0.0);
    hi_.assign(cols_, kInf);
    sign_.assign(rows_, 1.0);
    basis_.assign(rows_, 0);
    state_.assign(cols_, VarState::AtLower);
    reduced_.assign(cols_, 0.0);

    for (int j = 0; j < structural_; ++j) {
        lo_[j] = problem.lower[j];
        hi_[j] = problem.upper[j];
        if (std::isfinite(lo_[j])) {
            x_[j] = lo_[j];
            state_[j] = VarState::AtLower;
        } else {
            x_[j] = hi_[j];
            state_[j] = VarState::AtUpper;
        }
    }
    for (int i = 0; i < rows_; ++i) {
        double residual = problem.b[i];
        for (int j = 0; j < structural_; ++j) {
            residual -= problem.A(i, j) * x_[j];
        }
        sign_[i] = residual >= 0.0 ? 1.0 : -1.0;
        double* row = &tableau_[static_cast<std::size_t>(i) * cols_];
        for (int j = 0; j < structural_; ++j) {
            row[j] = sign_[i] * problem.A(i, j);
        }
        row[structural_ + i] = 1.0;
        basis_[i] = structural_ + i;
        state_[structural_ + i] = VarState::Basic;
        x_[structural_ + i] = std::abs(residual);
    }

    const int maxIterations = options_.maxIterations > 0 ? options_.maxIterations : 100 * (cols_ + rows_) + 1000;
    int iterations = 0;

    std::vector<double> phase1(cols_, 0.0);
    std::fill(phase1.begin() + structural_, phase1.end(), 1.0);
    iterate(phase1, 1, iterations, maxIterations);

    Solution sol;
    double infeasibility = 0.0;
    for (int i = 0; i < rows_; ++i) {
        if (basis_[i] >= structural_) {
            infeasibility += std::abs(x_[basis_[i]]);
        }
    }
    const double scale = problem_scale(problem.A, problem.b);
    if (infeasibility > kFeasibilityTolerance * scale) {
        sol.status = Status::Infeasible;
        sol.farkas = Vector::Zero(rows_);
        for (int i = 0; i < rows_; ++i) {
            double y = 0.0;
            for (int k = 0; k < rows_; ++k) {
                y += phase1[basis_[k]] * tableau_[static_cast<std::size_t>(k) * cols_ + structural_ + i];
            }
            sol.farkas[i] = y * sign_[i];
        }
        sol.iterations = iterations;
        sol.objective = infeasibility;
        return sol;
    }

    // Artificials are pinned at zero for phase 2.
    for (int i = 0; i < rows_; ++i) {
        const int a = structural_ + i;
        hi_[a] = 0.0;
        if (state_[a] != VarState::Basic) {
            x_[a] = 0.0;
            state_[a] = VarState::AtLower;
        }
    }
    std::vector<double> phase2(cols_, 0.0);
    for (int j = 0; j < structural_; ++j) {
        phase2[j] = problem.cost[j];
    }
    if (!iterate(phase2, 2, iterations, maxIterations)) {
        sol.status = Status::Unbounded;
        sol.iterations = iterations;
        return sol;
    }
    refine(problem);

    sol.status = Status::Optimal;
    sol.iterations = iterations;
    sol.x = Vector(structural_);
    for (int j = 0; j < structural_; ++j) {
        sol.x[j] = x_[j];
    }
    sol.objective = problem.cost.dot(sol.x);
    return sol;
}

bool SimplexSolver::iterate(const std::vector<double>& cost, int phase, int& iterations, int maxIterations)
{
    while (true) {
        if (iterations >= maxIterations) {
            throw Error(ErrorCode::IterationLimit, "simplex pivot budget exhausted");
        }
        // Reduced costs; Bland's rule takes the lowest eligible index.
        int entering = -1;
        for (int j = 0; j < cols_ && entering < 0; ++j) {
            if (state_[j] == VarState::Basic || hi_[j] <= lo_[j]) {
                continue;
            }
            double d = cost[j];
            for (int i = 0; i < rows_; ++i) {
                d -= cost[basis_[i]] * tableau_[static_cast<std::size_t>(i) * cols_ + j];
            }
            reduced_[j] = d;
            if ((state_[j] == VarState::AtLower && d < -kOptimalityTolerance)
                || (state_[j] == VarState::AtUpper && d > kOptimalityTolerance)) {
                entering = j;
            }
        }
        if (entering < 0) {
            return true;
        }

        const double dir = state_[entering] == VarState::AtLower ? 1.0 : -1.0;
        double step = hi_[entering] - lo_[entering];
        int leavingRow = -1;
        int leavingVar = cols_;
        for (int i = 0; i < rows_; ++i) {
            const double t = tableau_[static_cast<std::size_t>(i) * cols_ + entering];
            if (std::abs(t) <= kPivotTolerance) {
                continue;
            }
            const double alpha = dir * t;
            const int b = basis_[i];
            double limit = kInf;
            if (alpha > 0.0 && std::isfinite(lo_[b])) {
                limit = (x_[b] - lo_[b]) / alpha;
            } else if (alpha < 0.0 && std::isfinite(hi_[b])) {
                limit = (hi_[b] - x_[b]) / -alpha;
            }
            limit = std::max(limit, 0.0);
            if (limit < step || (limit == step && leavingRow >= 0 && b < leavingVar)) {
                step = limit;
                leavingRow = i;
                leavingVar = b;
            }
        }
        if (!std::isfinite(step)) {
            return false;
        }

        if (options_.trace) {
            dump(phase, iterations, entering, leavingRow, step);
        }

        x_[entering] += dir * step;
        for (int i = 0; i < rows_; ++i) {
            x_[basis_[i]] -= dir * step * tableau_[static_cast<std::size_t>(i) * cols_ + entering];
        }
        if (leavingRow < 0) {
            if (state_[entering] == VarState::AtLower) {
                state_[entering] = VarState::AtUpper;
                x_[entering] = hi_[entering];
            } else {
                state_[entering] = VarState::AtLower;
                x_[entering] = lo_[entering];
            }
        } else {
            const int leaving = basis_[leavingRow];
            const double alpha = dir * tableau_[static_cast<std::size_t>(leavingRow) * cols_ + entering];
            if (alpha > 0.0) {
                state_[leaving] = VarState::AtLower;
                x_[leaving] = lo_[leaving];
            } else {
                state_[leaving] = VarState::AtUpper;
                x_[leaving] = hi_[leaving];
            }
            state_[entering] = VarState::Basic;
            basis_[leavingRow] = entering;
            pivot(leavingRow, entering);
        }
        ++iterations;
    }
}

void SimplexSolver::pivot(int row, int col)
{
    double* pr = &tableau_[static_cast<std::size_t>(row) * cols_];
    const double inv = 1.0 / pr[col];
    for (int j = 0; j < cols_; ++j) {
        pr[j] *= inv;
    }
    pr[col] = 1.0;
    for (int i = 0; i < rows_; ++i) {
        if (i == row) {
            continue;
        }
        double* ri = &tableau_[static_cast<std::size_t>(i) * cols_];
        const double f = ri[col];
        if (f == 0.0) {
            continue;
        }
        for (int j = 0; j < cols_; ++j) {
            ri[j] -= f * pr[j];
        }
        ri[col] = 0.0;
    }
}

// Recomputes basic values from the original data to shed accumulated
// tableau round-off.
void SimplexSolver::refine(const Problem& problem)
{
    if (rows_ == 0) {
        return;
    }
    Matrix basisMatrix(rows_, rows_);
    Vector rhs = problem.b;
    auto column = [&](int var, Eigen::Index i) {
        if (var < structural_) {
            return problem.A(i, var);
        }
        return var - structural_ == i ? sign_[static_cast<std::size_t>(i)] : 0.0;
    };
    for (int k = 0; k < rows_; ++k) {
        for (Eigen::Index i = 0; i < rows_; ++i) {
            basisMatrix(i, k) = column(basis_[k], i);
        }
    }
    for (int j = 0; j < cols_; ++j) {
        if (state_[j] == VarState::Basic || x_[j] == 0.0) {
            continue;
        }
        for (Eigen::Index i = 0; i < rows_; ++i) {
            rhs[i] -= column(j, i) * x_[j];
        }
    }
    Eigen::FullPivLU<Matrix> lu(basisMatrix);
    if (!lu.isInvertible()) {
        return;
    }
    const Vector xb = lu.solve(rhs);
    for (int k = 0; k < rows_; ++k) {
        const int b = basis_[k];
        double v = xb[k];
        // Only snap values that drifted marginally past a bound.
        if (v < lo_[b] && v > lo_[b] - kFeasibilityTolerance) {
            v = lo_[b];
        }
        if (v > hi_[b] && v < hi_[b] + kFeasibilityTolerance) {
            v = hi_[b];
        }
        x_[b] = v;
    }
}

void SimplexSolver::dump(int phase, int iteration, int entering, int leavingRow, double step) const
{
    std::ostream& os = *options_.trace;
    os << "phase " << phase << " iter " << iteration << " enter x" << entering << " leave "
       << (leavingRow < 0 ? std::string("(bound flip)") : "x" + std::to_string(basis_[leavingRow]))
       << " step " << step << '\n';
    for (int i = 0; i < rows_; ++i) {
        os << "  x" << std::setw(3) << std::left << basis_[i] << std::right << " = " << std::setw(12)
           << x_[basis_[i]] << " |";
        for (int j = 0; j < cols_; ++j) {
            os << ' ' << std::setw(10) << tableau_[static_cast<std::size_t>(i) * cols_ + j];
        }
        os << '\n';
    }
}

BoxLp BoxLp::unit(Matrix g, Vector x0)
{
    const auto m = g.cols();
    return BoxLp{std::move(g), std::move(x0), Vector::Constant(m, -1.0), Vector::Constant(m, 1.0), std::nullopt};
}

double box_support(const Matrix& g, const Vector& lower, const Vector& upper, const Vector& d)
{
    const Vector proj = g.transpose() * d;
    double s = 0.0;
    for (Eigen::Index k = 0; k < proj.size(); ++k) {
        s += std::max(proj[k] * lower[k], proj[k] * upper[k]);
    }
    return s;
}

namespace {

FeasibilityResult finish_feasibility(const Solution& sol, const Matrix& g, const Vector& x0,
                                     const Vector& lower, const Vector& upper)
{
    FeasibilityResult res;
    if (sol.status == Status::Optimal) {
        Vector u = clamp_to(sol.x, lower, upper);
        verify_witness(g, x0, lower, upper, u);
        res.feasible = true;
        res.witness = std::move(u);
        return res;
    }
    if (sol.status == Status::Infeasible && sol.farkas.size() == x0.size() && sol.farkas.norm() > 0.0) {
        Vector d = sol.farkas / sol.farkas.norm();
        if (d.dot(x0) > box_support(g, lower, upper, d) + kFeasibilityTolerance) {
            res.certificate = std::move(d);
        }
    }
    return res;
}

} // namespace

FeasibilityResult feasible(const BoxLp& lp, const Options& options)
{
    check_box(lp);
    Problem p{lp.G, lp.x0, lp.lower, lp.upper, Vector::Zero(lp.G.cols())};
    SimplexSolver solver(options);
    return finish_feasibility(solver.solve(p), lp.G, lp.x0, lp.lower, lp.upper);
}

MarginResult max_margin(const BoxLp& lp, const Options& options)
{
    check_box(lp);
    const auto n = lp.G.rows();
    const auto m = lp.G.cols();
    const Vector half = 0.5 * (lp.upper - lp.lower);

    // Columns: u (m), s (1), p (m), q (m).
    const auto cols = 3 * m + 1;
    Problem p;
    p.A = Matrix::Zero(n + 2 * m, cols);
    p.b = Vector::Zero(n + 2 * m);
    p.lower = Vector::Zero(cols);
    p.upper = Vector::Constant(cols, std::numeric_limits<double>::infinity());
    p.cost = Vector::Zero(cols);
    p.A.topLeftCorner(n, m) = lp.G;
    p.b.head(n) = lp.x0;
    for (Eigen::Index k = 0; k < m; ++k) {
        // u_k - h_k s - p_k = lower_k
        p.A(n + k, k) = 1.0;
        p.A(n + k, m) = -half[k];
        p.A(n + k, m + 1 + k) = -1.0;
        p.b[n + k] = lp.lower[k];
        // u_k + h_k s + q_k = upper_k
        p.A(n + m + k, k) = 1.0;
        p.A(n + m + k, m) = half[k];
        p.A(n + m + k, 2 * m + 1 + k) = 1.0;
        p.b[n + m + k] = lp.upper[k];
        p.lower[k] = lp.lower[k];
        p.upper[k] = lp.upper[k];
    }
    p.upper[m] = 1.0;
    p.cost[m] = -1.0;

    SimplexSolver solver(options);
    const Solution sol = solver.solve(p);
    if (sol.status == Status::Infeasible) {
        throw Error(ErrorCode::Infeasible, "target is outside the image of the input box");
    }
    if (sol.status != Status::Optimal) {
        throw Error(ErrorCode::InternalError, "margin LP reported unbounded");
    }
    MarginResult res;
    res.margin = std::clamp(sol.x[m], 0.0, 1.0);
    res.witness = clamp_to(sol.x.head(m), lp.lower, lp.upper);
    verify_witness(lp.G, lp.x0, lp.lower, lp.upper, res.witness);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double slack = std::min(res.witness[k] - lp.lower[k], lp.upper[k] - res.witness[k]);
        if (slack < res.margin * half[k] - 1e-8) {
            throw Error(ErrorCode::InternalError, "margin witness does not attain the reported margin");
        }
    }
    return res;
}

OptimumResult optimize(const BoxLp& lp, const Options& options)
{
    check_box(lp);
    if (!lp.objective) {
        throw Error(ErrorCode::InvalidArgument, "optimize needs an objective");
    }
    Problem p{lp.G, lp.x0, lp.lower, lp.upper, -*lp.objective};
    SimplexSolver solver(options);
    const Solution sol = solver.solve(p);
    if (sol.status == Status::Infeasible) {
        throw Error(ErrorCode::Infeasible, "no input sequence satisfies the constraints");
    }
    if (sol.status == Status::Unbounded) {
        throw Error(ErrorCode::InternalError, "box LP reported unbounded");
    }
    OptimumResult res;
    res.argument = clamp_to(sol.x, lp.lower, lp.upper);
    verify_witness(lp.G, lp.x0, lp.lower, lp.upper, res.argument);
    res.value = lp.objective->dot(res.argument);
    return res;
}

BoxMembership::BoxMembership(Matrix g, Vector lower, Vector upper)
{
    problem_.A = std::move(g);
    problem_.b = Vector::Zero(problem_.A.rows());
    problem_.lower = std::move(lower);
    problem_.upper = std::move(upper);
    problem_.cost = Vector::Zero(problem_.A.cols());
    check_box(BoxLp{problem_.A, problem_.b, problem_.lower, problem_.upper, std::nullopt});
}

BoxMembership BoxMembership::unit(Matrix g)
{
    const auto m = g.cols();
    return BoxMembership(std::move(g), Vector::Constant(m, -1.0), Vector::Constant(m, 1.0));
}

FeasibilityResult BoxMembership::test(const Vector& x0)
{
    if (x0.size() != problem_.A.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "membership target has wrong dimension");
    }
    problem_.b = x0;
    return finish_feasibility(solver_.solve(problem_), problem_.A, x0, problem_.lower, problem_.upper);
}

} // namespace ctrlgauge::lp
