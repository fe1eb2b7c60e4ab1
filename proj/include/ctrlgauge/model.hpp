#pragma once

#include "ctrlgauge/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ctrlgauge {

// Linear discrete-time plant x_{k+1} = A x_k + B u_k.
class LdtSystem {
public:
    // Throws Error(DimensionMismatch) for shape problems and Error(NonFinite)
    // when an entry is NaN or infinite.
    LdtSystem(std::string name, Matrix a, Matrix b);

    const std::string& name() const noexcept { return name_; }
    const Matrix& A() const noexcept { return a_; }
    const Matrix& B() const noexcept { return b_; }
    int n() const noexcept { return static_cast<int>(a_.rows()); }
    int r() const noexcept { return static_cast<int>(b_.cols()); }

    LdtSystem renamed(std::string name) const { return LdtSystem(std::move(name), a_, b_); }

private:
    std::string name_;
    Matrix a_;
    Matrix b_;
};

// Symmetric rated bounds of inputs and states, and optionally the expected
// operating bounds of the states.
struct NormalizationSpec {
    Vector inputRated;
    Vector stateRated;
    std::optional<Vector> stateTarget;

    static NormalizationSpec identity(int n, int r);
};

enum class ConstraintKind { UnitAmplitude, UnitTotalFuel, UnitTotalEnergy };

struct ConstraintSpec {
    ConstraintKind kind = ConstraintKind::UnitAmplitude;
    double bound = 1.0;
};

// Only the amplitude constraint ||u_k||_inf <= bound is supported downstream;
// the fuel and energy kinds throw Error(NotImplemented).
void require_supported(const ConstraintSpec& constraint);

struct ValidationReport {
    bool finite = false;
    bool square = false;
    bool shapesAgree = false;
    bool invertible = false;
    double determinant = 0.0;
    // |det A| divided by the product of the row norms of A.
    double relativeDeterminant = 0.0;
    // sigma_max / sigma_min of A (infinity when singular).
    double conditionEstimate = 0.0;
    std::vector<std::string> findings;

    bool ok() const { return finite && square && shapesAgree; }
};

constexpr double kSingularThreshold = 1e-12;

ValidationReport validate(const Matrix& a, const Matrix& b);
ValidationReport validate(const LdtSystem& sys);

// A^{-1}; throws Error(SingularA) when validate() flags A as singular.
Matrix inverse_state_matrix(const LdtSystem& sys);

// Sigma(A, B diag(inputRated)).
LdtSystem normalize_input_only(const LdtSystem& sys, const Vector& inputRated);

// Sigma(P^-1 A P, P^-1 B diag(inputRated)) with P = diag(stateRated), or
// diag(stateTarget) when useTarget is set.
LdtSystem normalize_full(const LdtSystem& sys, const NormalizationSpec& spec, bool useTarget);

} // namespace ctrlgauge
