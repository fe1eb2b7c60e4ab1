#pragma once

#include "ctrlgauge/linalg.hpp"

#include <gmpxx.h>

#include <array>
#include <vector>

// Sign predicates evaluated exactly on double inputs: a floating-point
// evaluation with an error bound first, rational arithmetic when the bound
// cannot decide.
namespace ctrlgauge::exact {

using Rational3 = std::array<mpq_class, 3>;

// sign(a d - b c)
int sign_det2(double a, double b, double c, double d);

// sign(det [a b c]) for column vectors a, b, c of length 3.
int sign_det3(const Eigen::Vector3d& a, const Eigen::Vector3d& b, const Eigen::Vector3d& c);

int sign_det3(const Rational3& a, const Rational3& b, const Rational3& c);

// Exact rank of a small dense matrix.
int rank(const Matrix& m);

// Rows of `m` whose restriction has the same exact rank as `m`; projecting
// onto them is injective on the column span.
std::vector<int> spanning_rows(const Matrix& m);

Rational3 to_rational(const Eigen::Vector3d& v);

} // namespace ctrlgauge::exact
