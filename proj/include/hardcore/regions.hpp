#pragma once

// Decidable region predicates: the cardioid Lambda_Delta (via certified root
// isolation of z = lambda (1-z)^Delta), the Shearer disk, lambda*(Delta),
// the explicit Delta=2 zero set, and the exceptional-set candidate list.

#include <optional>
#include <string>
#include <vector>

#include "hardcore/exact.hpp"
#include "hardcore/mp.hpp"

namespace hardcore {

enum class RegionStatus { Inside, Outside, Boundary, Unknown };

const char* to_string(RegionStatus s);

struct RegionVerdict {
    RegionStatus status = RegionStatus::Unknown;
    MPFloat margin = 0;              // certified distance backing the verdict
    std::optional<MPComplex> witness; // e.g. the z with lambda = z/(1-z)^Delta
};

// lambda*(Delta) = -(Delta-1)^(Delta-1) / Delta^Delta, exact.
Rational lambda_star(int delta);

// Radius of the Shearer disk B_Delta, exact.
Rational shearer_radius(int delta);

// Exact membership |lambda| vs radius (squared comparison).
RegionVerdict shearer_contains(const GaussianRational& lambda, int delta);

// Membership of lambda in Lambda_Delta = { z/(1-z)^Delta : |z| <= 1/(Delta-1) }.
// Decides via the roots of lambda (1-z)^Delta = z: Inside iff some root lies
// strictly inside the disk (certified), Outside iff all lie strictly outside,
// Boundary via exact rational roots on the circle.  Unknown when a root
// modulus is within 2^-64 of 1/(Delta-1) and no exact shortcut applies.
RegionVerdict cardioid_contains(const GaussianRational& lambda, int delta);

// -1/(2(1+cos(t pi))) for t in (0,1); exact at the three rational-cosine
// points t = 1/3, 1/2, 2/3, else a 256-bit real.
struct Delta2Zero {
    MPFloat value;
    std::optional<Rational> exact;
};
Delta2Zero delta2_zero(const Rational& t);

// Finite candidate list containing E_Delta: inverses of Gaussian integers
// a+bi with 0 < a^2+b^2 <= (Delta^Delta/(Delta-1)^(Delta-1))^2.
std::vector<GaussianRational> exceptional_candidates(int delta);

} // namespace hardcore
