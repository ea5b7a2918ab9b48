#pragma once

// Moebius transformations z -> (az+b)/(cz+d) on the Riemann sphere, over the
// exact field Q[i] or over high-precision complex floats.  Exact instances
// drive every certified computation; the floating instance exists for fixed
// points with irrational coordinates.

#include <optional>
#include <string>
#include <vector>

#include "hardcore/exact.hpp"
#include "hardcore/geometry.hpp"
#include "hardcore/mp.hpp"

namespace hardcore {

// A point of the Riemann sphere with exact coordinates.
struct SpherePoint {
    bool infinite = false;
    GaussianRational v;

    SpherePoint() = default;
    SpherePoint(GaussianRational x) : infinite(false), v(std::move(x)) {}
    static SpherePoint inf() { SpherePoint p; p.infinite = true; return p; }

    bool is_finite() const { return !infinite; }
    friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.v == b.v;
    }
};

std::string to_string(const SpherePoint& p);

enum class MoebiusKind { Identity, Elliptic, Parabolic, Loxodromic, Unreliable };

struct MoebiusClass {
    MoebiusKind kind;
};

const char* to_string(MoebiusKind k);

template <class C>
struct Moebius {
    C a, b, c, d;
    C det() const { return a * d - b * c; }
};

using MoebiusQ = Moebius<GaussianRational>;
using MoebiusMP = Moebius<MPComplex>;

// f_lambda(z) = lambda/(1+z) as the matrix ((0, lambda), (1, 1)).
MoebiusQ f_lambda(const GaussianRational& lambda);
MoebiusMP f_lambda(const MPComplex& lambda);

template <class C>
Moebius<C> compose(const Moebius<C>& m1, const Moebius<C>& m2) {
    return {m1.a * m2.a + m1.b * m2.c, m1.a * m2.b + m1.b * m2.d,
            m1.c * m2.a + m1.d * m2.c, m1.c * m2.b + m1.d * m2.d};
}

// Inverse up to scalar (adjugate); same sphere action.
template <class C>
Moebius<C> inverse(const Moebius<C>& m) {
    return {m.d, -m.b, -m.c, m.a};
}

template <class C>
C tr_squared(const Moebius<C>& m) {
    C t = m.a + m.d;
    return t * t / m.det();
}

bool is_identity(const MoebiusQ& m);

// Exact classification by the tr^2 trichotomy ([0,4) elliptic, =4 parabolic,
// otherwise loxodromic).
MoebiusClass classify(const MoebiusQ& m);

// Floating classification; near the [0,4] boundary (within `margin`) the
// verdict is Unreliable.
MoebiusClass classify(const MoebiusMP& m, const MPFloat& margin);

SpherePoint apply(const MoebiusQ& m, const SpherePoint& z);
MPComplex apply(const MoebiusMP& m, const MPComplex& z);
MPComplex apply_mp(const MoebiusQ& m, const MPComplex& z);

// (ad - bc)/(cz + d)^2; z must be finite and off the pole.
GaussianRational derivative_at(const MoebiusQ& m, const SpherePoint& z);
MPComplex derivative_at(const MoebiusMP& m, const MPComplex& z);

// Pole (preimage of infinity), or nullopt for affine maps.
std::optional<GaussianRational> pole(const MoebiusQ& m);

enum class FixedPointTag { Attracting, Repelling, Neutral };

struct FixedPoints {
    bool exact = false;          // both points exact in Q[i]
    unsigned precision_bits = 0; // 0 when exact
    SpherePoint p1, p2;          // valid when exact
    FixedPointTag tag1 = FixedPointTag::Neutral, tag2 = FixedPointTag::Neutral;
    MPComplex approx1, approx2;  // always valid (finite points), re/im of inf unused
    bool approx1_infinite = false, approx2_infinite = false;
};

const char* to_string(FixedPointTag t);

// Fixed points with attracting/repelling/neutral tags.  Exact when the
// fixed-point quadratic has a discriminant that is a square in Q[i];
// otherwise high-precision approximations tagged with the working precision.
// Parabolic maps report one point twice, tagged Neutral.
FixedPoints fixed_points(const MoebiusQ& m);

// Image of a disk under an exact Moebius map whose pole lies strictly
// outside the closure of d (checked); the image is then again a disk.
RationalDisk disk_image(const MoebiusQ& m, const RationalDisk& d);

// Serialization: four Gaussian-rational strings in row-major order,
// whitespace-separated.
std::string to_string(const MoebiusQ& m);
MoebiusQ moebius_from_string(const std::string& s);

} // namespace hardcore
