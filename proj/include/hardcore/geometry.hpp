#pragma once

// Exact planar disk geometry over Q[i].  A disk is encoded by three distinct
// non-collinear boundary points; all predicates compare squared quantities so
// no square root is ever taken.  Disks are open; boundary points are not
// contained.

#include <string>

#include "hardcore/exact.hpp"

namespace hardcore {

enum class Containment { Inside, OnBoundary, Outside };

// A disk as exact center + squared radius, the working representation for
// predicates.
struct CenterRadius {
    GaussianRational center;
    Rational r2;
};

struct RationalDisk {
    GaussianRational p1, p2, p3;

    // Throws ConstructionError on coincident or collinear points.
    RationalDisk(GaussianRational a, GaussianRational b, GaussianRational c);

    const GaussianRational& center() const { return center_; }
    const Rational& squared_radius() const { return r2_; }
    CenterRadius as_center_radius() const { return {center_, r2_}; }

  private:
    GaussianRational center_;
    Rational r2_;
};

// Disk through c+r, c+ri, c-r (all rational when c, r are).
RationalDisk disk_from_center_radius(const GaussianRational& c, const Rational& r);

GaussianRational circumcenter(const RationalDisk& d);
Rational squared_radius(const RationalDisk& d);

Containment contains_point(const CenterRadius& d, const GaussianRational& q);
Containment contains_point(const RationalDisk& d, const GaussianRational& q);

// Rational point on the boundary circle: p1 reflected along the chord
// parametrization (1 - it)/(1 + it), t in Q.  Used by tests as an oracle.
GaussianRational boundary_point(const RationalDisk& d, const Rational& t);

// closure(inner) subset closure(outer):  |c_i - c_o| <= r_o - r_i.
// Internal tangency counts as contained (matches open-disk semantics).
bool disk_in_disk(const CenterRadius& inner, const CenterRadius& outer);
bool disk_in_disk(const RationalDisk& inner, const RationalDisk& outer);

// closure(inner) subset open(outer):  |c_i - c_o| + r_i < r_o.
bool disk_strictly_inside(const CenterRadius& inner, const CenterRadius& outer);
bool disk_strictly_inside(const RationalDisk& inner, const RationalDisk& outer);

// closure(d1) and closure(d2) disjoint:  |c1 - c2| > r1 + r2.
bool disks_disjoint(const CenterRadius& d1, const CenterRadius& d2);

// Square-root-free comparisons, P, R, T >= 0 rational:
//   (sqrt(P) + sqrt(R))^4 < T
bool quartic_sum_lt(const Rational& P, const Rational& R, const Rational& T);
//   (sqrt(P) - sqrt(R))^4 > T   (caller ensures the difference is the
//   intended min distance, i.e. P >= R)
bool quartic_diff_gt(const Rational& P, const Rational& R, const Rational& T);

// Exact squared distance from a point to an axis-aligned box [lo, hi]^2.
Rational box_point_dist2(const GaussianRational& lo, const GaussianRational& hi,
                         const GaussianRational& q);

} // namespace hardcore
