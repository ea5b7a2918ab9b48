#include "hardcore/geometry.hpp"

namespace hardcore {

namespace {

GaussianRational circumcenter_of(const GaussianRational& p1, const GaussianRational& p2,
                                 const GaussianRational& p3) {
    const Rational &x1 = p1.re, &y1 = p1.im;
    const Rational &x2 = p2.re, &y2 = p2.im;
    const Rational &x3 = p3.re, &y3 = p3.im;
    Rational q1 = x1 * x1 + y1 * y1;
    Rational q2 = x2 * x2 + y2 * y2;
    Rational q3 = x3 * x3 + y3 * y3;
    Rational den = 2 * (x1 * (y2 - y3) + x2 * (y3 - y1) + x3 * (y1 - y2));
    if (den == 0) throw ConstructionError("collinear boundary points");
    Rational x = (q1 * (y2 - y3) + q2 * (y3 - y1) + q3 * (y1 - y2)) / den;
    Rational y = (q1 * (x3 - x2) + q2 * (x1 - x3) + q3 * (x2 - x1)) / den;
    return {x, y};
}

} // namespace

RationalDisk::RationalDisk(GaussianRational a, GaussianRational b, GaussianRational c)
    : p1(std::move(a)), p2(std::move(b)), p3(std::move(c)) {
    if (p1 == p2 || p1 == p3 || p2 == p3)
        throw ConstructionError("disk boundary points must be pairwise distinct");
    center_ = circumcenter_of(p1, p2, p3);
    r2_ = (p1 - center_).norm2();
}

RationalDisk disk_from_center_radius(const GaussianRational& c, const Rational& r) {
    if (r <= 0) throw ConstructionError("disk radius must be positive");
    GaussianRational rr(r, Rational(0));
    GaussianRational ri(Rational(0), r);
    return RationalDisk(c + rr, c + ri, c - rr);
}

GaussianRational circumcenter(const RationalDisk& d) { return d.center(); }
Rational squared_radius(const RationalDisk& d) { return d.squared_radius(); }

Containment contains_point(const CenterRadius& d, const GaussianRational& q) {
    int c = cmp((q - d.center).norm2(), d.r2);
    if (c < 0) return Containment::Inside;
    if (c == 0) return Containment::OnBoundary;
    return Containment::Outside;
}

Containment contains_point(const RationalDisk& d, const GaussianRational& q) {
    return contains_point(d.as_center_radius(), q);
}

GaussianRational boundary_point(const RationalDisk& d, const Rational& t) {
    // (1-it)/(1+it) has modulus 1 for real t.
    GaussianRational u(Rational(1), -t);
    GaussianRational v(Rational(1), t);
    return d.center() + (d.p1 - d.center()) * (u / v);
}

// |c_i - c_o| <= r_o - r_i with all inputs squared:
//   needs r_o >= r_i and (A + B - D2) >= 0 and (A + B - D2)^2 >= 4AB,
//   where A = r_o^2, B = r_i^2, D2 = |c_i - c_o|^2.
bool disk_in_disk(const CenterRadius& inner, const CenterRadius& outer) {
    const Rational &A = outer.r2, &B = inner.r2;
    if (A < B) return false;
    Rational D2 = (inner.center - outer.center).norm2();
    Rational lhs = A + B - D2;
    if (lhs < 0) return false;
    return lhs * lhs >= 4 * A * B;
}

bool disk_in_disk(const RationalDisk& inner, const RationalDisk& outer) {
    return disk_in_disk(inner.as_center_radius(), outer.as_center_radius());
}

bool disk_strictly_inside(const CenterRadius& inner, const CenterRadius& outer) {
    const Rational &A = outer.r2, &B = inner.r2;
    if (A <= B) return false;
    Rational D2 = (inner.center - outer.center).norm2();
    Rational lhs = A + B - D2;
    if (lhs <= 0) return false;
    return lhs * lhs > 4 * A * B;
}

bool disk_strictly_inside(const RationalDisk& inner, const RationalDisk& outer) {
    return disk_strictly_inside(inner.as_center_radius(), outer.as_center_radius());
}

bool disks_disjoint(const CenterRadius& d1, const CenterRadius& d2) {
    Rational D2 = (d1.center - d2.center).norm2();
    Rational lhs = D2 - d1.r2 - d2.r2;
    if (lhs <= 0) return false;
    return lhs * lhs > 4 * d1.r2 * d2.r2;
}

// (sqrt(P) +- sqrt(R))^4 = Q +- M*sqrt(PR), Q = (P+R)^2 + 4PR, M = 4(P+R).
bool quartic_sum_lt(const Rational& P, const Rational& R, const Rational& T) {
    Rational Q = (P + R) * (P + R) + 4 * P * R;
    Rational M = 4 * (P + R);
    Rational gap = T - Q;
    if (gap <= 0) return false;
    return M * M * P * R < gap * gap;
}

bool quartic_diff_gt(const Rational& P, const Rational& R, const Rational& T) {
    Rational Q = (P + R) * (P + R) + 4 * P * R;
    Rational M = 4 * (P + R);
    Rational gap = Q - T;
    if (gap <= 0) return false;
    return gap * gap > M * M * P * R;
}

Rational box_point_dist2(const GaussianRational& lo, const GaussianRational& hi,
                         const GaussianRational& q) {
    auto clamp = [](const Rational& v, const Rational& a, const Rational& b) {
        if (v < a) return a;
        if (v > b) return b;
        return v;
    };
    Rational dx = q.re - clamp(q.re, lo.re, hi.re);
    Rational dy = q.im - clamp(q.im, lo.im, hi.im);
    return dx * dx + dy * dy;
}

} // namespace hardcore
