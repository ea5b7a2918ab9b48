#include "hardcore/moebius.hpp"

#include <sstream>

namespace hardcore {

std::string to_string(const SpherePoint& p) {
    return p.infinite ? "inf" : to_string(p.v);
}

const char* to_string(MoebiusKind k) {
    switch (k) {
        case MoebiusKind::Identity: return "identity";
        case MoebiusKind::Elliptic: return "elliptic";
        case MoebiusKind::Parabolic: return "parabolic";
        case MoebiusKind::Loxodromic: return "loxodromic";
        case MoebiusKind::Unreliable: return "unreliable";
    }
    return "?";
}

const char* to_string(FixedPointTag t) {
    switch (t) {
        case FixedPointTag::Attracting: return "attracting";
        case FixedPointTag::Repelling: return "repelling";
        case FixedPointTag::Neutral: return "neutral";
    }
    return "?";
}

MoebiusQ f_lambda(const GaussianRational& lambda) {
    if (lambda.is_zero()) throw DegenerateMap("f_lambda with lambda = 0 is the constant 0 map");
    return {GaussianRational(0), lambda, GaussianRational(1), GaussianRational(1)};
}

MoebiusMP f_lambda(const MPComplex& lambda) {
    return {MPComplex(0.0), lambda, MPComplex(1.0), MPComplex(1.0)};
}

bool is_identity(const MoebiusQ& m) {
    return m.b.is_zero() && m.c.is_zero() && m.a == m.d && !m.a.is_zero();
}

MoebiusClass classify(const MoebiusQ& m) {
    if (m.det().is_zero()) throw DegenerateMap("singular matrix has no Moebius action");
    if (is_identity(m)) return {MoebiusKind::Identity};
    GaussianRational t = tr_squared(m);
    if (t.im == 0) {
        if (t.re >= 0 && t.re < 4) return {MoebiusKind::Elliptic};
        if (t.re == 4) return {MoebiusKind::Parabolic};
    }
    return {MoebiusKind::Loxodromic};
}

MoebiusClass classify(const MoebiusMP& m, const MPFloat& margin) {
    MPComplex t = tr_squared(m);
    using std::abs;
    MPFloat im_abs = t.im < 0 ? MPFloat(-t.im) : t.im;
    if (im_abs < margin) {
        // near the real axis; the boundary set is [0,4]
        if (t.re > -margin && t.re < 4 + margin) {
            if (t.re > margin && t.re < 4 - margin) return {MoebiusKind::Elliptic};
            return {MoebiusKind::Unreliable};
        }
    }
    return {MoebiusKind::Loxodromic};
}

SpherePoint apply(const MoebiusQ& m, const SpherePoint& z) {
    if (z.infinite) {
        if (m.c.is_zero()) return SpherePoint::inf();
        return SpherePoint(m.a / m.c);
    }
    GaussianRational den = m.c * z.v + m.d;
    if (den.is_zero()) return SpherePoint::inf();
    return SpherePoint((m.a * z.v + m.b) / den);
}

MPComplex apply(const MoebiusMP& m, const MPComplex& z) {
    return (m.a * z + m.b) / (m.c * z + m.d);
}

MPComplex apply_mp(const MoebiusQ& m, const MPComplex& z) {
    return (to_mp(m.a) * z + to_mp(m.b)) / (to_mp(m.c) * z + to_mp(m.d));
}

GaussianRational derivative_at(const MoebiusQ& m, const SpherePoint& z) {
    if (z.infinite) throw PoleError("derivative at infinity");
    GaussianRational den = m.c * z.v + m.d;
    if (den.is_zero()) throw PoleError("derivative at the pole");
    return m.det() / (den * den);
}

MPComplex derivative_at(const MoebiusMP& m, const MPComplex& z) {
    MPComplex den = m.c * z + m.d;
    return m.det() / (den * den);
}

std::optional<GaussianRational> pole(const MoebiusQ& m) {
    if (m.c.is_zero()) return std::nullopt;
    return -m.d / m.c;
}

namespace {

FixedPointTag tag_from_multiplier_norm2(const Rational& n2) {
    int c = cmp(n2, Rational(1));
    if (c < 0) return FixedPointTag::Attracting;
    if (c > 0) return FixedPointTag::Repelling;
    return FixedPointTag::Neutral;
}

FixedPointTag tag_from_multiplier_norm2_mp(const MPFloat& n2) {
    // Floating tags carry an implicit 2^-200 margin; ties are Neutral.
    MPFloat eps = pow(MPFloat(2), -200);
    if (n2 < 1 - eps) return FixedPointTag::Attracting;
    if (n2 > 1 + eps) return FixedPointTag::Repelling;
    return FixedPointTag::Neutral;
}

} // namespace

FixedPoints fixed_points(const MoebiusQ& m) {
    if (is_identity(m)) throw DomainError("fixed points of the identity are everything");
    FixedPoints out;
    if (m.c.is_zero()) {
        // affine (az+b)/d: infinity is fixed with multiplier d/a
        out.exact = true;
        out.p1 = SpherePoint::inf();
        out.approx1_infinite = true;
        Rational mult_inf = (m.d * m.d.conj()).re / (m.a * m.a.conj()).re;
        out.tag1 = tag_from_multiplier_norm2(mult_inf);
        if (m.a == m.d) { // translation: parabolic, single fixed point
            out.p2 = out.p1;
            out.approx2_infinite = true;
            out.tag1 = out.tag2 = FixedPointTag::Neutral;
            return out;
        }
        GaussianRational z = m.b / (m.d - m.a);
        out.p2 = SpherePoint(z);
        out.approx2 = to_mp(z);
        Rational mult = (m.a / m.d).norm2();
        out.tag2 = tag_from_multiplier_norm2(mult);
        return out;
    }
    // c z^2 + (d - a) z - b = 0
    GaussianRational A = m.c, B = m.d - m.a, C = -m.b;
    GaussianRational disc = B * B - GaussianRational(4) * A * C;
    auto sq = sqrt_exact(disc);
    if (sq) {
        out.exact = true;
        if (sq->is_zero()) {
            GaussianRational z = -B / (GaussianRational(2) * A);
            out.p1 = out.p2 = SpherePoint(z);
            out.approx1 = out.approx2 = to_mp(z);
            out.tag1 = out.tag2 = FixedPointTag::Neutral;
            return out;
        }
        GaussianRational z1 = (-B + *sq) / (GaussianRational(2) * A);
        GaussianRational z2 = (-B - *sq) / (GaussianRational(2) * A);
        out.p1 = SpherePoint(z1);
        out.p2 = SpherePoint(z2);
        out.approx1 = to_mp(z1);
        out.approx2 = to_mp(z2);
        out.tag1 = tag_from_multiplier_norm2(derivative_at(m, out.p1).norm2());
        out.tag2 = tag_from_multiplier_norm2(derivative_at(m, out.p2).norm2());
        return out;
    }
    out.exact = false;
    out.precision_bits = kMPBits;
    MPComplex Am = to_mp(A), Bm = to_mp(B), Cm = to_mp(C);
    MPComplex d = sqrt(Bm * Bm - MPComplex(4.0) * Am * Cm);
    MPComplex z1 = (-Bm + d) / (MPComplex(2.0) * Am);
    MPComplex z2 = (-Bm - d) / (MPComplex(2.0) * Am);
    MoebiusMP mm{to_mp(m.a), to_mp(m.b), to_mp(m.c), to_mp(m.d)};
    out.approx1 = z1;
    out.approx2 = z2;
    out.tag1 = tag_from_multiplier_norm2_mp(norm2(derivative_at(mm, z1)));
    out.tag2 = tag_from_multiplier_norm2_mp(norm2(derivative_at(mm, z2)));
    return out;
}

RationalDisk disk_image(const MoebiusQ& m, const RationalDisk& d) {
    if (m.det().is_zero()) throw DegenerateMap("singular matrix");
    auto p = pole(m);
    if (p && contains_point(d, *p) != Containment::Outside)
        throw NotADisk("pole inside or on the closure of the disk");
    auto img = [&](const GaussianRational& q) {
        GaussianRational den = m.c * q + m.d;
        return (m.a * q + m.b) / den;
    };
    return RationalDisk(img(d.p1), img(d.p2), img(d.p3));
}

std::string to_string(const MoebiusQ& m) {
    return to_string(m.a) + " " + to_string(m.b) + " " + to_string(m.c) + " " + to_string(m.d);
}

MoebiusQ moebius_from_string(const std::string& s) {
    std::istringstream in(s);
    std::string ta, tb, tc, td;
    if (!(in >> ta >> tb >> tc >> td)) throw ParseError("expected four Gaussian rationals");
    std::string extra;
    if (in >> extra) throw ParseError("trailing tokens after Moebius matrix");
    MoebiusQ m{parse_gaussian(ta), parse_gaussian(tb), parse_gaussian(tc), parse_gaussian(td)};
    if (m.det().is_zero()) throw ParseError("matrix is singular");
    return m;
}

} // namespace hardcore
