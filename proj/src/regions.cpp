#include "hardcore/regions.hpp"

#include <algorithm>

#include "hardcore/polyroots.hpp"

namespace hardcore {

const char* to_string(RegionStatus s) {
    switch (s) {
        case RegionStatus::Inside: return "inside";
        case RegionStatus::Outside: return "outside";
        case RegionStatus::Boundary: return "boundary";
        case RegionStatus::Unknown: return "unknown";
    }
    return "?";
}

namespace {

Integer ipow(Integer base, int e) {
    Integer out;
    mpz_pow_ui(out.get_mpz_t(), base.get_mpz_t(), e);
    return out;
}

} // namespace

Rational lambda_star(int delta) {
    if (delta < 2) throw DomainError("lambda* needs Delta >= 2");
    return make_rational(-ipow(delta - 1, delta - 1), ipow(delta, delta));
}

Rational shearer_radius(int delta) {
    if (delta < 2) throw DomainError("Shearer radius needs Delta >= 2");
    return make_rational(ipow(delta - 1, delta - 1), ipow(delta, delta));
}

RegionVerdict shearer_contains(const GaussianRational& lambda, int delta) {
    Rational r = shearer_radius(delta);
    Rational n2 = lambda.norm2(), r2 = r * r;
    RegionVerdict v;
    int c = cmp(n2, r2);
    v.status = c < 0 ? RegionStatus::Inside : c == 0 ? RegionStatus::Boundary : RegionStatus::Outside;
    v.margin = abs(to_mp(n2) - to_mp(r2));
    return v;
}

RegionVerdict cardioid_contains(const GaussianRational& lambda, int delta) {
    if (delta < 2) throw DomainError("cardioid membership needs Delta >= 2");
    RegionVerdict out;
    if (lambda.is_zero()) {
        out.status = RegionStatus::Inside;
        out.witness = MPComplex(0.0);
        out.margin = to_mp(make_rational(1, delta - 1));
        return out;
    }

    // p(z) = lambda (1-z)^Delta - z, roots tested against |z| = 1/(Delta-1)
    Poly one_minus_z;
    one_minus_z.c = {GaussianRational(1), GaussianRational(-1, 0)};
    Poly p = poly_pow(one_minus_z, delta);
    for (auto& c : p.c) c = c * lambda;
    if (p.c.size() < 2) p.c.resize(2, GaussianRational(0));
    p.c[1] = p.c[1] - GaussianRational(1);
    p.normalize();

    const Rational rim = make_rational(1, delta - 1);
    const Rational rim2 = rim * rim;

    // Exact shortcut: rational circle points +-1/(Delta-1), +-i/(Delta-1).
    bool exact_boundary_root = false;
    GaussianRational boundary_root;
    for (GaussianRational cand : {GaussianRational(rim, Rational(0)), GaussianRational(-rim, Rational(0)),
                                  GaussianRational(Rational(0), rim), GaussianRational(Rational(0), -rim)}) {
        Poly q = p;
        while (poly_divide_root(q, cand, q)) {
            exact_boundary_root = true;
            boundary_root = cand;
            p = q;
            if (p.degree() < 1) break;
        }
        if (p.degree() < 1) break;
    }

    bool some_inside = false, all_outside = true;
    MPFloat best_inside_margin = 0, min_outside_margin = -1;
    MPComplex inside_witness;
    const MPFloat rim_mp = to_mp(rim);
    const MPFloat unknown_band = pow(MPFloat(2), -64);

    if (p.degree() >= 1) {
        for (const auto& root : aberth_roots(p)) {
            MPFloat lo = abs(root.z) - root.radius;
            MPFloat hi = abs(root.z) + root.radius;
            if (hi < rim_mp - unknown_band) {
                some_inside = true;
                if (rim_mp - hi > best_inside_margin) {
                    best_inside_margin = rim_mp - hi;
                    inside_witness = root.z;
                }
            } else if (lo > rim_mp + unknown_band) {
                MPFloat m = lo - rim_mp;
                if (min_outside_margin < 0 || m < min_outside_margin) min_outside_margin = m;
            } else {
                all_outside = false;
            }
        }
    }

    if (some_inside) {
        out.status = RegionStatus::Inside;
        out.margin = best_inside_margin;
        out.witness = inside_witness;
        return out;
    }
    if (exact_boundary_root && all_outside) {
        out.status = RegionStatus::Boundary;
        out.witness = to_mp(boundary_root);
        out.margin = min_outside_margin < 0 ? MPFloat(0) : min_outside_margin;
        return out;
    }
    if (all_outside && !exact_boundary_root) {
        out.status = RegionStatus::Outside;
        out.margin = min_outside_margin;
        return out;
    }
    out.status = RegionStatus::Unknown;
    out.margin = unknown_band;
    return out;
}

Delta2Zero delta2_zero(const Rational& t) {
    if (t <= 0 || t >= 1) throw DomainError("delta2_zero needs t in (0,1)");
    Delta2Zero out;
    if (t == make_rational(1, 3)) out.exact = make_rational(-1, 3);
    else if (t == make_rational(1, 2)) out.exact = make_rational(-1, 2);
    else if (t == make_rational(2, 3)) out.exact = Rational(-1);
    if (out.exact) {
        out.value = to_mp(*out.exact);
        return out;
    }
    const MPFloat pi = 4 * atan(MPFloat(1));
    out.value = MPFloat(-1) / (2 * (1 + cos(to_mp(t) * pi)));
    return out;
}

std::vector<GaussianRational> exceptional_candidates(int delta) {
    if (delta < 3) throw DomainError("exceptional candidates need Delta >= 3");
    // 0 < sqrt(a^2+b^2) <= R  with R = Delta^Delta/(Delta-1)^(Delta-1)
    Rational R = make_rational(ipow(delta, delta), ipow(delta - 1, delta - 1));
    Rational R2 = R * R;
    long bound = static_cast<long>(mpz_get_d(Integer(R.get_num() / R.get_den()).get_mpz_t())) + 1;
    struct Cand { long norm, a, b; GaussianRational v; };
    std::vector<Cand> cands;
    for (long a = -bound; a <= bound; ++a) {
        for (long b = -bound; b <= bound; ++b) {
            if (a == 0 && b == 0) continue;
            Rational n2(a * a + b * b);
            if (cmp(n2, R2) > 0) continue;
            GaussianRational g{Rational(a), Rational(b)};
            cands.push_back({a * a + b * b, a, b, GaussianRational(1) / g});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& x, const Cand& y) {
        if (x.norm != y.norm) return x.norm < y.norm;
        if (x.a != y.a) return x.a < y.a;
        return x.b < y.b;
    });
    std::vector<GaussianRational> out;
    out.reserve(cands.size());
    for (auto& c : cands) out.push_back(std::move(c.v));
    return out;
}

} // namespace hardcore
