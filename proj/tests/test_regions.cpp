#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "hardcore/graph.hpp"
#include "hardcore/polyroots.hpp"
#include "hardcore/regions.hpp"

using namespace hardcore;

namespace {
std::mt19937_64 rng(99331);
}

TEST_CASE("lambda_star closed form") {
    CHECK(lambda_star(2) == make_rational(-1, 4));
    CHECK(lambda_star(3) == make_rational(-4, 27));
    CHECK(lambda_star(4) == make_rational(-27, 256));
    CHECK_THROWS_AS(lambda_star(1), DomainError);
}

TEST_CASE("shearer region, exact") {
    CHECK(shearer_radius(3) == make_rational(4, 27));
    CHECK(shearer_contains(GaussianRational(0), 3).status == RegionStatus::Inside);
    CHECK(shearer_contains(GaussianRational(make_rational(4, 27), Rational(0)), 3).status ==
          RegionStatus::Boundary);
    CHECK(shearer_contains(GaussianRational(make_rational(1, 10), Rational(0)), 3).status ==
          RegionStatus::Inside);
    CHECK(shearer_contains(GaussianRational(1), 3).status == RegionStatus::Outside);
}

TEST_CASE("cardioid membership, the three pinned examples") {
    RegionVerdict v0 = cardioid_contains(GaussianRational(0), 3);
    CHECK(v0.status == RegionStatus::Inside);
    REQUIRE(v0.witness.has_value());
    CHECK(abs(*v0.witness) < pow(MPFloat(2), -60));

    RegionVerdict vb = cardioid_contains(GaussianRational(lambda_star(3), Rational(0)), 3);
    CHECK(vb.status == RegionStatus::Boundary);
    REQUIRE(vb.witness.has_value());
    CHECK(abs(*vb.witness - MPComplex(-0.5)) < pow(MPFloat(2), -60));

    CHECK(cardioid_contains(GaussianRational(-1, 0), 3).status == RegionStatus::Outside);
}

TEST_CASE("cardioid boundary at lambda_star for Delta = 3..8") {
    for (int delta = 3; delta <= 8; ++delta) {
        RegionVerdict v = cardioid_contains(GaussianRational(lambda_star(delta), Rational(0)), delta);
        CHECK(v.status == RegionStatus::Boundary);
    }
}

TEST_CASE("shearer region is inside the cardioid on the negative axis") {
    // Remark: on R_{<=0} the Shearer region agrees with the cardioid interior
    for (int delta = 3; delta <= 5; ++delta) {
        Rational R = shearer_radius(delta);
        for (int k = 1; k <= 100; ++k) {
            Rational lam = -R * k / 101;
            REQUIRE(shearer_contains(GaussianRational(lam, Rational(0)), delta).status ==
                    RegionStatus::Inside);
            CHECK(cardioid_contains(GaussianRational(lam, Rational(0)), delta).status ==
                  RegionStatus::Inside);
        }
    }
}

TEST_CASE("delta2_zero values") {
    Delta2Zero half = delta2_zero(make_rational(1, 2));
    REQUIRE(half.exact.has_value());
    CHECK(*half.exact == make_rational(-1, 2));
    // kills Z_{P2} exactly
    GaussianRational lam(*half.exact, Rational(0));
    CHECK(brute_force_partition(path_graph(2, 2), lam).z().is_zero());

    Delta2Zero third = delta2_zero(make_rational(1, 3));
    REQUIRE(third.exact.has_value());
    CHECK(*third.exact == make_rational(-1, 3));
    // some path with n <= 10 vanishes at -1/3 (it is P4)
    bool found = false;
    for (int n = 2; n <= 10 && !found; ++n)
        found = brute_force_partition(path_graph(n, 2),
                                      GaussianRational(make_rational(-1, 3), Rational(0)))
                    .z()
                    .is_zero();
    CHECK(found);

    // t -> 0+ approaches -1/4
    Delta2Zero tiny = delta2_zero(make_rational(1, 1000));
    CHECK(!tiny.exact.has_value());
    CHECK(abs(tiny.value - MPFloat(-0.25)) < MPFloat(1e-5));

    // all values lie in (-inf, -1/4)
    for (int k = 1; k < 60; ++k) {
        Delta2Zero z = delta2_zero(make_rational(k, 60));
        CHECK(z.value < MPFloat(-0.25) + MPFloat(1e-30));
    }
    CHECK_THROWS_AS(delta2_zero(Rational(0)), DomainError);
    CHECK_THROWS_AS(delta2_zero(Rational(1)), DomainError);
}

TEST_CASE("exceptional candidate list") {
    auto cands = exceptional_candidates(3);
    // #{(a,b) != 0 : a^2+b^2 <= (27/4)^2} counted directly
    CHECK(cands.size() == 144);
    bool has_minus_one = false, has_half_minus_half_i = false;
    GaussianRational m1(-1, 0);
    GaussianRational hmh(make_rational(1, 2), make_rational(-1, 2)); // 1/(1+i)
    for (const auto& c : cands) {
        if (c == m1) has_minus_one = true;
        if (c == hmh) has_half_minus_half_i = true;
    }
    CHECK(has_minus_one);
    CHECK(has_half_minus_half_i);
    // deduplicated
    std::set<std::string> seen;
    for (const auto& c : cands) CHECK(seen.insert(to_string(c)).second);
    // every entry is the inverse of a Gaussian integer of bounded norm
    Rational R = make_rational(27, 4);
    for (const auto& c : cands) {
        GaussianRational inv = GaussianRational(1) / c;
        CHECK(cmp(inv.norm2(), R * R) <= 0);
        CHECK(inv.re.get_den() == 1);
        CHECK(inv.im.get_den() == 1);
    }
}

TEST_CASE("aberth root finder on easy polynomials") {
    // (z-1)(z-2)(z-3)
    Poly p;
    p.c = {GaussianRational(-6, 0), GaussianRational(11, 0), GaussianRational(-6, 0),
           GaussianRational(1)};
    auto roots = aberth_roots(p);
    REQUIRE(roots.size() == 3);
    CHECK(abs(roots[0].z - MPComplex(1.0)) < MPFloat(1e-50));
    CHECK(abs(roots[1].z - MPComplex(2.0)) < MPFloat(1e-50));
    CHECK(abs(roots[2].z - MPComplex(3.0)) < MPFloat(1e-50));
    for (auto& r : roots) CHECK(r.radius < MPFloat(1e-40));
    // complex coefficients: (z - i)^2 (double root)
    Poly q;
    q.c = {GaussianRational(-1, 0), GaussianRational(Rational(0), Rational(-2)), GaussianRational(1)};
    auto dr = aberth_roots(q);
    REQUIRE(dr.size() == 2);
    for (auto& r : dr) CHECK(abs(r.z - MPComplex(0.0, 1.0)) < MPFloat(1e-30));
}

TEST_CASE("exact synthetic division") {
    // p = (z - 1/2)(z^2 + 1)
    Poly p;
    p.c = {GaussianRational(make_rational(-1, 2), Rational(0)), GaussianRational(1),
           GaussianRational(make_rational(-1, 2), Rational(0)), GaussianRational(1)};
    Poly q;
    REQUIRE(poly_divide_root(p, GaussianRational(make_rational(1, 2), Rational(0)), q));
    CHECK(q.degree() == 2);
    CHECK(poly_eval(q, GaussianRational(Rational(0), Rational(1))).is_zero());
    Poly r;
    CHECK(!poly_divide_root(p, GaussianRational(3), r));
}

TEST_CASE("cardioid verdicts against the parametrization") {
    // values z/(1-z)^3 with |z| well inside 1/2 must verdict Inside
    std::uniform_int_distribution<long> num(-999, 999);
    int done = 0;
    while (done < 40) {
        Rational zr = make_rational(num(rng), 4000), zi = make_rational(num(rng), 4000);
        GaussianRational z(zr, zi);
        if (cmp(z.norm2(), make_rational(1, 5)) > 0) continue; // |z| <= ~0.447 < 1/2
        GaussianRational one_minus = GaussianRational(1) - z;
        GaussianRational lam = z / (one_minus * one_minus * one_minus);
        CHECK(cardioid_contains(lam, 3).status == RegionStatus::Inside);
        ++done;
    }
    // far and non-real points are outside
    CHECK(cardioid_contains(GaussianRational(5, 5), 3).status == RegionStatus::Outside);
    CHECK(cardioid_contains(GaussianRational(Rational(0), Rational(3)), 3).status ==
          RegionStatus::Outside);
}
