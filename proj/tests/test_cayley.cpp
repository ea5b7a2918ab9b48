#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "hardcore/cayley.hpp"
#include "hardcore/graph.hpp"
#include "hardcore/regions.hpp"

using namespace hardcore;

namespace {

std::mt19937_64 rng(31337);

Rational rand_rational(int num_range = 12, int den_range = 7) {
    std::uniform_int_distribution<long> num(-num_range, num_range);
    std::uniform_int_distribution<long> den(1, den_range);
    return make_rational(Integer(num(rng)), Integer(den(rng)));
}

// explicit Cayley tree of depth n, down-degree d, rooted at the apex
RootedGraph cayley_tree(int d, int n) {
    RootedGraph g;
    g.delta = d + 1;
    g.root = 0;
    g.vertex_count = 1;
    std::vector<int> frontier{0};
    for (int level = 0; level < n; ++level) {
        std::vector<int> next;
        for (int v : frontier)
            for (int c = 0; c < d; ++c) {
                int u = g.vertex_count++;
                g.edges.push_back({v, u});
                next.push_back(u);
            }
        frontier = std::move(next);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.validate();
    return g;
}

} // namespace

TEST_CASE("cayley ratio examples") {
    GaussianRational lam(rand_rational(), rand_rational());
    SpherePoint r0 = cayley_ratio(lam, 2, 0);
    REQUIRE(r0.is_finite());
    CHECK(r0.v == lam);
    GaussianRational den = (GaussianRational(1) + lam) * (GaussianRational(1) + lam);
    if (!den.is_zero()) {
        SpherePoint r1 = cayley_ratio(lam, 2, 1);
        REQUIRE(r1.is_finite());
        CHECK(r1.v == lam / den);
    }
}

TEST_CASE("cayley ratio agrees with tree_partition on explicit Cayley trees") {
    for (int d = 1; d <= 3; ++d) {
        for (int n = 0; n <= (d == 3 ? 3 : 4); ++n) {
            RootedGraph t = cayley_tree(d, n);
            for (int trial = 0; trial < 20; ++trial) {
                GaussianRational lam(rand_rational(), rand_rational());
                PartitionPair p = tree_partition(t, lam);
                SpherePoint r = cayley_ratio(lam, d, n);
                RatioValue rv = ratio_of(p);
                if (rv.is_finite()) {
                    REQUIRE(r.is_finite());
                    CHECK(r.v == rv.value);
                } else if (rv.kind == RatioValue::Kind::Infinite) {
                    CHECK(!r.is_finite());
                }
            }
        }
    }
}

TEST_CASE("functional equation R_{n+1} = f(R_n) exactly") {
    auto check_chain = [](const GaussianRational& lam, int d, int max_n) {
        SpherePoint prev = cayley_ratio(lam, d, 0);
        for (int n = 1; n <= max_n; ++n) {
            SpherePoint cur = cayley_ratio(lam, d, n);
            SpherePoint expect;
            if (!prev.is_finite()) expect = SpherePoint(GaussianRational(0));
            else {
                GaussianRational w = GaussianRational(1) + prev.v;
                if (w.is_zero()) expect = SpherePoint::inf();
                else {
                    GaussianRational p(1);
                    for (int i = 0; i < d; ++i) p = p * w;
                    expect = SpherePoint(lam / p);
                }
            }
            CHECK(cur == expect);
            prev = cur;
        }
    };
    // d = 1 grows linearly in bit size: the full n <= 50 is exact and cheap
    check_chain(GaussianRational(make_rational(3, 7), make_rational(-2, 5)), 1, 50);
    // d >= 2 doubles bit sizes per level; generic lambda up to n = 13,
    // plus periodic orbits (exactly representable forever) up to n = 50
    check_chain(GaussianRational(make_rational(3, 7), make_rational(-2, 5)), 2, 13);
    check_chain(GaussianRational(make_rational(-1, 2), Rational(0)), 2, 50);
    check_chain(GaussianRational(-1, 0), 2, 50);
}

TEST_CASE("pole bookkeeping: -1 -> inf -> 0 and the orbit is periodic") {
    // lambda = -1, d = 2: f(0) = -1, f(-1) = inf, f(inf) = 0, then repeats
    GaussianRational lam(-1, 0);
    CHECK(cayley_ratio(lam, 2, 0) == SpherePoint(GaussianRational(-1, 0)));
    CHECK(cayley_ratio(lam, 2, 1) == SpherePoint::inf());
    CHECK(cayley_ratio(lam, 2, 2) == SpherePoint(GaussianRational(0)));
    CHECK(cayley_ratio(lam, 2, 3) == SpherePoint(GaussianRational(-1, 0)));
    CHECK(cayley_ratio(lam, 2, 4) == SpherePoint::inf());
    CHECK(cayley_ratio(lam, 2, 5) == SpherePoint(GaussianRational(0)));
}

TEST_CASE("cayley zero condition") {
    CHECK(cayley_zero_condition(GaussianRational(-1, 0), 2, 0));
    // n=1, d=2: zero iff lambda^2 + 3 lambda + 1 = 0; rational lambda never qualifies
    GaussianRational probe(make_rational(-1, 2), Rational(0));
    GaussianRational val = probe * probe + GaussianRational(3) * probe + GaussianRational(1);
    CHECK(!val.is_zero());
    CHECK(!cayley_zero_condition(probe, 2, 1));
    // inside the Shearer disk the condition is always false
    GaussianRational small(make_rational(1, 12), make_rational(1, 17));
    REQUIRE(shearer_contains(small, 3).status == RegionStatus::Inside);
    for (int n = 0; n <= 6; ++n) CHECK(!cayley_zero_condition(small, 2, n));
    CHECK_THROWS_AS(cayley_zero_condition(GaussianRational(0), 2, 1), DomainError);
}

TEST_CASE("cayley polynomials match the partition pair of the explicit tree") {
    for (int d = 2; d <= 3; ++d) {
        for (int n = 0; n <= 3; ++n) {
            CayleyPolynomials pol = cayley_polynomials(d, n);
            RootedGraph t = cayley_tree(d, n);
            for (int trial = 0; trial < 5; ++trial) {
                GaussianRational lam(rand_rational(), rand_rational());
                PartitionPair p = tree_partition(t, lam);
                CHECK(poly_eval(pol.z_in, lam) == p.z_in);
                CHECK(poly_eval(pol.z_out, lam) == p.z_out);
            }
        }
    }
    CHECK_THROWS_AS(cayley_polynomials(2, 9), DomainError);
}

TEST_CASE("cayley zeros: d=2 small depths") {
    auto z0 = cayley_zeros(2, 0, 12);
    REQUIRE(z0.size() == 1);
    CHECK(abs(z0[0].z - MPComplex(-1.0)) < MPFloat(1e-40));

    auto z1 = cayley_zeros(2, 1, 12);
    REQUIRE(z1.size() == 2);
    // (-3 +- sqrt 5)/2
    MPFloat s5 = sqrt(MPFloat(5));
    CHECK(abs(z1[0].z - MPComplex((-3 - s5) / 2, MPFloat(0))) < MPFloat(1e-12));
    CHECK(abs(z1[1].z - MPComplex((-3 + s5) / 2, MPFloat(0))) < MPFloat(1e-12));
    for (auto& z : z1) CHECK(z.residual_bound < MPFloat(1e-12));
}

TEST_CASE("cayley zeros lie outside the open Shearer disk and close under conjugation") {
    for (int d = 2; d <= 3; ++d) {
        for (int n = 0; n <= 3; ++n) {
            auto zeros = cayley_zeros(d, n, 10);
            Rational R = shearer_radius(d + 1);
            MPFloat R_mp = to_mp(R);
            for (const auto& z : zeros) {
                CHECK(abs(z.z) > R_mp - z.root_radius - MPFloat(1e-30));
                // conjugate present
                bool found = false;
                for (const auto& w : zeros)
                    if (abs(w.z - z.z.conj()) < MPFloat(1e-25)) { found = true; break; }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("activity field: determinism, symmetry") {
    // 10/128 is dyadic, so the pixel grid is exactly conjugation symmetric
    ActivityField f1 = spherical_derivative_field(-5, -5, 5, 5, 128, 128, 2, 60, 1);
    ActivityField f4 = spherical_derivative_field(-5, -5, 5, 5, 128, 128, 2, 60, 4);
    REQUIRE(f1.sigma.size() == f4.sigma.size());
    for (size_t i = 0; i < f1.sigma.size(); ++i) {
        // bitwise identical regardless of thread count
        CHECK(std::memcmp(&f1.sigma[i], &f4.sigma[i], sizeof(double)) == 0);
    }
    // conjugation symmetry: row y vs row H-1-y bitwise
    for (int y = 0; y < f1.height; ++y)
        for (int x = 0; x < f1.width; ++x) {
            double a = f1.at(x, y), b = f1.at(x, f1.height - 1 - y);
            CHECK(std::memcmp(&a, &b, sizeof(double)) == 0);
        }
    // PGM writer shape
    std::string pgm = field_to_pgm(f1, 10.0);
    CHECK(pgm.substr(0, 3) == "P5\n");
    CHECK(pgm.size() > static_cast<size_t>(128 * 128));
}

TEST_CASE("activity sigma: bounded in the Shearer disk, large near the cardioid cusp") {
    // Normality (Marty) bounds the spherical derivative uniformly on the
    // passive Shearer disk; activity shows as blow-up near the boundary of
    // Lambda_3.  At lambda = 0 the recursion gives sigma = 1 exactly.
    ActivityField origin = spherical_derivative_field(0, 0, 1e-9, 1e-9, 1, 1, 2, 120, 1);
    CHECK(origin.at(0, 0) == doctest::Approx(1.0).epsilon(1e-6));
    Rational R = shearer_radius(3);
    double Rd = mpq_get_d(R.get_mpq_t());
    std::uniform_real_distribution<double> u(-Rd * 0.9, Rd * 0.9);
    double interior_max = 0;
    int done = 0;
    while (done < 30) {
        double x = u(rng), y = u(rng);
        if (x * x + y * y >= Rd * Rd * 0.81) continue;
        ActivityField f = spherical_derivative_field(x, y, x + 1e-9, y + 1e-9, 1, 1, 2, 120, 1);
        CHECK(std::isfinite(f.at(0, 0)));
        CHECK(f.at(0, 0) < 8.0);
        interior_max = std::max(interior_max, f.at(0, 0));
        ++done;
    }
    // activity accumulates on the boundary: sample near lambda*(3) = -4/27
    double boundary_max = 0;
    ActivityField near_cusp =
        spherical_derivative_field(-4.0 / 27 - 0.01, -0.01, -4.0 / 27 + 0.01, 0.01, 24, 24, 2, 120, 1);
    for (double s : near_cusp.sigma)
        if (std::isfinite(s)) boundary_max = std::max(boundary_max, s);
        else boundary_max = 1e300;
    CHECK(boundary_max > 100 * interior_max);
}

TEST_CASE("cardioid boundary csv") {
    std::string csv = cardioid_boundary_csv(3, 64);
    // header + 64 rows
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
    CHECK(csv.rfind("theta,re,im\n", 0) == 0);
    // theta = 0 row: z = 1/2, lambda = (1/2)/(1/2)^3 = 4
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::getline(in, line);
    double th, re, im;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf", &th, &re, &im) == 3);
    CHECK(th == 0.0);
    CHECK(std::abs(re - 4.0) < 1e-12);
    CHECK(std::abs(im) < 1e-12);
}
