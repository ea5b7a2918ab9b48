#pragma once

// Cayley-tree dynamics f_{lambda,d}(z) = lambda/(1+z)^d: exact ratios with
// the -1 -> inf -> 0 pole bookkeeping, exact zero polynomials with certified
// numeric roots, and the spherical-derivative activity field renderer.

#include <string>
#include <vector>

#include "hardcore/exact.hpp"
#include "hardcore/moebius.hpp"
#include "hardcore/polyroots.hpp"

namespace hardcore {

// Ratio of the depth-n Cayley tree with down-degree d: f_{lambda,d}^{n+1}(0).
SpherePoint cayley_ratio(const GaussianRational& lambda, int d, int n);

// Z_{T_n}(lambda) = 0 iff the ratio equals -1 (lambda != 0).
bool cayley_zero_condition(const GaussianRational& lambda, int d, int n);

// Exact (Z^in, Z^out) polynomials of T_n in the variable lambda.
// z_in(k+1) = lambda * z_out(k)^d, z_out(k+1) = (z_in(k)+z_out(k))^d.
struct CayleyPolynomials {
    Poly z_in, z_out;
    Poly z() const { return poly_add(z_in, z_out); }
};
CayleyPolynomials cayley_polynomials(int d, int n); // guard: n <= 8

struct CayleyZero {
    MPComplex z;
    MPFloat root_radius;    // certified inclusion radius from the root finder
    MPFloat residual_bound; // |Z_{T_n}(rationalized z)| upper bound, exact route
};

// All zeros of Z_{T_n}, residual-certified by exact evaluation of the tree
// recursion at a dyadic rationalization of each root.
std::vector<CayleyZero> cayley_zeros(int d, int n, int precision_digits);

struct ActivityField {
    double x0, y0, x1, y1;
    int width = 0, height = 0;
    int depth = 0, down_degree = 2;
    std::vector<double> sigma; // row-major, +infinity marks escaped pixels

    double& at(int x, int y) { return sigma[static_cast<size_t>(y) * width + x]; }
    double at(int x, int y) const { return sigma[static_cast<size_t>(y) * width + x]; }
};

// Per-pixel iteration of (R, dR/dlambda) in doubles; sigma = |R'|/(1+|R|^2).
// Deterministic for a fixed grid regardless of thread count.
ActivityField spherical_derivative_field(double x0, double y0, double x1, double y1,
                                         int width, int height, int d, int depth,
                                         int threads);

// Binary 8-bit PGM: 255 where sigma >= threshold (or escaped), else 0.
std::string field_to_pgm(const ActivityField& f, double threshold);

// Boundary polyline of Lambda_Delta via z = e^{i theta}/(Delta-1),
// lambda = z/(1-z)^Delta; CSV rows "theta,re,im".
std::string cardioid_boundary_csv(int delta, int samples);

} // namespace hardcore
