#pragma once

// Dense polynomials over Q[i] and a high-precision Aberth-Ehrlich root
// finder with a-posteriori inclusion radii (Durand-Kerner style bound
// n|p(z)| / (|lead| * prod |z - z_j|), each disk contains a root).

#include <vector>

#include "hardcore/exact.hpp"
#include "hardcore/mp.hpp"

namespace hardcore {

// Coefficients ascending: p(z) = sum c[k] z^k; normalized (no zero lead).
struct Poly {
    std::vector<GaussianRational> c;

    void normalize();
    int degree() const { return static_cast<int>(c.size()) - 1; }
    bool is_zero() const { return c.empty(); }
};

Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_pow(const Poly& a, int e);
Poly poly_derivative(const Poly& a);
GaussianRational poly_eval(const Poly& p, const GaussianRational& z);
MPComplex poly_eval_mp(const Poly& p, const MPComplex& z);

// Exact synthetic division by (z - r); returns quotient iff remainder is 0.
bool poly_divide_root(const Poly& p, const GaussianRational& r, Poly& quotient);

struct CertifiedRoot {
    MPComplex z;
    MPFloat radius; // disk |w - z| <= radius contains a true root
};

// All complex roots; throws InternalError if the iteration fails to settle.
std::vector<CertifiedRoot> aberth_roots(const Poly& p, int max_iter = 400);

} // namespace hardcore
