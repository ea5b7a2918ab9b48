#include "hardcore/polyroots.hpp"

#include <algorithm>

namespace hardcore {

void Poly::normalize() {
    while (!c.empty() && c.back().is_zero()) c.pop_back();
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    Poly out;
    out.c.assign(a.c.size() + b.c.size() - 1, GaussianRational(0));
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i].is_zero()) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            out.c[i + j] = out.c[i + j] + a.c[i] * b.c[j];
    }
    out.normalize();
    return out;
}

Poly poly_add(const Poly& a, const Poly& b) {
    Poly out;
    out.c.resize(std::max(a.c.size(), b.c.size()), GaussianRational(0));
    for (size_t i = 0; i < a.c.size(); ++i) out.c[i] = out.c[i] + a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
    out.normalize();
    return out;
}

Poly poly_pow(const Poly& a, int e) {
    Poly out;
    out.c = {GaussianRational(1)};
    Poly base = a;
    while (e > 0) {
        if (e & 1) out = poly_mul(out, base);
        e >>= 1;
        if (e) base = poly_mul(base, base);
    }
    return out;
}

Poly poly_derivative(const Poly& a) {
    Poly out;
    for (size_t i = 1; i < a.c.size(); ++i)
        out.c.push_back(GaussianRational(static_cast<long>(i)) * a.c[i]);
    out.normalize();
    return out;
}

GaussianRational poly_eval(const Poly& p, const GaussianRational& z) {
    GaussianRational acc(0);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * z + *it;
    return acc;
}

MPComplex poly_eval_mp(const Poly& p, const MPComplex& z) {
    MPComplex acc(0.0);
    for (auto it = p.c.rbegin(); it != p.c.rend(); ++it) acc = acc * z + to_mp(*it);
    return acc;
}

bool poly_divide_root(const Poly& p, const GaussianRational& r, Poly& quotient) {
    if (p.is_zero()) return false;
    std::vector<GaussianRational> q(p.c.size() - 1, GaussianRational(0));
    GaussianRational carry(0);
    for (int i = static_cast<int>(p.c.size()) - 1; i >= 1; --i) {
        carry = p.c[i] + carry * r;
        q[i - 1] = carry;
    }
    GaussianRational rem = p.c[0] + carry * r;
    if (!rem.is_zero()) return false;
    quotient.c = std::move(q);
    quotient.normalize();
    return true;
}

std::vector<CertifiedRoot> aberth_roots(const Poly& p, int max_iter) {
    const int n = p.degree();
    if (n < 1) throw DomainError("aberth_roots needs degree >= 1");
    std::vector<MPComplex> coeff;
    coeff.reserve(p.c.size());
    for (const auto& q : p.c) coeff.push_back(to_mp(q));
    const MPComplex lead = coeff.back();
    const MPFloat lead_abs = abs(lead);

    // Cauchy-style inclusion radius 1 + max |c_k / c_n|.
    MPFloat radius = 0;
    for (int k = 0; k < n; ++k) radius = std::max(radius, abs(coeff[k]) / lead_abs);
    radius += 1;

    std::vector<MPComplex> z(n);
    const MPFloat pi = 4 * atan(MPFloat(1));
    for (int k = 0; k < n; ++k) {
        MPFloat angle = (2 * pi * k) / n + MPFloat("0.3779134");
        z[k] = polar(radius * MPFloat("0.75"), angle);
    }

    auto eval_pair = [&](const MPComplex& x, MPComplex& val, MPComplex& der) {
        val = MPComplex(0.0);
        der = MPComplex(0.0);
        for (int k = n; k >= 0; --k) {
            der = der * x + val;
            val = val * x + coeff[k];
        }
    };

    // Multiple or clustered roots stagnate near 2^(-bits/m); the inclusion
    // radii below are certified a posteriori either way, so the loop just
    // runs until corrections are negligible or the budget ends.
    const MPFloat tol = pow(MPFloat(2), -static_cast<int>(kMPBits) + 20);
    bool settled = false;
    for (int iter = 0; iter < max_iter && !settled; ++iter) {
        settled = true;
        for (int k = 0; k < n; ++k) {
            MPComplex val, der;
            eval_pair(z[k], val, der);
            if (abs(val) == 0) continue;
            MPComplex newton = (norm2(der) == 0) ? MPComplex(0.0) : val / der;
            MPComplex sum(0.0);
            for (int j = 0; j < n; ++j) {
                if (j == k) continue;
                MPComplex diff = z[k] - z[j];
                if (norm2(diff) == 0) diff = MPComplex(tol, tol); // nudge collisions
                sum = sum + MPComplex(1.0) / diff;
            }
            MPComplex denom = MPComplex(1.0) - newton * sum;
            MPComplex w = (norm2(denom) == 0) ? newton : newton / denom;
            z[k] = z[k] - w;
            if (abs(w) > tol * (abs(z[k]) + 1)) settled = false;
        }
    }
    // inclusion radii; (1 + 2^-128) slack absorbs mpfr rounding
    std::vector<CertifiedRoot> out(n);
    const MPFloat slack = 1 + pow(MPFloat(2), -128);
    for (int k = 0; k < n; ++k) {
        MPFloat prod = 1;
        for (int j = 0; j < n; ++j)
            if (j != k) prod *= abs(z[k] - z[j]);
        MPFloat rad;
        if (prod == 0) rad = abs(poly_eval_mp(p, z[k])); // degenerate; huge
        else rad = n * abs(poly_eval_mp(p, z[k])) / (lead_abs * prod);
        out[k] = {z[k], rad * slack};
    }
    std::sort(out.begin(), out.end(), [](const CertifiedRoot& a, const CertifiedRoot& b) {
        if (a.z.re != b.z.re) return a.z.re < b.z.re;
        return a.z.im < b.z.im;
    });
    return out;
}

} // namespace hardcore
