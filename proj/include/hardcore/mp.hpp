#pragma once

// High-precision floating support: MPFR reals (~259 bits) and a minimal
// complex type on top.  Used where exact values do not exist (irrational
// fixed points, arguments of complex numbers); every consumer folds an
// explicit margin into its comparisons.

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

#include "hardcore/exact.hpp"

namespace hardcore {

inline constexpr unsigned kMPBits = 259; // 78 decimal digits
using MPFloat = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<78>>;

struct MPComplex {
    MPFloat re, im;

    MPComplex() : re(0), im(0) {}
    MPComplex(MPFloat r) : re(std::move(r)), im(0) {}
    MPComplex(MPFloat r, MPFloat i) : re(std::move(r)), im(std::move(i)) {}
    MPComplex(double r, double i = 0.0) : re(r), im(i) {}

    friend MPComplex operator+(const MPComplex& a, const MPComplex& b) { return {a.re + b.re, a.im + b.im}; }
    friend MPComplex operator-(const MPComplex& a, const MPComplex& b) { return {a.re - b.re, a.im - b.im}; }
    friend MPComplex operator-(const MPComplex& a) { return {-a.re, -a.im}; }
    friend MPComplex operator*(const MPComplex& a, const MPComplex& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend MPComplex operator/(const MPComplex& a, const MPComplex& b) {
        MPFloat n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    MPComplex conj() const { return {re, -im}; }
};

inline MPFloat norm2(const MPComplex& z) { return z.re * z.re + z.im * z.im; }
inline MPFloat abs(const MPComplex& z) { return sqrt(norm2(z)); }
inline MPFloat arg(const MPComplex& z) { return atan2(z.im, z.re); }

inline MPComplex sqrt(const MPComplex& z) {
    if (z.im == 0 && z.re >= 0) return {sqrt(z.re), MPFloat(0)};
    MPFloat m = abs(z);
    MPFloat x = sqrt((m + z.re) / 2);
    MPFloat y = sqrt((m - z.re) / 2);
    if (z.im < 0) y = -y;
    return {x, y};
}

inline MPComplex polar(const MPFloat& mod, const MPFloat& angle) {
    return {mod * cos(angle), mod * sin(angle)};
}

inline MPFloat to_mp(const Rational& q) {
    return MPFloat(q.get_num().get_str()) / MPFloat(q.get_den().get_str());
}
inline MPComplex to_mp(const GaussianRational& x) { return {to_mp(x.re), to_mp(x.im)}; }

inline double to_double(const MPFloat& x) { return x.convert_to<double>(); }

// Nearest rational with denominator 2^bits (exact dyadic rounding).
Rational dyadic_round(const MPFloat& x, unsigned bits);
inline GaussianRational dyadic_round(const MPComplex& z, unsigned bits) {
    return {dyadic_round(z.re, bits), dyadic_round(z.im, bits)};
}

inline Rational dyadic_round(const MPFloat& x, unsigned bits) {
    MPFloat scaled = x * pow(MPFloat(2), static_cast<int>(bits));
    boost::multiprecision::mpz_int zi = boost::multiprecision::round(scaled).convert_to<boost::multiprecision::mpz_int>();
    Integer num(zi.str());
    Integer den = 1;
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), bits);
    return make_rational(num, den);
}

inline std::string to_decimal_string(const MPFloat& x, int digits) {
    return x.str(digits);
}

} // namespace hardcore
