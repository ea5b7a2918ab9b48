#pragma once

// Exact arithmetic over Q and Q[i].  Every value is kept in canonical form
// (reduced, positive denominator), so equality is plain componentwise
// comparison and hashing is stable.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

#include "hardcore/errors.hpp"

namespace hardcore {

using Integer = mpz_class;
using Rational = mpq_class; // canonical: gcd(num,den)=1, den>0

struct SizeMeasure {
    std::uint64_t bits = 0;
    SizeMeasure operator+(SizeMeasure o) const { return {bits + o.bits}; }
};

// Bit size of an integer: bit length of |n| plus one sign bit; 0 takes one bit.
std::uint64_t bit_size(const Integer& n);
std::uint64_t bit_size(const Rational& q);

Rational make_rational(Integer num, Integer den);
Rational rational_from_string(const std::string& s); // "n" or "n/d"
std::string to_string(const Rational& q);

// sqrt in Q when it exists.
std::optional<Rational> sqrt_exact(const Rational& q);

struct GaussianRational {
    Rational re, im;

    GaussianRational() : re(0), im(0) {}
    GaussianRational(Rational r) : re(std::move(r)), im(0) {}
    GaussianRational(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}
    GaussianRational(long r, long i = 0) : re(r), im(i) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_real() const { return im == 0; }

    GaussianRational conj() const { return {re, -im}; }
    Rational norm2() const { return re * re + im * im; }

    friend GaussianRational operator+(const GaussianRational& a, const GaussianRational& b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a, const GaussianRational& b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend GaussianRational operator-(const GaussianRational& a) { return {-a.re, -a.im}; }
    friend GaussianRational operator*(const GaussianRational& a, const GaussianRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend GaussianRational operator/(const GaussianRational& a, const GaussianRational& b) {
        Rational n = b.norm2();
        if (n == 0) throw DomainError("division by zero in Q[i]");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const GaussianRational& a, const GaussianRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const GaussianRational& a, const GaussianRational& b) { return !(a == b); }
};

SizeMeasure bit_size(const GaussianRational& x);

// sqrt in Q[i] when it exists; returns the root with re > 0, or re == 0 and im >= 0.
std::optional<GaussianRational> sqrt_exact(const GaussianRational& x);

// Textual format, bidirectional: `a/b+c/di` with optional signs, `/1`
// omissible, pure-real and pure-imaginary shorthands accepted
// ("-4/27", "3i", "i").  parse o print is the identity.
GaussianRational parse_gaussian(const std::string& s);
std::string to_string(const GaussianRational& x);

// Total order (re, then im) for deterministic containers; not a field order.
bool value_less(const GaussianRational& a, const GaussianRational& b);

// Key usable in hash maps.
std::string value_key(const GaussianRational& x);

} // namespace hardcore
