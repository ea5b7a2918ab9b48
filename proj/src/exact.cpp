#include "hardcore/exact.hpp"

#include <cctype>

namespace hardcore {

std::uint64_t bit_size(const Integer& n) {
    if (n == 0) return 1;
    return mpz_sizeinbase(n.get_mpz_t(), 2) + 1;
}

std::uint64_t bit_size(const Rational& q) {
    return bit_size(Integer(q.get_num())) + bit_size(Integer(q.get_den()));
}

SizeMeasure bit_size(const GaussianRational& x) {
    return {bit_size(x.re) + bit_size(x.im)};
}

Rational make_rational(Integer num, Integer den) {
    if (den == 0) throw ConstructionError("rational with zero denominator");
    Rational q(std::move(num), std::move(den));
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::optional<Rational> sqrt_exact(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Rational(0);
    Integer num = q.get_num(), den = q.get_den();
    if (mpz_perfect_square_p(num.get_mpz_t()) == 0) return std::nullopt;
    if (mpz_perfect_square_p(den.get_mpz_t()) == 0) return std::nullopt;
    Integer rn, rd;
    mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
    return make_rational(rn, rd);
}

std::optional<GaussianRational> sqrt_exact(const GaussianRational& x) {
    if (x.is_zero()) return GaussianRational();
    if (x.im == 0) {
        if (x.re > 0) {
            auto r = sqrt_exact(x.re);
            if (!r) return std::nullopt;
            return GaussianRational(*r, Rational(0));
        }
        auto r = sqrt_exact(Rational(-x.re));
        if (!r) return std::nullopt;
        return GaussianRational(Rational(0), *r);
    }
    // (a+bi)^2 = x: a^2 = (|x|+re)/2, b = im/(2a); needs |x| in Q.
    auto len = sqrt_exact(x.norm2());
    if (!len) return std::nullopt;
    auto a2 = Rational((*len + x.re) / 2);
    auto a = sqrt_exact(a2);
    if (!a || *a == 0) return std::nullopt;
    Rational b = x.im / (2 * (*a));
    GaussianRational root(*a, b);
    if (!(root * root == x)) return std::nullopt;
    if (root.re < 0 || (root.re == 0 && root.im < 0)) root = -root;
    return root;
}

std::string to_string(const GaussianRational& x) {
    if (x.im == 0) return to_string(x.re);
    std::string im_part = to_string(Rational(abs(x.im))) + "i";
    std::string sign = x.im < 0 ? "-" : "+";
    if (x.re == 0) return (x.im < 0 ? "-" : "") + im_part;
    return to_string(x.re) + sign + im_part;
}

namespace {

struct Cursor {
    const std::string& s;
    size_t i = 0;
    bool done() const { return i >= s.size(); }
    char peek() const { return done() ? '\0' : s[i]; }
    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
};

// digits only; signs are handled by the callers
Integer parse_unsigned_integer(Cursor& c) {
    size_t start = c.i;
    while (!c.done() && std::isdigit(static_cast<unsigned char>(c.peek()))) ++c.i;
    if (c.i == start) throw ParseError("expected digits at position " + std::to_string(start));
    return Integer(c.s.substr(start, c.i - start));
}

int parse_sign(Cursor& c) {
    if (c.peek() == '+') { ++c.i; return 1; }
    if (c.peek() == '-') { ++c.i; return -1; }
    return 1;
}

// term := rational 'i'? | 'i', with the sign already consumed.
// Returns (value, is_imaginary).
std::pair<Rational, bool> parse_term(Cursor& c, int sign) {
    if (c.peek() == 'i') {
        ++c.i;
        return {Rational(sign), true};
    }
    Integer num = sign * parse_unsigned_integer(c);
    Rational q(num);
    if (c.peek() == '/') {
        ++c.i;
        Integer den = parse_unsigned_integer(c);
        if (den == 0) throw ParseError("zero denominator");
        q = make_rational(num, den);
    }
    if (c.peek() == 'i') {
        ++c.i;
        return {q, true};
    }
    return {q, false};
}

} // namespace

GaussianRational parse_gaussian(const std::string& s) {
    Cursor c{s};
    c.skip_ws();
    if (c.done()) throw ParseError("empty Gaussian rational");
    GaussianRational out;
    bool have_re = false, have_im = false;
    auto store = [&](std::pair<Rational, bool> term) {
        auto& [v, imag] = term;
        if ((imag && have_im) || (!imag && have_re))
            throw ParseError("duplicate real or imaginary part in \"" + s + "\"");
        (imag ? out.im : out.re) = v;
        (imag ? have_im : have_re) = true;
    };
    int sign = parse_sign(c);
    c.skip_ws();
    store(parse_term(c, sign));
    c.skip_ws();
    if (!c.done()) {
        if (c.peek() != '+' && c.peek() != '-')
            throw ParseError("unexpected character '" + std::string(1, c.peek()) + "' in \"" + s + "\"");
        sign = parse_sign(c);
        c.skip_ws();
        store(parse_term(c, sign));
        c.skip_ws();
        if (!c.done()) throw ParseError("trailing characters in \"" + s + "\"");
    }
    return out;
}

Rational rational_from_string(const std::string& s) {
    GaussianRational g = parse_gaussian(s);
    if (g.im != 0) throw ParseError("expected a real rational, got \"" + s + "\"");
    return g.re;
}

bool value_less(const GaussianRational& a, const GaussianRational& b) {
    int c = cmp(a.re, b.re);
    if (c != 0) return c < 0;
    return cmp(a.im, b.im) < 0;
}

std::string value_key(const GaussianRational& x) {
    return to_string(x);
}

} // namespace hardcore
