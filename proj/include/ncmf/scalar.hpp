#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace ncmf {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

/// Which exact coefficient field we compute over: the rationals or a prime
/// field F_p.  Everything downstream is parameterized by a FieldSpec value.
struct FieldSpec {
    enum class Kind { Rationals, PrimeField };

    Kind kind = Kind::Rationals;
    std::int64_t p = 0; // modulus, PrimeField only

    static FieldSpec rationals() { return FieldSpec{Kind::Rationals, 0}; }

    static FieldSpec prime_field(std::int64_t p) {
        if (p < 2 || !is_prime(p))
            throw InputError("prime field modulus must be prime, got " + std::to_string(p));
        return FieldSpec{Kind::PrimeField, p};
    }

    bool is_rationals() const { return kind == Kind::Rationals; }

    bool operator==(const FieldSpec& o) const { return kind == o.kind && p == o.p; }
    bool operator!=(const FieldSpec& o) const { return !(*this == o); }

    static bool is_prime(std::int64_t n) {
        if (n < 2) return false;
        for (std::int64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }
};

/// An exact field element: a rational in lowest terms, or a residue in [0, p).
/// Elements carry their FieldSpec; mixing fields raises MixedFields.
class FieldElem {
public:
    FieldElem() : spec_(FieldSpec::rationals()), q_(0), r_(0) {}

    static FieldElem zero(const FieldSpec& spec) { return from_integer(spec, 0); }
    static FieldElem one(const FieldSpec& spec) { return from_integer(spec, 1); }

    static FieldElem from_integer(const FieldSpec& spec, std::int64_t n) {
        FieldElem e;
        e.spec_ = spec;
        if (spec.is_rationals())
            e.q_ = n;
        else
            e.r_ = mod(n, spec.p);
        return e;
    }

    static FieldElem rational(const BigRational& q) {
        FieldElem e;
        e.spec_ = FieldSpec::rationals();
        e.q_ = q;
        return e;
    }

    static FieldElem rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw DivisionByZero();
        return rational(BigRational(num, den));
    }

    static FieldElem residue(const FieldSpec& spec, std::int64_t value) {
        if (spec.is_rationals()) throw InputError("residue() requires a prime field");
        return from_integer(spec, value);
    }

    const FieldSpec& spec() const { return spec_; }
    bool is_zero() const { return spec_.is_rationals() ? q_.is_zero() : r_ == 0; }
    bool is_one() const { return spec_.is_rationals() ? q_ == 1 : r_ == 1; }

    const BigRational& rational_value() const { return q_; }
    std::int64_t residue_value() const { return r_; }

    FieldElem operator+(const FieldElem& o) const {
        check_same(o);
        FieldElem e(*this);
        if (spec_.is_rationals()) e.q_ += o.q_;
        else e.r_ = mod(r_ + o.r_, spec_.p);
        return e;
    }

    FieldElem operator-(const FieldElem& o) const {
        check_same(o);
        FieldElem e(*this);
        if (spec_.is_rationals()) e.q_ -= o.q_;
        else e.r_ = mod(r_ - o.r_, spec_.p);
        return e;
    }

    FieldElem operator*(const FieldElem& o) const {
        check_same(o);
        FieldElem e(*this);
        if (spec_.is_rationals()) e.q_ *= o.q_;
        else e.r_ = mulmod(r_, o.r_, spec_.p);
        return e;
    }

    FieldElem operator/(const FieldElem& o) const { return *this * o.inverse(); }

    FieldElem operator-() const {
        FieldElem e(*this);
        if (spec_.is_rationals()) e.q_ = -e.q_;
        else e.r_ = mod(-e.r_, spec_.p);
        return e;
    }

    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
    FieldElem& operator/=(const FieldElem& o) { return *this = *this / o; }

    FieldElem inverse() const {
        if (is_zero()) throw DivisionByZero();
        FieldElem e(*this);
        if (spec_.is_rationals()) {
            e.q_ = 1 / q_;
        } else {
            // extended Euclid on (r, p)
            std::int64_t t = 0, newt = 1, rr = spec_.p, newr = r_;
            while (newr != 0) {
                std::int64_t quot = rr / newr;
                std::int64_t tmp = t - quot * newt;
                t = newt; newt = tmp;
                tmp = rr - quot * newr;
                rr = newr; newr = tmp;
            }
            e.r_ = mod(t, spec_.p);
        }
        return e;
    }

    FieldElem pow(std::int64_t n) const {
        if (n < 0) return inverse().pow(-n);
        FieldElem acc = one(spec_), base = *this;
        while (n > 0) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

    bool operator==(const FieldElem& o) const {
        check_same(o);
        return spec_.is_rationals() ? q_ == o.q_ : r_ == o.r_;
    }
    bool operator!=(const FieldElem& o) const { return !(*this == o); }

    /// Total order used only for canonical/deterministic choices.
    bool canonical_less(const FieldElem& o) const {
        check_same(o);
        return spec_.is_rationals() ? q_ < o.q_ : r_ < o.r_;
    }

    /// Text form: `num/den` (or plain integer) over Q, residue over F_p.
    std::string str() const {
        if (spec_.is_rationals()) {
            if (boost::multiprecision::denominator(q_) == 1)
                return boost::multiprecision::numerator(q_).str();
            return boost::multiprecision::numerator(q_).str() + "/" +
                   boost::multiprecision::denominator(q_).str();
        }
        return std::to_string(r_);
    }

    /// Parses a field literal per spec(): `a/b` or integer over Q, integer
    /// (any sign, reduced mod p) over F_p.
    static FieldElem parse(const FieldSpec& spec, const std::string& text);

private:
    FieldSpec spec_;
    BigRational q_;        // Rationals payload
    std::int64_t r_ = 0;   // PrimeField payload, 0 <= r < p

    void check_same(const FieldElem& o) const {
        if (spec_ != o.spec_) throw MixedFields();
    }

    static std::int64_t mod(std::int64_t a, std::int64_t p) {
        std::int64_t r = a % p;
        return r < 0 ? r + p : r;
    }

    static std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t p) {
        return static_cast<std::int64_t>((__int128)a * b % p);
    }
};

inline FieldElem FieldElem::parse(const FieldSpec& spec, const std::string& text) {
    std::size_t i = 0;
    auto fail = [&](const std::string& msg) -> void { throw SyntaxError(i, msg); };
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
        neg = text[i] == '-';
        ++i;
    }
    std::size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == start) fail("expected digits in field literal");
    BigInt num(text.substr(start, i - start));
    BigInt den = 1;
    if (i < text.size() && text[i] == '/') {
        if (!spec.is_rationals()) fail("'/' literals are only valid over Q");
        ++i;
        std::size_t dstart = i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
        if (i == dstart) fail("expected denominator digits");
        den = BigInt(text.substr(dstart, i - dstart));
        if (den == 0) throw DivisionByZero();
    }
    if (i != text.size()) fail("trailing characters in field literal");
    if (neg) num = -num;
    if (spec.is_rationals()) return FieldElem::rational(BigRational(num, den));
    BigInt r = num % spec.p;
    if (r < 0) r += spec.p;
    return FieldElem::from_integer(spec, r.convert_to<std::int64_t>());
}

/// y with y^n = x if one exists in the field.  Over F_p the smaller of the
/// candidate residues is returned; over Q numerator and denominator must be
/// perfect n-th powers (sign handled for odd n).
inline std::optional<FieldElem> nth_root(const FieldElem& x, std::int64_t n) {
    if (n <= 0) throw InputError("nth_root requires n >= 1");
    if (x.is_zero()) throw InputError("nth_root requires a nonzero element");
    const FieldSpec& spec = x.spec();
    if (!spec.is_rationals()) {
        for (std::int64_t y = 1; y < spec.p; ++y) {
            if (FieldElem::from_integer(spec, y).pow(n) == x) return FieldElem::from_integer(spec, y);
        }
        return std::nullopt;
    }
    auto int_root = [](const BigInt& v, std::int64_t n) -> std::optional<BigInt> {
        if (v < 0) return std::nullopt;
        if (v == 0 || v == 1) return v;
        BigInt lo = 1, hi = 1;
        while (boost::multiprecision::pow(hi, static_cast<unsigned>(n)) < v) hi <<= 1;
        while (lo < hi) {
            BigInt mid = (lo + hi) / 2;
            if (boost::multiprecision::pow(mid, static_cast<unsigned>(n)) < v) lo = mid + 1;
            else hi = mid;
        }
        if (boost::multiprecision::pow(lo, static_cast<unsigned>(n)) == v) return lo;
        return std::nullopt;
    };
    BigInt num = boost::multiprecision::numerator(x.rational_value());
    BigInt den = boost::multiprecision::denominator(x.rational_value());
    bool negative = num < 0;
    if (negative && n % 2 == 0) return std::nullopt;
    auto rn = int_root(negative ? BigInt(-num) : num, n);
    auto rd = int_root(den, n);
    if (!rn || !rd) return std::nullopt;
    BigInt rnum = negative ? BigInt(-*rn) : *rn;
    return FieldElem::rational(BigRational(rnum, *rd));
}

struct MultiplicativeOrder {
    bool finite = false;
    std::int64_t order = 0; // valid when finite
};

/// Least m >= 1 with x^m = 1; infinite over Q unless x is 1 or -1.
inline MultiplicativeOrder multiplicative_order(const FieldElem& x) {
    if (x.is_zero()) throw InputError("multiplicative_order requires a nonzero element");
    const FieldSpec& spec = x.spec();
    if (spec.is_rationals()) {
        if (x.is_one()) return {true, 1};
        if (x == -FieldElem::one(spec)) return {true, 2};
        return {false, 0};
    }
    FieldElem acc = x;
    for (std::int64_t m = 1; m < spec.p; ++m) {
        if (acc.is_one()) return {true, m};
        acc *= x;
    }
    throw DomainError("no multiplicative order found below p; modulus not prime?");
}

/// splitmix64; used to derive independent deterministic streams per
/// (seed, l, m, trial) so period trials are reproducible.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0,
                              std::uint64_t c = 0) {
    std::uint64_t x = splitmix64(seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)));
    x = splitmix64(x ^ (0xc2b2ae3d27d4eb4fULL * (b + 1)));
    return splitmix64(x ^ (0x165667b19e3779f9ULL * (c + 1)));
}

/// Small deterministic RNG for sampling field elements.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(splitmix64(seed ^ 0x8f1bbcdcbfa53e0bULL)) {}

    std::uint64_t next() {
        state_ += 0x9e3779b97f4a7c15ULL;
        return splitmix64(state_);
    }

    std::int64_t next_in(std::int64_t lo, std::int64_t hi) { // inclusive
        return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    FieldElem field_elem(const FieldSpec& spec) {
        if (spec.is_rationals()) return FieldElem::from_integer(spec, next_in(-9, 9));
        return FieldElem::from_integer(spec, next_in(0, spec.p - 1));
    }

    FieldElem nonzero_field_elem(const FieldSpec& spec) {
        for (;;) {
            FieldElem e = field_elem(spec);
            if (!e.is_zero()) return e;
        }
    }

private:
    std::uint64_t state_;
};

} // namespace ncmf
