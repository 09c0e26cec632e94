#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace emdut {

// Exact rational number in canonical form (den > 0, gcd(|num|, den) = 1).
// Values whose numerator and denominator fit in 63 bits live inline; anything
// larger is promoted to an mpq_class and demoted again once it fits.
class Rational {
public:
    Rational() noexcept = default;
    Rational(int v) noexcept : num_(v) {}
    Rational(long v) noexcept : num_(v) { guard_min(); }
    Rational(long long v) noexcept : num_(v) { guard_min(); }
    Rational(std::int64_t num, std::int64_t den);
    explicit Rational(const mpq_class& q) { assign(q); }
    explicit Rational(const mpz_class& z) { assign(mpq_class(z)); }

    Rational(const Rational& o) : num_(o.num_), den_(o.den_) {
        if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
    }
    Rational(Rational&&) noexcept = default;
    Rational& operator=(const Rational& o) {
        if (this != &o) {
            num_ = o.num_;
            den_ = o.den_;
            if (o.big_) {
                if (big_) *big_ = *o.big_;
                else big_ = std::make_unique<mpq_class>(*o.big_);
            } else {
                big_.reset();
            }
        }
        return *this;
    }
    Rational& operator=(Rational&&) noexcept = default;

    // Accepts "p", "p/q" and finite decimals such as "-0.25"; no exponents.
    static Rational parse(std::string_view text);

    bool is_small() const noexcept { return !big_; }
    bool is_integer() const noexcept { return big_ ? big_->get_den() == 1 : den_ == 1; }
    int sign() const noexcept {
        if (big_) return sgn(*big_);
        return (num_ > 0) - (num_ < 0);
    }
    bool is_zero() const noexcept { return !big_ && num_ == 0; }

    mpq_class to_mpq() const;
    mpz_class numerator() const;
    mpz_class denominator() const;
    std::string str() const;
    double to_double() const;

    // Floor and ceiling to an integer-valued Rational.
    Rational floor() const;
    Rational ceil() const;

    Rational operator-() const;
    Rational& operator+=(const Rational& o);
    Rational& operator-=(const Rational& o);
    Rational& operator*=(const Rational& o);
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

    friend int compare(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        if (!a.big_ && !b.big_) return a.num_ == b.num_ && a.den_ == b.den_;
        return compare(a, b) == 0;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        int c = compare(a, b);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    std::size_t hash() const;

private:
    void assign(const mpq_class& q);
    void set_i128(__int128 num, __int128 den);  // den > 0, not necessarily reduced
    void guard_min() {
        // INT64_MIN has no inline negation; keep it in the big representation.
        if (num_ == INT64_MIN) {
            big_ = std::make_unique<mpq_class>(mpz_class(0));
            mpz_set_si(big_->get_num_mpz_t(), INT64_MIN);
        }
    }
    void slow_add(const Rational& o, bool subtract);
    void slow_mul(const Rational& o, bool divide);

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
    std::unique_ptr<mpq_class> big_;
};

inline Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }
inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

std::ostream& operator<<(std::ostream& os, const Rational& x);

}  // namespace emdut

template <>
struct std::hash<emdut::Rational> {
    std::size_t operator()(const emdut::Rational& x) const { return x.hash(); }
};
