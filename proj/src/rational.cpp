#include "emdut/rational.hpp"

#include <ostream>
#include <stdexcept>

namespace emdut {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

u128 uabs(i128 v) { return v < 0 ? u128(0) - u128(v) : u128(v); }

int ctz128(u128 v) {
    auto lo = static_cast<std::uint64_t>(v);
    if (lo) return __builtin_ctzll(lo);
    return 64 + __builtin_ctzll(static_cast<std::uint64_t>(v >> 64));
}

u128 gcd128(u128 a, u128 b) {
    if (a == 0) return b;
    if (b == 0) return a;
    int shift = ctz128(a | b);
    a >>= ctz128(a);
    do {
        b >>= ctz128(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) {
    if (a == 0) return b;
    if (b == 0) return a;
    int shift = __builtin_ctzll(a | b);
    a >>= __builtin_ctzll(a);
    do {
        b >>= __builtin_ctzll(b);
        if (a > b) std::swap(a, b);
        b -= a;
    } while (b != 0);
    return a << shift;
}

void set_mpz(mpz_t out, i128 v) {
    u128 m = uabs(v);
    mpz_set_ui(out, static_cast<unsigned long>(m >> 64));
    mpz_mul_2exp(out, out, 64);
    mpz_add_ui(out, out, static_cast<unsigned long>(static_cast<std::uint64_t>(m)));
    if (v < 0) mpz_neg(out, out);
}

bool fits_inline(const mpz_class& z) {
    return mpz_fits_slong_p(z.get_mpz_t()) && mpz_cmp_si(z.get_mpz_t(), INT64_MIN) != 0;
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    set_i128(den < 0 ? -i128(num) : i128(num), den < 0 ? -i128(den) : i128(den));
}

void Rational::set_i128(i128 num, i128 den) {
    const u128 an = uabs(num);
    const u128 g = (an >> 64) == 0 && (u128(den) >> 64) == 0
                       ? u128(gcd64(static_cast<std::uint64_t>(an), static_cast<std::uint64_t>(den)))
                       : gcd128(an, u128(den));
    if (g > 1) {
        num /= i128(g);
        den /= i128(g);
    }
    if (num > INT64_MIN && num <= INT64_MAX && den <= INT64_MAX) {
        num_ = static_cast<std::int64_t>(num);
        den_ = static_cast<std::int64_t>(den);
        big_.reset();
        return;
    }
    auto q = std::make_unique<mpq_class>();
    set_mpz(q->get_num_mpz_t(), num);
    set_mpz(q->get_den_mpz_t(), den);
    num_ = 0;
    den_ = 1;
    big_ = std::move(q);
}

void Rational::assign(const mpq_class& q) {
    if (fits_inline(q.get_num()) && mpz_fits_slong_p(q.get_den_mpz_t())) {
        num_ = q.get_num().get_si();
        den_ = q.get_den().get_si();
        big_.reset();
        return;
    }
    num_ = 0;
    den_ = 1;
    if (big_) *big_ = q;
    else big_ = std::make_unique<mpq_class>(q);
}

mpq_class Rational::to_mpq() const {
    if (big_) return *big_;
    mpq_class q;
    mpz_set_si(q.get_num_mpz_t(), num_);
    mpz_set_si(q.get_den_mpz_t(), den_);
    return q;
}

mpz_class Rational::numerator() const { return big_ ? mpz_class(big_->get_num()) : mpz_class(num_); }
mpz_class Rational::denominator() const { return big_ ? mpz_class(big_->get_den()) : mpz_class(den_); }

std::string Rational::str() const {
    if (big_) return big_->get_str();
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

double Rational::to_double() const {
    if (big_) return big_->get_d();
    return static_cast<double>(num_) / static_cast<double>(den_);
}

Rational Rational::floor() const {
    if (!big_) {
        std::int64_t q = num_ / den_;
        if (num_ % den_ != 0 && num_ < 0) --q;
        return Rational(q);
    }
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), big_->get_num_mpz_t(), big_->get_den_mpz_t());
    return Rational(q);
}

Rational Rational::ceil() const { return -(-*this).floor(); }

Rational Rational::operator-() const {
    Rational r;
    if (big_) {
        r.assign(-*big_);
    } else {
        r.num_ = -num_;
        r.den_ = den_;
    }
    return r;
}

void Rational::slow_add(const Rational& o, bool subtract) {
    mpq_class a = to_mpq();
    mpq_class b = o.to_mpq();
    assign(subtract ? mpq_class(a - b) : mpq_class(a + b));
}

void Rational::slow_mul(const Rational& o, bool divide) {
    mpq_class a = to_mpq();
    mpq_class b = o.to_mpq();
    assign(divide ? mpq_class(a / b) : mpq_class(a * b));
}

Rational& Rational::operator+=(const Rational& o) {
    if (big_ || o.big_) {
        slow_add(o, false);
        return *this;
    }
    if (den_ == o.den_) {
        std::int64_t r;
        if (!__builtin_add_overflow(num_, o.num_, &r) && r != INT64_MIN) {
            if (den_ == 1) {
                num_ = r;
            } else {
                const std::uint64_t g = gcd64(static_cast<std::uint64_t>(r < 0 ? -r : r), static_cast<std::uint64_t>(den_));
                num_ = r / std::int64_t(g);
                den_ /= std::int64_t(g);
            }
            return *this;
        }
    }
    set_i128(i128(num_) * o.den_ + i128(o.num_) * den_, i128(den_) * o.den_);
    return *this;
}

Rational& Rational::operator-=(const Rational& o) {
    if (big_ || o.big_) {
        slow_add(o, true);
        return *this;
    }
    if (den_ == o.den_) {
        std::int64_t r;
        if (!__builtin_sub_overflow(num_, o.num_, &r) && r != INT64_MIN) {
            if (den_ == 1) {
                num_ = r;
            } else {
                const std::uint64_t g = gcd64(static_cast<std::uint64_t>(r < 0 ? -r : r), static_cast<std::uint64_t>(den_));
                num_ = r / std::int64_t(g);
                den_ /= std::int64_t(g);
            }
            return *this;
        }
    }
    set_i128(i128(num_) * o.den_ - i128(o.num_) * den_, i128(den_) * o.den_);
    return *this;
}

Rational& Rational::operator*=(const Rational& o) {
    if (big_ || o.big_) {
        slow_mul(o, false);
        return *this;
    }
    if (den_ == 1 && o.den_ == 1) {
        std::int64_t r;
        if (!__builtin_mul_overflow(num_, o.num_, &r) && r != INT64_MIN) {
            num_ = r;
            return *this;
        }
    }
    // Cross-cancel first so the fast path survives longer.
    std::uint64_t g1 = gcd64(static_cast<std::uint64_t>(num_ < 0 ? -num_ : num_), static_cast<std::uint64_t>(o.den_));
    std::uint64_t g2 = gcd64(static_cast<std::uint64_t>(o.num_ < 0 ? -o.num_ : o.num_), static_cast<std::uint64_t>(den_));
    if (g1 == 0) g1 = 1;
    if (g2 == 0) g2 = 1;
    i128 n = i128(num_ / std::int64_t(g1)) * (o.num_ / std::int64_t(g2));
    i128 d = i128(den_ / std::int64_t(g2)) * (o.den_ / std::int64_t(g1));
    set_i128(n, d);
    return *this;
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.sign() == 0) throw std::domain_error("rational division by zero");
    if (big_ || o.big_) {
        slow_mul(o, true);
        return *this;
    }
    i128 n = i128(num_) * o.den_;
    i128 d = i128(den_) * o.num_;
    if (d < 0) {
        n = -n;
        d = -d;
    }
    set_i128(n, d);
    return *this;
}

int compare(const Rational& a, const Rational& b) {
    if (!a.big_ && !b.big_) {
        if (a.den_ == b.den_) return (a.num_ > b.num_) - (a.num_ < b.num_);
        __int128 l = __int128(a.num_) * b.den_;
        __int128 r = __int128(b.num_) * a.den_;
        return (l > r) - (l < r);
    }
    int c = cmp(a.to_mpq(), b.to_mpq());
    return (c > 0) - (c < 0);
}

std::size_t Rational::hash() const {
    if (!big_) {
        std::size_t h = std::hash<std::int64_t>{}(num_);
        return h ^ (std::hash<std::int64_t>{}(den_) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
    }
    return std::hash<std::string>{}(big_->get_str());
}

Rational Rational::parse(std::string_view text) {
    auto bad = [&]() { return std::invalid_argument("malformed number '" + std::string(text) + "'"); };
    std::string_view s = text;
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    if (s.empty()) throw bad();

    bool negative = false;
    std::string_view body = s;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }
    auto all_digits = [](std::string_view t) {
        if (t.empty()) return false;
        for (char c : t)
            if (c < '0' || c > '9') return false;
        return true;
    };

    mpq_class q;
    if (auto slash = body.find('/'); slash != std::string_view::npos) {
        std::string_view p = body.substr(0, slash);
        std::string_view d = body.substr(slash + 1);
        if (!all_digits(p) || !all_digits(d)) throw bad();
        mpz_class den(std::string(d), 10);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        q = mpq_class(mpz_class(std::string(p), 10), den);
        q.canonicalize();
    } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
        std::string_view ip = body.substr(0, dot);
        std::string_view fp = body.substr(dot + 1);
        if ((ip.empty() && fp.empty()) || (!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)))
            throw bad();
        std::string digits = std::string(ip) + std::string(fp);
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 10, fp.size());
        q = mpq_class(mpz_class(digits, 10), den);
        q.canonicalize();
    } else {
        if (!all_digits(body)) throw bad();
        q = mpq_class(mpz_class(std::string(body), 10));
    }
    if (negative) q = -q;
    return Rational(q);
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

}  // namespace emdut
