#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace perfdel {

using Int = mpz_class;

/// Exact rational scalar in canonical form: denominator > 0, gcd(|num|, den) = 1.
/// Equality and ordering are exact; there is no floating-point path anywhere.
class Rat {
public:
    Rat() : q_(0) {}
    Rat(long n) : q_(n) {}          // NOLINT(google-explicit-constructor)
    Rat(const Int& n) : q_(n) {}    // NOLINT(google-explicit-constructor)
    Rat(long num, long den) : Rat(Int(num), Int(den)) {}
    Rat(const Int& num, const Int& den) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    Int num() const { return q_.get_num(); }
    Int den() const { return q_.get_den(); }

    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rat abs() const { return sign() < 0 ? -*this : *this; }

    /// Exact floor as an integer.
    Int floor() const {
        Int r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    /// Exact ceiling as an integer.
    Int ceil() const {
        Int r;
        mpz_cdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }
    /// Nearest integer, halves rounded down (deterministic).
    Int round_nearest() const { return (*this + Rat(1, 2)).ceil() - 1; }

    friend Rat operator+(const Rat& a, const Rat& b) { return from_mpq(mpq_class(a.q_ + b.q_)); }
    friend Rat operator-(const Rat& a, const Rat& b) { return from_mpq(mpq_class(a.q_ - b.q_)); }
    friend Rat operator*(const Rat& a, const Rat& b) { return from_mpq(mpq_class(a.q_ * b.q_)); }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.is_zero()) throw std::invalid_argument("Rat: division by zero");
        return from_mpq(mpq_class(a.q_ / b.q_));
    }
    Rat operator-() const { return from_mpq(mpq_class(-q_)); }
    Rat& operator+=(const Rat& b) { q_ += b.q_; return *this; }
    Rat& operator-=(const Rat& b) { q_ -= b.q_; return *this; }
    Rat& operator*=(const Rat& b) { q_ *= b.q_; return *this; }
    Rat& operator/=(const Rat& b) { *this = *this / b; return *this; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rat& a, const Rat& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rat& a, const Rat& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rat& a, const Rat& b) { return a.q_ >= b.q_; }

    /// "num/den" with "/den" omitted when the value is an integer.
    std::string str() const {
        if (is_integer()) return q_.get_num().get_str();
        return q_.get_num().get_str() + "/" + q_.get_den().get_str();
    }

    /// Parses "a/b" or "a"; throws on malformed input.
    static Rat parse(std::string_view s) {
        auto slash = s.find('/');
        try {
            if (slash == std::string_view::npos) return Rat(Int(std::string(s)));
            return Rat(Int(std::string(s.substr(0, slash))),
                       Int(std::string(s.substr(slash + 1))));
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("Rat: malformed rational '" + std::string(s) + "'");
        }
    }

private:
    static Rat from_mpq(mpq_class q) {
        Rat r;
        r.q_ = std::move(q);
        return r;
    }
    mpq_class q_;
};

inline Rat square(const Rat& x) { return x * x; }

/// Exact floor of the square root of a nonnegative integer.
inline Int isqrt_floor(const Int& n) {
    if (n < 0) throw std::invalid_argument("isqrt_floor: negative input");
    Int r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

/// Floor of a/b for b > 0.
inline Int floor_div(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Ceiling of a/b for b > 0.
inline Int ceil_div(const Int& a, const Int& b) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// Nonnegative remainder of a mod b, b > 0.
inline Int mod_floor(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int gcd(const Int& a, const Int& b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Int lcm(const Int& a, const Int& b) {
    Int r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

}  // namespace perfdel
