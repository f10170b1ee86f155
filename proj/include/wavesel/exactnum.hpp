#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wavesel {

using BigInt = mpz_class;

/// Exact fraction num/den, always stored reduced with den > 0.
class Rational {
public:
    Rational() = default;
    Rational(long value) : value_(value) {}  // NOLINT(google-explicit-constructor)
    explicit Rational(const BigInt& value) : value_(value) {}
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(mpq_class value) : value_(std::move(value)) { value_.canonicalize(); }

    /// Parses "a", "a/b" or an exact decimal "a.b" (optionally signed, with
    /// an optional e/E exponent). Decimals are read as fractions over a power
    /// of ten, never through a binary float.
    static Rational parse(std::string_view text);

    [[nodiscard]] BigInt num() const { return value_.get_num(); }
    [[nodiscard]] BigInt den() const { return value_.get_den(); }
    [[nodiscard]] bool is_integer() const { return value_.get_den() == 1; }
    [[nodiscard]] int sign() const { return sgn(value_); }

    [[nodiscard]] double to_double() const;
    [[nodiscard]] std::string to_string() const;

    /// Largest integer <= value.
    [[nodiscard]] BigInt floor() const;
    /// Smallest integer >= value.
    [[nodiscard]] BigInt ceil() const;

    [[nodiscard]] const mpq_class& raw() const { return value_; }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ + b.value_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ - b.value_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.value_ * b.value_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(mpq_class(-value_)); }

    Rational& operator+=(const Rational& o) { value_ += o.value_; return *this; }
    Rational& operator-=(const Rational& o) { value_ -= o.value_; return *this; }
    Rational& operator*=(const Rational& o) { value_ *= o.value_; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return a.value_ == b.value_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.value_, b.value_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class value_{0};
};

/// gcd of a list of nonnegative integers. Throws std::domain_error when every
/// entry is zero ("undefined gcd").
BigInt gcd_all(std::span<const BigInt> xs);

/// lcm of positive integers.
BigInt lcm_ints(std::span<const BigInt> xs);
std::int64_t lcm_ints(std::span<const std::int64_t> xs);

/// Smallest positive rational P such that P/x is an integer for every x.
/// Equals lcm(numerators)/gcd(denominators) of the reduced inputs.
Rational rational_lcm(std::span<const Rational> xs);

/// Converts an integer to double with round-to-nearest.
double to_double(const BigInt& x);

}  // namespace wavesel
