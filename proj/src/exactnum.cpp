#include "wavesel/exactnum.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace wavesel {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

BigInt parse_integer(std::string_view s, std::string_view whole) {
    if (!all_digits(s)) {
        throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
    }
    return BigInt(std::string(s), 10);
}

BigInt pow10(unsigned long e) {
    BigInt r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, e);
    return r;
}

// |x| < 2^53: double conversion is exact.
bool fits_mantissa(const BigInt& x) { return mpz_sizeinbase(x.get_mpz_t(), 2) <= 53; }

}  // namespace

Rational::Rational(const BigInt& num, const BigInt& den) {
    if (den == 0) throw std::domain_error("zero denominator");
    value_ = mpq_class(num, den);
    value_.canonicalize();
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.value_ == 0) throw std::domain_error("division by zero");
    return Rational(mpq_class(a.value_ / b.value_));
}

Rational Rational::parse(std::string_view text) {
    const std::string_view whole = text;
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty number");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    Rational out;
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const BigInt num = parse_integer(text.substr(0, slash), whole);
        const BigInt den = parse_integer(text.substr(slash + 1), whole);
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(whole) + "'");
        out = Rational(num, den);
    } else {
        long exponent = 0;
        if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
            std::string_view exp_part = text.substr(e + 1);
            bool exp_negative = false;
            if (!exp_part.empty() && (exp_part.front() == '+' || exp_part.front() == '-')) {
                exp_negative = exp_part.front() == '-';
                exp_part.remove_prefix(1);
            }
            if (!all_digits(exp_part) || exp_part.size() > 6) {
                throw std::invalid_argument("malformed exponent in '" + std::string(whole) + "'");
            }
            exponent = std::stol(std::string(exp_part));
            if (exp_negative) exponent = -exponent;
            text = text.substr(0, e);
        }
        std::string_view int_part = text;
        std::string_view frac_part;
        if (const auto dot = text.find('.'); dot != std::string_view::npos) {
            int_part = text.substr(0, dot);
            frac_part = text.substr(dot + 1);
            if (int_part.empty() && frac_part.empty()) {
                throw std::invalid_argument("malformed number: '" + std::string(whole) + "'");
            }
        }
        BigInt digits = int_part.empty() ? BigInt(0) : parse_integer(int_part, whole);
        if (!frac_part.empty()) {
            digits = digits * pow10(frac_part.size()) + parse_integer(frac_part, whole);
        }
        exponent -= static_cast<long>(frac_part.size());
        if (exponent >= 0) {
            out = Rational(BigInt(digits * pow10(static_cast<unsigned long>(exponent))));
        } else {
            out = Rational(digits, pow10(static_cast<unsigned long>(-exponent)));
        }
    }
    return negative ? -out : out;
}

double Rational::to_double() const {
    const auto& n = value_.get_num();
    const auto& d = value_.get_den();
    if (fits_mantissa(n) && fits_mantissa(d)) {
        return static_cast<double>(n.get_si()) / static_cast<double>(d.get_si());
    }
    return value_.get_d();
}

std::string Rational::to_string() const {
    if (is_integer()) return value_.get_num().get_str();
    return value_.get_num().get_str() + "/" + value_.get_den().get_str();
}

BigInt Rational::floor() const {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

BigInt Rational::ceil() const {
    BigInt q;
    mpz_cdiv_q(q.get_mpz_t(), value_.get_num_mpz_t(), value_.get_den_mpz_t());
    return q;
}

BigInt gcd_all(std::span<const BigInt> xs) {
    BigInt g = 0;
    for (const auto& x : xs) {
        if (x < 0) throw std::domain_error("gcd_all expects nonnegative integers");
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
    }
    if (g == 0) throw std::domain_error("undefined gcd");
    return g;
}

BigInt lcm_ints(std::span<const BigInt> xs) {
    if (xs.empty()) throw std::invalid_argument("lcm of an empty list");
    BigInt l = 1;
    for (const auto& x : xs) {
        if (x < 1) throw std::domain_error("lcm_ints expects positive integers");
        mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_mpz_t());
    }
    return l;
}

std::int64_t lcm_ints(std::span<const std::int64_t> xs) {
    if (xs.empty()) throw std::invalid_argument("lcm of an empty list");
    std::int64_t l = 1;
    for (auto x : xs) {
        if (x < 1) throw std::domain_error("lcm_ints expects positive integers");
        const std::int64_t step = x / std::gcd(l, x);
        if (__builtin_mul_overflow(l, step, &l)) throw std::overflow_error("lcm exceeds 64 bits");
    }
    return l;
}

Rational rational_lcm(std::span<const Rational> xs) {
    if (xs.empty()) throw std::invalid_argument("lcm of an empty list");
    BigInt num_lcm = 1;
    BigInt den_gcd = 0;
    for (const auto& x : xs) {
        if (x.sign() <= 0) throw std::domain_error("rational_lcm expects positive values");
        mpz_lcm(num_lcm.get_mpz_t(), num_lcm.get_mpz_t(), x.raw().get_num_mpz_t());
        mpz_gcd(den_gcd.get_mpz_t(), den_gcd.get_mpz_t(), x.raw().get_den_mpz_t());
    }
    return Rational(num_lcm, den_gcd);
}

double to_double(const BigInt& x) {
    if (fits_mantissa(x)) return static_cast<double>(x.get_si());
    // mpz_get_d truncates toward zero; step once away from zero if that is closer.
    const double truncated = x.get_d();
    if (!std::isfinite(truncated)) return truncated;
    const double away = std::nextafter(truncated, x > 0 ? std::numeric_limits<double>::infinity()
                                                        : -std::numeric_limits<double>::infinity());
    const BigInt t(truncated);
    const BigInt a(away);
    BigInt dt = x - t;
    BigInt da = a - x;
    dt = abs(dt);
    da = abs(da);
    if (da < dt) return away;
    if (dt < da) return truncated;
    // tie: round half to even
    return (std::bit_cast<std::uint64_t>(truncated) & 1U) == 0 ? truncated : away;
}

}  // namespace wavesel
