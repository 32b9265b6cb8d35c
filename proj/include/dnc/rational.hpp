#pragma once

#include <string>
#include <string_view>

#include "dnc/bigint.hpp"

namespace dnc {

/*!
 * Exact rational number. All curve parameters, breakpoints and bounds are
 * kept rational end to end; floating point appears only in reports and in
 * the test-suite grid oracles.
 */
class Rat {
public:
    Rat() : num_(0ll), den_(1ll) {}
    Rat(long long v) : num_(v), den_(1ll) {}
    Rat(long v) : Rat(static_cast<long long>(v)) {}
    Rat(int v) : Rat(static_cast<long long>(v)) {}
    Rat(long long num, long long den);
    Rat(BigInt num, BigInt den);

    static Rat fromBig(BigInt v) { return Rat(std::move(v), BigInt(1ll)); }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool isZero() const { return num_.isZero(); }
    int sign() const { return num_.sign(); }

    Rat operator-() const;
    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;  // throws std::domain_error on zero divisor

    Rat& operator+=(const Rat& o) { *this = *this + o; return *this; }
    Rat& operator-=(const Rat& o) { *this = *this - o; return *this; }
    Rat& operator*=(const Rat& o) { *this = *this * o; return *this; }
    Rat& operator/=(const Rat& o) { *this = *this / o; return *this; }

    int compare(const Rat& o) const;
    bool operator==(const Rat& o) const { return compare(o) == 0; }
    bool operator!=(const Rat& o) const { return compare(o) != 0; }
    bool operator<(const Rat& o) const { return compare(o) < 0; }
    bool operator<=(const Rat& o) const { return compare(o) <= 0; }
    bool operator>(const Rat& o) const { return compare(o) > 0; }
    bool operator>=(const Rat& o) const { return compare(o) >= 0; }

    static Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
    static Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

    double toDouble() const;

    //! "p/q" when the denominator is not 1, plain integer otherwise.
    std::string toFraction() const;

    //! Exact decimal when the denominator is of the form 2^a 5^b, else "p/q".
    std::string toExactText() const;

    //! Decimal with the given number of significant digits (round half up).
    std::string toDecimal(int significant = 12) const;

    //! Accepts integers, decimals ("2.5", "1e8", "-0.25e-3") and fractions ("p/q").
    static Rat parse(std::string_view text);

private:
    BigInt num_, den_;  // den > 0, gcd(|num|, den) == 1

    void normalize();
    static Rat fromReduced(__int128 num, __int128 den);
    static Rat raw(BigInt num, BigInt den);  // inputs already coprime, den > 0
};

}  // namespace dnc
