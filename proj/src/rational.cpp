#include "dnc/rational.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace dnc {

Rat::Rat(long long num, long long den) : num_(num), den_(den) { normalize(); }

Rat::Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

void Rat::normalize() {
    if (den_.isZero()) throw std::domain_error("rational with zero denominator");
    if (den_.sign() < 0) { num_ = -num_; den_ = -den_; }
    if (num_.isZero()) { den_ = BigInt(1ll); return; }
    if (den_ == BigInt(1ll)) return;
    BigInt g = BigInt::gcd(num_, den_);
    if (g != BigInt(1ll)) {
        num_ = num_ / g;
        den_ = den_ / g;
    }
}

namespace {

// values this size stay on the 128-bit fast path
inline bool smallPair(const Rat& a) { return a.num().fitsLL() && a.den().fitsLL(); }

inline unsigned __int128 uabs(__int128 v) {
    return v < 0 ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
}

inline unsigned __int128 gcd128(unsigned __int128 a, unsigned __int128 b) {
    while (b) {
        unsigned __int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline BigInt bigFromU128(unsigned __int128 v, bool negative) {
    return BigInt::fromU128(v, negative);
}

}  // namespace

Rat Rat::fromReduced(__int128 num, __int128 den) {
    // den > 0; reduces and stores without the BigInt gcd path
    Rat out;
    unsigned __int128 g = gcd128(uabs(num), static_cast<unsigned __int128>(den));
    if (g > 1) {
        num /= static_cast<__int128>(g);
        den /= static_cast<__int128>(g);
    }
    out.num_ = bigFromU128(uabs(num), num < 0);
    out.den_ = bigFromU128(static_cast<unsigned __int128>(den), false);
    return out;
}

Rat Rat::operator-() const {
    Rat out = *this;
    out.num_ = -out.num_;
    return out;
}

namespace {

const BigInt& one() {
    static const BigInt kOne(1ll);
    return kOne;
}

}  // namespace

Rat Rat::raw(BigInt num, BigInt den) {
    Rat out;
    out.num_ = std::move(num);
    out.den_ = std::move(den);
    if (out.num_.isZero()) out.den_ = one();
    return out;
}

// Canonical-operand fraction arithmetic (Knuth 4.5.1): gcds run on the
// inputs, never on the wide cross products.
Rat Rat::operator+(const Rat& o) const {
    if (smallPair(*this) && smallPair(o)) {
        __int128 an = num_.toLL(), ad = den_.toLL(), bn = o.num_.toLL(), bd = o.den_.toLL();
        return fromReduced(an * bd + bn * ad, ad * bd);
    }
    BigInt g1 = BigInt::gcd(den_, o.den_);
    if (g1 == one()) return Rat::raw(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
    BigInt b1 = den_ / g1, d1 = o.den_ / g1;
    BigInt t = num_ * d1 + o.num_ * b1;
    BigInt g2 = BigInt::gcd(t, g1);
    if (g2 == one()) return Rat::raw(std::move(t), b1 * o.den_);
    return Rat::raw(t / g2, b1 * (o.den_ / g2));
}

Rat Rat::operator-(const Rat& o) const { return *this + (-o); }

Rat Rat::operator*(const Rat& o) const {
    if (smallPair(*this) && smallPair(o)) {
        __int128 an = num_.toLL(), ad = den_.toLL(), bn = o.num_.toLL(), bd = o.den_.toLL();
        return fromReduced(an * bn, ad * bd);
    }
    BigInt g1 = BigInt::gcd(num_, o.den_);
    BigInt g2 = BigInt::gcd(o.num_, den_);
    BigInt num = (g1 == one() ? num_ : num_ / g1) * (g2 == one() ? o.num_ : o.num_ / g2);
    BigInt den = (g2 == one() ? den_ : den_ / g2) * (g1 == one() ? o.den_ : o.den_ / g1);
    return Rat::raw(std::move(num), std::move(den));
}

Rat Rat::operator/(const Rat& o) const {
    if (o.num_.isZero()) throw std::domain_error("rational division by zero");
    if (smallPair(*this) && smallPair(o)) {
        __int128 an = num_.toLL(), ad = den_.toLL(), bn = o.num_.toLL(), bd = o.den_.toLL();
        __int128 num = an * bd, den = ad * bn;
        if (den < 0) { num = -num; den = -den; }
        return fromReduced(num, den);
    }
    BigInt g1 = BigInt::gcd(num_, o.num_);
    BigInt g2 = BigInt::gcd(den_, o.den_);
    BigInt num = (g1 == one() ? num_ : num_ / g1) * (g2 == one() ? o.den_ : o.den_ / g2);
    BigInt den = (g2 == one() ? den_ : den_ / g2) * (g1 == one() ? o.num_ : o.num_ / g1);
    if (den.sign() < 0) { num = -num; den = -den; }
    return Rat::raw(std::move(num), std::move(den));
}

int Rat::compare(const Rat& o) const {
    if (smallPair(*this) && smallPair(o)) {
        __int128 l = static_cast<__int128>(num_.toLL()) * o.den_.toLL();
        __int128 r = static_cast<__int128>(o.num_.toLL()) * den_.toLL();
        return l < r ? -1 : l > r ? 1 : 0;
    }
    return (num_ * o.den_).compare(o.num_ * den_);
}

double Rat::toDouble() const {
    if (num_.isZero()) return 0.0;
    // scale both sides into double range first; quotients stay accurate
    long long bn = static_cast<long long>(num_.bitLength());
    long long bd = static_cast<long long>(den_.bitLength());
    long long sn = bn > 512 ? bn - 512 : 0;
    long long sd = bd > 512 ? bd - 512 : 0;
    BigInt n = sn ? num_ / BigInt(2ll).pow(static_cast<uint64_t>(sn)) : num_;
    BigInt d = sd ? den_ / BigInt(2ll).pow(static_cast<uint64_t>(sd)) : den_;
    return std::ldexp(n.toDouble() / d.toDouble(), static_cast<int>(sn - sd));
}

std::string Rat::toFraction() const {
    if (den_ == BigInt(1ll)) return num_.toString();
    return num_.toString() + "/" + den_.toString();
}

std::string Rat::toExactText() const {
    // decimal-exact iff den = 2^a 5^b
    BigInt d = den_;
    int a = 0, b = 0;
    BigInt two(2ll), five(5ll);
    while (d.isEven()) { d = d / two; ++a; }
    while ((d % five).isZero()) { d = d / five; ++b; }
    if (d != BigInt(1ll)) return toFraction();
    int digits = std::max(a, b);
    if (digits == 0) return num_.toString();
    BigInt scaled = num_ * BigInt(10ll).pow(static_cast<uint64_t>(digits)) / den_;
    std::string s = scaled.abs().toString();
    while (static_cast<int>(s.size()) <= digits) s.insert(s.begin(), '0');
    s.insert(s.end() - digits, '.');
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return (num_.sign() < 0 ? "-" : "") + s;
}

std::string Rat::toDecimal(int significant) const {
    if (num_.isZero()) return "0";
    BigInt n = num_.abs();
    // decimal exponent of the leading digit
    int exp10 = 0;
    BigInt ten(10ll);
    BigInt lo = n, hi = den_;
    // scale until 1 <= n/den < 10
    while (lo < hi) { lo = lo * ten; --exp10; }
    while (lo >= hi * ten) { hi = hi * ten; ++exp10; }
    // digits = round(n / den * 10^(significant - 1 - exp10))
    long long scale = significant - 1 - exp10;
    BigInt num = n, den = den_;
    if (scale >= 0) num = num * ten.pow(static_cast<uint64_t>(scale));
    else den = den * ten.pow(static_cast<uint64_t>(-scale));
    BigInt q, r;
    BigInt::divmod(num, den, q, r);
    if (r * BigInt(2ll) >= den) q = q + BigInt(1ll);
    std::string digits = q.toString();
    if (static_cast<int>(digits.size()) > significant) {  // rounding overflowed to an extra digit
        digits.pop_back();
        ++exp10;
    }
    // place the decimal point; fall back to exponent notation for extreme magnitudes
    std::string out;
    if (exp10 >= significant || exp10 < -6) {
        out = digits.substr(0, 1);
        std::string frac = digits.substr(1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
        out += "e" + std::to_string(exp10);
    } else if (exp10 >= 0) {
        out = digits.substr(0, exp10 + 1);
        std::string frac = digits.substr(exp10 + 1);
        while (!frac.empty() && frac.back() == '0') frac.pop_back();
        if (!frac.empty()) out += "." + frac;
    } else {
        out = "0.";
        for (int i = 1; i < -exp10; ++i) out += "0";
        std::string frac = digits;
        while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
        out += frac;
    }
    return (num_.sign() < 0 ? "-" : "") + out;
}

Rat Rat::parse(std::string_view text) {
    if (text.empty()) throw std::invalid_argument("empty number");
    size_t slash = text.find('/');
    if (slash != std::string_view::npos) {
        BigInt n = BigInt::fromDecimal(text.substr(0, slash));
        BigInt d = BigInt::fromDecimal(text.substr(slash + 1));
        return Rat(std::move(n), std::move(d));
    }
    // [sign] digits [. digits] [e|E [sign] digits]
    size_t i = 0;
    bool neg = false;
    if (text[0] == '+' || text[0] == '-') { neg = text[0] == '-'; i = 1; }
    std::string intpart, fracpart;
    while (i < text.size() && text[i] >= '0' && text[i] <= '9') intpart += text[i++];
    if (i < text.size() && text[i] == '.') {
        ++i;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') fracpart += text[i++];
    }
    long long exp = 0;
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < text.size() && (text[i] == '+' || text[i] == '-')) { eneg = text[i] == '-'; ++i; }
        if (i == text.size()) throw std::invalid_argument("missing exponent digits");
        long long e = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') e = e * 10 + (text[i++] - '0');
        exp = eneg ? -e : e;
    }
    if (i != text.size() || (intpart.empty() && fracpart.empty()))
        throw std::invalid_argument("invalid number: " + std::string(text));
    BigInt mantissa = BigInt::fromDecimal((intpart.empty() ? "0" : intpart) + fracpart);
    long long pointShift = static_cast<long long>(fracpart.size());
    long long e = exp - pointShift;
    BigInt num = mantissa, den(1ll);
    if (e >= 0) num = num * BigInt(10ll).pow(static_cast<uint64_t>(e));
    else den = BigInt(10ll).pow(static_cast<uint64_t>(-e));
    if (neg) num = -num;
    return Rat(std::move(num), std::move(den));
}

}  // namespace dnc
