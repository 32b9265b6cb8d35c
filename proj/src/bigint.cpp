#include "dnc/bigint.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dnc {

void detail::LimbVec::grow(size_t need) {
    size_t cap = cap_;
    while (cap < need) cap *= 2;
    uint32_t* fresh = new uint32_t[cap];
    std::memcpy(fresh, data(), size_ * sizeof(uint32_t));
    delete[] heap_;
    heap_ = fresh;
    cap_ = static_cast<uint32_t>(cap);
}

using detail::LimbVec;

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v < 0 ? -1 : 1;
    unsigned long long m = v < 0 ? 0ull - static_cast<unsigned long long>(v)
                                 : static_cast<unsigned long long>(v);
    while (m) {
        mag_.push_back(static_cast<uint32_t>(m & 0xffffffffu));
        m >>= 32;
    }
}

BigInt::BigInt(unsigned long long v) {
    if (v == 0) return;
    sign_ = 1;
    while (v) {
        mag_.push_back(static_cast<uint32_t>(v & 0xffffffffu));
        v >>= 32;
    }
}

BigInt BigInt::fromU128(unsigned __int128 magnitude, bool negative) {
    BigInt out;
    while (magnitude) {
        out.mag_.push_back(static_cast<uint32_t>(magnitude & 0xffffffffu));
        magnitude >>= 32;
    }
    if (!out.mag_.empty()) out.sign_ = negative ? -1 : 1;
    return out;
}

BigInt BigInt::fromDecimal(std::string_view s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    bool neg = false;
    size_t i = 0;
    if (s[0] == '+' || s[0] == '-') { neg = s[0] == '-'; i = 1; }
    if (i == s.size()) throw std::invalid_argument("bare sign is not an integer");
    BigInt out;
    // consume 9 decimal digits at a time
    while (i < s.size()) {
        size_t n = std::min<size_t>(9, s.size() - i);
        uint32_t chunk = 0;
        long long b = 1;
        for (size_t k = 0; k < n; ++k) b *= 10;
        BigInt base(b);
        for (size_t k = 0; k < n; ++k, ++i) {
            if (s[i] < '0' || s[i] > '9') throw std::invalid_argument("invalid digit in integer literal");
            chunk = chunk * 10 + static_cast<uint32_t>(s[i] - '0');
        }
        out = out * base + BigInt(static_cast<long long>(chunk));
    }
    if (neg && !out.isZero()) out.sign_ = -1;
    return out;
}

void BigInt::trim() {
    mag_.trimZeros();
    if (mag_.empty()) sign_ = 0;
}

int BigInt::cmpMag(const LimbVec& a, const LimbVec& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    return 0;
}

LimbVec BigInt::addMag(const LimbVec& a, const LimbVec& b) {
    const auto& big = a.size() >= b.size() ? a : b;
    const auto& small = a.size() >= b.size() ? b : a;
    LimbVec out(big.size() + 1, 0);
    uint64_t carry = 0;
    for (size_t i = 0; i < big.size(); ++i) {
        uint64_t s = carry + big[i] + (i < small.size() ? small[i] : 0);
        out[i] = static_cast<uint32_t>(s);
        carry = s >> 32;
    }
    out[big.size()] = static_cast<uint32_t>(carry);
    out.trimZeros();
    return out;
}

// requires |a| >= |b|
LimbVec BigInt::subMag(const LimbVec& a, const LimbVec& b) {
    LimbVec out(a.size(), 0);
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (d < 0) { d += (1ll << 32); borrow = 1; } else { borrow = 0; }
        out[i] = static_cast<uint32_t>(d);
    }
    out.trimZeros();
    return out;
}

LimbVec BigInt::mulMag(const LimbVec& a, const LimbVec& b) {
    if (a.empty() || b.empty()) return {};
    LimbVec out(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        uint64_t carry = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            uint64_t cur = out[i + j] + carry + static_cast<uint64_t>(a[i]) * b[j];
            out[i + j] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            uint64_t cur = out[k] + carry;
            out[k] = static_cast<uint32_t>(cur);
            carry = cur >> 32;
            ++k;
        }
    }
    out.trimZeros();
    return out;
}

// Knuth algorithm D, base 2^32.
void BigInt::divmodMag(const LimbVec& a, const LimbVec& b,
                       LimbVec& q, LimbVec& r) {
    assert(!b.empty());
    if (cmpMag(a, b) < 0) { q.clear(); r = a; return; }
    if (b.size() == 1) {
        uint64_t d = b[0];
        q.assign(a.size(), 0);
        uint64_t rem = 0;
        for (size_t i = a.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | a[i];
            q[i] = static_cast<uint32_t>(cur / d);
            rem = cur % d;
        }
        q.trimZeros();
        r.clear();
        if (rem) r.push_back(static_cast<uint32_t>(rem));
        return;
    }

    // normalize so the divisor's top limb has its high bit set
    int shift = 0;
    for (uint32_t top = b.back(); !(top & 0x80000000u); top <<= 1) ++shift;
    size_t n = b.size(), m = a.size() - n;
    LimbVec u(a.size() + 1, 0), v(n, 0);
    for (size_t i = a.size(); i-- > 0;) {
        u[i] = a[i] << shift;
        if (shift && i > 0) u[i] |= static_cast<uint32_t>(static_cast<uint64_t>(a[i - 1]) >> (32 - shift));
    }
    u[a.size()] = shift ? static_cast<uint32_t>(static_cast<uint64_t>(a.back()) >> (32 - shift)) : 0;
    for (size_t i = n; i-- > 0;) {
        v[i] = b[i] << shift;
        if (shift && i > 0) v[i] |= static_cast<uint32_t>(static_cast<uint64_t>(b[i - 1]) >> (32 - shift));
    }

    q.assign(m + 1, 0);
    const uint64_t base = 1ull << 32;
    for (size_t j = m + 1; j-- > 0;) {
        uint64_t top = (static_cast<uint64_t>(u[j + n]) << 32) | u[j + n - 1];
        uint64_t qhat = top / v[n - 1];
        uint64_t rhat = top % v[n - 1];
        while (qhat >= base ||
               qhat * v[n - 2] > ((rhat << 32) | u[j + n - 2])) {
            --qhat;
            rhat += v[n - 1];
            if (rhat >= base) break;
        }
        // multiply-subtract
        int64_t borrow = 0;
        uint64_t carry = 0;
        for (size_t i = 0; i < n; ++i) {
            uint64_t p = qhat * v[i] + carry;
            carry = p >> 32;
            int64_t t = static_cast<int64_t>(u[i + j]) - static_cast<int64_t>(p & 0xffffffffu) - borrow;
            if (t < 0) { t += base; borrow = 1; } else { borrow = 0; }
            u[i + j] = static_cast<uint32_t>(t);
        }
        int64_t t = static_cast<int64_t>(u[j + n]) - static_cast<int64_t>(carry) - borrow;
        if (t < 0) {
            // qhat was one too big: add back
            t += base;
            --qhat;
            uint64_t c = 0;
            for (size_t i = 0; i < n; ++i) {
                uint64_t s = static_cast<uint64_t>(u[i + j]) + v[i] + c;
                u[i + j] = static_cast<uint32_t>(s);
                c = s >> 32;
            }
            t += static_cast<int64_t>(c);
        }
        u[j + n] = static_cast<uint32_t>(t);
        q[j] = static_cast<uint32_t>(qhat);
    }
    q.trimZeros();
    r.assign(n, 0);
    for (size_t i = 0; i < n; ++i) {
        r[i] = u[i] >> shift;
        if (shift && i + 1 < u.size()) r[i] |= static_cast<uint32_t>(static_cast<uint64_t>(u[i + 1]) << (32 - shift));
    }
    r.trimZeros();
}

BigInt BigInt::operator-() const {
    BigInt out = *this;
    out.sign_ = -out.sign_;
    return out;
}

BigInt BigInt::abs() const {
    BigInt out = *this;
    if (out.sign_ < 0) out.sign_ = 1;
    return out;
}

BigInt BigInt::operator+(const BigInt& o) const {
    if (sign_ == 0) return o;
    if (o.sign_ == 0) return *this;
    BigInt out;
    if (sign_ == o.sign_) {
        out.mag_ = addMag(mag_, o.mag_);
        out.sign_ = sign_;
    } else {
        int c = cmpMag(mag_, o.mag_);
        if (c == 0) return BigInt();
        if (c > 0) { out.mag_ = subMag(mag_, o.mag_); out.sign_ = sign_; }
        else       { out.mag_ = subMag(o.mag_, mag_); out.sign_ = o.sign_; }
    }
    out.trim();
    return out;
}

BigInt BigInt::operator-(const BigInt& o) const { return *this + (-o); }

BigInt BigInt::operator*(const BigInt& o) const {
    BigInt out;
    if (sign_ == 0 || o.sign_ == 0) return out;
    out.mag_ = mulMag(mag_, o.mag_);
    out.sign_ = sign_ * o.sign_;
    out.trim();
    return out;
}

void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.isZero()) throw std::domain_error("division by zero");
    if (a.isZero()) { q = BigInt(); r = BigInt(); return; }
    LimbVec qm, rm;
    divmodMag(a.mag_, b.mag_, qm, rm);
    q = BigInt();
    r = BigInt();
    q.mag_ = std::move(qm);
    r.mag_ = std::move(rm);
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
    q.trim();
    r.trim();
}

BigInt BigInt::operator/(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return q;
}

BigInt BigInt::operator%(const BigInt& o) const {
    BigInt q, r;
    divmod(*this, o, q, r);
    return r;
}

int BigInt::compare(const BigInt& o) const {
    if (sign_ != o.sign_) return sign_ < o.sign_ ? -1 : 1;
    if (sign_ == 0) return 0;
    int c = cmpMag(mag_, o.mag_);
    return sign_ > 0 ? c : -c;
}

namespace {

size_t trailingZeroBits(const LimbVec& m) {
    size_t bits = 0;
    for (uint32_t limb : m) {
        if (limb == 0) { bits += 32; continue; }
        bits += static_cast<size_t>(__builtin_ctz(limb));
        break;
    }
    return bits;
}

void shiftRightInPlace(LimbVec& m, size_t bits) {
    size_t limbDrop = bits / 32;
    int s = static_cast<int>(bits % 32);
    if (limbDrop) m.eraseFront(std::min(limbDrop, m.size()));
    if (s && !m.empty()) {
        for (size_t i = 0; i + 1 < m.size(); ++i)
            m[i] = (m[i] >> s) | (m[i + 1] << (32 - s));
        m.back() >>= s;
    }
    m.trimZeros();
}

void shiftLeftInPlace(LimbVec& m, size_t bits) {
    if (m.empty() || bits == 0) return;
    size_t limbAdd = bits / 32;
    int s = static_cast<int>(bits % 32);
    if (s) {
        uint32_t carry = 0;
        for (auto& limb : m) {
            uint32_t next = limb >> (32 - s);
            limb = (limb << s) | carry;
            carry = next;
        }
        if (carry) m.push_back(carry);
    }
    m.insertFrontZeros(limbAdd);
}

// a -= b, requires |a| >= |b|
void subInPlace(LimbVec& a, const LimbVec& b) {
    int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        int64_t d = static_cast<int64_t>(a[i]) - borrow - (i < b.size() ? b[i] : 0);
        if (d < 0) { d += (1ll << 32); borrow = 1; } else { borrow = 0; }
        a[i] = static_cast<uint32_t>(d);
    }
    a.trimZeros();
}

}  // namespace

// binary gcd: normalization runs constantly, so keep this allocation-free
BigInt BigInt::gcd(BigInt a, BigInt b) {
    if (a.sign_ < 0) a.sign_ = 1;
    if (b.sign_ < 0) b.sign_ = 1;
    if (a.isZero()) return b;
    if (b.isZero()) return a;
    if (a.fitsLL() && b.fitsLL()) {
        unsigned long long x = static_cast<unsigned long long>(a.toLL());
        unsigned long long y = static_cast<unsigned long long>(b.toLL());
        while (y) {
            unsigned long long t = x % y;
            x = y;
            y = t;
        }
        return BigInt(x);
    }
    // one division evens out badly mismatched operands before the binary loop
    if (a.mag_.size() + 2 < b.mag_.size()) std::swap(a, b);
    if (b.mag_.size() + 2 < a.mag_.size()) {
        BigInt q, r;
        divmod(a, b, q, r);
        if (r.isZero()) return b;
        a = std::move(r);
    }
    LimbVec& A = a.mag_;
    LimbVec& B = b.mag_;
    size_t za = trailingZeroBits(A), zb = trailingZeroBits(B);
    size_t common = std::min(za, zb);
    shiftRightInPlace(A, za);
    shiftRightInPlace(B, zb);
    while (true) {
        int c = cmpMag(A, B);
        if (c == 0) break;
        if (c < 0) A.swap(B);
        subInPlace(A, B);
        shiftRightInPlace(A, trailingZeroBits(A));
    }
    shiftLeftInPlace(A, common);
    a.trim();
    return a;
}

BigInt BigInt::pow(uint64_t e) const {
    BigInt base = *this, out(1ll);
    while (e) {
        if (e & 1) out = out * base;
        base = base * base;
        e >>= 1;
    }
    return out;
}

BigInt BigInt::factorial(unsigned n) {
    BigInt out(1ll);
    for (unsigned i = 2; i <= n; ++i) out = out * BigInt(static_cast<long long>(i));
    return out;
}

bool BigInt::fitsLL() const {
    if (mag_.size() > 2) return false;
    if (mag_.size() < 2) return true;
    uint64_t v = (static_cast<uint64_t>(mag_[1]) << 32) | mag_[0];
    if (sign_ > 0) return v <= static_cast<uint64_t>(std::numeric_limits<long long>::max());
    return v <= static_cast<uint64_t>(std::numeric_limits<long long>::max()) + 1;
}

long long BigInt::toLL() const {
    assert(fitsLL());
    uint64_t v = 0;
    if (mag_.size() > 1) v = static_cast<uint64_t>(mag_[1]) << 32;
    if (!mag_.empty()) v |= mag_[0];
    return sign_ < 0 ? -static_cast<long long>(v) : static_cast<long long>(v);
}

double BigInt::toDouble() const {
    if (sign_ == 0) return 0.0;
    double out = 0.0;
    // more than enough limbs for a double mantissa
    size_t take = std::min<size_t>(mag_.size(), 3);
    for (size_t i = 0; i < take; ++i)
        out = out * 4294967296.0 + mag_[mag_.size() - 1 - i];
    out = std::ldexp(out, 32 * static_cast<int>(mag_.size() - take));
    return sign_ < 0 ? -out : out;
}

std::string BigInt::toString() const {
    if (sign_ == 0) return "0";
    LimbVec m = mag_;
    std::string digits;
    while (!m.empty()) {
        uint64_t rem = 0;
        for (size_t i = m.size(); i-- > 0;) {
            uint64_t cur = (rem << 32) | m[i];
            m[i] = static_cast<uint32_t>(cur / 1000000000ull);
            rem = cur % 1000000000ull;
        }
        m.trimZeros();
        for (int k = 0; k < 9; ++k) {
            digits.push_back(static_cast<char>('0' + rem % 10));
            rem /= 10;
        }
    }
    while (digits.size() > 1 && digits.back() == '0') digits.pop_back();
    if (sign_ < 0) digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

size_t BigInt::bitLength() const {
    if (mag_.empty()) return 0;
    uint32_t top = mag_.back();
    size_t bits = (mag_.size() - 1) * 32;
    while (top) { ++bits; top >>= 1; }
    return bits;
}

}  // namespace dnc
