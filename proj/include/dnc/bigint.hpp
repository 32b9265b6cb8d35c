#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <string_view>

namespace dnc {

namespace detail {

//! Limb storage with a four-limb inline buffer; values up to 128 bits
//! (the overwhelmingly common case) never touch the heap.
class LimbVec {
public:
    LimbVec() = default;
    LimbVec(size_t n, uint32_t v) { assign(n, v); }
    LimbVec(const LimbVec& o) { copyFrom(o); }
    LimbVec(LimbVec&& o) noexcept { moveFrom(std::move(o)); }
    LimbVec& operator=(const LimbVec& o) {
        if (this != &o) {
            release();
            copyFrom(o);
        }
        return *this;
    }
    LimbVec& operator=(LimbVec&& o) noexcept {
        if (this != &o) {
            release();
            moveFrom(std::move(o));
        }
        return *this;
    }
    ~LimbVec() { release(); }

    size_t size() const { return size_; }
    bool empty() const { return size_ == 0; }
    uint32_t* data() { return heap_ ? heap_ : inline_; }
    const uint32_t* data() const { return heap_ ? heap_ : inline_; }
    uint32_t* begin() { return data(); }
    uint32_t* end() { return data() + size_; }
    const uint32_t* begin() const { return data(); }
    const uint32_t* end() const { return data() + size_; }
    uint32_t& operator[](size_t i) { return data()[i]; }
    uint32_t operator[](size_t i) const { return data()[i]; }
    uint32_t& back() { return data()[size_ - 1]; }
    uint32_t back() const { return data()[size_ - 1]; }

    void clear() { size_ = 0; }
    void push_back(uint32_t v) {
        if (size_ == cap_) grow(size_ + 1);
        data()[size_++] = v;
    }
    void pop_back() { --size_; }
    void assign(size_t n, uint32_t v) {
        if (n > cap_) grow(n);
        for (size_t i = 0; i < n; ++i) data()[i] = v;
        size_ = static_cast<uint32_t>(n);
    }
    void eraseFront(size_t k) {
        if (k >= size_) { size_ = 0; return; }
        std::memmove(data(), data() + k, (size_ - k) * sizeof(uint32_t));
        size_ -= static_cast<uint32_t>(k);
    }
    void insertFrontZeros(size_t k) {
        if (k == 0) return;
        if (size_ + k > cap_) grow(size_ + k);
        std::memmove(data() + k, data(), size_ * sizeof(uint32_t));
        std::memset(data(), 0, k * sizeof(uint32_t));
        size_ += static_cast<uint32_t>(k);
    }
    void trimZeros() {
        while (size_ && data()[size_ - 1] == 0) --size_;
    }
    void swap(LimbVec& o) {
        LimbVec tmp(std::move(o));
        o = std::move(*this);
        *this = std::move(tmp);
    }
    bool operator==(const LimbVec& o) const {
        return size_ == o.size_ && std::memcmp(data(), o.data(), size_ * sizeof(uint32_t)) == 0;
    }

private:
    static constexpr uint32_t kInline = 4;
    uint32_t inline_[kInline];
    uint32_t* heap_ = nullptr;
    uint32_t size_ = 0;
    uint32_t cap_ = kInline;

    void grow(size_t need);
    void release() {
        delete[] heap_;
        heap_ = nullptr;
        cap_ = kInline;
        size_ = 0;
    }
    void copyFrom(const LimbVec& o) {
        if (o.size_ > kInline) {
            heap_ = new uint32_t[o.size_];
            cap_ = o.size_;
        }
        size_ = o.size_;
        std::memcpy(data(), o.data(), size_ * sizeof(uint32_t));
    }
    void moveFrom(LimbVec&& o) {
        if (o.heap_) {
            heap_ = o.heap_;
            cap_ = o.cap_;
            size_ = o.size_;
            o.heap_ = nullptr;
            o.cap_ = kInline;
            o.size_ = 0;
        } else {
            size_ = o.size_;
            std::memcpy(inline_, o.inline_, size_ * sizeof(uint32_t));
            o.size_ = 0;
        }
    }
};

}  // namespace detail

/*!
 * Arbitrary-precision signed integer, sign-magnitude with base 2^32 limbs.
 *
 * Curve arithmetic and the combinatorial counters both need values far
 * beyond 64 bits (linear-extension counts, permissible-equation counts,
 * denominators accumulated along deep arrival-bounding recursions).
 */
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    BigInt(unsigned long long v);
    BigInt(int v) : BigInt(static_cast<long long>(v)) {}

    static BigInt fromDecimal(std::string_view s);  // throws std::invalid_argument
    static BigInt fromU128(unsigned __int128 magnitude, bool negative);

    bool isZero() const { return sign_ == 0; }
    int sign() const { return sign_; }
    bool isEven() const { return sign_ == 0 || (mag_[0] & 1u) == 0; }

    BigInt operator-() const;
    BigInt abs() const;

    BigInt operator+(const BigInt& o) const;
    BigInt operator-(const BigInt& o) const;
    BigInt operator*(const BigInt& o) const;
    BigInt operator/(const BigInt& o) const;  // truncated toward zero
    BigInt operator%(const BigInt& o) const;  // sign follows dividend

    BigInt& operator+=(const BigInt& o) { *this = *this + o; return *this; }
    BigInt& operator-=(const BigInt& o) { *this = *this - o; return *this; }
    BigInt& operator*=(const BigInt& o) { *this = *this * o; return *this; }

    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);

    int compare(const BigInt& o) const;
    bool operator==(const BigInt& o) const { return compare(o) == 0; }
    bool operator!=(const BigInt& o) const { return compare(o) != 0; }
    bool operator<(const BigInt& o) const { return compare(o) < 0; }
    bool operator<=(const BigInt& o) const { return compare(o) <= 0; }
    bool operator>(const BigInt& o) const { return compare(o) > 0; }
    bool operator>=(const BigInt& o) const { return compare(o) >= 0; }

    static BigInt gcd(BigInt a, BigInt b);
    BigInt pow(uint64_t e) const;
    static BigInt factorial(unsigned n);

    bool fitsLL() const;
    long long toLL() const;  // asserts fitsLL
    double toDouble() const;

    std::string toString() const;
    size_t bitLength() const;

private:
    int sign_ = 0;           // -1, 0, +1
    detail::LimbVec mag_;    // little-endian limbs, no leading zeros

    void trim();
    static int cmpMag(const detail::LimbVec& a, const detail::LimbVec& b);
    static detail::LimbVec addMag(const detail::LimbVec& a, const detail::LimbVec& b);
    static detail::LimbVec subMag(const detail::LimbVec& a, const detail::LimbVec& b);
    static detail::LimbVec mulMag(const detail::LimbVec& a, const detail::LimbVec& b);
    static void divmodMag(const detail::LimbVec& a, const detail::LimbVec& b,
                          detail::LimbVec& q, detail::LimbVec& r);
};

}  // namespace dnc
