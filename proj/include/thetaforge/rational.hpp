#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "thetaforge/errors.hpp"

namespace thetaforge {

// Exact rational on 128-bit integers.  Every arithmetic op checks for overflow
// and throws; at the magnitudes this library produces (Casimir values, Weyl
// dimension products, Smith pivots for n <= 8) headroom is ~1e38.
class Rat {
public:
    using Int = __int128;

    Rat() : num_(0), den_(1) {}
    Rat(long long n) : num_(n), den_(1) {}  // NOLINT: implicit by design
    Rat(long long n, long long d) : num_(n), den_(d) { normalize(); }
    static Rat from_int128(Int n, Int d) {
        Rat r;
        r.num_ = n;
        r.den_ = d;
        r.normalize();
        return r;
    }

    Int num() const { return num_; }
    Int den() const { return den_; }

    bool is_integer() const { return den_ == 1; }
    long long as_int() const {
        if (den_ != 1) throw Error("Rat::as_int on non-integer " + str());
        if (num_ > Int(INT64_MAX) || num_ < Int(INT64_MIN))
            throw std::overflow_error("Rat::as_int overflow");
        return static_cast<long long>(num_);
    }
    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rat operator+(const Rat& a, const Rat& b) {
        return from_int128(checked_add(checked_mul(a.num_, b.den_), checked_mul(b.num_, a.den_)),
                           checked_mul(a.den_, b.den_));
    }
    friend Rat operator-(const Rat& a, const Rat& b) { return a + (-b); }
    friend Rat operator*(const Rat& a, const Rat& b) {
        return from_int128(checked_mul(a.num_, b.num_), checked_mul(a.den_, b.den_));
    }
    friend Rat operator/(const Rat& a, const Rat& b) {
        if (b.num_ == 0) throw Error("Rat: division by zero");
        return from_int128(checked_mul(a.num_, b.den_), checked_mul(a.den_, b.num_));
    }
    Rat operator-() const {
        Rat r;
        r.num_ = -num_;
        r.den_ = den_;
        return r;
    }
    Rat& operator+=(const Rat& b) { return *this = *this + b; }
    Rat& operator-=(const Rat& b) { return *this = *this - b; }
    Rat& operator*=(const Rat& b) { return *this = *this * b; }
    Rat& operator/=(const Rat& b) { return *this = *this / b; }

    friend bool operator==(const Rat& a, const Rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
    friend bool operator<(const Rat& a, const Rat& b) {
        return checked_mul(a.num_, b.den_) < checked_mul(b.num_, a.den_);
    }
    friend bool operator<=(const Rat& a, const Rat& b) { return a < b || a == b; }
    friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
    friend bool operator>=(const Rat& a, const Rat& b) { return b <= a; }

    std::string str() const {
        std::string s = int128_str(num_);
        if (den_ != 1) s += "/" + int128_str(den_);
        return s;
    }

    static std::string int128_str(Int v) {
        if (v == 0) return "0";
        bool neg = v < 0;
        // careful with INT128_MIN: not produced by normalized Rats
        unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1
                                  : static_cast<unsigned __int128>(v);
        std::string s;
        while (u) {
            s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
            u /= 10;
        }
        return neg ? "-" + s : s;
    }

private:
    Int num_, den_;

    static Int gcd128(Int a, Int b) {
        if (a < 0) a = -a;
        if (b < 0) b = -b;
        while (b) {
            Int t = a % b;
            a = b;
            b = t;
        }
        return a;
    }
    static Int checked_mul(Int a, Int b) {
        Int r;
        if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("Rat: mul overflow");
        return r;
    }
    static Int checked_add(Int a, Int b) {
        Int r;
        if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("Rat: add overflow");
        return r;
    }
    void normalize() {
        if (den_ == 0) throw Error("Rat: zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        Int g = gcd128(num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }
};

inline std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace thetaforge

#include <ostream>

namespace thetaforge {
inline std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }
}  // namespace thetaforge
