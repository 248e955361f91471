#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace secvne {

// Exact decimal with 3 fractional digits, stored as scaled int64.
// All capacities, demands and levels use this type so that commit/release
// bookkeeping round-trips without floating drift.
class Fixed {
public:
    static constexpr std::int64_t kScale = 1000;

    constexpr Fixed() : milli_(0) {}

    static constexpr Fixed from_milli(std::int64_t m) {
        Fixed f;
        f.milli_ = m;
        return f;
    }

    static Fixed from_double(double v) {
        if (!std::isfinite(v)) throw std::invalid_argument("Fixed: non-finite value");
        return from_milli(static_cast<std::int64_t>(std::llround(v * kScale)));
    }

    static Fixed from_int(std::int64_t v) { return from_milli(v * kScale); }

    static Fixed parse(const std::string& s);

    constexpr std::int64_t milli() const { return milli_; }
    double to_double() const { return static_cast<double>(milli_) / kScale; }
    std::string str() const;

    friend constexpr Fixed operator+(Fixed a, Fixed b) { return from_milli(a.milli_ + b.milli_); }
    friend constexpr Fixed operator-(Fixed a, Fixed b) { return from_milli(a.milli_ - b.milli_); }
    constexpr Fixed& operator+=(Fixed b) { milli_ += b.milli_; return *this; }
    constexpr Fixed& operator-=(Fixed b) { milli_ -= b.milli_; return *this; }
    friend constexpr Fixed operator-(Fixed a) { return from_milli(-a.milli_); }

    friend constexpr auto operator<=>(Fixed a, Fixed b) = default;

    constexpr bool is_zero() const { return milli_ == 0; }
    constexpr bool is_negative() const { return milli_ < 0; }

private:
    std::int64_t milli_;
};

inline std::string Fixed::str() const {
    std::int64_t m = milli_;
    std::string sign = m < 0 ? "-" : "";
    if (m < 0) m = -m;
    std::string out = sign + std::to_string(m / kScale);
    std::int64_t frac = m % kScale;
    if (frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(f.begin(), 3 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return out;
}

inline Fixed Fixed::parse(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("Fixed: empty string");
    std::size_t pos = 0;
    bool neg = false;
    if (s[pos] == '-' || s[pos] == '+') {
        neg = s[pos] == '-';
        ++pos;
    }
    std::int64_t whole = 0;
    bool any = false;
    while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
        whole = whole * 10 + (s[pos] - '0');
        ++pos;
        any = true;
    }
    std::int64_t frac = 0;
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        int digits = 0;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            if (digits < 3) frac = frac * 10 + (s[pos] - '0');
            ++pos;
            ++digits;
            any = true;
        }
        while (digits < 3) {
            frac *= 10;
            ++digits;
        }
    }
    if (!any || pos != s.size()) throw std::invalid_argument("Fixed: bad number '" + s + "'");
    std::int64_t m = whole * kScale + frac;
    return from_milli(neg ? -m : m);
}

}  // namespace secvne
