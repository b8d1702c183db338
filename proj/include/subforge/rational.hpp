#pragma once

#include <cstdint>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace subforge {

/// Exact rational number on int64, always stored normalized with den > 0.
/// Used for average degrees and pair densities so tests can assert equality
/// without float drift.
class Rational {
  public:
    Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1) : num_(num), den_(den) {
        if (den_ == 0)
            throw std::invalid_argument("Rational: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    std::string str() const {
        return den_ == 1 ? std::to_string(num_) : std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend bool operator==(const Rational &a, const Rational &b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational &a, const Rational &b) { return !(a == b); }
    friend bool operator<(const Rational &a, const Rational &b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rational &a, const Rational &b) {
        return a.num_ * b.den_ <= b.num_ * a.den_;
    }
    friend bool operator>(const Rational &a, const Rational &b) { return b < a; }
    friend bool operator>=(const Rational &a, const Rational &b) { return b <= a; }

    friend Rational operator+(const Rational &a, const Rational &b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational &a, const Rational &b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational &a, const Rational &b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational &a, const Rational &b) {
        if (b.num_ == 0)
            throw std::invalid_argument("Rational: division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    friend std::ostream &operator<<(std::ostream &os, const Rational &r) { return os << r.str(); }

  private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0)
            den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

} // namespace subforge
