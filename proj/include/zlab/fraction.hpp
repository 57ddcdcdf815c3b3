// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "zlab/numeric.hpp"

#include <sstream>
#include <string>
#include <utility>

namespace zlab {

// Exact rational in [0, 1], always kept in lowest terms: 0 <= num <= den,
// den >= 1, gcd(num, den) = 1. The constructor rejects anything else; use
// reduced() to normalize arbitrary integer pairs.
class Fraction {
 public:
  Fraction() : num_(0), den_(1) {}

  Fraction(Integer num, Integer den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_ <= 0) throw std::invalid_argument("Fraction: denominator must be positive");
    if (num_ < 0 || num_ > den_) throw std::invalid_argument("Fraction: value must lie in [0, 1]");
    if (boost::multiprecision::gcd(num_, den_) != 1)
      throw std::invalid_argument("Fraction: numerator and denominator must be coprime");
  }

  static Fraction reduced(Integer num, Integer den) {
    if (den == 0) throw std::invalid_argument("Fraction: denominator must be nonzero");
    if (den < 0) {
      den = -den;
      num = -num;
    }
    Integer g = boost::multiprecision::gcd(num < 0 ? Integer(-num) : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    return Fraction(std::move(num), std::move(den));
  }

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == den_; }

  friend bool operator==(const Fraction& x, const Fraction& y) {
    return x.num_ == y.num_ && x.den_ == y.den_;
  }
  friend bool operator!=(const Fraction& x, const Fraction& y) { return !(x == y); }
  friend bool operator<(const Fraction& x, const Fraction& y) {
    return x.num_ * y.den_ < y.num_ * x.den_;
  }

  std::string str() const {
    std::ostringstream os;
    os << num_ << '/' << den_;
    return os.str();
  }

 private:
  Integer num_;
  Integer den_;
};

}  // namespace zlab
