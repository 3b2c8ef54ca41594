// Copyright 2026 The advbound Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <compare>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "advbound/error.hpp"

namespace advbound {

using int128 = __int128;

// Arbitrary precision rational used by the certificate checker.
using ExactRational = boost::multiprecision::cpp_rational;

// Reduced fraction with 64-bit parts. Every probability and dual value the
// solver produces fits; intermediate products are formed in 128 bits and
// anything that does not reduce back to 64 bits raises kOverflow.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::int64_t num) : num_(num), den_(1) {}  // NOLINT
  Rational(int128 num, int128 den) { assign(num, den); }

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }
  ExactRational to_exact() const { return ExactRational(num_, den_); }

  bool is_zero() const { return num_ == 0; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend std::strong_ordering operator<=>(const Rational& a,
                                          const Rational& b) {
    const int128 lhs = static_cast<int128>(a.num_) * b.den_;
    const int128 rhs = static_cast<int128>(b.num_) * a.den_;
    return lhs <=> rhs;
  }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return Rational(static_cast<int128>(a.num_) * b.den_ +
                        static_cast<int128>(b.num_) * a.den_,
                    static_cast<int128>(a.den_) * b.den_);
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(static_cast<int128>(a.num_) * b.den_ -
                        static_cast<int128>(b.num_) * a.den_,
                    static_cast<int128>(a.den_) * b.den_);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(static_cast<int128>(a.num_) * b.num_,
                    static_cast<int128>(a.den_) * b.den_);
  }

  std::string str() const {
    return den_ == 1 ? std::to_string(num_)
                     : std::to_string(num_) + "/" + std::to_string(den_);
  }

  friend std::ostream& operator<<(std::ostream& os, const Rational& r) {
    return os << r.str();
  }

 private:
  static int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      const int128 t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void assign(int128 num, int128 den) {
    if (den == 0) fail(ErrorKind::kInternal, "rational with zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const int128 g = gcd128(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
    constexpr int128 kMax = INT64_MAX;
    if (num > kMax || num < -kMax || den > kMax) {
      fail(ErrorKind::kOverflow, "rational value exceeds 64-bit range");
    }
    num_ = static_cast<std::int64_t>(num);
    den_ = static_cast<std::int64_t>(den);
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

}  // namespace advbound
