// Copyright 2026 The invsim Authors
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
#include <stdexcept>
#include <string>
#include <string_view>

namespace invsim {

// Fixed-point decimal with six fractional digits, stored as a signed 64-bit
// count of micro-units. Addition, subtraction and scaling by an integer are
// exact. Products of two decimals and divisions round half away from zero
// to the nearest micro-unit, which is exact whenever the true result has at
// most six fractional digits.
class Decimal {
 public:
  static constexpr std::int64_t kScale = 1'000'000;
  static constexpr int kDigits = 6;

  constexpr Decimal() = default;

  static constexpr Decimal from_raw(std::int64_t raw) {
    Decimal d;
    d.raw_ = raw;
    return d;
  }
  static constexpr Decimal from_int(std::int64_t units) {
    return from_raw(units * kScale);
  }
  // Rounds to the nearest micro-unit.
  static Decimal from_double(double value);

  // Accepts "[-]digits[.digits]". More than six fractional digits are
  // rounded half away from zero. Throws std::invalid_argument otherwise.
  static Decimal parse(std::string_view text);

  constexpr std::int64_t raw() const { return raw_; }
  double to_double() const { return static_cast<double>(raw_) / kScale; }

  // Shortest exact rendering: "1.179", "30", "-0.8".
  std::string to_string() const;

  constexpr Decimal operator-() const { return from_raw(-raw_); }
  constexpr Decimal& operator+=(Decimal o) {
    raw_ += o.raw_;
    return *this;
  }
  constexpr Decimal& operator-=(Decimal o) {
    raw_ -= o.raw_;
    return *this;
  }
  friend constexpr Decimal operator+(Decimal a, Decimal b) { return a += b; }
  friend constexpr Decimal operator-(Decimal a, Decimal b) { return a -= b; }
  friend constexpr Decimal operator*(Decimal a, std::int64_t n) {
    return from_raw(a.raw_ * n);
  }
  friend constexpr Decimal operator*(std::int64_t n, Decimal a) {
    return from_raw(a.raw_ * n);
  }

  // Decimal product, rounded to the micro-unit.
  Decimal times(Decimal o) const {
    std::int64_t product;
    if (!__builtin_mul_overflow(raw_, o.raw_, &product)) return from_raw(round_div64(product, kScale));
    return from_raw(round_div(static_cast<__int128>(raw_) * o.raw_, kScale));
  }
  // Division by a positive integer, rounded to the micro-unit.
  Decimal divided_by(std::int64_t n) const {
    if (n <= 0) throw std::invalid_argument("Decimal::divided_by: divisor must be positive");
    return from_raw(round_div(raw_, n));
  }
  // round(this * n) to an integer, half away from zero.
  std::int64_t round_to_int() const { return round_div(raw_, kScale); }

  friend constexpr auto operator<=>(Decimal, Decimal) = default;
  friend constexpr bool operator==(Decimal, Decimal) = default;

  static constexpr std::int64_t round_div64(std::int64_t num, std::int64_t den) {
    const std::int64_t half = den / 2;
    return num >= 0 ? (num + half) / den : -((-num + half) / den);
  }
  // Rounds num/den half away from zero; den > 0.
  static constexpr std::int64_t round_div(__int128 num, __int128 den) {
    const __int128 half = den / 2;
    const __int128 q = num >= 0 ? (num + half) / den : -((-num + half) / den);
    return static_cast<std::int64_t>(q);
  }

 private:
  std::int64_t raw_ = 0;
};

using Money = Decimal;

inline constexpr Decimal max(Decimal a, Decimal b) { return a < b ? b : a; }
inline constexpr Decimal min(Decimal a, Decimal b) { return a < b ? a : b; }

namespace literals {
// 1.179_dec; parsed at runtime, intended for tests and tables.
inline Decimal operator""_dec(const char* text) { return Decimal::parse(text); }
}  // namespace literals

}  // namespace invsim
