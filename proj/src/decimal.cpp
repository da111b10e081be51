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

#include "invsim/decimal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace invsim {

Decimal Decimal::from_double(double value) {
  if (!std::isfinite(value)) throw std::invalid_argument("Decimal::from_double: non-finite value");
  return from_raw(std::llround(value * static_cast<double>(kScale)));
}

Decimal Decimal::parse(std::string_view text) {
  const auto fail = [&] {
    return std::invalid_argument("invalid decimal '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
  std::size_t end = text.size();
  while (end > pos && (text[end - 1] == ' ' || text[end - 1] == '\t' || text[end - 1] == '\r')) --end;
  if (pos == end) throw fail();

  bool negative = false;
  if (text[pos] == '-' || text[pos] == '+') {
    negative = text[pos] == '-';
    ++pos;
  }
  __int128 integral = 0;
  __int128 fraction = 0;
  int frac_digits = 0;
  bool round_up = false;
  bool any_digit = false;
  bool seen_point = false;
  for (; pos < end; ++pos) {
    const char ch = text[pos];
    if (ch == '.') {
      if (seen_point) throw fail();
      seen_point = true;
      continue;
    }
    if (ch < '0' || ch > '9') throw fail();
    any_digit = true;
    const int digit = ch - '0';
    if (!seen_point) {
      integral = integral * 10 + digit;
      if (integral > (static_cast<__int128>(1) << 62) / kScale) throw fail();
    } else if (frac_digits < kDigits) {
      fraction = fraction * 10 + digit;
      ++frac_digits;
    } else if (frac_digits == kDigits) {
      round_up = digit >= 5;
      ++frac_digits;
    }
  }
  if (!any_digit) throw fail();
  for (int d = std::min(frac_digits, kDigits); d < kDigits; ++d) fraction *= 10;
  __int128 raw = integral * kScale + fraction + (round_up ? 1 : 0);
  return from_raw(static_cast<std::int64_t>(negative ? -raw : raw));
}

std::string Decimal::to_string() const {
  const bool negative = raw_ < 0;
  const unsigned __int128 magnitude =
      negative ? static_cast<unsigned __int128>(-static_cast<__int128>(raw_)) : raw_;
  const auto integral = static_cast<std::uint64_t>(magnitude / kScale);
  auto fraction = static_cast<std::uint64_t>(magnitude % kScale);

  std::string out = negative ? "-" : "";
  out += std::to_string(integral);
  if (fraction != 0) {
    char digits[kDigits + 1];
    for (int d = kDigits - 1; d >= 0; --d) {
      digits[d] = static_cast<char>('0' + fraction % 10);
      fraction /= 10;
    }
    int len = kDigits;
    while (len > 0 && digits[len - 1] == '0') --len;
    out += '.';
    out.append(digits, static_cast<std::size_t>(len));
  }
  return out;
}

}  // namespace invsim
