// Copyright 2026 The chainhash Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace chainhash {

/// Six significant digits; scientific notation when |x| < 1e-4 or |x| >= 1e7,
/// fixed otherwise. Trailing zeros after the decimal point are dropped.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  // Round to six significant digits before choosing the notation, so that
  // 9999999.7 is treated as 1e7.
  std::snprintf(buf, sizeof buf, "%.5e", x);
  const double rounded = std::strtod(buf, nullptr);
  const double ax = std::abs(rounded);
  if (ax < 1e-4 || ax >= 1e7) {
    // Trim the mantissa: 1.50000e-05 -> 1.5e-05.
    std::string s(buf);
    const auto e = s.find('e');
    std::string mant = s.substr(0, e);
    if (mant.find('.') != std::string::npos) {
      mant.erase(mant.find_last_not_of('0') + 1);
      if (mant.back() == '.') mant.pop_back();
    }
    return mant + s.substr(e);
  }
  const int exponent = static_cast<int>(std::floor(std::log10(ax)));
  const int decimals = exponent >= 5 ? 0 : 5 - exponent;
  std::snprintf(buf, sizeof buf, "%.*f", decimals, rounded);
  std::string s(buf);
  if (s.find('.') != std::string::npos) {
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
  }
  return s;
}

}  // namespace chainhash
