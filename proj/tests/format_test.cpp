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

#include "chainhash/format.hpp"

#include <gtest/gtest.h>

namespace chainhash {
namespace {

TEST(FormatNumber, FixedRange) {
  EXPECT_EQ(format_number(0.0), "0");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(0.25), "0.25");
  EXPECT_EQ(format_number(15812.3883008), "15812.4");
  EXPECT_EQ(format_number(0.908794445973), "0.908794");
  EXPECT_EQ(format_number(-0.111111111), "-0.111111");
  EXPECT_EQ(format_number(0.0001), "0.0001");
  EXPECT_EQ(format_number(9999994.0), "9999990");
  EXPECT_EQ(format_number(123456.7), "123457");
  EXPECT_EQ(format_number(9.9999996), "10");
}

TEST(FormatNumber, Scientific) {
  EXPECT_EQ(format_number(1.54310487e-11), "1.5431e-11");
  EXPECT_EQ(format_number(0.000015), "1.5e-05");
  EXPECT_EQ(format_number(1e7), "1e+07");
  EXPECT_EQ(format_number(9999999.7), "1e+07");
  EXPECT_EQ(format_number(-2.5e9), "-2.5e+09");
  EXPECT_EQ(format_number(0.0000999999999), "0.0001");
}

}  // namespace
}  // namespace chainhash
