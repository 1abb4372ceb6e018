// Copyright 2026 The qdisc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <gtest/gtest.h>

#include <cmath>

#include "qdisc/bounds.hpp"
#include "testing.hpp"

namespace qdisc {
namespace {

using testing::kPi;

TEST(NminExact2d, Examples) {
  EXPECT_EQ(nmin_exact_2d(0.0), 1);
  EXPECT_EQ(nmin_exact_2d(std::cos(kPi / 4)), 2);
  EXPECT_EQ(nmin_exact_2d(std::cos(kPi / 6)), 3);
  EXPECT_THROW(nmin_exact_2d(1.0), NotDistinguishableError);
}

TEST(NminExact2d, FamilyCounts) {
  const std::vector<int> expected = {3, 2, 2, 4, 2};
  const auto& angles = testing::family_angles();
  for (std::size_t i = 0; i < angles.size(); ++i) {
    EXPECT_EQ(nmin_exact_2d(std::cos(angles[i])), expected[i]) << angles[i];
  }
}

TEST(NminLower, Examples) {
  EXPECT_EQ(nmin_lower(kPi / 2), 1);
  EXPECT_EQ(nmin_lower(kPi / 4), 2);
  EXPECT_EQ(nmin_lower(kPi / 12 + kPi / 12), 3);
  EXPECT_THROW(nmin_lower(0.0), NotDistinguishableError);
}

TEST(NminUpper, Examples) {
  EXPECT_EQ(nmin_upper(kPi / 4, std::sin(kPi / 4)), 2);
  EXPECT_EQ(nmin_upper(kPi / 6, 0.5), 6);
  EXPECT_EQ(nmin_upper(kPi / 3, std::sin(kPi / 3)), 2);
}

TEST(NminUpper, DominatesLowerOnGrid) {
  for (int i = 1; i < 200; ++i) {
    const double theta = (kPi / 2) * i / 200.0;
    const int lo = nmin_lower(theta);
    const int hi = nmin_upper(theta, std::sin(theta));
    EXPECT_LE(lo, hi) << theta;
    EXPECT_EQ(nmin_exact_2d(std::cos(theta)), lo) << theta;
  }
}

TEST(NminUpper, ReplaceFamilyCoincidesAboveQuarterPi) {
  for (double th : {kPi / 4, kPi / 3, 1.2}) {
    EXPECT_EQ(nmin_lower(th), nmin_upper(th, std::sin(th))) << th;
  }
  EXPECT_EQ(nmin_lower(kPi / 4), 2);
}

TEST(Lemma2Bound, Examples) {
  EXPECT_NEAR(lemma2_bound(kPi / 4, kPi / 4, kPi / 4), 0.0, 1e-15);
  EXPECT_NEAR(lemma2_bound(0.7, 1.1, 0.0), std::cos(0.7), 1e-15);
  EXPECT_NEAR(lemma2_bound(kPi / 4, kPi / 4, kPi / 8), 0.3826834, 1e-7);
  EXPECT_NEAR(lemma2_bound(kPi / 3, kPi / 6, kPi / 12), std::sin(kPi / 12), 1e-12);
  EXPECT_THROW(lemma2_bound(0.3, 0.0, 0.1), DomainError);
  EXPECT_THROW(lemma2_bound(0.3, kPi / 2 + 0.1, 0.1), DomainError);
}

TEST(Thm4Lower, Examples) {
  EXPECT_NEAR(thm4_lower(1.0, 0.0, 0.0), 1.0, 1e-15);
  EXPECT_NEAR(thm4_lower(std::cos(kPi / 3), kPi / 12, kPi / 12), 0.0, 1e-12);
  EXPECT_NEAR(thm4_lower(std::cos(kPi / 6), kPi / 12, kPi / 12), 0.5, 1e-12);
}

TEST(Thm4Lower, RangeAndMonotonicity) {
  for (int a = 0; a <= 10; ++a) {
    for (int b = 0; b <= 10; ++b) {
      const double t0 = (kPi / 2) * a / 10.0;
      const double t1 = (kPi / 2) * b / 10.0;
      double prev = -1.0;
      for (int k = 0; k <= 50; ++k) {
        const double q = k / 50.0;
        const double v = thm4_lower(q, t0, t1);
        EXPECT_GE(v, 0.0);
        EXPECT_LE(v, 1.0);
        EXPECT_GE(v, prev - 1e-15);
        EXPECT_NEAR(v, thm4_lower(q, t1, t0), 1e-15);
        prev = v;
      }
    }
  }
}

TEST(Report, Examples) {
  OptimizerConfig cfg;
  const auto id = build_report(KrausChannel::identity(2), cfg, false);
  EXPECT_FALSE(id.distinguishable);
  EXPECT_FALSE(id.nmin_exact_2d || id.nmin_lower || id.nmin_upper);

  const auto rep = build_report(make_replace_channel(kPi / 4), cfg, false);
  EXPECT_TRUE(rep.distinguishable);
  EXPECT_NEAR(rep.f1, 0.7071, 1e-4);
  EXPECT_EQ(rep.nmin_exact_2d, 2);
  EXPECT_EQ(rep.nmin_lower, 2);
  EXPECT_EQ(rep.nmin_upper, 2);

  const auto z = build_report(make_unitary_channel(pauli_z()), cfg, true);
  EXPECT_NEAR(z.f1, 0.0, 1e-9);
  EXPECT_EQ(z.nmin_exact_2d, 1);
  ASSERT_TRUE(z.ea_f1.has_value());
  EXPECT_NEAR(*z.ea_f1, 0.0, 1e-6);
  EXPECT_EQ(z.ea_nmin_lower, 1);
}

TEST(Report, QutritHasNoExactCount) {
  const auto r = build_report(testing::qutrit_replace(kPi / 3), OptimizerConfig{}, false);
  EXPECT_TRUE(r.distinguishable);
  EXPECT_FALSE(r.nmin_exact_2d.has_value());
  EXPECT_EQ(r.nmin_lower, 2);
  EXPECT_EQ(r.nmin_upper, 2);
}

}  // namespace
}  // namespace qdisc
