// Copyright 2026 The PeerArena Authors
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

#include "peerarena/reputation.h"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "oracles.h"
#include "peerarena/types.h"

namespace peerarena {
namespace {

ReputationParams Params() {
  ReputationParams p;
  p.kappa = 1.0;
  p.epsilon = 0.05;
  p.sigma_min = 0.25;
  p.sigma_init = 1.0;
  p.window_n = 10;
  return p;
}

ReputationState State(double reputation, double deviation) {
  ReputationState s;
  s.reputation = reputation;
  s.deviation = deviation;
  return s;
}

TEST(DeviationTest, AlternatingWindow) {
  const std::vector<double> w = {1, -1, 1, -1};
  EXPECT_NEAR(Deviation(w, Params()), 1.1547005383792515, 1e-15);
}

TEST(DeviationTest, ZeroVarianceHitsFloor) {
  const std::vector<double> w = {0.3, 0.3, 0.3};
  EXPECT_DOUBLE_EQ(Deviation(w, Params()), 0.25);
}

TEST(DeviationTest, ShortWindowsUseInitialDeviation) {
  ReputationParams p = Params();
  p.sigma_init = 1.0;
  EXPECT_DOUBLE_EQ(Deviation(std::vector<double>{}, p), 1.0);
  EXPECT_DOUBLE_EQ(Deviation(std::vector<double>{4.2}, p), 1.0);
}

TEST(DeviationTest, MatchesTwoPassOracle) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> len(2, 25);
  std::normal_distribution<double> delta(0.0, 2.0);
  const ReputationParams p = Params();
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> w(len(rng));
    for (double& d : w) d = delta(rng) * (trial % 7 == 0 ? 0.01 : 1.0);
    const double expected = std::max(oracle::SampleStdev(w), p.sigma_min);
    EXPECT_NEAR(Deviation(w, p), expected, 1e-12);
  }
}

TEST(UpdateReputationTest, EqualScoresLeaveReputationUnchanged) {
  const auto [a, b] =
      UpdateReputation(State(1.3, 0.7), State(-0.2, 1.1), 7.0, 7.0, Params());
  EXPECT_EQ(a.reputation, 1.3);
  EXPECT_EQ(b.reputation, -0.2);
  ASSERT_EQ(a.delta_window.size(), 1u);
  EXPECT_EQ(a.delta_window.front(), 0.0);
  EXPECT_EQ(b.delta_window.front(), 0.0);
}

TEST(UpdateReputationTest, EpsilonBindsForEqualReputations) {
  const ReputationDeltas d =
      ComputeDeltas(State(1.0, 1.0), State(1.0, 1.0), 8.0, 6.0, Params());
  // 2 * tanh(1) * 0.05, evaluated to 40 digits.
  EXPECT_NEAR(d.first, 0.07615941559557648881, 1e-15);
  EXPECT_NEAR(d.second, -0.07615941559557648881, 1e-15);
}

TEST(UpdateReputationTest, UpsetAgainstStrongerOpponent) {
  const ReputationDeltas d =
      ComputeDeltas(State(1.0, 1.0), State(2.0, 1.0), 8.0, 6.0, Params());
  // z = -1/sqrt(2), so the CDF gap is erf(1/2); 2 * tanh(1) * erf(1/2).
  EXPECT_NEAR(d.z, -1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(d.first, 0.79281933023621186665, 1e-14);
  EXPECT_NEAR(d.second, -0.79281933023621186665, 1e-14);
}

TEST(UpdateReputationTest, AgreesWithHighPrecisionOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> rep(-5.0, 5.0), sig(0.25, 3.0),
      score(0.0, 10.0), kap(0.1, 2.0);
  for (int trial = 0; trial < 500; ++trial) {
    ReputationParams p = Params();
    p.kappa = kap(rng);
    const ReputationState a = State(rep(rng), sig(rng));
    const ReputationState b = State(rep(rng), sig(rng));
    const double sa = score(rng), sb = score(rng);
    const ReputationDeltas d = ComputeDeltas(a, b, sa, sb, p);
    EXPECT_NEAR(d.first, oracle::ReputationDelta(a.reputation, b.reputation,
                                                 a.deviation, b.deviation, sa, sb,
                                                 p.kappa, p.epsilon),
                1e-10);
    EXPECT_NEAR(d.second, oracle::ReputationDelta(b.reputation, a.reputation,
                                                  b.deviation, a.deviation, sb, sa,
                                                  p.kappa, p.epsilon),
                1e-10);
  }
}

TEST(UpdateReputationTest, SignFollowsScoreGap) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rep(-50.0, 50.0), sig(0.25, 5.0),
      score(0.0, 10.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double sa = score(rng), sb = score(rng);
    const ReputationDeltas d = ComputeDeltas(State(rep(rng), sig(rng)),
                                             State(rep(rng), sig(rng)), sa, sb,
                                             Params());
    const int gap_sign = (sa > sb) - (sa < sb);
    EXPECT_EQ((d.first > 0) - (d.first < 0), gap_sign);
    EXPECT_EQ((d.second > 0) - (d.second < 0), -gap_sign);
  }
}

TEST(UpdateReputationTest, MagnitudeGrowsWithScoreGap) {
  const ReputationState a = State(0.4, 0.8), b = State(1.7, 1.4);
  double previous = 0.0;
  for (double gap = 0.5; gap <= 10.0; gap += 0.5) {
    const double delta = std::abs(ComputeDeltas(a, b, gap, 0.0, Params()).first);
    EXPECT_GT(delta, previous);
    previous = delta;
  }
}

// sigma_i also enters z, so the claim only holds while the upset factor is
// pinned; with equal reputations z = 0 and epsilon binds for every sigma.
TEST(UpdateReputationTest, MagnitudeNonDecreasingInDeviationWhenUpsetPinned) {
  double previous = 0.0;
  for (double sigma = 0.25; sigma <= 6.0; sigma += 0.25) {
    const double delta = std::abs(
        ComputeDeltas(State(2.0, sigma), State(2.0, 0.9), 9.0, 3.0, Params()).first);
    EXPECT_GE(delta, previous);
    previous = delta;
  }
}

TEST(UpdateReputationTest, MagnitudeBoundedByKappaTimesScale) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> rep(-100.0, 100.0), sig(0.25, 20.0);
  ReputationParams p = Params();
  p.kappa = 1.5;
  for (int trial = 0; trial < 2000; ++trial) {
    const ReputationDeltas d =
        ComputeDeltas(State(rep(rng), sig(rng)), State(rep(rng), sig(rng)), 10.0,
                      0.0, p);
    EXPECT_LE(std::abs(d.first), p.kappa * 10.0);
    EXPECT_LE(std::abs(d.second), p.kappa * 10.0);
  }
}

TEST(UpdateReputationTest, RejectsNonFiniteInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ComputeDeltas(State(nan, 1.0), State(1.0, 1.0), 5, 4, Params()),
               std::invalid_argument);
  EXPECT_THROW(ComputeDeltas(State(1.0, 1.0), State(1.0, 1.0), 5,
                             std::numeric_limits<double>::infinity(), Params()),
               std::invalid_argument);
}

TEST(UpdateReputationTest, WindowIsBoundedAndDeviationFloored) {
  const ReputationParams p = Params();
  ReputationState a = InitialReputation(p), b = InitialReputation(p);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> score(0.0, 10.0);
  for (int combat = 0; combat < 100; ++combat) {
    std::tie(a, b) = UpdateReputation(a, b, score(rng), score(rng), p);
    EXPECT_LE(a.delta_window.size(), static_cast<std::size_t>(p.window_n));
    EXPECT_GE(a.deviation, p.sigma_min);
    EXPECT_GE(b.deviation, p.sigma_min);
  }
  EXPECT_EQ(a.delta_window.size(), 10u);
}

TEST(CdfGapTest, MatchesTwiceCdfMinusOne) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> z(-8.0, 8.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = z(rng);
    const double via_cdf = std::abs(StandardNormalCdf(v) - StandardNormalCdf(-v));
    EXPECT_NEAR(CdfGap(v), std::abs(2 * StandardNormalCdf(v) - 1), 1e-12);
    EXPECT_NEAR(CdfGap(v), via_cdf, 1e-12);
  }
}

std::vector<ReputationState> Pool(const std::vector<double>& reps) {
  std::vector<ReputationState> pool;
  for (double r : reps) pool.push_back(State(r, 1.0));
  return pool;
}

TEST(ReweightingTest, SecondIterationSilencesLowestJudge) {
  auto pool = Pool({3.0, 0.5, 2.0, 1.0});
  const auto locked = ApplyReweighting(pool, 2, Params());
  ASSERT_TRUE(locked.has_value());
  EXPECT_EQ(*locked, 1u);
  EXPECT_TRUE(pool[1].reweight_locked);
  EXPECT_DOUBLE_EQ(pool[1].judging_weight, 0.0);
}

TEST(ReweightingTest, ThirdIterationKeepsEarlierLock) {
  auto pool = Pool({3.0, 0.5, 2.0, 1.0});
  ApplyReweighting(pool, 2, Params());
  pool[1].reputation = 10.0;  // rank changes must not unlock it
  // Ranking is now {3:1.0, 2:2.0, 0:3.0, 1:10.0}; the 2nd lowest is model 2.
  const auto locked = ApplyReweighting(pool, 3, Params());
  ASSERT_TRUE(locked.has_value());
  EXPECT_EQ(*locked, 2u);
  EXPECT_DOUBLE_EQ(pool[2].judging_weight, 0.1);
  EXPECT_DOUBLE_EQ(pool[1].judging_weight, 0.0);
  EXPECT_FALSE(pool[3].reweight_locked);
}

TEST(ReweightingTest, ScheduledRankAlreadyLockedMovesUpward) {
  auto pool = Pool({0.1, 0.2, 0.3, 0.4});
  ApplyReweighting(pool, 2, Params());  // locks model 0
  pool[0].reputation = 0.25;            // now the 2nd lowest
  const auto locked = ApplyReweighting(pool, 3, Params());
  ASSERT_TRUE(locked.has_value());
  EXPECT_EQ(*locked, 2u);
}

TEST(ReweightingTest, WeightClampsAtOne) {
  std::vector<double> reps;
  for (int i = 0; i < 15; ++i) reps.push_back(i);
  auto pool = Pool(reps);
  for (int t = 2; t <= 13; ++t) ApplyReweighting(pool, t, Params());
  // gamma * (13 - 2) = 1.1 clamps to 1.
  EXPECT_DOUBLE_EQ(pool[11].judging_weight, 1.0);
  EXPECT_DOUBLE_EQ(pool[10].judging_weight, 0.1 * 10);
  EXPECT_DOUBLE_EQ(ScheduledJudgingWeight(13, 0.1), 1.0);
}

TEST(ReweightingTest, LockCountFollowsIteration) {
  auto pool = Pool({5, 4, 3, 2, 1});
  std::vector<double> locked_weights(5, -1.0);
  for (int t = 1; t <= 9; ++t) {
    ApplyReweighting(pool, t, Params());
    int locked = 0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
      if (!pool[i].reweight_locked) continue;
      ++locked;
      if (locked_weights[i] < 0) locked_weights[i] = pool[i].judging_weight;
      EXPECT_EQ(pool[i].judging_weight, locked_weights[i]);
    }
    EXPECT_EQ(locked, std::min(std::max(t - 1, 0), 5));
  }
}

TEST(ReweightingTest, DisabledAndFirstIterationAreNoOps) {
  auto pool = Pool({1, 2, 3});
  EXPECT_FALSE(ApplyReweighting(pool, 1, Params()).has_value());
  ReputationParams off = Params();
  off.reweighting_enabled = false;
  EXPECT_FALSE(ApplyReweighting(pool, 2, off).has_value());
  for (const auto& s : pool) EXPECT_FALSE(s.reweight_locked);
}

TEST(EffectiveJudgeWeightTest, Examples) {
  ReputationParams p = Params();
  p.r_floor = 0.01;
  ReputationState s = State(2.5, 1.0);
  EXPECT_DOUBLE_EQ(EffectiveJudgeWeight(s, p), 2.5);
  s.reputation = -0.4;
  s.judging_weight = 0.1;
  EXPECT_NEAR(EffectiveJudgeWeight(s, p), 0.001, 1e-18);
  s.reputation = 3.0;
  s.judging_weight = 0.0;
  EXPECT_EQ(EffectiveJudgeWeight(s, p), 0.0);
}

TEST(ReputationParamsTest, ValidateRejectsBadRanges) {
  ReputationParams p = Params();
  EXPECT_NO_THROW(p.Validate());
  p.epsilon = 1.0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = Params();
  p.sigma_min = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = Params();
  p.window_n = 1;
  EXPECT_THROW(p.Validate(), ConfigError);
  p = Params();
  p.r_floor = 0.0;
  EXPECT_THROW(p.Validate(), ConfigError);
}

}  // namespace
}  // namespace peerarena
