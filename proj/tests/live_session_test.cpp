#include <gtest/gtest.h>

#include <chrono>
#include <random>
#include <thread>

#include "aversion/live_session.hpp"

using namespace aversion;
using namespace aversion::engine;
using namespace std::chrono_literals;

namespace {

// One scripted step: messages posted before the tick, then `ticks` ticks.
struct Segment {
  std::vector<protocol::ControlMessage> messages;
  std::uint64_t ticks;
};

std::vector<TickEvent> drive_live(const std::vector<Segment>& script) {
  LiveSession session{ScenarioConfig{}};
  std::vector<TickEvent> out;
  for (const Segment& seg : script) {
    for (const auto& m : seg.messages) session.post(m);
    for (std::uint64_t i = 0; i < seg.ticks; ++i) out.push_back(session.tick());
  }
  return out;
}

// Replays the same script through run(): each segment becomes a constant
// source with the then-current relationship, carrying the state over.
std::vector<TickEvent> drive_batch(const std::vector<Segment>& script) {
  ScenarioConfig cfg;
  double distance = proxemics::kOutOfRangeCm;
  affect::AffectState state;
  std::vector<TickEvent> out;
  for (const Segment& seg : script) {
    for (const auto& m : seg.messages) {
      if (const auto* d = std::get_if<protocol::SetDistance>(&m)) distance = d->cm;
      if (const auto* p = std::get_if<protocol::SetProfile>(&m)) cfg.relationship = p->relationship;
      if (const auto* l = std::get_if<protocol::SetDominance>(&m)) cfg.dominance = l->level;
      if (std::holds_alternative<protocol::Reset>(m)) state = affect::AffectState{state.frame};
    }
    if (seg.ticks == 0) continue;
    cfg.source = sensor::SyntheticParams{sensor::Constant{distance}};
    cfg.max_frames = seg.ticks;
    RunResult r = run(cfg, state);
    state = r.final_state;
    out.insert(out.end(), r.events.begin(), r.events.end());
  }
  return out;
}

void expect_same(const std::vector<TickEvent>& live, const std::vector<TickEvent>& batch) {
  ASSERT_EQ(live.size(), batch.size());
  for (std::size_t i = 0; i < live.size(); ++i) {
    EXPECT_TRUE(same_fields(live[i], batch[i])) << "frame " << i + 1;
  }
}

}  // namespace

TEST(LiveSessionTest, StartsIdleAtOutOfRange) {
  LiveSession session{ScenarioConfig{}};
  const TickEvent ev = session.tick();
  EXPECT_EQ(ev.frame, 1u);
  EXPECT_EQ(ev.distance_cm, 700.0);
  EXPECT_EQ(ev.phase, affect::Phase::Idle);
}

TEST(LiveSessionTest, CloseHandAvoidsWithinThreeTicks) {
  LiveSession session{ScenarioConfig{}};
  session.tick();
  session.post(protocol::SetDistance{10.0});
  std::optional<std::uint64_t> fired;
  for (int i = 1; i <= 3 && !fired; ++i) {
    if (session.tick().avoidance) fired = i;
  }
  EXPECT_EQ(fired, 3u);
}

TEST(LiveSessionTest, ResetRestartsFromZero) {
  LiveSession session{ScenarioConfig{}};
  session.post(protocol::SetDistance{30.0});
  session.tick();
  session.tick();
  session.post(protocol::Reset{});
  const TickEvent ev = session.tick();
  EXPECT_EQ(ev.frame, 3u);
  EXPECT_NEAR(ev.level, 0.25, 1e-12);
}

TEST(LiveSessionTest, ProfileSwitchMatchesSplicedBatchRun) {
  const std::vector<Segment> script = {
      {{protocol::SetDistance{30.0}}, 4},
      {{protocol::SetProfile{Relationship::Acquaintance}}, 8},
      {{protocol::SetDistance{10.0}}, 12},
      {{protocol::SetDominance{Dominance::Low}, protocol::SetProfile{Relationship::Stranger}}, 6},
      {{protocol::Reset{}, protocol::SetDistance{200.0}}, 5},
  };
  const auto live = drive_live(script);
  expect_same(live, drive_batch(script));
  // Carry-over: the first acquaintance tick builds on the friend level.
  const double n_acq =
      proxemics::momentary_dislike(proxemics::default_profiles().at(Relationship::Acquaintance), 30.0);
  EXPECT_NEAR(live[4].level, n_acq + 0.7 * live[3].level, 1e-15);
  EXPECT_EQ(live[24].command->pattern, behavior::PatternKind::Slumping);
}

TEST(LiveSessionTest, RandomScriptsMatchBatch) {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> cm(0.0, 500.0);
  std::uniform_int_distribution<int> kind(0, 5);
  std::uniform_int_distribution<std::uint64_t> ticks(0, 15);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Segment> script;
    for (int s = 0; s < 12; ++s) {
      Segment seg{{}, ticks(rng)};
      switch (kind(rng)) {
        case 0:
        case 1: seg.messages.push_back(protocol::SetDistance{cm(rng)}); break;
        case 2:
          seg.messages.push_back(protocol::SetProfile{kAllRelationships[rng() % 4]});
          break;
        case 3:
          seg.messages.push_back(protocol::SetDominance{kAllDominanceLevels[rng() % 3]});
          break;
        case 4: seg.messages.push_back(protocol::Reset{}); break;
        default: break;
      }
      script.push_back(seg);
    }
    expect_same(drive_live(script), drive_batch(script));
  }
}

TEST(LiveSessionTest, BroadcastsNoticesThenTicks) {
  LiveSession session{ScenarioConfig{}};
  auto sub = session.subscribe();
  session.post(protocol::SetProfile{Relationship::Partner});
  session.tick();
  auto first = sub->queue().try_pop();
  ASSERT_TRUE(first);
  ASSERT_TRUE(std::holds_alternative<ProfileNotice>(*first));
  EXPECT_EQ(std::get<ProfileNotice>(*first).profile.label, Relationship::Partner);
  auto second = sub->queue().try_pop();
  ASSERT_TRUE(second && std::holds_alternative<TickEvent>(*second));
  EXPECT_EQ(session.active_profile().label, Relationship::Partner);

  session.unsubscribe(sub);
  session.tick();
  EXPECT_EQ(sub->queue().size(), 0u);
  EXPECT_TRUE(sub->queue().closed());
}

TEST(LiveSessionTest, DominanceOverridePersistsAcrossProfileSwitch) {
  LiveSession session{ScenarioConfig{}};
  session.post(protocol::SetDominance{Dominance::Low});
  session.post(protocol::SetProfile{Relationship::Acquaintance});
  session.tick();
  EXPECT_EQ(session.active_profile().dominance, Dominance::Low);
  EXPECT_EQ(session.active_profile().label, Relationship::Acquaintance);
}

TEST(LiveSessionTest, SlowSubscriberDropsWithoutBlocking) {
  LiveSession::Options options;
  options.subscriber_capacity = 4;
  LiveSession session{ScenarioConfig{}, options};
  auto slow = session.subscribe();
  auto fast = session.subscribe();
  std::uint64_t fast_seen = 0;
  for (int i = 0; i < 20; ++i) {
    session.tick();
    while (fast->queue().try_pop()) ++fast_seen;
  }
  EXPECT_EQ(fast_seen, 20u);
  EXPECT_EQ(fast->dropped(), 0u);
  EXPECT_EQ(slow->dropped(), 16u);
  const auto kept = slow->queue().drain();
  ASSERT_EQ(kept.size(), 4u);
  EXPECT_EQ(std::get<TickEvent>(kept.front()).frame, 17u);
}

TEST(LiveSessionTest, MailboxOverflowDropsOldest) {
  LiveSession::Options options;
  options.mailbox_capacity = 2;
  LiveSession session{ScenarioConfig{}, options};
  session.post(protocol::SetDistance{5.0});
  session.post(protocol::SetDistance{30.0});
  session.post(protocol::SetDistance{40.0});
  EXPECT_EQ(session.mailbox_dropped(), 1u);
  EXPECT_EQ(session.tick().distance_cm, 40.0);
}

TEST(LiveSessionTest, ClockedLoopStopsAfterMaxTicks) {
  ScenarioConfig cfg;
  cfg.frame_period_ms = 5;
  LiveSession::Options options;
  options.max_ticks = 10;
  LiveSession session{cfg, options};
  auto sub = session.subscribe();
  const auto begin = std::chrono::steady_clock::now();
  session.start();
  session.wait();
  const auto elapsed = std::chrono::steady_clock::now() - begin;
  EXPECT_FALSE(session.running());
  EXPECT_EQ(session.frames(), 10u);
  EXPECT_GE(elapsed, 45ms);
  EXPECT_EQ(sub->queue().size(), 10u);
}

TEST(LiveSessionTest, StopInterruptsLoop) {
  LiveSession session{ScenarioConfig{}};
  session.start();
  EXPECT_TRUE(session.running());
  std::this_thread::sleep_for(250ms);
  session.stop();
  EXPECT_FALSE(session.running());
  const auto frames = session.frames();
  EXPECT_GE(frames, 1u);
  EXPECT_LE(frames, 3u);
  std::this_thread::sleep_for(150ms);
  EXPECT_EQ(session.frames(), frames);
}
