#include <gtest/gtest.h>

#include <random>

#include <nlohmann/json.hpp>

#include "aversion/bounded_queue.hpp"
#include "aversion/error.hpp"
#include "aversion/protocol.hpp"

using namespace aversion;
using namespace aversion::protocol;

TEST(Control, ParsesEveryInboundMessage) {
  const auto d = parse_control(R"({"type":"set_distance","cm":12.5})");
  EXPECT_EQ(std::get<SetDistance>(d).cm, 12.5);
  const auto p = parse_control(R"({"type":"set_profile","relationship":"acquaintance"})");
  EXPECT_EQ(std::get<SetProfile>(p).relationship, Relationship::Acquaintance);
  const auto l = parse_control(R"({"type":"set_dominance","level":"High"})");
  EXPECT_EQ(std::get<SetDominance>(l).level, Dominance::High);
  EXPECT_TRUE(std::holds_alternative<Reset>(parse_control(R"({"type":"reset"})")));
  EXPECT_EQ(type_name(d), "set_distance");
  EXPECT_EQ(type_name(Reset{}), "reset");
}

TEST(Control, EncodeRoundTrips) {
  const ControlMessage messages[] = {SetDistance{30.0}, SetProfile{Relationship::Partner},
                                     SetDominance{Dominance::Low}, Reset{}};
  for (const ControlMessage& m : messages) {
    const std::string line = encode(m);
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(encode(parse_control(line)), line);
    EXPECT_EQ(message_type(line), type_name(m));
  }
  EXPECT_EQ(encode(SetDistance{10}), R"({"type":"set_distance","cm":10.0})");
}

TEST(Control, RejectsMalformedMessages) {
  for (const char* bad : {"", "not json", "[1,2]", R"({"cm":3})", R"({"type":"jump"})",
                          R"({"type":"set_distance"})", R"({"type":"set_distance","cm":"near"})",
                          R"({"type":"set_profile","relationship":"boss"})",
                          R"({"type":"set_dominance","level":"extreme"})",
                          R"({"type":7})"}) {
    EXPECT_THROW(parse_control(bad), ProtocolError) << bad;
  }
}

TEST(Tick, EncodeDecodeRoundTrip) {
  engine::TickEvent ev;
  ev.frame = 7;
  ev.raw_distance_cm = 30.0;
  ev.distance_cm = 30.0;
  ev.momentary = 0.25;
  ev.level = 0.76470475;
  ev.phase = affect::Phase::Avoiding;
  ev.avoidance = engine::AvoidanceRecord{behavior::PatternKind::Strike, 0.3058819};

  const std::string line = encode_tick(ev);
  EXPECT_EQ(line.rfind(R"({"type":"tick","frame":7,)", 0), 0u);
  const TickMessage m = decode_tick(line);
  EXPECT_EQ(m.frame, 7u);
  EXPECT_EQ(m.s, ev.level);
  EXPECT_EQ(m.phase, affect::Phase::Avoiding);
  ASSERT_TRUE(m.avoid);
  EXPECT_EQ(*m.avoid, *ev.avoidance);

  ev.avoidance.reset();
  ev.phase = affect::Phase::Enduring;
  ev.endurance_intensity = 0.5;
  const auto doc = nlohmann::json::parse(encode_tick(ev));
  EXPECT_TRUE(doc["avoid"].is_null());
  EXPECT_EQ(doc["phase"], "enduring");
  EXPECT_EQ(doc["e_int"], 0.5);
}

TEST(Tick, RandomEventsSurviveTheWire) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 700.0);
  for (int i = 0; i < 500; ++i) {
    engine::TickEvent ev;
    ev.frame = rng() % 100000;
    ev.raw_distance_cm = u(rng);
    ev.distance_cm = u(rng);
    ev.momentary = u(rng) / 700.0;
    ev.level = u(rng) / 100.0;
    ev.endurance_intensity = u(rng) / 700.0;
    const TickMessage m = decode_tick(encode_tick(ev));
    EXPECT_EQ(m.d_raw, ev.raw_distance_cm);
    EXPECT_EQ(m.d, ev.distance_cm);
    EXPECT_EQ(m.n, ev.momentary);
    EXPECT_EQ(m.s, ev.level);
    EXPECT_EQ(m.e_int, ev.endurance_intensity);
  }
}

TEST(Tick, DecodeRejectsOtherMessages) {
  EXPECT_THROW(decode_tick(encode_ack("reset")), ProtocolError);
  EXPECT_THROW(decode_tick(R"({"type":"tick","frame":1})"), ProtocolError);
  EXPECT_THROW(decode_tick("garbage"), ProtocolError);
}

TEST(Outbound, ProfileAckAndError) {
  const auto& friend_profile = proxemics::default_profiles().at(Relationship::Friend);
  const auto profile = nlohmann::json::parse(encode_profile(friend_profile));
  EXPECT_EQ(profile["type"], "profile");
  EXPECT_EQ(profile["relationship"], "friend");
  EXPECT_EQ(profile["dominance"], "high");
  EXPECT_EQ(profile["e_th"], 0.75);
  EXPECT_EQ(profile["e_max"], 2.5);
  EXPECT_EQ(profile["c"], 0.7);
  EXPECT_EQ(profile["activation_radius_cm"], 45.0);

  EXPECT_EQ(encode_ack("reset"), R"({"type":"ack","request":"reset"})");
  const auto err = nlohmann::json::parse(encode_error("bad \"quote\""));
  EXPECT_EQ(err["type"], "error");
  EXPECT_EQ(err["message"], "bad \"quote\"");
  EXPECT_EQ(message_type("nonsense"), "");
  EXPECT_EQ(message_type(R"({"x":1})"), "");
}

TEST(BoundedQueueTest, DropsOldestWhenFull) {
  BoundedQueue<int> q(3);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(q.push(i));
  EXPECT_EQ(q.dropped(), 2u);
  EXPECT_EQ(q.drain(), (std::vector<int>{2, 3, 4}));
  EXPECT_EQ(q.try_pop(), std::nullopt);
  q.push(9);
  EXPECT_EQ(q.pop_for(std::chrono::milliseconds(1)), 9);
  EXPECT_EQ(q.pop_for(std::chrono::milliseconds(1)), std::nullopt);
  q.close();
  EXPECT_TRUE(q.closed());
  EXPECT_FALSE(q.push(1));
  EXPECT_EQ(BoundedQueue<int>(0).capacity(), 1u);
}
