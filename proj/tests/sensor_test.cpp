#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <unistd.h>

#include "aversion/error.hpp"
#include "aversion/proxemics.hpp"
#include "aversion/sensor.hpp"

using namespace aversion;
using namespace aversion::sensor;

namespace {

std::vector<DistanceSample> trace_of(const std::string& text) {
  std::istringstream in(text);
  return parse_trace(in);
}

std::vector<double> distances(const std::vector<DistanceSample>& samples) {
  std::vector<double> out;
  for (const auto& s : samples) out.push_back(s.distance_cm);
  return out;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() /
         ("aversion_sensor_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Trace, IdentityResample) {
  const auto s = trace_of("t_ms,distance_cm\n0,30\n100,30\n200,30\n");
  ASSERT_EQ(s.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_EQ(s[i].frame, i + 1);
    EXPECT_EQ(s[i].distance_cm, 30.0);
  }
}

TEST(Trace, ClampsAtIngestion) {
  const auto s = trace_of("t_ms,distance_cm\n0,1.0\n");
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].raw_cm, 1.0);
  EXPECT_EQ(s[0].distance_cm, 0.0);
}

TEST(Trace, DenseRowsDroppedByHold) {
  // Frames at 0 and 100 ms; the 50 ms row is never the latest at a frame time.
  const auto s = trace_of("t_ms,distance_cm\n0,30\n50,20\n100,10\n");
  EXPECT_EQ(distances(s), (std::vector<double>{30, 10}));
}

TEST(Trace, SparseRowsHeld) {
  const auto s = trace_of("t_ms,distance_cm\n1000,40\n1350,20\n1400,500\n");
  // Grid starts at the first row: 1000, 1100, 1200, 1300, 1400.
  EXPECT_EQ(distances(s), (std::vector<double>{40, 40, 40, 40, 700}));
}

TEST(Trace, CustomFramePeriod) {
  std::istringstream in("t_ms,distance_cm\n0,30\n50,20\n100,10\n");
  EXPECT_EQ(distances(parse_trace(in, 50)), (std::vector<double>{30, 20, 10}));
}

TEST(Trace, MalformedRowReportsLineNumber) {
  try {
    trace_of("t_ms,distance_cm\n0,30\n100,abc\n");
    FAIL() << "expected ParseError";
  } catch (const OrderingError&) {
    FAIL() << "wrong error type";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
  EXPECT_THROW(trace_of("t_ms,distance_cm\n0,30,5\n"), ParseError);
  EXPECT_THROW(trace_of("t_ms,distance_cm\n0.5,30\n"), ParseError);
  EXPECT_THROW(trace_of("t_ms,distance_cm\n0,nan\n"), ParseError);
  EXPECT_THROW(trace_of("time,distance\n0,30\n"), ParseError);
  EXPECT_THROW(trace_of(""), ParseError);
}

TEST(Trace, NonMonotoneTimestampsAreOrderingErrors) {
  try {
    trace_of("t_ms,distance_cm\n0,30\n100,30\n100,20\n");
    FAIL() << "expected OrderingError";
  } catch (const OrderingError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
  EXPECT_THROW(trace_of("t_ms,distance_cm\n200,30\n100,30\n"), OrderingError);
}

TEST(Trace, ShippedApproachTraceIsDeterministic) {
  const auto a = read_trace(AVERSION_DATA_DIR "/traces/approach.csv");
  const auto b = read_trace(AVERSION_DATA_DIR "/traces/approach.csv");
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.size(), 101u);
  for (const auto& s : a) EXPECT_TRUE(is_clamped_value(s.distance_cm));
  EXPECT_THROW(read_trace("/nonexistent/trace.csv"), ConfigError);
}

TEST(Synthetic, Constant) {
  const auto s = synthetic(Constant{30.0}, 10);
  ASSERT_EQ(s.size(), 10u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_EQ(s[i].frame, i + 1);
    EXPECT_EQ(s[i].distance_cm, 30.0);
  }
}

TEST(Synthetic, RampEndpointsInclusive) {
  const auto s = synthetic(Ramp{100.0, 10.0}, 10);
  ASSERT_EQ(s.size(), 10u);
  EXPECT_EQ(s.front().distance_cm, 100.0);
  EXPECT_EQ(s.back().distance_cm, 10.0);
  for (std::size_t i = 0; i < s.size(); ++i) EXPECT_NEAR(s[i].distance_cm, 100.0 - 10.0 * i, 1e-12);
  EXPECT_EQ(synthetic(Ramp{100.0, 10.0}, 1).front().distance_cm, 100.0);
}

TEST(Synthetic, SinusoidTroughsClampToZero) {
  const Sinusoid w{30.0, 40.0, 20.0};
  const auto s = synthetic(w, 60);
  bool saw_zero = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double raw = 30.0 + 40.0 * std::sin(2.0 * std::numbers::pi * k / 20.0);
    const double expected = raw < 2.0 ? 0.0 : (raw > 450.0 ? 700.0 : raw);
    EXPECT_NEAR(s[k].raw_cm, raw, 1e-12);
    EXPECT_EQ(s[k].distance_cm, expected) << k;
    saw_zero |= expected == 0.0;
  }
  EXPECT_TRUE(saw_zero);
  EXPECT_EQ(s[15].distance_cm, 0.0);  // trough at three quarters of the period
}

TEST(Synthetic, RejectsInvalidParameters) {
  EXPECT_THROW(synthetic(Constant{NAN}, 3), ValidationError);
  EXPECT_THROW(synthetic(Ramp{0.0, INFINITY}, 3), ValidationError);
  EXPECT_THROW(synthetic(Sinusoid{30, -1, 10}, 3), ValidationError);
  EXPECT_THROW(synthetic(Sinusoid{30, 10, 0}, 3), ValidationError);
}

TEST(Clamp, EveryEmittedSampleIsAClampedValue) {
  std::mt19937_64 rng(10000);
  std::uniform_real_distribution<double> raw(-100.0, 1000.0);
  for (int i = 0; i < 10000; ++i) {
    const double v = raw(rng);
    const auto s = synthetic(Constant{v}, 1);
    ASSERT_TRUE(is_clamped_value(s[0].distance_cm)) << v;
    ASSERT_TRUE(is_clamped_value(parse_serial_line("R " + std::to_string(std::llround(v)))));
  }
  EXPECT_TRUE(is_clamped_value(0.0));
  EXPECT_TRUE(is_clamped_value(700.0));
  EXPECT_FALSE(is_clamped_value(1.0));
  EXPECT_FALSE(is_clamped_value(500.0));
}

TEST(Serial, LineExamples) {
  EXPECT_EQ(parse_serial_line("R 30\n"), 30.0);
  EXPECT_EQ(parse_serial_line("R 30"), 30.0);
  EXPECT_EQ(parse_serial_line("R 30\r\n"), 30.0);
  EXPECT_EQ(parse_serial_line("R 1\n"), 0.0);
  EXPECT_EQ(parse_serial_line("R 900\n"), 700.0);
  EXPECT_THROW(parse_serial_line("X 30\n"), ProtocolError);
  EXPECT_THROW(parse_serial_line("R\n"), ProtocolError);
  EXPECT_THROW(parse_serial_line("R 3.5\n"), ProtocolError);
  EXPECT_THROW(parse_serial_line("R 30 40\n"), ProtocolError);
  EXPECT_THROW(parse_serial_line(""), ProtocolError);
}

TEST(Serial, MockSourceHoldsLastGoodValue) {
  std::istringstream in("X 30\nR 30\ngarbage\nR 1\nR 20\n");
  SerialMockSource src(in);
  std::vector<double> got;
  while (auto s = src.next()) got.push_back(s->distance_cm);
  EXPECT_EQ(got, (std::vector<double>{700, 30, 30, 0, 20}));
  EXPECT_EQ(src.protocol_errors(), 2u);
  EXPECT_NE(src.last_error().find("garbage"), std::string::npos);
}

TEST(Serial, HoldNeverIntroducesNewValues) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> cm(-10, 800);
  std::bernoulli_distribution broken(0.3);
  std::ostringstream script;
  for (int i = 0; i < 2000; ++i) {
    if (broken(rng)) {
      script << "R" << cm(rng) << "x\n";
    } else {
      script << "R " << cm(rng) << "\n";
    }
  }
  std::istringstream in(script.str());
  SerialMockSource src(in);
  std::istringstream replay(script.str());
  std::string line;
  double prev = SerialMockSource::kInitialHoldCm;
  while (auto s = src.next()) {
    std::getline(replay, line);
    ASSERT_TRUE(is_clamped_value(s->distance_cm));
    if (line.rfind("R ", 0) != 0 || line.back() == 'x') {
      ASSERT_EQ(s->distance_cm, prev);
    } else {
      ASSERT_EQ(s->distance_cm, proxemics::clamp_distance(std::stod(line.substr(2))));
    }
    prev = s->distance_cm;
  }
}

TEST(Serial, PumpDeliversLatestReading) {
  const auto path = temp_path("pump.txt");
  {
    std::ofstream f(path);
    f << "R 300\nR 40\nbad\nR 25\n";
  }
  SerialPump pump(path, 16);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (!pump.finished() && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  ASSERT_TRUE(pump.finished());
  EXPECT_EQ(pump.drain_latest(), 25.0);
  EXPECT_EQ(pump.protocol_errors(), 1u);
  EXPECT_EQ(pump.drain_latest(), std::nullopt);
  std::filesystem::remove(path);
}

TEST(Serial, PumpDropsOldestWhenFull) {
  const auto path = temp_path("flood.txt");
  {
    std::ofstream f(path);
    for (int i = 0; i < 100; ++i) f << "R " << (i + 10) << "\n";
  }
  SerialPump pump(path, 4);
  const auto deadline = std::chrono::steady_clock::now() + std::chrono::seconds(5);
  while (!pump.finished() && std::chrono::steady_clock::now() < deadline) {
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  EXPECT_EQ(pump.dropped_lines(), 96u);
  EXPECT_EQ(pump.drain_latest(), 109.0);
  std::filesystem::remove(path);
  EXPECT_THROW(SerialPump("/nonexistent/tty"), ConfigError);
}

TEST(SourceSpecText, ParsesAndRendersEveryKind) {
  for (const char* text : {"const:30", "ramp:100:10", "sin:30:40:50", "trace:data/a.csv",
                           "serial:/dev/pts/3", "serial:-"}) {
    EXPECT_EQ(to_string(parse_source_spec(text)), text);
  }
  const auto ramp = parse_source_spec("ramp:100:10");
  const auto& r = std::get<Ramp>(std::get<SyntheticParams>(ramp));
  EXPECT_EQ(r.start_cm, 100.0);
  EXPECT_EQ(r.end_cm, 10.0);
  for (const char* bad : {"30", "const:", "const:abc", "ramp:1", "sin:1:2", "laser:5", "trace:"}) {
    EXPECT_THROW(parse_source_spec(bad), ConfigError) << bad;
  }
}

TEST(SequenceSourceTest, ReplaysThenExhausts) {
  SequenceSource src(synthetic(Constant{30.0}, 2));
  EXPECT_TRUE(src.next());
  EXPECT_TRUE(src.next());
  EXPECT_FALSE(src.next());
}
