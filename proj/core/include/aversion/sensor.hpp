#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <variant>
#include <vector>

#include "aversion/bounded_queue.hpp"

namespace aversion::sensor {

inline constexpr std::uint32_t kDefaultFramePeriodMs = 100;

/// One distance reading aligned to an engine frame (numbered from 1).
/// distance_cm is always in {0} U [2, 450] U {700}.
struct DistanceSample {
  std::uint64_t frame = 0;
  double raw_cm = 0.0;
  double distance_cm = 0.0;

  friend bool operator==(const DistanceSample&, const DistanceSample&) = default;
};

/// True when the value is one the clamp rule can emit.
bool is_clamped_value(double distance_cm) noexcept;

// ---------------------------------------------------------------------------
// Traces

/// Reads a CSV trace with header `t_ms,distance_cm` and rows strictly
/// increasing in t_ms. Frames are laid on a grid starting at the first row's
/// timestamp; each frame holds the latest row at or before its time.
///
/// Throws ParseError (with line number) for malformed rows and OrderingError
/// for non-increasing timestamps.
std::vector<DistanceSample> parse_trace(std::istream& in,
                                        std::uint32_t frame_period_ms = kDefaultFramePeriodMs);
std::vector<DistanceSample> read_trace(const std::filesystem::path& path,
                                       std::uint32_t frame_period_ms = kDefaultFramePeriodMs);

// ---------------------------------------------------------------------------
// Synthetic generators

struct Constant {
  double value_cm;
};
/// Linear from start to end; both endpoints are emitted.
struct Ramp {
  double start_cm;
  double end_cm;
};
/// center + amplitude * sin(2 pi k / period_frames), k = 0, 1, ...
struct Sinusoid {
  double center_cm;
  double amplitude_cm;
  double period_frames;
};
using SyntheticParams = std::variant<Constant, Ramp, Sinusoid>;

/// Throws ValidationError for non-finite parameters, negative amplitude or
/// non-positive period.
std::vector<DistanceSample> synthetic(const SyntheticParams& params, std::uint64_t n_frames);

// ---------------------------------------------------------------------------
// Serial mock

/// Parses one `R <integer-cm>` line (trailing newline optional) and returns
/// the clamped distance. Throws ProtocolError for anything else.
double parse_serial_line(std::string_view line);

// ---------------------------------------------------------------------------
// Sources

/// Pull-based distance stream consumed by the engine, one sample per frame.
class DistanceSource {
 public:
  virtual ~DistanceSource() = default;
  /// Next sample, or nullopt when the source is exhausted.
  virtual std::optional<DistanceSample> next() = 0;
};

/// Replays a precomputed sequence (traces and synthetic generators).
class SequenceSource final : public DistanceSource {
 public:
  explicit SequenceSource(std::vector<DistanceSample> samples) : samples_(std::move(samples)) {}
  std::optional<DistanceSample> next() override;

 private:
  std::vector<DistanceSample> samples_;
  std::size_t cursor_ = 0;
};

/// Reads one serial line per frame from a byte stream. A malformed line
/// repeats the last good value (initially the out-of-range marker) and is
/// counted in protocol_errors().
class SerialMockSource final : public DistanceSource {
 public:
  /// Value held before the first good line: a missing echo reads as out of range.
  static constexpr double kInitialHoldCm = 700.0;

  explicit SerialMockSource(std::istream& in) : in_(in) {}
  std::optional<DistanceSample> next() override;
  std::uint64_t protocol_errors() const noexcept { return errors_; }
  const std::string& last_error() const noexcept { return last_error_; }

 private:
  std::istream& in_;
  std::uint64_t frame_ = 0;
  double held_cm_ = kInitialHoldCm;
  std::uint64_t errors_ = 0;
  std::string last_error_;
};

/// Reads serial lines on a background thread into a bounded queue (oldest
/// dropped on overflow). The engine drains it at tick boundaries.
class SerialPump {
 public:
  /// Opens `path` (file, FIFO or pseudo-terminal). Throws ConfigError if it
  /// cannot be opened.
  explicit SerialPump(const std::filesystem::path& path, std::size_t capacity = 64);
  ~SerialPump();
  SerialPump(const SerialPump&) = delete;
  SerialPump& operator=(const SerialPump&) = delete;

  /// Latest valid reading among the lines queued since the previous call,
  /// or nullopt when none arrived. Malformed lines count as protocol errors.
  std::optional<double> drain_latest();

  std::uint64_t protocol_errors() const noexcept { return errors_.load(); }
  std::uint64_t dropped_lines() const { return lines_.dropped(); }
  bool finished() const noexcept { return finished_.load(); }

 private:
  void reader_loop();

  int fd_ = -1;
  BoundedQueue<std::string> lines_;
  std::atomic<bool> stop_{false};
  std::atomic<bool> finished_{false};
  std::atomic<std::uint64_t> errors_{0};
  std::thread reader_;
};

// ---------------------------------------------------------------------------
// Source selection

struct TraceSpec {
  std::filesystem::path path;
};
struct SerialSpec {
  std::filesystem::path path;  // "-" reads standard input
};
using SourceSpec = std::variant<SyntheticParams, TraceSpec, SerialSpec>;

/// Mini-language used by flags and config files:
///   const:30   ramp:100:10   sin:30:40:50   trace:path.csv   serial:/dev/pts/3
/// Throws ConfigError for anything else.
SourceSpec parse_source_spec(std::string_view text);
std::string to_string(const SourceSpec& spec);

}  // namespace aversion::sensor
