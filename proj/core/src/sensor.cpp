#include "aversion/sensor.hpp"

#include <fcntl.h>
#include <poll.h>
#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <sstream>

#include "aversion/error.hpp"
#include "aversion/proxemics.hpp"

namespace aversion::sensor {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  text = trim(text);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

bool is_clamped_value(double d) noexcept {
  return d == 0.0 || d == proxemics::kOutOfRangeCm ||
         (d >= proxemics::kSensorNearLimitCm && d <= proxemics::kSensorFarLimitCm);
}

// ---------------------------------------------------------------------------

std::vector<DistanceSample> parse_trace(std::istream& in, std::uint32_t frame_period_ms) {
  if (frame_period_ms == 0) throw ValidationError("frame period must be positive");

  struct Row {
    std::int64_t t_ms;
    double distance;
  };
  std::vector<Row> rows;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view text = trim(line);
    if (!header_seen) {
      if (text != "t_ms,distance_cm") {
        throw ParseError("expected header 't_ms,distance_cm'", line_no);
      }
      header_seen = true;
      continue;
    }
    if (text.empty()) continue;

    const auto comma = text.find(',');
    if (comma == std::string_view::npos || text.find(',', comma + 1) != std::string_view::npos) {
      throw ParseError("expected two comma-separated fields", line_no);
    }
    Row row{};
    if (!parse_number(text.substr(0, comma), row.t_ms)) {
      throw ParseError("t_ms is not an integer", line_no);
    }
    if (!parse_number(text.substr(comma + 1), row.distance) || !std::isfinite(row.distance)) {
      throw ParseError("distance_cm is not a finite number", line_no);
    }
    if (!rows.empty() && row.t_ms <= rows.back().t_ms) {
      throw OrderingError("t_ms must be strictly increasing", line_no);
    }
    rows.push_back(row);
  }
  if (!header_seen) throw ParseError("empty trace: missing header", 0);

  std::vector<DistanceSample> out;
  if (rows.empty()) return out;

  const std::int64_t start = rows.front().t_ms;
  const std::int64_t span = rows.back().t_ms - start;
  const std::int64_t frames = span / frame_period_ms + 1;
  out.reserve(static_cast<std::size_t>(frames));
  std::size_t held = 0;
  for (std::int64_t k = 0; k < frames; ++k) {
    const std::int64_t t = start + k * frame_period_ms;
    while (held + 1 < rows.size() && rows[held + 1].t_ms <= t) ++held;
    const double raw = rows[held].distance;
    out.push_back({static_cast<std::uint64_t>(k + 1), raw, proxemics::clamp_distance(raw)});
  }
  return out;
}

std::vector<DistanceSample> read_trace(const std::filesystem::path& path,
                                       std::uint32_t frame_period_ms) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace " + path.string());
  try {
    return parse_trace(in, frame_period_ms);
  } catch (const OrderingError& e) {
    throw OrderingError(path.string() + ": " + e.what(), 0);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
}

// ---------------------------------------------------------------------------

std::vector<DistanceSample> synthetic(const SyntheticParams& params, std::uint64_t n_frames) {
  const auto require_finite = [](double v, const char* what) {
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + " must be finite");
  };

  std::vector<DistanceSample> out;
  out.reserve(n_frames);
  const auto emit = [&out](double raw) {
    out.push_back({out.size() + 1, raw, proxemics::clamp_distance(raw)});
  };

  if (const auto* c = std::get_if<Constant>(&params)) {
    require_finite(c->value_cm, "constant distance");
    for (std::uint64_t k = 0; k < n_frames; ++k) emit(c->value_cm);
  } else if (const auto* r = std::get_if<Ramp>(&params)) {
    require_finite(r->start_cm, "ramp start");
    require_finite(r->end_cm, "ramp end");
    const double steps = n_frames > 1 ? static_cast<double>(n_frames - 1) : 1.0;
    for (std::uint64_t k = 0; k < n_frames; ++k) {
      const double u = static_cast<double>(k) / steps;
      // Exact endpoints regardless of rounding in the interpolation.
      emit(k + 1 == n_frames && n_frames > 1 ? r->end_cm : r->start_cm + u * (r->end_cm - r->start_cm));
    }
  } else {
    const auto& s = std::get<Sinusoid>(params);
    require_finite(s.center_cm, "sinusoid center");
    require_finite(s.amplitude_cm, "sinusoid amplitude");
    require_finite(s.period_frames, "sinusoid period");
    if (s.amplitude_cm < 0.0) throw ValidationError("sinusoid amplitude must be non-negative");
    if (s.period_frames <= 0.0) throw ValidationError("sinusoid period must be positive");
    for (std::uint64_t k = 0; k < n_frames; ++k) {
      const double phase = 2.0 * std::numbers::pi * static_cast<double>(k) / s.period_frames;
      emit(s.center_cm + s.amplitude_cm * std::sin(phase));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

// The raw integer carried by an `R <cm>` line, before clamping.
long long parse_serial_reading(std::string_view line) {
  if (!line.empty() && line.back() == '\n') line.remove_suffix(1);
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  if (line.size() < 3 || line[0] != 'R' || line[1] != ' ') {
    throw ProtocolError("expected 'R <cm>', got '" + std::string(line) + "'");
  }
  std::string_view digits = line.substr(2);
  long long cm = 0;
  const char* end = digits.data() + digits.size();
  const auto [ptr, ec] = std::from_chars(digits.data(), end, cm);
  if (ec != std::errc() || ptr != end) {
    throw ProtocolError("reading is not an integer: '" + std::string(line) + "'");
  }
  return cm;
}

}  // namespace

double parse_serial_line(std::string_view line) {
  return proxemics::clamp_distance(static_cast<double>(parse_serial_reading(line)));
}

// ---------------------------------------------------------------------------

std::optional<DistanceSample> SequenceSource::next() {
  if (cursor_ >= samples_.size()) return std::nullopt;
  return samples_[cursor_++];
}

std::optional<DistanceSample> SerialMockSource::next() {
  std::string line;
  if (!std::getline(in_, line)) return std::nullopt;
  ++frame_;
  double raw = held_cm_;
  try {
    raw = static_cast<double>(parse_serial_reading(line));
    held_cm_ = proxemics::clamp_distance(raw);
  } catch (const ProtocolError& e) {
    ++errors_;
    last_error_ = e.what();
  }
  return DistanceSample{frame_, raw, held_cm_};
}

// ---------------------------------------------------------------------------

SerialPump::SerialPump(const std::filesystem::path& path, std::size_t capacity)
    : lines_(capacity) {
  fd_ = path == "-" ? ::dup(STDIN_FILENO) : ::open(path.c_str(), O_RDONLY | O_NOCTTY);
  if (fd_ < 0) throw ConfigError("cannot open serial device " + path.string());
  reader_ = std::thread([this] { reader_loop(); });
}

SerialPump::~SerialPump() {
  stop_ = true;
  lines_.close();
  if (reader_.joinable()) reader_.join();
  if (fd_ >= 0) ::close(fd_);
}

void SerialPump::reader_loop() {
  std::string pending;
  char buf[256];
  while (!stop_) {
    pollfd pfd{fd_, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, 50);
    if (ready <= 0) continue;
    const ssize_t n = ::read(fd_, buf, sizeof buf);
    if (n <= 0) break;
    pending.append(buf, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = pending.find('\n')) != std::string::npos) {
      lines_.push(pending.substr(0, nl + 1));
      pending.erase(0, nl + 1);
    }
  }
  finished_ = true;
}

std::optional<double> SerialPump::drain_latest() {
  std::optional<double> latest;
  for (const std::string& line : lines_.drain()) {
    try {
      latest = parse_serial_line(line);
    } catch (const ProtocolError&) {
      ++errors_;
    }
  }
  return latest;
}

// ---------------------------------------------------------------------------

SourceSpec parse_source_spec(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw ConfigError("source '" + std::string(text) + "' needs a kind prefix (const:, ramp:, sin:, trace:, serial:)");
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string_view rest = text.substr(colon + 1);

  if (kind == "trace") {
    if (rest.empty()) throw ConfigError("trace source needs a path");
    return TraceSpec{std::string(rest)};
  }
  if (kind == "serial") {
    if (rest.empty()) throw ConfigError("serial source needs a device path");
    return SerialSpec{std::string(rest)};
  }

  std::vector<double> values;
  std::string_view remaining = rest;
  while (true) {
    const auto sep = remaining.find(':');
    double v = 0.0;
    if (!parse_number(remaining.substr(0, sep), v)) {
      throw ConfigError("source '" + std::string(text) + "': parameters must be numbers");
    }
    values.push_back(v);
    if (sep == std::string_view::npos) break;
    remaining.remove_prefix(sep + 1);
  }

  const auto arity = [&](std::size_t n) {
    if (values.size() != n) {
      throw ConfigError("source '" + std::string(text) + "': expected " + std::to_string(n) +
                        " parameter(s)");
    }
  };
  if (kind == "const") {
    arity(1);
    return SyntheticParams{Constant{values[0]}};
  }
  if (kind == "ramp") {
    arity(2);
    return SyntheticParams{Ramp{values[0], values[1]}};
  }
  if (kind == "sin") {
    arity(3);
    return SyntheticParams{Sinusoid{values[0], values[1], values[2]}};
  }
  throw ConfigError("unknown source kind '" + std::string(kind) + "'");
}

std::string to_string(const SourceSpec& spec) {
  std::ostringstream os;
  if (const auto* t = std::get_if<TraceSpec>(&spec)) {
    os << "trace:" << t->path.string();
  } else if (const auto* s = std::get_if<SerialSpec>(&spec)) {
    os << "serial:" << s->path.string();
  } else {
    const auto& p = std::get<SyntheticParams>(spec);
    if (const auto* c = std::get_if<Constant>(&p)) {
      os << "const:" << c->value_cm;
    } else if (const auto* r = std::get_if<Ramp>(&p)) {
      os << "ramp:" << r->start_cm << ':' << r->end_cm;
    } else {
      const auto& w = std::get<Sinusoid>(p);
      os << "sin:" << w.center_cm << ':' << w.amplitude_cm << ':' << w.period_frames;
    }
  }
  return os.str();
}

}  // namespace aversion::sensor
