#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>
#include <variant>
#include <vector>

#include "aversion/bounded_queue.hpp"
#include "aversion/engine.hpp"
#include "aversion/protocol.hpp"

namespace aversion::engine {

/// Sent to subscribers before the first tick that uses a new profile.
struct ProfileNotice {
  proxemics::RelationshipProfile profile;
};

using Broadcast = std::variant<TickEvent, ProfileNotice>;

/// A subscriber's outbound queue. Slow readers lose the oldest entries;
/// dropped() counts them.
class Subscription {
 public:
  explicit Subscription(std::size_t capacity) : queue_(capacity) {}
  BoundedQueue<Broadcast>& queue() noexcept { return queue_; }
  std::uint64_t dropped() const { return queue_.dropped(); }

 private:
  BoundedQueue<Broadcast> queue_;
};

/// Interactive engine: one loop owns the simulator, control messages queue
/// in a bounded mailbox and take effect at the next tick boundary, and every
/// TickEvent fans out to all subscribers without blocking the loop.
///
/// The held distance starts at the out-of-range marker (nobody present).
/// set_profile carries the accumulated level over; a dominance set with
/// set_dominance (or in the config) persists across profile switches;
/// reset clears the accumulator but not the frame counter.
class LiveSession {
 public:
  struct Options {
    std::size_t mailbox_capacity = 64;
    std::size_t subscriber_capacity = 256;
    double initial_distance_cm = proxemics::kOutOfRangeCm;
    /// Stop the clocked loop after this many ticks.
    std::optional<std::uint64_t> max_ticks;
  };

  explicit LiveSession(ScenarioConfig config);
  LiveSession(ScenarioConfig config, Options options);
  ~LiveSession();
  LiveSession(const LiveSession&) = delete;
  LiveSession& operator=(const LiveSession&) = delete;

  /// Queues a control message for the next tick boundary.
  void post(protocol::ControlMessage message);

  std::shared_ptr<Subscription> subscribe();
  void unsubscribe(const std::shared_ptr<Subscription>& subscription);

  /// Applies queued messages, advances one frame and broadcasts the event.
  TickEvent tick();

  /// Starts ticking on a wall-clock cadence of frame_period_ms.
  void start();
  /// Stops the clocked loop and waits for it to exit.
  void stop();
  /// Blocks until the clocked loop exits (max_ticks reached or stop()).
  void wait();
  bool running() const noexcept { return running_.load(); }

  /// Serial readings, when attached, replace the held distance at each tick.
  void attach_serial(std::shared_ptr<sensor::SerialPump> pump);

  proxemics::RelationshipProfile active_profile() const;
  std::uint64_t frames() const;
  std::uint64_t mailbox_dropped() const { return mailbox_.dropped(); }
  const ScenarioConfig& config() const noexcept { return config_; }

 private:
  void apply(const protocol::ControlMessage& message, std::vector<Broadcast>& notices);
  void broadcast(const Broadcast& item);
  void loop();

  ScenarioConfig config_;
  Options options_;
  BoundedQueue<protocol::ControlMessage> mailbox_;

  mutable std::mutex tick_mutex_;  // guards the fields below
  Simulator simulator_;
  double held_distance_cm_;
  std::optional<Dominance> dominance_override_;
  std::shared_ptr<sensor::SerialPump> serial_;

  std::mutex subscribers_mutex_;
  std::vector<std::shared_ptr<Subscription>> subscribers_;

  std::atomic<bool> running_{false};
  std::mutex loop_mutex_;
  std::condition_variable loop_wake_;
  bool stop_requested_ = false;
  std::thread loop_thread_;
};

}  // namespace aversion::engine
