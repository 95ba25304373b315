#include "aversion/live_session.hpp"

#include <algorithm>
#include <chrono>

#include "aversion/error.hpp"

namespace aversion::engine {

LiveSession::LiveSession(ScenarioConfig config) : LiveSession(std::move(config), Options{}) {}

LiveSession::LiveSession(ScenarioConfig config, Options options)
    : config_(std::move(config)),
      options_(options),
      mailbox_(options.mailbox_capacity),
      simulator_(config_.resolved_profile(), config_.policy, config_.patterns),
      held_distance_cm_(options.initial_distance_cm),
      dominance_override_(config_.dominance) {
  if (config_.frame_period_ms == 0) throw ConfigError("frame_period_ms must be positive");
}

LiveSession::~LiveSession() { stop(); }

void LiveSession::post(protocol::ControlMessage message) { mailbox_.push(std::move(message)); }

std::shared_ptr<Subscription> LiveSession::subscribe() {
  auto sub = std::make_shared<Subscription>(options_.subscriber_capacity);
  std::lock_guard lock(subscribers_mutex_);
  subscribers_.push_back(sub);
  return sub;
}

void LiveSession::unsubscribe(const std::shared_ptr<Subscription>& subscription) {
  std::lock_guard lock(subscribers_mutex_);
  std::erase(subscribers_, subscription);
  subscription->queue().close();
}

void LiveSession::broadcast(const Broadcast& item) {
  std::lock_guard lock(subscribers_mutex_);
  for (const auto& sub : subscribers_) sub->queue().push(item);
}

void LiveSession::apply(const protocol::ControlMessage& message, std::vector<Broadcast>& notices) {
  if (const auto* m = std::get_if<protocol::SetDistance>(&message)) {
    held_distance_cm_ = m->cm;
  } else if (const auto* p = std::get_if<protocol::SetProfile>(&message)) {
    const auto it = config_.profiles.find(p->relationship);
    if (it == config_.profiles.end()) return;  // rejected when posted through the server
    proxemics::RelationshipProfile next = it->second;
    if (dominance_override_) next.dominance = *dominance_override_;
    simulator_.set_profile(std::move(next));
    notices.emplace_back(ProfileNotice{simulator_.profile()});
  } else if (const auto* d = std::get_if<protocol::SetDominance>(&message)) {
    dominance_override_ = d->level;
    simulator_.set_dominance(d->level);
    notices.emplace_back(ProfileNotice{simulator_.profile()});
  } else {
    simulator_.reset();
  }
}

TickEvent LiveSession::tick() {
  std::vector<Broadcast> notices;
  TickEvent event;
  {
    std::lock_guard lock(tick_mutex_);
    for (const auto& message : mailbox_.drain()) apply(message, notices);
    if (serial_) {
      if (const auto reading = serial_->drain_latest()) held_distance_cm_ = *reading;
    }
    event = simulator_.tick(held_distance_cm_);
  }
  for (const auto& n : notices) broadcast(n);
  broadcast(event);
  return event;
}

void LiveSession::start() {
  std::lock_guard lock(loop_mutex_);
  if (running_) return;
  if (loop_thread_.joinable()) loop_thread_.join();
  stop_requested_ = false;
  running_ = true;
  loop_thread_ = std::thread([this] { loop(); });
}

void LiveSession::stop() {
  {
    std::lock_guard lock(loop_mutex_);
    stop_requested_ = true;
  }
  loop_wake_.notify_all();
  wait();
}

void LiveSession::wait() {
  std::thread finished;
  {
    std::lock_guard lock(loop_mutex_);
    if (!loop_thread_.joinable() || loop_thread_.get_id() == std::this_thread::get_id()) return;
    finished = std::move(loop_thread_);
  }
  finished.join();
}

void LiveSession::loop() {
  using clock = std::chrono::steady_clock;
  const auto period = std::chrono::milliseconds(config_.frame_period_ms);
  auto deadline = clock::now() + period;
  std::uint64_t ticks = 0;
  while (true) {
    {
      std::unique_lock lock(loop_mutex_);
      if (loop_wake_.wait_until(lock, deadline, [this] { return stop_requested_; })) break;
    }
    tick();
    ++ticks;
    if (options_.max_ticks && ticks >= *options_.max_ticks) break;
    deadline += period;
    // Never try to catch up a backlog after a stall.
    if (const auto now = clock::now(); deadline < now) deadline = now + period;
  }
  running_ = false;
}

void LiveSession::attach_serial(std::shared_ptr<sensor::SerialPump> pump) {
  std::lock_guard lock(tick_mutex_);
  serial_ = std::move(pump);
}

proxemics::RelationshipProfile LiveSession::active_profile() const {
  std::lock_guard lock(tick_mutex_);
  return simulator_.profile();
}

std::uint64_t LiveSession::frames() const {
  std::lock_guard lock(tick_mutex_);
  return simulator_.state().frame;
}

}  // namespace aversion::engine
