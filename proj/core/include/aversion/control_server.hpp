#pragma once

#include <atomic>
#include <cstdint>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "aversion/live_session.hpp"

namespace aversion::engine {

inline constexpr std::uint16_t kDefaultControlPort = 7480;

/// TCP front end for a LiveSession speaking the newline-delimited JSON
/// protocol in protocol.hpp. Each client gets a profile message on connect,
/// an ack or error reply per inbound line, and every tick thereafter.
class ControlServer {
 public:
  /// Binds and listens immediately; port 0 picks an ephemeral port.
  /// Throws Error("cannot bind ...") when the address is unavailable.
  ControlServer(LiveSession& session, std::string bind_address = "127.0.0.1",
                std::uint16_t port = kDefaultControlPort);
  ~ControlServer();
  ControlServer(const ControlServer&) = delete;
  ControlServer& operator=(const ControlServer&) = delete;

  void start();
  void stop();

  std::uint16_t port() const noexcept { return port_; }
  const std::string& address() const noexcept { return address_; }
  std::size_t client_count() const;

 private:
  struct Client;

  void accept_loop();
  void serve_reads(const std::shared_ptr<Client>& client);
  void serve_writes(const std::shared_ptr<Client>& client);
  void handle_line(Client& client, const std::string& line);
  void reap_finished();

  LiveSession& session_;
  std::string address_;
  std::uint16_t port_ = 0;
  int listen_fd_ = -1;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;

  mutable std::mutex clients_mutex_;
  std::list<std::shared_ptr<Client>> clients_;
};

}  // namespace aversion::engine
