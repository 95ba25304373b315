#include "aversion/control_server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>

#include "aversion/error.hpp"

namespace aversion::engine {

namespace {

constexpr int kPollMs = 50;
constexpr std::size_t kMaxLineBytes = 64 * 1024;

std::string errno_text() { return std::strerror(errno); }

}  // namespace

struct ControlServer::Client {
  int fd = -1;
  std::shared_ptr<Subscription> subscription;
  std::mutex write_mutex;
  std::atomic<bool> alive{true};
  std::atomic<int> threads_running{0};
  std::thread reader;
  std::thread writer;

  void send_line(const std::string& line) {
    std::lock_guard lock(write_mutex);
    if (!alive) return;
    std::string framed = line + '\n';
    const char* p = framed.data();
    std::size_t left = framed.size();
    while (left > 0) {
      const ssize_t n = ::send(fd, p, left, MSG_NOSIGNAL);
      if (n <= 0) {
        if (n < 0 && errno == EINTR) continue;
        alive = false;
        return;
      }
      p += n;
      left -= static_cast<std::size_t>(n);
    }
  }
};

ControlServer::ControlServer(LiveSession& session, std::string bind_address, std::uint16_t port)
    : session_(session), address_(std::move(bind_address)) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, address_.c_str(), &addr.sin_addr) != 1) {
    throw Error("cannot bind " + address_ + ":" + std::to_string(port) + ": invalid IPv4 address");
  }

  listen_fd_ = ::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0);
  if (listen_fd_ < 0) throw Error("cannot create socket: " + errno_text());
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 ||
      ::listen(listen_fd_, 8) != 0) {
    const std::string why = errno_text();
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw Error("cannot bind " + address_ + ":" + std::to_string(port) + ": " + why);
  }

  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
}

ControlServer::~ControlServer() {
  stop();
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

void ControlServer::start() {
  if (accept_thread_.joinable()) return;
  stopping_ = false;
  accept_thread_ = std::thread([this] { accept_loop(); });
}

void ControlServer::stop() {
  stopping_ = true;
  if (accept_thread_.joinable()) accept_thread_.join();

  std::list<std::shared_ptr<Client>> clients;
  {
    std::lock_guard lock(clients_mutex_);
    clients.swap(clients_);
  }
  for (const auto& c : clients) {
    c->alive = false;
    ::shutdown(c->fd, SHUT_RDWR);
    session_.unsubscribe(c->subscription);
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
    ::close(c->fd);
  }
}

std::size_t ControlServer::client_count() const {
  std::lock_guard lock(clients_mutex_);
  std::size_t n = 0;
  for (const auto& c : clients_) n += c->alive ? 1 : 0;
  return n;
}

void ControlServer::reap_finished() {
  std::list<std::shared_ptr<Client>> done;
  {
    std::lock_guard lock(clients_mutex_);
    for (auto it = clients_.begin(); it != clients_.end();) {
      if ((*it)->threads_running == 0) {
        done.push_back(*it);
        it = clients_.erase(it);
      } else {
        ++it;
      }
    }
  }
  for (const auto& c : done) {
    if (c->reader.joinable()) c->reader.join();
    if (c->writer.joinable()) c->writer.join();
    ::close(c->fd);
  }
}

void ControlServer::accept_loop() {
  while (!stopping_) {
    reap_finished();
    pollfd pfd{listen_fd_, POLLIN, 0};
    if (::poll(&pfd, 1, kPollMs) <= 0) continue;
    const int fd = ::accept4(listen_fd_, nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) continue;

    auto client = std::make_shared<Client>();
    client->fd = fd;
    client->subscription = session_.subscribe();
    client->send_line(protocol::encode_profile(session_.active_profile()));
    client->threads_running = 2;
    client->reader = std::thread([this, client] { serve_reads(client); });
    client->writer = std::thread([this, client] { serve_writes(client); });
    std::lock_guard lock(clients_mutex_);
    clients_.push_back(std::move(client));
  }
}

void ControlServer::handle_line(Client& client, const std::string& line) {
  try {
    const protocol::ControlMessage message = protocol::parse_control(line);
    if (const auto* p = std::get_if<protocol::SetProfile>(&message)) {
      if (!session_.config().profiles.count(p->relationship)) {
        throw ProtocolError("no profile configured for '" +
                            std::string(to_string(p->relationship)) + "'");
      }
    }
    session_.post(message);
    client.send_line(protocol::encode_ack(protocol::type_name(message)));
  } catch (const ProtocolError& e) {
    client.send_line(protocol::encode_error(e.what()));
  }
}

void ControlServer::serve_reads(const std::shared_ptr<Client>& client) {
  std::string pending;
  char buf[1024];
  while (client->alive && !stopping_) {
    pollfd pfd{client->fd, POLLIN, 0};
    const int ready = ::poll(&pfd, 1, kPollMs);
    if (ready < 0 && errno != EINTR) break;
    if (ready <= 0) continue;
    const ssize_t n = ::recv(client->fd, buf, sizeof buf, 0);
    if (n <= 0) break;
    pending.append(buf, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = pending.find('\n')) != std::string::npos) {
      std::string line = pending.substr(0, nl);
      pending.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) handle_line(*client, line);
    }
    if (pending.size() > kMaxLineBytes) {
      client->send_line(protocol::encode_error("line too long"));
      pending.clear();
    }
  }
  client->alive = false;
  client->subscription->queue().close();
  --client->threads_running;
}

void ControlServer::serve_writes(const std::shared_ptr<Client>& client) {
  while (client->alive && !stopping_) {
    auto item = client->subscription->queue().pop_for(std::chrono::milliseconds(kPollMs));
    if (!item) {
      if (client->subscription->queue().closed()) break;
      continue;
    }
    if (const auto* tick = std::get_if<TickEvent>(&*item)) {
      client->send_line(protocol::encode_tick(*tick));
    } else {
      client->send_line(protocol::encode_profile(std::get<ProfileNotice>(*item).profile));
    }
  }
  client->alive = false;
  session_.unsubscribe(client->subscription);
  --client->threads_running;
}

}  // namespace aversion::engine
