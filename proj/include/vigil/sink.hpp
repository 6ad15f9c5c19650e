#pragma once

#include <chrono>
#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <string_view>

#include "vigil/event.hpp"

namespace vigil {

struct Ack {
  bool ok = true;
  int attempts = 1;
  std::string error;
};

/// Destination for event lines. publish() writes exactly one JSON line per
/// event and serializes concurrent callers, so per-stream order is kept.
/// Delivery failures are reported in the Ack, never thrown.
class Sink {
 public:
  virtual ~Sink() = default;

  Ack publish(const Event& event);
  Ack publish_line(std::string_view line);

 protected:
  /// Writes `line` (already newline-terminated).
  virtual Ack write_line(std::string_view line) = 0;

 private:
  std::mutex mutex_;
};

class StreamSink final : public Sink {
 public:
  explicit StreamSink(std::ostream& out) : out_(out) {}

 protected:
  Ack write_line(std::string_view line) override;

 private:
  std::ostream& out_;
};

class FileSink final : public Sink {
 public:
  explicit FileSink(const std::string& path);

 protected:
  Ack write_line(std::string_view line) override;

 private:
  std::ofstream out_;
  std::string path_;
};

struct RetryPolicy {
  int attempts = 3;
  std::chrono::milliseconds initial_backoff{20};
};

/// Line-oriented TCP client. Connects lazily and reconnects on failure,
/// with `attempts` tries and doubling backoff per publish.
class TcpSink final : public Sink {
 public:
  TcpSink(std::string host, int port, RetryPolicy retry = {});
  ~TcpSink() override;

 protected:
  Ack write_line(std::string_view line) override;

 private:
  void disconnect();

  std::string host_;
  int port_;
  RetryPolicy retry_;
  int fd_ = -1;
};

/// "stdout", "file:PATH" or "tcp:HOST:PORT".
std::unique_ptr<Sink> make_sink(std::string_view descriptor);

}  // namespace vigil
