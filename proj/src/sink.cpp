#include "vigil/sink.hpp"

#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <iostream>
#include <thread>

#include "vigil/errors.hpp"
#include "vigil/net.hpp"

namespace vigil {

Ack Sink::publish(const Event& event) { return publish_line(serialize_event(event)); }

Ack Sink::publish_line(std::string_view line) {
  std::string framed(line);
  framed += '\n';
  std::lock_guard lock(mutex_);
  return write_line(framed);
}

Ack StreamSink::write_line(std::string_view line) {
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) return {false, 1, "stream write failed"};
  return {};
}

FileSink::FileSink(const std::string& path) : out_(path, std::ios::binary), path_(path) {
  if (!out_) throw SinkError("cannot open sink file '" + path + "'");
}

Ack FileSink::write_line(std::string_view line) {
  out_.write(line.data(), static_cast<std::streamsize>(line.size()));
  out_.flush();
  if (!out_) return {false, 1, "write to '" + path_ + "' failed"};
  return {};
}

TcpSink::TcpSink(std::string host, int port, RetryPolicy retry)
    : host_(std::move(host)), port_(port), retry_(retry) {}

TcpSink::~TcpSink() { disconnect(); }

void TcpSink::disconnect() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

Ack TcpSink::write_line(std::string_view line) {
  auto backoff = retry_.initial_backoff;
  std::string last_error;
  for (int attempt = 1; attempt <= retry_.attempts; ++attempt) {
    if (fd_ < 0) fd_ = net::connect_tcp(host_, port_);
    if (fd_ >= 0 && net::send_all(fd_, line)) return {true, attempt, {}};
    last_error = std::strerror(errno);
    disconnect();
    if (attempt < retry_.attempts) {
      std::this_thread::sleep_for(backoff);
      backoff *= 2;
    }
  }
  return {false, retry_.attempts,
          "tcp sink " + host_ + ":" + std::to_string(port_) + " unreachable after " +
              std::to_string(retry_.attempts) + " attempts: " + last_error};
}

std::unique_ptr<Sink> make_sink(std::string_view descriptor) {
  if (descriptor == "stdout") return std::make_unique<StreamSink>(std::cout);
  if (descriptor.starts_with("file:")) {
    return std::make_unique<FileSink>(std::string(descriptor.substr(5)));
  }
  if (descriptor.starts_with("tcp:")) {
    auto hp = net::split_host_port(descriptor.substr(4));
    if (!hp) throw SinkError("bad tcp sink '" + std::string(descriptor) + "'");
    return std::make_unique<TcpSink>(hp->first, hp->second);
  }
  throw SinkError("unknown sink '" + std::string(descriptor) +
                  "' (expected stdout, file:PATH or tcp:HOST:PORT)");
}

}  // namespace vigil
