#pragma once

#include <optional>
#include <utility>
#include <string>
#include <string_view>

namespace vigil::net {

/// Opens a TCP connection; returns the socket fd or -1 (errno preserved).
int connect_tcp(const std::string& host, int port);

/// Writes all bytes; false on error. Never raises SIGPIPE.
bool send_all(int fd, std::string_view data);

/// Splits "HOST:PORT". nullopt if the port is missing or not a number.
std::optional<std::pair<std::string, int>> split_host_port(std::string_view text);

/// Buffered newline reader over a socket.
class LineReader {
 public:
  explicit LineReader(int fd) : fd_(fd) {}
  /// False at end of stream. The newline is stripped.
  bool getline(std::string& line);

 private:
  int fd_;
  std::string buffer_;
  bool eof_ = false;
};

}  // namespace vigil::net
