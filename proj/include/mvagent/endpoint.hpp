#pragma once

#include <string>
#include <string_view>

namespace mvagent {

// "http://host:port/path" split into the client base and request path.
struct Endpoint {
  std::string base;  // scheme://host[:port]
  std::string path;  // begins with '/'

  // Throws DomainError for anything but http:// URLs with a host.
  static Endpoint parse(std::string_view url, std::string_view default_path);
  std::string url() const { return base + path; }
};

}  // namespace mvagent
