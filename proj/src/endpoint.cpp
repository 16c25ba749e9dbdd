#include "mvagent/endpoint.hpp"

#include "mvagent/error.hpp"

namespace mvagent {

Endpoint Endpoint::parse(std::string_view url, std::string_view default_path) {
  constexpr std::string_view kScheme = "http://";
  if (url.substr(0, kScheme.size()) != kScheme) throw DomainError("endpoint must be an http:// URL: " + std::string(url));
  const std::size_t slash = url.find('/', kScheme.size());
  Endpoint e;
  e.base = std::string(url.substr(0, slash));
  if (e.base.size() == kScheme.size()) throw DomainError("endpoint has no host: " + std::string(url));
  e.path = slash == std::string_view::npos ? std::string(default_path) : std::string(url.substr(slash));
  if (e.path.empty() || e.path == "/") e.path = std::string(default_path);
  return e;
}

}  // namespace mvagent
