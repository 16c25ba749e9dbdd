#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace mvagent {

enum class FailMode {
  None,
  Reject,       // every plan answered with error code "rejected"
  Timeout,      // sleep for hang before answering
  Unavailable,  // HTTP 503
  Partial,      // drop the last image
};

std::string_view to_string(FailMode mode);
std::optional<FailMode> parse_fail_mode(std::string_view name);

struct MockBackendConfig {
  std::string host = "127.0.0.1";
  int port = 0;  // 0 picks a free port
  FailMode fail_mode = FailMode::None;
  std::chrono::milliseconds latency{0};
  std::chrono::milliseconds hang{1500};
  // Plans with another resolution are rejected.
  std::optional<int> required_resolution;
  // Every received plan is also appended here, one JSON object per line.
  std::optional<std::string> dump_log;
};

// Stand-in diffusion server. POST /v1/plans answers with
// "mock://<backend>/<plan_id>/<azimuth>" per requested view; GET /v1/log
// returns every plan received so far, in arrival order.
class MockBackend {
 public:
  // Binds and starts serving; throws std::runtime_error when the port is taken.
  explicit MockBackend(MockBackendConfig config);
  ~MockBackend();
  MockBackend(const MockBackend&) = delete;
  MockBackend& operator=(const MockBackend&) = delete;

  int port() const;
  std::string url() const;
  std::vector<nlohmann::json> log() const;
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mvagent
