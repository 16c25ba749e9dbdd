#include "mvagent/mock_backend.hpp"

#include <httplib.h>

#include <fstream>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "mvagent/dispatch.hpp"
#include "mvagent/error.hpp"

namespace mvagent {

std::string_view to_string(FailMode mode) {
  switch (mode) {
    case FailMode::None: return "none";
    case FailMode::Reject: return "reject";
    case FailMode::Timeout: return "timeout";
    case FailMode::Unavailable: return "unavailable";
    case FailMode::Partial: return "partial";
  }
  return "none";
}

std::optional<FailMode> parse_fail_mode(std::string_view name) {
  for (FailMode m : {FailMode::None, FailMode::Reject, FailMode::Timeout, FailMode::Unavailable, FailMode::Partial}) {
    if (to_string(m) == name) return m;
  }
  return std::nullopt;
}

struct MockBackend::Impl {
  MockBackendConfig config;
  httplib::Server server;
  std::thread thread;
  int port = 0;
  mutable std::mutex mutex;
  std::vector<nlohmann::json> log;

  static std::string error_body(const std::string& plan_id, const std::string& code, const std::string& message) {
    nlohmann::ordered_json j;
    j["plan_id"] = plan_id;
    j["error"] = {{"code", code}, {"message", message}};
    return j.dump();
  }

  std::vector<nlohmann::json> snapshot() const {
    std::lock_guard lock(mutex);
    return log;
  }

  void record(const nlohmann::json& plan) {
    std::lock_guard lock(mutex);
    log.push_back(plan);
    if (config.dump_log) {
      std::ofstream out(*config.dump_log, std::ios::app);
      out << plan.dump() << '\n';
    }
  }

  void handle_plan(const httplib::Request& req, httplib::Response& res) {
    const auto body = nlohmann::json::parse(req.body, nullptr, false);
    GenerationPlan plan;
    try {
      if (body.is_discarded()) throw DomainError("body is not JSON");
      plan = decode_plan(body);
    } catch (const DomainError& e) {
      res.status = 400;
      res.set_content(error_body("", "bad_request", e.what()), "application/json");
      return;
    }
    record(body);

    if (config.latency.count() > 0) std::this_thread::sleep_for(config.latency);
    switch (config.fail_mode) {
      case FailMode::Timeout:
        std::this_thread::sleep_for(config.hang);
        res.set_content(error_body(plan.plan_id, "timeout", "backend timed out"), "application/json");
        return;
      case FailMode::Unavailable:
        res.status = 503;
        res.set_content(error_body(plan.plan_id, "unavailable", "backend unavailable"), "application/json");
        return;
      case FailMode::Reject:
        res.status = 422;
        res.set_content(error_body(plan.plan_id, "rejected", "fail mode: reject"), "application/json");
        return;
      default:
        break;
    }
    if (config.required_resolution && plan.resolution != *config.required_resolution) {
      res.status = 422;
      res.set_content(error_body(plan.plan_id, "rejected",
                                 "resolution " + std::to_string(plan.resolution) + " unsupported, expected " +
                                     std::to_string(*config.required_resolution)),
                      "application/json");
      return;
    }

    GenerationResult result;
    result.plan_id = plan.plan_id;
    for (const auto& cam : plan.requested_views()) {
      result.images.push_back({cam.azimuth, "mock://" + std::string(to_string(plan.backend)) + "/" + plan.plan_id +
                                                "/" + format_degrees(cam.azimuth.degrees())});
    }
    if (config.fail_mode == FailMode::Partial && !result.images.empty()) result.images.pop_back();
    res.set_content(encode_result(result).dump(), "application/json");
  }
};

MockBackend::MockBackend(MockBackendConfig config) : impl_(std::make_unique<Impl>()) {
  impl_->config = std::move(config);
  Impl* impl = impl_.get();
  impl->server.Post("/v1/plans", [impl](const httplib::Request& req, httplib::Response& res) {
    impl->handle_plan(req, res);
  });
  impl->server.Get("/v1/log", [impl](const httplib::Request&, httplib::Response& res) {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& entry : impl->snapshot()) all.push_back(entry);
    res.set_content(all.dump(), "application/json");
  });
  impl->server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    res.set_content("ok", "text/plain");
  });

  // The library default adds SO_REUSEPORT, which would let a second mock
  // silently share a port with a running one.
  impl->server.set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const char*>(&yes), sizeof(yes));
  });

  const auto& cfg = impl->config;
  if (cfg.port == 0) {
    impl->port = impl->server.bind_to_any_port(cfg.host);
  } else {
    impl->port = impl->server.bind_to_port(cfg.host, cfg.port) ? cfg.port : -1;
  }
  if (impl->port <= 0) {
    throw std::runtime_error("mock backend: cannot bind " + cfg.host + ":" + std::to_string(cfg.port));
  }
  impl->thread = std::thread([impl] { impl->server.listen_after_bind(); });
  impl->server.wait_until_ready();
}

MockBackend::~MockBackend() { stop(); }

void MockBackend::stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

int MockBackend::port() const { return impl_->port; }

std::string MockBackend::url() const { return "http://" + impl_->config.host + ":" + std::to_string(impl_->port); }

std::vector<nlohmann::json> MockBackend::log() const { return impl_->snapshot(); }

}  // namespace mvagent
