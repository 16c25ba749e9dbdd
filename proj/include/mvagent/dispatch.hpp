#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mvagent/answer.hpp"
#include "mvagent/endpoint.hpp"

namespace mvagent {

enum class BackendId { ImageDream, MVDream, Zero123 };

inline constexpr BackendId kAllBackends[] = {BackendId::ImageDream, BackendId::MVDream, BackendId::Zero123};

std::string_view to_string(BackendId id);
std::optional<BackendId> parse_backend(std::string_view name);

// Image-based -> imagedream, caption-based -> mvdream, related-view -> zero123.
BackendId route(TaskKind task);

struct CameraConfig {
  double elevation = 0.0;
  double radius = 1.5;
  int resolution = 256;

  // Throws DomainError unless elevation is in [-90, 90], radius > 0 and resolution > 0.
  void check() const;
};

struct CameraSpec {
  Azimuth azimuth;
  double elevation = 0.0;
  double radius = 1.5;

  friend bool operator==(const CameraSpec&, const CameraSpec&) = default;
};

struct GenerationPlan {
  std::string plan_id;
  BackendId backend = BackendId::ImageDream;
  std::vector<CameraSpec> cameras;
  std::optional<std::string> caption;
  std::optional<std::string> image_ref;
  int resolution = 256;

  // Views the backend must synthesize. zero123 plans list the reference
  // camera first and only the rotated camera is generated.
  std::span<const CameraSpec> requested_views() const;

  friend bool operator==(const GenerationPlan&, const GenerationPlan&) = default;
};

struct PlanContext {
  std::string plan_id;
  std::optional<std::string> image_ref;
  std::optional<TaskKind> expected_task;
  // Azimuth count implied by the instruction, when known.
  std::optional<std::size_t> expected_views;
  // Instruction caption; the only caption source for caption-based tasks.
  std::optional<std::string> caption;
};

enum class PlanErrorKind { ContextMismatch, ValidationFailed };

struct PlanError : public std::runtime_error {
  PlanError(PlanErrorKind k, const std::string& message, std::vector<Finding> v = {})
      : std::runtime_error(message), kind(k), violations(std::move(v)) {}
  PlanErrorKind kind;
  std::vector<Finding> violations;
};

std::string_view to_string(PlanErrorKind kind);

// Validates the answer, routes it and attaches the fixed camera constants.
// Throws PlanError.
GenerationPlan build_plan(const Answer& answer, const PlanContext& context, const CameraConfig& config);

struct GeneratedImage {
  Azimuth azimuth;
  std::string uri;

  friend bool operator==(const GeneratedImage&, const GeneratedImage&) = default;
};

struct GenerationResult {
  std::string plan_id;
  std::vector<GeneratedImage> images;
  std::chrono::nanoseconds backend_latency{0};
};

enum class DispatchErrorKind { BackendUnavailable, BackendRejected, Timeout };

std::string_view to_string(DispatchErrorKind kind);

struct DispatchError : public std::runtime_error {
  DispatchError(DispatchErrorKind k, const std::string& message) : std::runtime_error(message), kind(k) {}
  DispatchErrorKind kind;
};

// Wire form: {plan_id, backend, cameras: [{azimuth, elevation, radius}],
// caption?, image_ref?, resolution}. Degrees use the two-decimal grid.
nlohmann::ordered_json encode_plan(const GenerationPlan& plan);
// Throws DomainError on a malformed message.
GenerationPlan decode_plan(const nlohmann::json& message);

// {plan_id, images: [{azimuth, uri}]}
nlohmann::ordered_json encode_result(const GenerationResult& result);
GenerationResult decode_result(const nlohmann::json& message);

nlohmann::ordered_json degrees_json(double degrees);

// Per-backend message encoding; real servers with other azimuth conventions
// swap in their own encoder here, the plan itself stays unchanged.
using PlanEncoder = std::function<nlohmann::ordered_json(const GenerationPlan&)>;

inline constexpr std::chrono::milliseconds kDefaultBackendTimeout{120'000};

class BackendClient {
 public:
  BackendClient(BackendId backend, std::string_view url,
                std::chrono::milliseconds timeout = kDefaultBackendTimeout, PlanEncoder encoder = encode_plan);

  BackendId backend() const { return backend_; }
  const Endpoint& endpoint() const { return endpoint_; }

  // One request per plan; all requested views come back or the call throws
  // DispatchError.
  GenerationResult dispatch(const GenerationPlan& plan) const;

 private:
  BackendId backend_;
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
  PlanEncoder encoder_;
};

GenerationResult dispatch_plan(const GenerationPlan& plan, const BackendClient& client);

}  // namespace mvagent
