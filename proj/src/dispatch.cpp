#include "mvagent/dispatch.hpp"

#include <httplib.h>

#include <cmath>
#include <cstdio>

#include "mvagent/error.hpp"
#include "mvagent/rng.hpp"

namespace mvagent {

std::string_view to_string(BackendId id) {
  switch (id) {
    case BackendId::ImageDream: return "imagedream";
    case BackendId::MVDream: return "mvdream";
    case BackendId::Zero123: return "zero123";
  }
  return "imagedream";
}

std::optional<BackendId> parse_backend(std::string_view name) {
  for (BackendId id : kAllBackends) {
    if (to_string(id) == name) return id;
  }
  return std::nullopt;
}

BackendId route(TaskKind task) {
  switch (group_of(task)) {
    case TaskGroup::ImageBased: return BackendId::ImageDream;
    case TaskGroup::CaptionBased: return BackendId::MVDream;
    case TaskGroup::RelatedView: return BackendId::Zero123;
  }
  return BackendId::ImageDream;
}

void CameraConfig::check() const {
  if (!(elevation >= -90.0 && elevation <= 90.0)) throw DomainError("elevation must lie in [-90, 90]");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
  if (resolution <= 0) throw DomainError("resolution must be positive");
}

std::span<const CameraSpec> GenerationPlan::requested_views() const {
  std::span<const CameraSpec> all(cameras);
  if (backend == BackendId::Zero123 && !all.empty()) return all.subspan(1);
  return all;
}

std::string_view to_string(PlanErrorKind kind) {
  return kind == PlanErrorKind::ContextMismatch ? "ContextMismatch" : "ValidationFailed";
}

std::string_view to_string(DispatchErrorKind kind) {
  switch (kind) {
    case DispatchErrorKind::BackendUnavailable: return "BackendUnavailable";
    case DispatchErrorKind::BackendRejected: return "BackendRejected";
    case DispatchErrorKind::Timeout: return "Timeout";
  }
  return "BackendRejected";
}

GenerationPlan build_plan(const Answer& answer, const PlanContext& context, const CameraConfig& config) {
  config.check();
  const TaskKind task = answer.task;
  const BackendId backend = route(task);

  if (needs_image(task) && !context.image_ref) {
    throw PlanError(PlanErrorKind::ContextMismatch,
                    std::string(short_name(task)) + " needs a reference image but none was supplied");
  }
  if (backend == BackendId::MVDream && !context.caption) {
    throw PlanError(PlanErrorKind::ContextMismatch,
                    std::string(short_name(task)) + " needs the instruction caption but none was supplied");
  }
  const auto validation = validate_answer(answer, context.expected_task.value_or(task), context.expected_views);
  if (!validation.ok()) {
    std::string message = "answer failed validation:";
    for (const auto& v : validation.violations) message += " " + std::string(to_string(v.kind)) + " (" + v.message + ")";
    throw PlanError(PlanErrorKind::ValidationFailed, message, validation.violations);
  }

  GenerationPlan plan;
  plan.plan_id = context.plan_id;
  if (plan.plan_id.empty()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "plan-%016llx", static_cast<unsigned long long>(fnv1a(format_answer(answer))));
    plan.plan_id = buf;
  }
  plan.backend = backend;
  plan.resolution = config.resolution;
  for (Azimuth az : answer.azimuths) plan.cameras.push_back({az, config.elevation, config.radius});
  switch (backend) {
    case BackendId::ImageDream:
      plan.caption = answer.caption;
      plan.image_ref = context.image_ref;
      break;
    case BackendId::MVDream:
      plan.caption = context.caption;
      break;
    case BackendId::Zero123:
      plan.image_ref = context.image_ref;
      break;
  }
  return plan;
}

nlohmann::ordered_json degrees_json(double degrees) {
  const double r = std::round(degrees * 100.0) / 100.0;
  if (r == std::trunc(r) && std::fabs(r) < 1e15) return static_cast<long long>(r);
  return r;
}

nlohmann::ordered_json encode_plan(const GenerationPlan& plan) {
  nlohmann::ordered_json j;
  j["plan_id"] = plan.plan_id;
  j["backend"] = to_string(plan.backend);
  auto cams = nlohmann::ordered_json::array();
  for (const auto& c : plan.cameras) {
    cams.push_back({{"azimuth", degrees_json(c.azimuth.degrees())},
                    {"elevation", degrees_json(c.elevation)},
                    {"radius", c.radius}});
  }
  j["cameras"] = std::move(cams);
  if (plan.caption) j["caption"] = *plan.caption;
  if (plan.image_ref) j["image_ref"] = *plan.image_ref;
  j["resolution"] = plan.resolution;
  return j;
}

namespace {

template <typename T>
T field(const nlohmann::json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw DomainError(std::string("missing field ") + name);
  try {
    return j.at(name).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw DomainError(std::string("bad field ") + name);
  }
}

std::optional<std::string> optional_string(const nlohmann::json& j, const char* name) {
  if (!j.contains(name) || j.at(name).is_null()) return std::nullopt;
  return field<std::string>(j, name);
}

}  // namespace

GenerationPlan decode_plan(const nlohmann::json& message) {
  GenerationPlan plan;
  plan.plan_id = field<std::string>(message, "plan_id");
  const auto backend = parse_backend(field<std::string>(message, "backend"));
  if (!backend) throw DomainError("unknown backend");
  plan.backend = *backend;
  const auto cameras = field<nlohmann::json>(message, "cameras");
  if (!cameras.is_array() || cameras.empty()) throw DomainError("cameras must be a non-empty array");
  for (const auto& c : cameras) {
    plan.cameras.push_back({Azimuth::canonical(field<double>(c, "azimuth")), field<double>(c, "elevation"),
                            field<double>(c, "radius")});
  }
  plan.caption = optional_string(message, "caption");
  plan.image_ref = optional_string(message, "image_ref");
  plan.resolution = field<int>(message, "resolution");
  return plan;
}

nlohmann::ordered_json encode_result(const GenerationResult& result) {
  nlohmann::ordered_json j;
  j["plan_id"] = result.plan_id;
  auto images = nlohmann::ordered_json::array();
  for (const auto& im : result.images) {
    images.push_back({{"azimuth", degrees_json(im.azimuth.degrees())}, {"uri", im.uri}});
  }
  j["images"] = std::move(images);
  return j;
}

GenerationResult decode_result(const nlohmann::json& message) {
  GenerationResult r;
  r.plan_id = field<std::string>(message, "plan_id");
  const auto images = field<nlohmann::json>(message, "images");
  if (!images.is_array()) throw DomainError("images must be an array");
  for (const auto& im : images) {
    r.images.push_back({Azimuth::canonical(field<double>(im, "azimuth")), field<std::string>(im, "uri")});
  }
  return r;
}

BackendClient::BackendClient(BackendId backend, std::string_view url, std::chrono::milliseconds timeout,
                             PlanEncoder encoder)
    : backend_(backend), endpoint_(Endpoint::parse(url, "/v1/plans")), timeout_(timeout), encoder_(std::move(encoder)) {}

GenerationResult BackendClient::dispatch(const GenerationPlan& plan) const {
  if (plan.backend != backend_) {
    throw DomainError("plan for " + std::string(to_string(plan.backend)) + " sent to a " +
                      std::string(to_string(backend_)) + " client");
  }
  httplib::Client client(endpoint_.base);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);

  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(endpoint_.path, encoder_(plan).dump(), "application/json");
  const auto latency = std::chrono::steady_clock::now() - start;
  const std::string where = std::string(to_string(backend_)) + " at " + endpoint_.url();
  if (!res) {
    const auto err = res.error();
    if (err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout) {
      throw DispatchError(DispatchErrorKind::Timeout, where + ": " + httplib::to_string(err));
    }
    throw DispatchError(DispatchErrorKind::BackendUnavailable, where + ": " + httplib::to_string(err));
  }
  if (res->status == 503) throw DispatchError(DispatchErrorKind::BackendUnavailable, where + ": HTTP 503");

  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_object() && reply.contains("error")) {
    const auto& e = reply["error"];
    const std::string code = e.is_object() ? e.value("code", std::string{}) : std::string{};
    const std::string message = e.is_object() ? e.value("message", std::string{}) : std::string{};
    if (code == "timeout") throw DispatchError(DispatchErrorKind::Timeout, where + ": " + message);
    if (code == "unavailable") throw DispatchError(DispatchErrorKind::BackendUnavailable, where + ": " + message);
    throw DispatchError(DispatchErrorKind::BackendRejected, where + ": " + code + ": " + message);
  }
  if (res->status != 200 || reply.is_discarded()) {
    throw DispatchError(DispatchErrorKind::BackendRejected, where + ": HTTP " + std::to_string(res->status));
  }

  GenerationResult result;
  try {
    result = decode_result(reply);
  } catch (const DomainError& e) {
    throw DispatchError(DispatchErrorKind::BackendRejected, where + ": malformed result: " + e.what());
  }
  const auto wanted = plan.requested_views();
  bool complete = result.plan_id == plan.plan_id && result.images.size() == wanted.size();
  for (std::size_t i = 0; complete && i < wanted.size(); ++i) {
    complete = circular_distance(result.images[i].azimuth.degrees(), wanted[i].azimuth.degrees()) <= 0.01;
  }
  if (!complete) {
    throw DispatchError(DispatchErrorKind::BackendRejected,
                        where + ": result does not cover every requested view of " + plan.plan_id);
  }
  result.backend_latency = std::chrono::duration_cast<std::chrono::nanoseconds>(latency);
  return result;
}

GenerationResult dispatch_plan(const GenerationPlan& plan, const BackendClient& client) {
  return client.dispatch(plan);
}

}  // namespace mvagent
