#include "mvagent/adapters.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>
#include <sstream>

#include "mvagent/error.hpp"
#include "mvagent/instruction_parser.hpp"

namespace mvagent {

std::string_view to_string(AdapterErrorCode code) {
  switch (code) {
    case AdapterErrorCode::UnrecognizedTemplate: return "unrecognized_template";
    case AdapterErrorCode::Unavailable: return "unavailable";
    case AdapterErrorCode::Timeout: return "timeout";
    case AdapterErrorCode::BadResponse: return "bad_response";
  }
  return "unknown";
}

LookupCaptioner LookupCaptioner::from_records(std::span<const InstructionRecord> records) {
  std::unordered_map<std::string, std::string> table;
  for (const auto& r : records) {
    if (r.image_ref && r.ground_truth.caption) table.emplace(*r.image_ref, *r.ground_truth.caption);
  }
  return LookupCaptioner(std::move(table));
}

std::optional<std::string> LookupCaptioner::caption_for(const std::optional<std::string>& image_ref) const {
  if (!image_ref) return std::nullopt;
  const auto it = table_.find(*image_ref);
  if (it == table_.end()) return std::nullopt;
  return it->second;
}

OracleAdapter::OracleAdapter(std::shared_ptr<const Captioner> captioner) : captioner_(std::move(captioner)) {
  if (!captioner_) captioner_ = std::make_shared<LookupCaptioner>();
}

Answer OracleAdapter::solve(const AdapterRequest& request) const {
  ParsedInstruction parsed = [&] {
    try {
      return parse_instruction(request.instruction);
    } catch (const UnrecognizedTemplate& e) {
      throw AdapterError(AdapterErrorCode::UnrecognizedTemplate, e.what());
    }
  }();
  if (carries_caption(parsed.task)) parsed.params.caption = captioner_->caption_for(request.image_ref);
  return ground_truth_for(parsed.task, parsed.params);
}

AdapterResponse OracleAdapter::respond(const AdapterRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  AdapterResponse r;
  r.answer_text = format_answer(solve(request));
  r.latency = std::chrono::steady_clock::now() - start;
  return r;
}

AdapterResponse oracle_answer(const AdapterRequest& request, const Captioner& captioner) {
  // Non-owning view of the caller's captioner.
  OracleAdapter oracle(std::shared_ptr<const Captioner>(&captioner, [](const Captioner*) {}));
  return oracle.respond(request);
}

void CorruptionPolicy::check() const {
  for (double p : {p_task_flip, p_azimuth_jitter, p_caption_shuffle}) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("corruption probabilities must lie in [0, 1]");
  }
  if (!(jitter_deg >= 0.0) || !std::isfinite(jitter_deg)) throw DomainError("jitter_deg must be >= 0");
}

Answer corrupt_answer(Answer answer, const CorruptionPolicy& policy, Rng& rng) {
  policy.check();
  const bool flip = bernoulli(rng, policy.p_task_flip);
  const auto other = uniform_below(rng, kAllTasks.size() - 1);
  const bool jitter = bernoulli(rng, policy.p_azimuth_jitter);
  const bool first_positive = bernoulli(rng, 0.5);
  const bool shuffle = bernoulli(rng, policy.p_caption_shuffle);

  if (flip) {
    std::size_t k = 0;
    for (TaskKind t : kAllTasks) {
      if (t == answer.task) continue;
      if (k++ == other) {
        answer.task = t;
        break;
      }
    }
    if (answer.task == TaskKind::ImgDegree) {
      if (answer.azimuths.size() == 1) answer.azimuths.push_back(answer.azimuths.front());
      answer.azimuths.resize(2);
    }
  }
  if (jitter) {
    double sign = first_positive ? 1.0 : -1.0;
    for (auto& az : answer.azimuths) {
      az = Azimuth::canonical(az.degrees() + sign * policy.jitter_deg);
      sign = -sign;
    }
  }
  if (shuffle && answer.caption) {
    std::vector<std::string> words;
    std::istringstream in(*answer.caption);
    for (std::string w; in >> w;) words.push_back(w);
    for (std::size_t i = words.size(); i > 1; --i) std::swap(words[i - 1], words[uniform_below(rng, i)]);
    std::string joined;
    for (const auto& w : words) joined += (joined.empty() ? "" : " ") + w;
    answer.caption = joined;
  }
  return answer;
}

CorruptionAdapter::CorruptionAdapter(std::shared_ptr<const Captioner> captioner, CorruptionPolicy policy,
                                     std::uint64_t seed)
    : oracle_(std::move(captioner)), policy_(policy), seed_(seed) {
  policy_.check();
}

AdapterResponse CorruptionAdapter::respond(const AdapterRequest& request) {
  const auto start = std::chrono::steady_clock::now();
  Rng rng = derived_rng(seed_, request.id);
  AdapterResponse r;
  r.answer_text = format_answer(corrupt_answer(oracle_.solve(request), policy_, rng));
  r.latency = std::chrono::steady_clock::now() - start;
  return r;
}

RemoteAdapter::RemoteAdapter(std::string_view url, std::chrono::milliseconds timeout)
    : endpoint_(Endpoint::parse(url, "/v1/answer")), timeout_(timeout) {}

AdapterResponse RemoteAdapter::respond(const AdapterRequest& request) {
  nlohmann::ordered_json body = {{"id", request.id}, {"instruction", request.instruction}};
  if (request.image_ref) body["image_ref"] = *request.image_ref;

  httplib::Client client(endpoint_.base);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  client.set_write_timeout(timeout_);
  const auto start = std::chrono::steady_clock::now();
  auto res = client.Post(endpoint_.path, body.dump(), "application/json");
  const auto latency = std::chrono::steady_clock::now() - start;
  if (!res) {
    const auto err = res.error();
    const bool timed_out = err == httplib::Error::Read || err == httplib::Error::ConnectionTimeout;
    throw AdapterError(timed_out ? AdapterErrorCode::Timeout : AdapterErrorCode::Unavailable,
                       endpoint_.url() + ": " + httplib::to_string(err));
  }
  if (res->status != 200) {
    throw AdapterError(AdapterErrorCode::BadResponse,
                       endpoint_.url() + ": HTTP " + std::to_string(res->status));
  }
  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.is_object() || !reply.contains("answer_text") ||
      !reply["answer_text"].is_string() || reply.value("id", std::string{}) != request.id) {
    throw AdapterError(AdapterErrorCode::BadResponse, endpoint_.url() + ": malformed reply");
  }
  AdapterResponse r;
  r.answer_text = reply["answer_text"].get<std::string>();
  if (r.answer_text.empty()) throw AdapterError(AdapterErrorCode::BadResponse, endpoint_.url() + ": empty answer");
  r.latency = std::chrono::duration_cast<std::chrono::nanoseconds>(latency);
  return r;
}

}  // namespace mvagent
