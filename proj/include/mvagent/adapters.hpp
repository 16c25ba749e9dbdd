#pragma once

#include <chrono>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "mvagent/answer.hpp"
#include "mvagent/dataset.hpp"
#include "mvagent/endpoint.hpp"
#include "mvagent/rng.hpp"

namespace mvagent {

struct AdapterRequest {
  std::string id;
  std::string instruction;
  std::optional<std::string> image_ref;
};

struct AdapterResponse {
  std::string answer_text;
  std::chrono::nanoseconds latency{0};
};

enum class AdapterErrorCode { UnrecognizedTemplate, Unavailable, Timeout, BadResponse };

std::string_view to_string(AdapterErrorCode code);

struct AdapterError : public std::runtime_error {
  AdapterError(AdapterErrorCode c, const std::string& message) : std::runtime_error(message), code(c) {}
  AdapterErrorCode code;
};

// Text in, text out. Implementations must be safe to call concurrently.
class ModelAdapter {
 public:
  virtual ~ModelAdapter() = default;
  // Throws AdapterError.
  virtual AdapterResponse respond(const AdapterRequest& request) = 0;
};

class Captioner {
 public:
  virtual ~Captioner() = default;
  virtual std::optional<std::string> caption_for(const std::optional<std::string>& image_ref) const = 0;
};

// Resolves captions from an image_ref -> caption table, normally the one
// carried by a generated dataset.
class LookupCaptioner : public Captioner {
 public:
  LookupCaptioner() = default;
  explicit LookupCaptioner(std::unordered_map<std::string, std::string> table) : table_(std::move(table)) {}
  static LookupCaptioner from_records(std::span<const InstructionRecord> records);

  std::optional<std::string> caption_for(const std::optional<std::string>& image_ref) const override;

 private:
  std::unordered_map<std::string, std::string> table_;
};

// Solves instructions exactly: parse_instruction, ground_truth_for with a
// front-facing reference, format_answer.
class OracleAdapter : public ModelAdapter {
 public:
  explicit OracleAdapter(std::shared_ptr<const Captioner> captioner);

  Answer solve(const AdapterRequest& request) const;
  AdapterResponse respond(const AdapterRequest& request) override;

 private:
  std::shared_ptr<const Captioner> captioner_;
};

AdapterResponse oracle_answer(const AdapterRequest& request, const Captioner& captioner);

struct CorruptionPolicy {
  double p_task_flip = 0.0;
  double p_azimuth_jitter = 0.0;
  double jitter_deg = 0.0;
  double p_caption_shuffle = 0.0;

  // Throws DomainError when a probability leaves [0, 1] or jitter_deg < 0.
  void check() const;
};

// Three independent draws, always consumed in this order:
//  - task flip: replace the task with a uniformly chosen different one
//    (a flip to I-degree keeps the first two azimuths, repeating a lone one);
//  - azimuth jitter: shift every azimuth by jitter_deg with alternating sign,
//    the first sign random, so both list positions and I-degree deltas move;
//  - caption shuffle: Fisher-Yates over the caption's words.
Answer corrupt_answer(Answer answer, const CorruptionPolicy& policy, Rng& rng);

// Oracle output passed through corrupt_answer, with one stream per request
// derived from (seed, request id) so results do not depend on call order.
class CorruptionAdapter : public ModelAdapter {
 public:
  CorruptionAdapter(std::shared_ptr<const Captioner> captioner, CorruptionPolicy policy, std::uint64_t seed);

  AdapterResponse respond(const AdapterRequest& request) override;

 private:
  OracleAdapter oracle_;
  CorruptionPolicy policy_;
  std::uint64_t seed_;
};

inline constexpr std::chrono::milliseconds kDefaultRemoteTimeout{120'000};

// POST {id, instruction, image_ref?} -> {id, answer_text}. One attempt per
// request; a failed call is never retried.
class RemoteAdapter : public ModelAdapter {
 public:
  explicit RemoteAdapter(std::string_view url, std::chrono::milliseconds timeout = kDefaultRemoteTimeout);

  AdapterResponse respond(const AdapterRequest& request) override;

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
};

}  // namespace mvagent
