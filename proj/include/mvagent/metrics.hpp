#pragma once

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "mvagent/answer.hpp"
#include "mvagent/dataset.hpp"
#include "mvagent/endpoint.hpp"

namespace mvagent {

// TA: the prediction parsed and names the ground-truth task.
bool task_accuracy(const ParsedAnswer& prediction, const Answer& truth);

// AA, all-or-nothing per sample. For I-degree only the rotation delta
// (second minus first azimuth) is compared; otherwise the lists are compared
// position by position with circular distance.
bool azimuth_accuracy(const Answer& prediction, const Answer& truth, TaskKind task,
                      double tolerance = kDefaultAzimuthTolerance);

// Lowercased; runs of letters/digits (and non-ASCII bytes) form words, every
// other non-space character is its own token.
std::vector<std::string> bleu_tokenize(std::string_view text);

// Sentence-level BLEU-4, uniform weights, brevity penalty exp(1 - r/c) when
// c <= r. Orders >= 2 with zero matches use (0 + 1) / (total + 1); a zero
// unigram precision is not smoothed and yields 0. An empty prediction scores 0.
double caption_bleu(std::string_view prediction, std::string_view reference);

struct ProviderError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

class EmbeddingProvider {
 public:
  virtual ~EmbeddingProvider() = default;
  // Throws ProviderError.
  virtual std::vector<double> embed(std::string_view text) = 0;
};

// L2-normalized lowercased word-frequency vectors over a vocabulary that grows
// as words are seen. Cosine values lie in [0, 1] and do not depend on the
// order in which words were first encountered.
class BagOfWordsProvider : public EmbeddingProvider {
 public:
  std::vector<double> embed(std::string_view text) override;

 private:
  std::mutex mutex_;
  std::unordered_map<std::string, std::size_t> vocabulary_;
};

// POST {text} -> {embedding: [...]}, e.g. a CLIP text-encoder service.
class RemoteEmbeddingProvider : public EmbeddingProvider {
 public:
  explicit RemoteEmbeddingProvider(std::string_view url,
                                   std::chrono::milliseconds timeout = std::chrono::milliseconds(120'000));
  std::vector<double> embed(std::string_view text) override;

 private:
  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
};

// Vectors of different length are zero-padded; a zero vector has similarity 0.
double cosine_similarity(std::span<const double> a, std::span<const double> b);

double caption_similarity(std::string_view prediction, std::string_view reference, EmbeddingProvider& provider);

// One line of a responses file: either an answer or the adapter's error.
struct ResponseEntry {
  std::string id;
  std::optional<std::string> answer_text;
  std::optional<std::string> error_code;
  std::optional<std::string> error_message;

  friend bool operator==(const ResponseEntry&, const ResponseEntry&) = default;
};

struct SampleScore {
  std::string id;
  TaskKind task = TaskKind::ImgAround;
  bool parsed = false;
  bool task_correct = false;
  bool azimuth_correct = false;
  std::optional<double> caption_bleu;  // absent for caption-based ground truth
  std::optional<double> caption_sim;   // also absent when the provider failed
  bool caption_sim_missing = false;
};

struct TaskMetrics {
  double ta = 0.0;
  double aa = 0.0;
  std::optional<double> cb;
  std::optional<double> cc;
  std::size_t count = 0;
  std::size_t cc_missing = 0;
};

struct AggregateMetrics {
  double ta = 0.0;
  double aa = 0.0;
  std::optional<double> cb;
  std::optional<double> cc;
  double avg = 0.0;  // mean of the available aggregate metrics
};

struct EvalReport {
  std::map<TaskKind, TaskMetrics> per_task;
  AggregateMetrics aggregate;
  std::size_t samples = 0;
  std::size_t parse_failures = 0;
  std::size_t cc_missing = 0;
  double tolerance = kDefaultAzimuthTolerance;
};

SampleScore score_sample(const InstructionRecord& record, const std::optional<std::string>& answer_text,
                         double tolerance, EmbeddingProvider& provider);

// Records without a response count as parse failures. Throws DomainError on
// an empty dataset or a duplicated response id.
EvalReport evaluate(std::span<const InstructionRecord> dataset, std::span<const ResponseEntry> responses,
                    double tolerance, EmbeddingProvider& provider);

// Tasks as rows, TA / AA / CB / CC as columns, "-" where a metric does not apply.
std::string render_table(const EvalReport& report);

}  // namespace mvagent
