#include "mvagent/metrics.hpp"

#include <httplib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <nlohmann/json.hpp>

#include "mvagent/error.hpp"

namespace mvagent {

bool task_accuracy(const ParsedAnswer& prediction, const Answer& truth) {
  const auto* a = std::get_if<Answer>(&prediction);
  return a != nullptr && a->task == truth.task;
}

bool azimuth_accuracy(const Answer& prediction, const Answer& truth, TaskKind task, double tolerance) {
  if (task == TaskKind::ImgDegree) {
    if (prediction.azimuths.size() != 2 || truth.azimuths.size() != 2) return false;
    const double predicted = prediction.azimuths[1].degrees() - prediction.azimuths[0].degrees();
    const double expected = truth.azimuths[1].degrees() - truth.azimuths[0].degrees();
    return circular_distance(predicted, expected) <= tolerance;
  }
  return azimuth_list_close(prediction.azimuths, truth.azimuths, tolerance);
}

std::vector<std::string> bleu_tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string word;
  auto flush = [&] {
    if (!word.empty()) tokens.push_back(std::move(word));
    word.clear();
  };
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (std::isspace(c)) {
      flush();
    } else if (std::isalnum(c) || c >= 0x80) {
      word.push_back(static_cast<char>(std::tolower(c)));
    } else {
      flush();
      tokens.emplace_back(1, ch);
    }
  }
  flush();
  return tokens;
}

namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::size_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  NgramCounts counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::vector<std::string_view> gram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n));
    ++counts[gram];
  }
  return counts;
}

}  // namespace

double caption_bleu(std::string_view prediction, std::string_view reference) {
  const auto hyp = bleu_tokenize(prediction);
  const auto ref = bleu_tokenize(reference);
  if (hyp.empty() || ref.empty()) return 0.0;

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    const auto hyp_counts = count_ngrams(hyp, n);
    const auto ref_counts = count_ngrams(ref, n);
    std::size_t matches = 0;
    for (const auto& [gram, count] : hyp_counts) {
      const auto it = ref_counts.find(gram);
      if (it != ref_counts.end()) matches += std::min(count, it->second);
    }
    const std::size_t total = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    double precision;
    if (matches == 0) {
      if (n == 1) return 0.0;
      precision = 1.0 / static_cast<double>(total + 1);
    } else {
      precision = static_cast<double>(matches) / static_cast<double>(total);
    }
    log_sum += 0.25 * std::log(precision);
  }
  const double c = static_cast<double>(hyp.size());
  const double r = static_cast<double>(ref.size());
  const double brevity = c > r ? 1.0 : std::exp(1.0 - r / c);
  return brevity * std::exp(log_sum);
}

std::vector<double> BagOfWordsProvider::embed(std::string_view text) {
  std::vector<double> v;
  {
    std::lock_guard lock(mutex_);
    for (auto& token : bleu_tokenize(text)) {
      const auto c = static_cast<unsigned char>(token.front());
      if (!(std::isalnum(c) || c >= 0x80)) continue;
      const auto [it, inserted] = vocabulary_.emplace(std::move(token), vocabulary_.size());
      if (it->second >= v.size()) v.resize(it->second + 1, 0.0);
      v[it->second] += 1.0;
    }
  }
  double norm = 0.0;
  for (double x : v) norm += x * x;
  if (norm > 0.0) {
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
  }
  return v;
}

RemoteEmbeddingProvider::RemoteEmbeddingProvider(std::string_view url, std::chrono::milliseconds timeout)
    : endpoint_(Endpoint::parse(url, "/v1/embed")), timeout_(timeout) {}

std::vector<double> RemoteEmbeddingProvider::embed(std::string_view text) {
  httplib::Client client(endpoint_.base);
  client.set_connection_timeout(timeout_);
  client.set_read_timeout(timeout_);
  const nlohmann::json body = {{"text", std::string(text)}};
  auto res = client.Post(endpoint_.path, body.dump(), "application/json");
  if (!res) throw ProviderError(endpoint_.url() + ": " + httplib::to_string(res.error()));
  if (res->status != 200) throw ProviderError(endpoint_.url() + ": HTTP " + std::to_string(res->status));
  const auto reply = nlohmann::json::parse(res->body, nullptr, false);
  if (reply.is_discarded() || !reply.contains("embedding") || !reply["embedding"].is_array()) {
    throw ProviderError(endpoint_.url() + ": malformed embedding reply");
  }
  std::vector<double> out;
  for (const auto& x : reply["embedding"]) {
    if (!x.is_number()) throw ProviderError(endpoint_.url() + ": non-numeric embedding");
    out.push_back(x.get<double>());
  }
  return out;
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    const double x = i < a.size() ? a[i] : 0.0;
    const double y = i < b.size() ? b[i] : 0.0;
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  // sqrt(na * nb) keeps identical vectors at exactly 1.
  return std::clamp(dot / std::sqrt(na * nb), -1.0, 1.0);
}

double caption_similarity(std::string_view prediction, std::string_view reference, EmbeddingProvider& provider) {
  const auto a = provider.embed(prediction);
  const auto b = provider.embed(reference);
  return cosine_similarity(a, b);
}

SampleScore score_sample(const InstructionRecord& record, const std::optional<std::string>& answer_text,
                         double tolerance, EmbeddingProvider& provider) {
  SampleScore s;
  s.id = record.id;
  s.task = record.task;
  const Answer& truth = record.ground_truth;
  const ParsedAnswer parsed = answer_text ? parse_answer(*answer_text)
                                          : ParsedAnswer(AnswerError{AnswerErrorKind::MissingField, "task", {}, 0, 0});
  const Answer* prediction = std::get_if<Answer>(&parsed);
  s.parsed = prediction != nullptr;
  s.task_correct = task_accuracy(parsed, truth);
  s.azimuth_correct = prediction != nullptr && azimuth_accuracy(*prediction, truth, record.task, tolerance);

  if (carries_caption(record.task)) {
    const bool has_caption = prediction != nullptr && prediction->caption && truth.caption;
    s.caption_bleu = has_caption ? caption_bleu(*prediction->caption, *truth.caption) : 0.0;
    if (!has_caption) {
      s.caption_sim = 0.0;
    } else {
      try {
        s.caption_sim = caption_similarity(*prediction->caption, *truth.caption, provider);
      } catch (const ProviderError&) {
        s.caption_sim_missing = true;
      }
    }
  }
  return s;
}

namespace {

struct Accumulator {
  std::size_t count = 0, ta = 0, aa = 0, cb_n = 0, cc_n = 0, cc_missing = 0;
  double cb = 0.0, cc = 0.0;

  void add(const SampleScore& s) {
    ++count;
    ta += s.task_correct;
    aa += s.azimuth_correct;
    if (s.caption_bleu) {
      cb += *s.caption_bleu;
      ++cb_n;
    }
    if (s.caption_sim) {
      cc += *s.caption_sim;
      ++cc_n;
    }
    cc_missing += s.caption_sim_missing;
  }

  std::optional<double> cb_mean() const { return cb_n ? std::optional(cb / cb_n) : std::nullopt; }
  std::optional<double> cc_mean() const { return cc_n ? std::optional(cc / cc_n) : std::nullopt; }
};

}  // namespace

EvalReport evaluate(std::span<const InstructionRecord> dataset, std::span<const ResponseEntry> responses,
                    double tolerance, EmbeddingProvider& provider) {
  if (dataset.empty()) throw DomainError("cannot evaluate an empty dataset");
  if (!(tolerance >= 0.0)) throw DomainError("tolerance must be >= 0");
  std::unordered_map<std::string, const ResponseEntry*> by_id;
  for (const auto& r : responses) {
    if (!by_id.emplace(r.id, &r).second) throw DomainError("duplicate response id " + r.id);
  }

  EvalReport report;
  report.tolerance = tolerance;
  std::map<TaskKind, Accumulator> per_task;
  Accumulator all;
  for (const auto& record : dataset) {
    std::optional<std::string> text;
    if (const auto it = by_id.find(record.id); it != by_id.end()) text = it->second->answer_text;
    const SampleScore s = score_sample(record, text, tolerance, provider);
    per_task[record.task].add(s);
    all.add(s);
    report.parse_failures += !s.parsed;
  }

  for (const auto& [task, acc] : per_task) {
    TaskMetrics m;
    m.count = acc.count;
    m.ta = static_cast<double>(acc.ta) / static_cast<double>(acc.count);
    m.aa = static_cast<double>(acc.aa) / static_cast<double>(acc.count);
    m.cb = acc.cb_mean();
    m.cc = acc.cc_mean();
    m.cc_missing = acc.cc_missing;
    report.per_task.emplace(task, m);
  }
  auto& agg = report.aggregate;
  agg.ta = static_cast<double>(all.ta) / static_cast<double>(all.count);
  agg.aa = static_cast<double>(all.aa) / static_cast<double>(all.count);
  agg.cb = all.cb_mean();
  agg.cc = all.cc_mean();
  double sum = agg.ta + agg.aa;
  int terms = 2;
  for (const auto& m : {agg.cb, agg.cc}) {
    if (m) {
      sum += *m;
      ++terms;
    }
  }
  agg.avg = sum / terms;
  report.samples = all.count;
  report.cc_missing = all.cc_missing;
  return report;
}

std::string render_table(const EvalReport& report) {
  auto cell = [](std::optional<double> v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *v);
    return std::string(buf);
  };
  std::string out;
  auto line = [&](std::string_view name, const std::string& ta, const std::string& aa, const std::string& cb,
                  const std::string& cc) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-12s %7s %7s %7s %7s\n", std::string(name).c_str(), ta.c_str(), aa.c_str(),
                  cb.c_str(), cc.c_str());
    out += buf;
  };
  line("Tasks", "TA", "AA", "CB", "CC");
  for (TaskKind t : kAllTasks) {
    const auto it = report.per_task.find(t);
    if (it == report.per_task.end()) {
      line(short_name(t), "-", "-", "-", "-");
    } else {
      const auto& m = it->second;
      line(short_name(t), cell(m.ta), cell(m.aa), cell(m.cb), cell(m.cc));
    }
  }
  const auto& a = report.aggregate;
  line("Avg.", cell(a.ta), cell(a.aa), cell(a.cb), cell(a.cc));
  char buf[96];
  std::snprintf(buf, sizeof buf, "Overall avg: %.3f  samples: %zu  parse failures: %zu\n", a.avg, report.samples,
                report.parse_failures);
  out += buf;
  if (report.cc_missing) out += "CC provider gaps: " + std::to_string(report.cc_missing) + "\n";
  return out;
}

}  // namespace mvagent
