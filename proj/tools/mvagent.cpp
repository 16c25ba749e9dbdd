// mvagent: generate view-instruction datasets, answer them with a model
// adapter, score the answers, and turn them into diffusion-backend plans.
//
// Exit codes: 0 success, 1 partial failure, 2 usage or configuration error.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

#include "mvagent/adapters.hpp"
#include "mvagent/dataset.hpp"
#include "mvagent/error.hpp"
#include "mvagent/io.hpp"
#include "mvagent/metrics.hpp"
#include "mvagent/mock_backend.hpp"
#include "mvagent/pipeline.hpp"

namespace {

using namespace mvagent;

constexpr int kOk = 0;
constexpr int kPartial = 1;
constexpr int kUsage = 2;

std::atomic<bool> g_stop{false};

struct GenOptions {
  std::size_t count = 1000;
  std::uint64_t seed = 42;
  std::string mix;
  std::string corpus;
  std::string out;
};

struct AnswerOptions {
  std::string dataset;
  std::string adapter = "oracle";
  std::string endpoint;
  long timeout_ms = 120'000;
  CorruptionPolicy policy;
  std::uint64_t seed = 0;
  std::size_t jobs = 1;
  std::string out;
};

struct EvalOptions {
  std::string dataset;
  std::string responses;
  double tol = kDefaultAzimuthTolerance;
  std::string report;
  std::string embedding_endpoint;
};

struct PlanOptions {
  std::string dataset;
  std::string responses;
  std::string plans;
  std::string results;
  bool dry_run = false;
  CameraConfig camera;
  std::string backend_url;
  std::map<BackendId, std::string> backend_urls;
  long timeout_ms = 120'000;
  std::size_t jobs = 1;
};

struct MockOptions {
  std::string host = "127.0.0.1";
  int port = 0;
  std::string fail_mode = "none";
  long latency_ms = 0;
  long hang_ms = 1500;
  int require_resolution = 0;
  std::string dump_log;
  std::size_t exit_after = 0;
};

// "I-around=2,T-around=1" -> weights; unnamed tasks get 0.
std::array<double, 5> parse_mix(const std::string& mix) {
  std::array<double, 5> w{1, 1, 1, 1, 1};
  if (mix.empty()) return w;
  w.fill(0.0);
  std::stringstream ss(mix);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto eq = item.find('=');
    const auto task = parse_task_name(item.substr(0, eq));
    if (!task) throw DomainError("unknown task in --mix: " + item);
    try {
      w[task_index(*task)] = eq == std::string::npos ? 1.0 : std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw DomainError("bad weight in --mix: " + item);
    }
  }
  return w;
}

int cmd_gen(const GenOptions& o) {
  DatasetSpec spec;
  spec.count = o.count;
  spec.seed = o.seed;
  spec.task_weights = parse_mix(o.mix);
  if (!o.corpus.empty()) spec.corpus = CaptionCorpus::from_file(o.corpus);
  const auto records = generate_dataset(spec);
  write_dataset(o.out, records);
  std::cerr << "wrote " << records.size() << " records to " << o.out << "\n";
  return kOk;
}

int cmd_answer(const AnswerOptions& o) {
  const auto dataset = read_dataset(o.dataset);
  auto captioner = std::make_shared<LookupCaptioner>(LookupCaptioner::from_records(dataset));
  std::unique_ptr<ModelAdapter> adapter;
  if (o.adapter == "oracle") {
    adapter = std::make_unique<OracleAdapter>(captioner);
  } else if (o.adapter == "corrupt") {
    adapter = std::make_unique<CorruptionAdapter>(captioner, o.policy, o.seed);
  } else if (o.adapter == "remote") {
    if (o.endpoint.empty()) throw DomainError("--adapter remote needs --endpoint");
    adapter = std::make_unique<RemoteAdapter>(o.endpoint, std::chrono::milliseconds(o.timeout_ms));
  } else {
    throw DomainError("unknown adapter " + o.adapter);
  }
  const auto responses = run_adapter(dataset, *adapter, o.jobs);
  write_responses(o.out, responses);
  std::size_t failed = 0;
  for (const auto& r : responses) failed += !r.answer_text;
  std::cerr << "wrote " << responses.size() << " responses to " << o.out << " (" << failed << " errors)\n";
  return !responses.empty() && failed == responses.size() ? kPartial : kOk;
}

int cmd_eval(const EvalOptions& o) {
  const auto dataset = read_dataset(o.dataset);
  const auto responses = read_responses(o.responses);
  std::unique_ptr<EmbeddingProvider> provider;
  if (o.embedding_endpoint.empty()) {
    provider = std::make_unique<BagOfWordsProvider>();
  } else {
    provider = std::make_unique<RemoteEmbeddingProvider>(o.embedding_endpoint);
  }
  const auto report = evaluate(dataset, responses, o.tol, *provider);
  if (!o.report.empty()) {
    const Json j = report_to_json(report);
    write_jsonl(o.report, std::span(&j, 1));
  }
  std::cout << render_table(report);
  return kOk;
}

int cmd_plan(const PlanOptions& o) {
  const auto dataset = read_dataset(o.dataset);
  const auto responses = read_responses(o.responses);
  const auto planning = plan_responses(dataset, responses, o.camera);

  std::vector<Json> lines;
  for (const auto& p : planning.plans) lines.push_back(encode_plan(p));
  for (const auto& e : planning.errors) lines.push_back(stage_error_to_json(e));
  write_jsonl(o.plans, lines);

  std::map<BackendId, std::size_t> per_backend;
  for (const auto& p : planning.plans) ++per_backend[p.backend];
  for (const auto& [b, n] : per_backend) std::cerr << to_string(b) << ": " << n << " plans\n";
  std::cerr << planning.errors.size() << " answers skipped\n";

  std::size_t dispatch_errors = 0;
  if (!o.dry_run) {
    std::map<BackendId, BackendClient> clients;
    for (BackendId b : kAllBackends) {
      const auto it = o.backend_urls.find(b);
      const std::string url = it != o.backend_urls.end() && !it->second.empty() ? it->second : o.backend_url;
      if (!url.empty()) clients.emplace(b, BackendClient(b, url, std::chrono::milliseconds(o.timeout_ms)));
    }
    if (clients.empty()) throw DomainError("live dispatch needs --backend-url or a per-backend URL (or --dry-run)");
    const auto outcome = dispatch_all(planning.plans, clients, o.jobs);
    std::vector<Json> results;
    for (const auto& r : outcome.results) results.push_back(encode_result(r));
    for (const auto& e : outcome.errors) {
      Json j;
      j["plan_id"] = e.id;
      j["error"] = {{"code", e.code}, {"message", e.message}};
      results.push_back(std::move(j));
    }
    const std::string path = o.results.empty() ? o.plans + ".results.jsonl" : o.results;
    write_jsonl(path, results);
    dispatch_errors = outcome.errors.size();
    std::cerr << outcome.results.size() << " plans generated, " << dispatch_errors << " failed\n";
  }
  return planning.errors.empty() && dispatch_errors == 0 ? kOk : kPartial;
}

int cmd_mock_backend(const MockOptions& o) {
  MockBackendConfig config;
  config.host = o.host;
  config.port = o.port;
  const auto mode = parse_fail_mode(o.fail_mode);
  if (!mode) throw DomainError("unknown fail mode " + o.fail_mode);
  config.fail_mode = *mode;
  config.latency = std::chrono::milliseconds(o.latency_ms);
  config.hang = std::chrono::milliseconds(o.hang_ms);
  if (o.require_resolution > 0) config.required_resolution = o.require_resolution;
  if (!o.dump_log.empty()) config.dump_log = o.dump_log;

  std::unique_ptr<MockBackend> server;
  try {
    server = std::make_unique<MockBackend>(config);
  } catch (const std::runtime_error& e) {
    std::cerr << "mvagent: " << e.what() << "\n";
    return kUsage;
  }
  std::signal(SIGINT, [](int) { g_stop = true; });
  std::signal(SIGTERM, [](int) { g_stop = true; });
  std::cout << "listening on " << server->url() << std::endl;
  while (!g_stop && (o.exit_after == 0 || server->log().size() < o.exit_after)) {
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  server->stop();
  std::cerr << "served " << server->log().size() << " plans\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"View-instruction dataset generator, evaluator and diffusion-backend router"};
  app.set_config("--config", "", "TOML/INI file with option values (sections per subcommand)");
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate an instruction dataset");
  gen_cmd->add_option("--count", gen.count, "Number of records")->check(CLI::Range(std::size_t{1}, std::size_t{10'000'000}));
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--mix", gen.mix, "Task weights, e.g. I-around=2,T-around=1 (default uniform)");
  gen_cmd->add_option("--corpus", gen.corpus, "Caption corpus, one phrase per line (default built-in)")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--out,-o", gen.out, "Dataset output path")->required();

  AnswerOptions ans;
  auto* ans_cmd = app.add_subcommand("answer", "Answer every record with a model adapter");
  ans_cmd->add_option("--dataset", ans.dataset)->required();
  ans_cmd->add_option("--adapter", ans.adapter, "oracle | corrupt | remote")
      ->check(CLI::IsMember({"oracle", "corrupt", "remote"}));
  ans_cmd->add_option("--endpoint", ans.endpoint, "Remote adapter URL")->envname("MVAGENT_ADAPTER_URL");
  ans_cmd->add_option("--timeout-ms", ans.timeout_ms, "Remote adapter timeout");
  ans_cmd->add_option("--p-task-flip", ans.policy.p_task_flip)->check(CLI::Range(0.0, 1.0));
  ans_cmd->add_option("--p-azimuth-jitter", ans.policy.p_azimuth_jitter)->check(CLI::Range(0.0, 1.0));
  ans_cmd->add_option("--jitter-deg", ans.policy.jitter_deg)->check(CLI::NonNegativeNumber);
  ans_cmd->add_option("--p-caption-shuffle", ans.policy.p_caption_shuffle)->check(CLI::Range(0.0, 1.0));
  ans_cmd->add_option("--seed", ans.seed, "Corruption seed");
  ans_cmd->add_option("--jobs,-j", ans.jobs, "Concurrent adapter calls")->check(CLI::PositiveNumber);
  ans_cmd->add_option("--out,-o", ans.out, "Responses output path")->required();

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score responses against the dataset ground truth");
  eval_cmd->add_option("--dataset", ev.dataset)->required();
  eval_cmd->add_option("--responses", ev.responses)->required();
  eval_cmd->add_option("--tol", ev.tol, "Azimuth tolerance in degrees")->check(CLI::NonNegativeNumber);
  eval_cmd->add_option("--report", ev.report, "JSON report output path");
  eval_cmd->add_option("--embedding-endpoint", ev.embedding_endpoint, "Caption embedding service for CC")
      ->envname("MVAGENT_EMBEDDING_URL");

  PlanOptions plan;
  auto* plan_cmd = app.add_subcommand("plan", "Build generation plans and dispatch them to backends");
  plan_cmd->add_option("--dataset", plan.dataset)->required();
  plan_cmd->add_option("--responses", plan.responses)->required();
  plan_cmd->add_option("--plans", plan.plans, "Plans output path")->required();
  plan_cmd->add_option("--results", plan.results, "Results output path (default <plans>.results.jsonl)");
  plan_cmd->add_flag("--dry-run", plan.dry_run, "Only write plans");
  plan_cmd->add_option("--elevation", plan.camera.elevation)->check(CLI::Range(-90.0, 90.0));
  plan_cmd->add_option("--radius", plan.camera.radius)->check(CLI::PositiveNumber);
  plan_cmd->add_option("--resolution", plan.camera.resolution)->check(CLI::PositiveNumber);
  plan_cmd->add_option("--backend-url", plan.backend_url, "Endpoint for every backend")
      ->envname("MVAGENT_BACKEND_URL");
  for (BackendId b : kAllBackends) {
    const std::string name(to_string(b));
    std::string env = "MVAGENT_" + name + "_URL";
    for (char& c : env) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    plan_cmd->add_option("--" + name + "-url", plan.backend_urls[b], "Endpoint for " + name)->envname(env);
  }
  plan_cmd->add_option("--timeout-ms", plan.timeout_ms, "Backend timeout");
  plan_cmd->add_option("--jobs,-j", plan.jobs, "Concurrent dispatches")->check(CLI::PositiveNumber);

  MockOptions mock;
  auto* mock_cmd = app.add_subcommand("mock-backend", "Serve a mock multi-view diffusion backend");
  mock_cmd->add_option("--host", mock.host);
  mock_cmd->add_option("--port", mock.port, "0 picks a free port")->check(CLI::Range(0, 65535));
  mock_cmd->add_option("--fail-mode", mock.fail_mode, "none | reject | timeout | unavailable | partial")
      ->check(CLI::IsMember({"none", "reject", "timeout", "unavailable", "partial"}));
  mock_cmd->add_option("--latency-ms", mock.latency_ms);
  mock_cmd->add_option("--hang-ms", mock.hang_ms, "Delay used by --fail-mode timeout");
  mock_cmd->add_option("--require-resolution", mock.require_resolution, "Reject plans with another resolution");
  mock_cmd->add_option("--dump-log", mock.dump_log, "Append every received plan to this file");
  mock_cmd->add_option("--exit-after", mock.exit_after, "Stop after this many plans");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen_cmd) return cmd_gen(gen);
    if (*ans_cmd) return cmd_answer(ans);
    if (*eval_cmd) return cmd_eval(ev);
    if (*plan_cmd) return cmd_plan(plan);
    if (*mock_cmd) return cmd_mock_backend(mock);
  } catch (const DomainError& e) {
    std::cerr << "mvagent: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "mvagent: " << e.what() << "\n";
    return kPartial;
  }
  return kUsage;
}
