#include <doctest.h>

#include <future>
#include <set>

#include "mvagent/dispatch.hpp"
#include "mvagent/error.hpp"
#include "mvagent/mock_backend.hpp"
#include "mvagent/pipeline.hpp"
#include "support.hpp"

using namespace mvagent;
using namespace std::chrono_literals;

namespace {

PlanContext image_context(std::string id = "p1") {
  PlanContext c;
  c.plan_id = std::move(id);
  c.image_ref = "asset://p1/reference.png";
  return c;
}

GenerationPlan around_plan(std::string id, int resolution = 256) {
  CameraConfig config;
  config.resolution = resolution;
  return build_plan(make_answer(TaskKind::ImgAround, {0, 90, 180, 270}, "a mug"), image_context(std::move(id)),
                    config);
}

}  // namespace

TEST_CASE("routing is total and follows the task group") {
  CHECK(route(TaskKind::ImgAround) == BackendId::ImageDream);
  CHECK(route(TaskKind::ImgSpecific) == BackendId::ImageDream);
  CHECK(route(TaskKind::TextAround) == BackendId::MVDream);
  CHECK(route(TaskKind::TextSpecific) == BackendId::MVDream);
  CHECK(route(TaskKind::ImgDegree) == BackendId::Zero123);
  for (BackendId b : kAllBackends) CHECK(parse_backend(to_string(b)) == b);
  CHECK_FALSE(parse_backend("dalle"));
}

TEST_CASE("build_plan") {
  const CameraConfig config;
  SUBCASE("image-based") {
    const auto plan = around_plan("p1");
    CHECK(plan.backend == BackendId::ImageDream);
    CHECK(plan.cameras.size() == 4);
    CHECK(plan.resolution == 256);
    CHECK(plan.caption == "a mug");
    CHECK(plan.image_ref == "asset://p1/reference.png");
    for (const auto& c : plan.cameras) {
      CHECK(c.elevation == 0.0);
      CHECK(c.radius == 1.5);
    }
    CHECK(plan.requested_views().size() == 4);
  }
  SUBCASE("caption-based") {
    PlanContext c;
    c.caption = "a lamp";
    const auto plan = build_plan(make_answer(TaskKind::TextSpecific, {270}), c, config);
    CHECK(plan.backend == BackendId::MVDream);
    CHECK(plan.cameras.size() == 1);
    CHECK_FALSE(plan.image_ref);
    CHECK(plan.caption == "a lamp");
    CHECK(plan.plan_id.rfind("plan-", 0) == 0);
  }
  SUBCASE("related-view requests only the rotated camera") {
    const auto plan = build_plan(make_answer(TaskKind::ImgDegree, {0, 315}, "x"), image_context(), config);
    CHECK(plan.backend == BackendId::Zero123);
    CHECK_FALSE(plan.caption);
    REQUIRE(plan.requested_views().size() == 1);
    CHECK(plan.requested_views()[0].azimuth == Azimuth::normalized(315));
  }
  SUBCASE("context mismatches") {
    try {
      build_plan(make_answer(TaskKind::ImgDegree, {0, 315}, "x"), PlanContext{}, config);
      FAIL("expected a plan error");
    } catch (const PlanError& e) {
      CHECK(e.kind == PlanErrorKind::ContextMismatch);
    }
    CHECK_THROWS_AS(build_plan(make_answer(TaskKind::TextAround, {0}), PlanContext{}, config), PlanError);
  }
  SUBCASE("validation failures") {
    PlanContext c = image_context();
    c.expected_task = TaskKind::ImgAround;
    c.expected_views = 3;
    try {
      build_plan(make_answer(TaskKind::ImgAround, {0, 180}, "x"), c, config);
      FAIL("expected a plan error");
    } catch (const PlanError& e) {
      CHECK(e.kind == PlanErrorKind::ValidationFailed);
      REQUIRE(e.violations.size() == 1);
      CHECK(e.violations[0].kind == FindingKind::ArityViolation);
    }
  }
  SUBCASE("camera config bounds") {
    CameraConfig bad;
    bad.radius = 0;
    CHECK_THROWS_AS(build_plan(make_answer(TaskKind::ImgAround, {0}, "x"), image_context(), bad), DomainError);
  }
}

TEST_CASE("plan wire format") {
  auto plan = around_plan("p9");
  plan.cameras[1].azimuth = Azimuth::canonical(12.345);
  const auto j = encode_plan(plan);
  CHECK(j.dump() ==
        R"({"plan_id":"p9","backend":"imagedream","cameras":[{"azimuth":0,"elevation":0,"radius":1.5},)"
        R"({"azimuth":12.35,"elevation":0,"radius":1.5},{"azimuth":180,"elevation":0,"radius":1.5},)"
        R"({"azimuth":270,"elevation":0,"radius":1.5}],"caption":"a mug","image_ref":"asset://p1/reference.png",)"
        R"("resolution":256})");
  CHECK(decode_plan(nlohmann::json::parse(j.dump())) == plan);
  CHECK_THROWS_AS(decode_plan(nlohmann::json::parse(R"({"plan_id":"x"})")), DomainError);
}

TEST_CASE("dispatch against the mock backend") {
  SUBCASE("four cameras give four URIs echoing the azimuths") {
    MockBackend mock({});
    BackendClient client(BackendId::ImageDream, mock.url());
    const auto result = dispatch_plan(around_plan("p1"), client);
    REQUIRE(result.images.size() == 4);
    CHECK(result.images[1].uri == "mock://imagedream/p1/90");
    CHECK(result.images[3].azimuth == Azimuth::normalized(270));
    CHECK(dispatch_plan(around_plan("p1"), client).images == result.images);
  }
  SUBCASE("the log holds exactly what was sent") {
    MockBackend mock({});
    PlanContext c;
    c.plan_id = "t";
    c.caption = "a lamp";
    const auto plan = build_plan(make_answer(TaskKind::TextAround, {0, 180}), c, CameraConfig{});
    BackendClient(BackendId::MVDream, mock.url()).dispatch(plan);
    const auto log = mock.log();
    REQUIRE(log.size() == 1);
    CHECK(decode_plan(log[0]) == plan);
    CHECK(log[0]["cameras"][1]["azimuth"] == 180);
  }
  SUBCASE("zero123 gets one rotated view") {
    MockBackend mock({});
    const auto plan = build_plan(make_answer(TaskKind::ImgDegree, {0, 315}, "x"), image_context("z"), CameraConfig{});
    const auto result = BackendClient(BackendId::Zero123, mock.url()).dispatch(plan);
    REQUIRE(result.images.size() == 1);
    CHECK(result.images[0].uri == "mock://zero123/z/315");
  }
  SUBCASE("endpoint down") {
    BackendClient client(BackendId::ImageDream, "http://127.0.0.1:" + std::to_string(support::closed_port()), 500ms);
    try {
      client.dispatch(around_plan("p1"));
      FAIL("expected a dispatch error");
    } catch (const DispatchError& e) {
      CHECK(e.kind == DispatchErrorKind::BackendUnavailable);
    }
  }
  SUBCASE("resolution mismatch is rejected") {
    MockBackendConfig config;
    config.required_resolution = 256;
    MockBackend mock(config);
    BackendClient client(BackendId::ImageDream, mock.url());
    CHECK_NOTHROW(client.dispatch(around_plan("ok")));
    try {
      client.dispatch(around_plan("big", 512));
      FAIL("expected a dispatch error");
    } catch (const DispatchError& e) {
      CHECK(e.kind == DispatchErrorKind::BackendRejected);
    }
  }
  SUBCASE("fail modes") {
    const std::pair<FailMode, DispatchErrorKind> cases[] = {
        {FailMode::Reject, DispatchErrorKind::BackendRejected},
        {FailMode::Timeout, DispatchErrorKind::Timeout},
        {FailMode::Unavailable, DispatchErrorKind::BackendUnavailable},
        {FailMode::Partial, DispatchErrorKind::BackendRejected},
    };
    for (const auto& [mode, expected] : cases) {
      CAPTURE(to_string(mode));
      MockBackendConfig config;
      config.fail_mode = mode;
      config.hang = 800ms;
      MockBackend mock(config);
      BackendClient client(BackendId::ImageDream, mock.url(), 200ms);
      try {
        client.dispatch(around_plan("f"));
        FAIL("expected a dispatch error");
      } catch (const DispatchError& e) {
        CHECK(e.kind == expected);
      }
    }
  }
  SUBCASE("a plan for another backend is refused before sending") {
    MockBackend mock({});
    CHECK_THROWS_AS(BackendClient(BackendId::MVDream, mock.url()).dispatch(around_plan("p")), DomainError);
    CHECK(mock.log().empty());
  }
  SUBCASE("concurrent dispatches are logged separately") {
    MockBackendConfig config;
    config.latency = 50ms;
    MockBackend mock(config);
    BackendClient client(BackendId::ImageDream, mock.url());
    auto a = std::async(std::launch::async, [&] { return client.dispatch(around_plan("a")); });
    auto b = std::async(std::launch::async, [&] { return client.dispatch(around_plan("b")); });
    CHECK(a.get().plan_id == "a");
    CHECK(b.get().plan_id == "b");
    const auto log = mock.log();
    REQUIRE(log.size() == 2);
    std::set<std::string> ids{log[0]["plan_id"].get<std::string>(), log[1]["plan_id"].get<std::string>()};
    CHECK(ids == std::set<std::string>{"a", "b"});
  }
  SUBCASE("a taken port cannot be bound twice") {
    MockBackend first({});
    MockBackendConfig config;
    config.port = first.port();
    CHECK_THROWS(MockBackend(config));
  }
}

TEST_CASE("plan_responses and dispatch_all") {
  DatasetSpec spec;
  spec.count = 60;
  const auto records = generate_dataset(spec);
  std::vector<ResponseEntry> responses;
  for (const auto& r : records) responses.push_back({r.id, format_answer(r.ground_truth), {}, {}});
  responses[0].answer_text = "garbage";
  responses[1].answer_text.reset();
  responses[1].error_code = "timeout";
  const auto wrong = records[2].task == TaskKind::ImgAround ? TaskKind::ImgSpecific : TaskKind::ImgAround;
  responses[2].answer_text = format_answer(make_answer(wrong, {0}, "x"));

  const auto outcome = plan_responses(records, responses, CameraConfig{});
  CHECK(outcome.plans.size() == 57);
  REQUIRE(outcome.errors.size() == 3);
  CHECK(outcome.errors[0].code == "Unparseable");
  CHECK(outcome.errors[1].code == "NoAnswer");
  CHECK(outcome.errors[2].code == "ValidationFailed");
  for (std::size_t i = 0; i < outcome.plans.size(); ++i) {
    const auto& rec = records[i + 3];
    CHECK(outcome.plans[i].plan_id == rec.id);
    CHECK(outcome.plans[i].backend == route(rec.task));
  }

  MockBackend image({}), text({}), degree({});
  std::map<BackendId, BackendClient> clients;
  clients.emplace(BackendId::ImageDream, BackendClient(BackendId::ImageDream, image.url()));
  clients.emplace(BackendId::MVDream, BackendClient(BackendId::MVDream, text.url()));
  const auto dispatched = dispatch_all(outcome.plans, clients, 4);
  std::size_t zero123 = 0;
  for (const auto& p : outcome.plans) zero123 += p.backend == BackendId::Zero123;
  CHECK(dispatched.errors.size() == zero123);
  CHECK(dispatched.results.size() == outcome.plans.size() - zero123);
  CHECK(image.log().size() + text.log().size() == dispatched.results.size());
}
