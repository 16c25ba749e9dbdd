#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "mvagent/error.hpp"
#include "mvagent/geometry.hpp"

using namespace mvagent;

TEST_CASE("normalize_azimuth reduces into [0, 360)") {
  CHECK(normalize_azimuth(0).degrees() == 0.0);
  CHECK(normalize_azimuth(-90).degrees() == 270.0);
  CHECK(normalize_azimuth(725).degrees() == 5.0);
  CHECK(normalize_azimuth(360).degrees() == 0.0);
  CHECK(normalize_azimuth(-360).degrees() == 0.0);
  CHECK(normalize_azimuth(-1e-18).degrees() < 360.0);
  CHECK_THROWS_AS(normalize_azimuth(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(normalize_azimuth(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("canonical azimuths sit on the two-decimal grid") {
  CHECK(Azimuth::canonical(359.999).degrees() == 0.0);
  CHECK(Azimuth::canonical(-0.01).degrees() == 359.99);
  CHECK(Azimuth::canonical(51.428571).degrees() == 51.43);
}

TEST_CASE("viewpoints map clockwise from the front") {
  CHECK(viewpoint_to_azimuth(Viewpoint::Front).degrees() == 0.0);
  CHECK(viewpoint_to_azimuth(Viewpoint::Right).degrees() == 90.0);
  CHECK(viewpoint_to_azimuth(Viewpoint::Rear).degrees() == 180.0);
  CHECK(viewpoint_to_azimuth(Viewpoint::Left).degrees() == 270.0);
  CHECK(parse_viewpoint("BACK") == Viewpoint::Rear);
  CHECK(parse_viewpoint("Left") == Viewpoint::Left);
  CHECK_FALSE(parse_viewpoint("top"));

  // injective
  for (Viewpoint a : kAllViewpoints) {
    for (Viewpoint b : kAllViewpoints) {
      if (a != b) CHECK(viewpoint_to_azimuth(a) != viewpoint_to_azimuth(b));
    }
  }
}

TEST_CASE("around_azimuths splits the circle evenly") {
  auto degrees = [](int n) {
    std::vector<double> out;
    for (auto a : around_azimuths(n)) out.push_back(a.degrees());
    return out;
  };
  CHECK(degrees(4) == std::vector<double>{0, 90, 180, 270});
  CHECK(degrees(1) == std::vector<double>{0});
  // k * 360 / 7 rounded to two decimals, computed independently.
  std::vector<double> seven;
  for (int k = 0; k < 7; ++k) seven.push_back(std::round(k * 36000.0 / 7.0) / 100.0);
  CHECK(seven == std::vector<double>{0, 51.43, 102.86, 154.29, 205.71, 257.14, 308.57});
  CHECK(degrees(7) == seven);
  CHECK_THROWS_AS(around_azimuths(0), DomainError);
}

TEST_CASE("rotate_azimuth wraps around") {
  CHECK(rotate_azimuth(Azimuth::normalized(0), Rotation(90)).degrees() == 90.0);
  CHECK(rotate_azimuth(Azimuth::normalized(0), Rotation(-90)).degrees() == 270.0);
  CHECK(rotate_azimuth(Azimuth::normalized(300), Rotation(120)).degrees() == 60.0);
  CHECK_THROWS_AS(Rotation(360), DomainError);
  CHECK_THROWS_AS(Rotation(-360), DomainError);
  CHECK_NOTHROW(Rotation(359.99));
}

TEST_CASE("azimuth_list_close compares circularly and in order") {
  auto list = [](std::initializer_list<double> ds) {
    std::vector<Azimuth> out;
    for (double d : ds) out.push_back(Azimuth::normalized(d));
    return out;
  };
  CHECK(azimuth_list_close(list({0, 90}), list({0, 90}), 0.5));
  CHECK(azimuth_list_close(list({359.8}), list({0.1}), 0.5));
  CHECK_FALSE(azimuth_list_close(list({0, 90}), list({90, 0}), 0.5));
  CHECK_FALSE(azimuth_list_close(list({0}), list({0, 90}), 0.5));
}

TEST_CASE("format_degrees trims to at most two decimals") {
  CHECK(format_degrees(90) == "90");
  CHECK(format_degrees(51.428571) == "51.43");
  CHECK(format_degrees(12.5) == "12.5");
  CHECK(format_degrees(-45) == "-45");
  CHECK(format_degrees(-0.001) == "0");
  CHECK(format_degrees(0.1) == "0.1");
}

TEST_CASE("geometry properties over random inputs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> any(-1e6, 1e6);
  std::uniform_real_distribution<double> az(0.0, 360.0);
  std::uniform_real_distribution<double> rot(-359.999, 359.999);
  for (int i = 0; i < 2000; ++i) {
    const double x = any(rng);
    const Azimuth once = normalize_azimuth(x);
    REQUIRE(once.degrees() >= 0.0);
    REQUIRE(once.degrees() < 360.0);
    REQUIRE(normalize_azimuth(once.degrees()) == once);

    const Azimuth origin = normalize_azimuth(az(rng));
    const Rotation d(rot(rng));
    const double recovered = rotate_azimuth(origin, d).degrees() - origin.degrees();
    REQUIRE(circular_distance(recovered, d.degrees()) <= 0.01);

    const double tol = az(rng) / 10.0;
    const auto a = around_azimuths(1 + i % 8);
    const auto b = around_azimuths(1 + (i / 8) % 8);
    REQUIRE(azimuth_list_close(a, a, tol));
    REQUIRE(azimuth_list_close(a, b, tol) == azimuth_list_close(b, a, tol));
  }
}
