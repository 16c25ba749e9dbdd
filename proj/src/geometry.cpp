#include "mvagent/geometry.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "mvagent/error.hpp"

namespace mvagent {
namespace {

double round_to_grid(double d) { return std::round(d * 100.0) / 100.0; }

double wrap(double raw) {
  double r = std::fmod(raw, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative plus 360 can land exactly on 360.
  if (r >= 360.0) r -= 360.0;
  return r == 0.0 ? 0.0 : r;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

Azimuth Azimuth::normalized(double raw_degrees) {
  if (!std::isfinite(raw_degrees)) throw DomainError("azimuth must be finite");
  return Azimuth(wrap(raw_degrees));
}

Azimuth Azimuth::canonical(double raw_degrees) {
  if (!std::isfinite(raw_degrees)) throw DomainError("azimuth must be finite");
  return Azimuth(wrap(round_to_grid(wrap(raw_degrees))));
}

std::string_view to_string(Viewpoint v) {
  switch (v) {
    case Viewpoint::Front: return "front";
    case Viewpoint::Right: return "right";
    case Viewpoint::Rear: return "rear";
    case Viewpoint::Left: return "left";
  }
  return "front";
}

std::optional<Viewpoint> parse_viewpoint(std::string_view token) {
  const std::string t = lower(token);
  if (t == "front") return Viewpoint::Front;
  if (t == "right") return Viewpoint::Right;
  if (t == "rear" || t == "back") return Viewpoint::Rear;
  if (t == "left") return Viewpoint::Left;
  return std::nullopt;
}

Rotation::Rotation(double degrees) : degrees_(degrees) {
  if (!std::isfinite(degrees) || degrees <= -360.0 || degrees >= 360.0) {
    throw DomainError("rotation must lie strictly inside (-360, 360)");
  }
}

Azimuth normalize_azimuth(double raw_degrees) { return Azimuth::normalized(raw_degrees); }

Azimuth viewpoint_to_azimuth(Viewpoint v) {
  switch (v) {
    case Viewpoint::Front: return Azimuth::normalized(0.0);
    case Viewpoint::Right: return Azimuth::normalized(90.0);
    case Viewpoint::Rear: return Azimuth::normalized(180.0);
    case Viewpoint::Left: return Azimuth::normalized(270.0);
  }
  return Azimuth{};
}

std::vector<Azimuth> around_azimuths(int n) {
  if (n < 1) throw DomainError("around_azimuths requires n >= 1");
  std::vector<Azimuth> out;
  out.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) out.push_back(Azimuth::canonical(k * 360.0 / n));
  return out;
}

Azimuth rotate_azimuth(Azimuth origin, Rotation delta) {
  return Azimuth::normalized(origin.degrees() + delta.degrees());
}

double circular_distance(double a_degrees, double b_degrees) {
  const double d = std::fabs(wrap(a_degrees) - wrap(b_degrees));
  return std::min(d, 360.0 - d);
}

bool azimuth_list_close(std::span<const Azimuth> a, std::span<const Azimuth> b, double tolerance) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (circular_distance(a[i].degrees(), b[i].degrees()) > tolerance) return false;
  }
  return true;
}

std::string format_degrees(double degrees) {
  double r = round_to_grid(degrees);
  if (r == 0.0) r = 0.0;  // drop negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", r);
  std::string s(buf);
  while (s.back() == '0') s.pop_back();
  if (s.back() == '.') s.pop_back();
  return s == "-0" ? "0" : s;
}

}  // namespace mvagent
