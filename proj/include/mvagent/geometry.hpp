#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mvagent {

// Azimuths are measured clockwise from the front of the object when viewed
// from above: front = 0, right = 90, rear = 180, left = 270.

inline constexpr double kDefaultAzimuthTolerance = 0.5;

class Azimuth {
 public:
  constexpr Azimuth() = default;

  // Reduces any finite angle to [0, 360). Throws DomainError otherwise.
  static Azimuth normalized(double raw_degrees);

  // Like normalized(), then rounded to the two-decimal serialization grid.
  static Azimuth canonical(double raw_degrees);

  constexpr double degrees() const { return degrees_; }

  friend constexpr bool operator==(Azimuth, Azimuth) = default;

 private:
  explicit constexpr Azimuth(double d) : degrees_(d) {}
  double degrees_ = 0.0;
};

enum class Viewpoint { Front, Right, Rear, Left };

inline constexpr Viewpoint kAllViewpoints[] = {Viewpoint::Left, Viewpoint::Front, Viewpoint::Right,
                                               Viewpoint::Rear};

std::string_view to_string(Viewpoint v);
// Case-insensitive; "back" is accepted as a synonym for rear.
std::optional<Viewpoint> parse_viewpoint(std::string_view token);

// A signed camera rotation strictly inside (-360, 360).
class Rotation {
 public:
  constexpr Rotation() = default;
  explicit Rotation(double degrees);
  constexpr double degrees() const { return degrees_; }
  friend constexpr bool operator==(Rotation, Rotation) = default;

 private:
  double degrees_ = 0.0;
};

Azimuth normalize_azimuth(double raw_degrees);
Azimuth viewpoint_to_azimuth(Viewpoint v);

// k * 360 / n for k in [0, n), on the serialization grid. Requires n >= 1.
std::vector<Azimuth> around_azimuths(int n);

Azimuth rotate_azimuth(Azimuth origin, Rotation delta);

// Shortest angular distance in [0, 180].
double circular_distance(double a_degrees, double b_degrees);

bool azimuth_list_close(std::span<const Azimuth> a, std::span<const Azimuth> b,
                        double tolerance = kDefaultAzimuthTolerance);

// Rounds to two decimals, trims trailing zeros and a trailing point: 90, 51.43, -45.5.
std::string format_degrees(double degrees);

}  // namespace mvagent
