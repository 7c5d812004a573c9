#pragma once

#include "xlris/types.hpp"

namespace xlris {

// Planar reflecting surface in the yz-plane plus a uniform linear transmit
// array. Element indexing over the surface is row-major: n = n1 * ris_n2 + n2
// with n1 counting along y (horizontal) and n2 along z (vertical).
struct ArrayConfig {
  int bs_antennas = 4;         // transmit ULA size
  int ris_n1 = 16;             // horizontal element count
  int ris_n2 = 4;              // vertical element count
  double element_spacing = 0;  // meters; 0 means "use half wavelength"
  double carrier_hz = 1e9;

  int ris_elements() const { return ris_n1 * ris_n2; }
  double wavelength() const { return 299792458.0 / carrier_hz; }
  double spacing() const {
    return element_spacing > 0 ? element_spacing : 0.5 * wavelength();
  }
  void validate() const; // throws std::invalid_argument on nonsense values
};

struct Vec3 {
  double x = 0, y = 0, z = 0;
  double norm() const { return std::sqrt(x * x + y * y + z * z); }
};
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a.x - b.x, a.y - b.y, a.z - b.z};
}

// Receiver placement on the ground plane, polar about the surface center.
struct PolarPosition {
  double radius = 0;   // meters from the surface center
  double azimuth = 0;  // radians in the xy-plane
};

struct SceneGeometry {
  Vec3 bs_position{100.0, -100.0, 0.0};
  Vec3 ris_center{0.0, 0.0, 0.0};
  PolarPosition user{15.0, kPi / 4};
  PolarPosition eve{10.0, kPi / 4};
  // Angle of the surface as seen from the transmit ULA broadside; 0 keeps the
  // ULA oriented broadside-on toward the surface.
  double bs_ula_offset = 0.0;
};

// Azimuth/elevation pair seen from the surface: the planar response depends on
// sin(az)cos(el) (horizontal) and sin(el) (vertical).
struct RisAngles {
  double azimuth = 0;
  double elevation = 0;
};

Vec3 receiver_position(const PolarPosition& p, const Vec3& ris_center);
RisAngles ris_angles_toward(const Vec3& point, const Vec3& ris_center);

// Physical position of element (n1, n2), centered on ris_center.
Vec3 element_position(const ArrayConfig& array, const Vec3& ris_center, int n1,
                      int n2);

// Unit-norm ULA response, entry m proportional to exp(j 2 pi d/lambda m sin az).
CVec ula_response(double azimuth, int elements, double spacing,
                  double wavelength);

// Unit-norm planar-array response, far field; row-major kron(horizontal,
// vertical) layout matching element_position indexing.
CVec upa_response(const RisAngles& angles, int n1, int n2, double spacing,
                  double wavelength);

// Unit-norm near-field response with exact per-element path lengths.
// Throws std::invalid_argument if the point coincides with an element.
CVec nearfield_steering(const Vec3& point, const ArrayConfig& array,
                        const Vec3& ris_center);

// Largest aperture dimension (the panel diagonal).
double aperture(const ArrayConfig& array);

// Fraunhofer boundary 2 D^2 / lambda.
double rayleigh_distance(double aperture_m, double wavelength);
double rayleigh_distance(const ArrayConfig& array);

} // namespace xlris
