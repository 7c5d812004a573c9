#include "xlris/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace xlris {

void ArrayConfig::validate() const {
  if (bs_antennas < 1) throw std::invalid_argument("bs_antennas must be >= 1");
  if (ris_n1 < 1 || ris_n2 < 1)
    throw std::invalid_argument("ris panel dimensions must be >= 1");
  if (carrier_hz <= 0) throw std::invalid_argument("carrier_hz must be > 0");
  if (element_spacing < 0)
    throw std::invalid_argument("element_spacing must be >= 0");
}

Vec3 receiver_position(const PolarPosition& p, const Vec3& ris_center) {
  return {ris_center.x + p.radius * std::cos(p.azimuth),
          ris_center.y + p.radius * std::sin(p.azimuth), ris_center.z};
}

RisAngles ris_angles_toward(const Vec3& point, const Vec3& ris_center) {
  Vec3 d = point - ris_center;
  double r = d.norm();
  if (r <= 0) throw std::invalid_argument("point coincides with surface center");
  double uz = std::clamp(d.z / r, -1.0, 1.0);
  double el = std::asin(uz);
  double ce = std::cos(el);
  double az = 0.0;
  if (ce > 1e-12) az = std::asin(std::clamp(d.y / r / ce, -1.0, 1.0));
  return {az, el};
}

Vec3 element_position(const ArrayConfig& array, const Vec3& ris_center, int n1,
                      int n2) {
  double d = array.spacing();
  double oy = (n1 - 0.5 * (array.ris_n1 - 1)) * d;
  double oz = (n2 - 0.5 * (array.ris_n2 - 1)) * d;
  return {ris_center.x, ris_center.y + oy, ris_center.z + oz};
}

CVec ula_response(double azimuth, int elements, double spacing,
                  double wavelength) {
  if (elements < 1) throw std::invalid_argument("elements must be >= 1");
  CVec a(elements);
  double step = 2.0 * kPi * spacing / wavelength * std::sin(azimuth);
  double scale = 1.0 / std::sqrt(static_cast<double>(elements));
  for (int m = 0; m < elements; ++m) a(m) = std::polar(scale, step * m);
  return a;
}

CVec upa_response(const RisAngles& angles, int n1, int n2, double spacing,
                  double wavelength) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("panel dims must be >= 1");
  const int total = n1 * n2;
  CVec b(total);
  double k = 2.0 * kPi * spacing / wavelength;
  double horiz = k * std::sin(angles.azimuth) * std::cos(angles.elevation);
  double vert = k * std::sin(angles.elevation);
  double scale = 1.0 / std::sqrt(static_cast<double>(total));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      b(i * n2 + j) = std::polar(scale, horiz * i + vert * j);
  return b;
}

CVec nearfield_steering(const Vec3& point, const ArrayConfig& array,
                        const Vec3& ris_center) {
  const int n1 = array.ris_n1, n2 = array.ris_n2;
  const int total = n1 * n2;
  const double wl = array.wavelength();
  CVec b(total);
  double scale = 1.0 / std::sqrt(static_cast<double>(total));
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      Vec3 e = element_position(array, ris_center, i, j);
      double dist = (point - e).norm();
      if (dist < 1e-9)
        throw std::invalid_argument("point coincides with an array element");
      b(i * n2 + j) = std::polar(scale, -2.0 * kPi / wl * dist);
    }
  }
  return b;
}

double aperture(const ArrayConfig& array) {
  double d = array.spacing();
  double dy = array.ris_n1 * d;
  double dz = array.ris_n2 * d;
  return std::sqrt(dy * dy + dz * dz);
}

double rayleigh_distance(double aperture_m, double wavelength) {
  if (aperture_m <= 0 || wavelength <= 0)
    throw std::invalid_argument("aperture and wavelength must be > 0");
  return 2.0 * aperture_m * aperture_m / wavelength;
}

double rayleigh_distance(const ArrayConfig& array) {
  return rayleigh_distance(aperture(array), array.wavelength());
}

} // namespace xlris
