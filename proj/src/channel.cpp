#include "xlris/channel.hpp"

#include <stdexcept>

namespace xlris {

void FarFieldPathSet::validate() const {
  if (gains.empty()) throw std::invalid_argument("path set must be non-empty");
  if (bs_azimuths.size() != gains.size() || ris_angles.size() != gains.size())
    throw std::invalid_argument("path set fields must have equal length");
}

FarFieldPathSet los_path_set(const SceneGeometry& scene) {
  FarFieldPathSet p;
  p.gains.push_back(cplx(1.0, 0.0));
  p.bs_azimuths.push_back(scene.bs_ula_offset);
  p.ris_angles.push_back(ris_angles_toward(scene.bs_position, scene.ris_center));
  return p;
}

CMat synthesize_far_channel(const FadingParams& fading,
                            const FarFieldPathSet& paths,
                            const ArrayConfig& array, double bs_ris_distance,
                            Rng& rng) {
  paths.validate();
  if (bs_ris_distance <= 0)
    throw std::invalid_argument("bs_ris_distance must be > 0");
  const int n = array.ris_elements();
  const int m = array.bs_antennas;
  const double d = array.spacing();
  const double wl = array.wavelength();

  // Deterministic component: steering outer products scaled so a unit-gain
  // path carries N*M power, matching the i.i.d. scatter component below.
  CMat los = CMat::Zero(n, m);
  for (std::size_t p = 0; p < paths.size(); ++p) {
    CVec b = upa_response(paths.ris_angles[p], array.ris_n1, array.ris_n2, d, wl);
    CVec a = ula_response(paths.bs_azimuths[p], m, d, wl);
    los += paths.gains[p] * b * a.adjoint();
  }
  los *= std::sqrt(static_cast<double>(n) * m);

  CMat scatter(n, m);
  for (int c = 0; c < m; ++c)
    for (int r = 0; r < n; ++r) scatter(r, c) = rng.complex_normal();

  double large_scale =
      std::sqrt(fading.beta0 * std::pow(bs_ris_distance, -fading.pathloss_exp));
  double k = fading.rician_k;
  return large_scale * (std::sqrt(k / (k + 1.0)) * los +
                        std::sqrt(1.0 / (k + 1.0)) * scatter);
}

namespace {

cplx receiver_amplitude(const FadingParams& f, Rng& rng) {
  double zeta = rng.normal(f.gain_mean, f.gain_std);
  return cplx(1.0, 1.0) * zeta;
}

} // namespace

CVec synthesize_near_channel(const PolarPosition& receiver,
                             const ArrayConfig& array,
                             const SceneGeometry& scene, const FadingParams& f,
                             Rng& rng) {
  Vec3 pos = receiver_position(receiver, scene.ris_center);
  return receiver_amplitude(f, rng) *
         nearfield_steering(pos, array, scene.ris_center);
}

CVec far_field_baseline_channel(const PolarPosition& receiver,
                                const ArrayConfig& array,
                                const SceneGeometry& scene,
                                const FadingParams& f, Rng& rng) {
  Vec3 pos = receiver_position(receiver, scene.ris_center);
  RisAngles ang = ris_angles_toward(pos, scene.ris_center);
  return receiver_amplitude(f, rng) *
         upa_response(ang, array.ris_n1, array.ris_n2, array.spacing(),
                      array.wavelength());
}

ChannelSet draw_channel_set(const ArrayConfig& array, const SceneGeometry& scene,
                            const FadingParams& fading, ReceiverModel model,
                            Rng& rng) {
  array.validate();
  ChannelSet cs;
  double bs_dist = (scene.bs_position - scene.ris_center).norm();
  cs.bs_ris = synthesize_far_channel(fading, los_path_set(scene), array,
                                     bs_dist, rng);
  if (model == ReceiverModel::near_field) {
    cs.user = synthesize_near_channel(scene.user, array, scene, fading, rng);
    cs.eve = synthesize_near_channel(scene.eve, array, scene, fading, rng);
  } else {
    cs.user = far_field_baseline_channel(scene.user, array, scene, fading, rng);
    cs.eve = far_field_baseline_channel(scene.eve, array, scene, fading, rng);
  }
  return cs;
}

} // namespace xlris
