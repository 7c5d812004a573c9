#pragma once

#include <vector>

#include "xlris/geometry.hpp"
#include "xlris/rng.hpp"

namespace xlris {

// Large-scale and small-scale fading knobs. beta0 and rician_k are linear.
struct FadingParams {
  double beta0 = 1e-3;        // reference path gain at 1 m
  double pathloss_exp = 2.2;  // BS -> surface slope
  double rician_k = db_to_linear(3.0);
  double gain_mean = 1.0;     // receiver-side real amplitude jitter
  double gain_std = 0.1;
};

// Deterministic multipath description for the BS -> surface link. One entry
// per path; gains are combined on top of the global large-scale factor.
struct FarFieldPathSet {
  std::vector<cplx> gains;
  std::vector<double> bs_azimuths;
  std::vector<RisAngles> ris_angles;

  std::size_t size() const { return gains.size(); }
  void validate() const; // throws std::invalid_argument on mismatched lengths
};

// Single line-of-sight path for the given scene, unit gain.
FarFieldPathSet los_path_set(const SceneGeometry& scene);

// One channel realization: the BS -> surface matrix plus the two
// surface -> receiver vectors.
struct ChannelSet {
  CMat bs_ris;  // N x M
  CVec user;    // N
  CVec eve;     // N
};

// Rician BS -> surface matrix. The deterministic component is the sum of
// steering outer products scaled to carry NM average power, so the Frobenius
// norm statistic is beta0 * dist^-alpha * N * M regardless of the K-factor.
CMat synthesize_far_channel(const FadingParams& fading,
                            const FarFieldPathSet& paths,
                            const ArrayConfig& array, double bs_ris_distance,
                            Rng& rng);

// Near-field surface -> receiver vector: exact spherical-wave phases with a
// (1+j) * zeta complex amplitude, zeta ~ N(gain_mean, gain_std^2).
CVec synthesize_near_channel(const PolarPosition& receiver,
                             const ArrayConfig& array,
                             const SceneGeometry& scene, const FadingParams& f,
                             Rng& rng);

// Planar-wavefront mismatch baseline: same amplitude model, but the phase
// profile is the far-field planar response evaluated at the receiver angles.
CVec far_field_baseline_channel(const PolarPosition& receiver,
                                const ArrayConfig& array,
                                const SceneGeometry& scene,
                                const FadingParams& f, Rng& rng);

enum class ReceiverModel { near_field, far_field };

// Full draw in fixed order (BS->surface, user, eve) so a seed pins the whole
// set. Both receivers use the same wavefront model.
ChannelSet draw_channel_set(const ArrayConfig& array, const SceneGeometry& scene,
                            const FadingParams& fading, ReceiverModel model,
                            Rng& rng);

} // namespace xlris
