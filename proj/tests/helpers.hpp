#pragma once

// Shared fixtures for the unit suites: deterministic desk-scale draws and
// small random problem instances.

#include <xlris/channel.hpp>
#include <xlris/geometry.hpp>
#include <xlris/rng.hpp>
#include <xlris/secrecy.hpp>
#include <xlris/types.hpp>

namespace testutil {

using namespace xlris;

// Desk-scale system: 16x4 surface, 4 transmit antennas, 1 GHz carrier.
inline ArrayConfig desk_array() { return ArrayConfig{4, 16, 4, 0.0, 1e9}; }

inline ChannelSet draw_desk(std::uint64_t seed,
                            ReceiverModel model = ReceiverModel::near_field) {
  Rng rng(seed);
  return draw_channel_set(desk_array(), SceneGeometry{}, FadingParams{}, model,
                          rng);
}

inline CVec random_cvec(Rng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.complex_normal();
  return v;
}

inline CVec random_unit_cvec(Rng& rng, int n) {
  CVec v = random_cvec(rng, n);
  return v / v.norm();
}

// Random strictly feasible power split: 60/40 at 90% of the budget.
inline Precoders random_precoders(Rng& rng, int m, double budget) {
  Precoders p;
  p.info = std::sqrt(0.54 * budget) * random_unit_cvec(rng, m);
  p.jam = std::sqrt(0.36 * budget) * random_unit_cvec(rng, m);
  return p;
}

inline RisVector random_phases(Rng& rng, int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = rng.unit_phase();
  return RisVector{v};
}

} // namespace testutil
