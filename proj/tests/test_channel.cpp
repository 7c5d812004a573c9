#include <doctest.h>

#include <cmath>

#include <xlris/channel.hpp>
#include <xlris/geometry.hpp>
#include <xlris/rng.hpp>
#include <xlris/types.hpp>

#include "helpers.hpp"

using namespace xlris;

TEST_SUITE("channel") {

TEST_CASE("large rician factor pins the matrix to the line-of-sight rank-one") {
  ArrayConfig arr = testutil::desk_array();
  SceneGeometry scene;
  FadingParams fading;
  fading.rician_k = 1e12;

  double dist = (scene.bs_position - scene.ris_center).norm();
  FarFieldPathSet paths = los_path_set(scene);

  // Independently assembled deterministic component.
  CVec b = upa_response(paths.ris_angles[0], arr.ris_n1, arr.ris_n2,
                        arr.spacing(), arr.wavelength());
  CVec a = ula_response(paths.bs_azimuths[0], arr.bs_antennas, arr.spacing(),
                        arr.wavelength());
  CMat los = std::sqrt(64.0 * 4.0) * (b * a.adjoint());
  double large_scale =
      std::sqrt(fading.beta0 * std::pow(dist, -fading.pathloss_exp));

  Rng rng(11);
  CMat g = synthesize_far_channel(fading, paths, arr, dist, rng);
  CMat target = large_scale * los;
  double rel = (g - target).norm() / target.norm();
  CHECK(rel < 1e-5);
}

TEST_CASE("matrix frobenius power matches the pathloss budget") {
  ArrayConfig arr{2, 8, 2, 0.0, 1e9}; // 16 elements, 2 antennas
  SceneGeometry scene;
  FadingParams fading;
  double dist = 10.0;
  FarFieldPathSet paths = los_path_set(scene);

  Rng rng(21);
  double acc = 0.0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    acc += synthesize_far_channel(fading, paths, arr, dist, rng).squaredNorm();
  double mean = acc / draws;

  double expect =
      fading.beta0 * std::pow(dist, -fading.pathloss_exp) * 16.0 * 2.0;
  CHECK(mean == doctest::Approx(expect).epsilon(0.03));
}

TEST_CASE("near receiver vector is the steering vector scaled by (1+j)zeta") {
  ArrayConfig arr = testutil::desk_array();
  SceneGeometry scene;
  FadingParams fading;
  fading.gain_std = 0.0; // zeta is exactly gain_mean = 1

  Rng rng(7);
  CVec h = synthesize_near_channel(scene.user, arr, scene, fading, rng);
  REQUIRE(h.size() == 64);
  // |1 + j|^2 = 2 and the steering vector has unit norm.
  CHECK(h.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));

  Vec3 rx = receiver_position(scene.user, scene.ris_center);
  CVec steer = nearfield_steering(rx, arr, scene.ris_center);
  CVec expect = cplx(1.0, 1.0) * steer;
  CHECK((h - expect).norm() < 1e-12);
}

TEST_CASE("receiver amplitude statistics follow the configured gaussian") {
  ArrayConfig arr{1, 1, 1, 0.0, 1e9};
  SceneGeometry scene;
  FadingParams fading; // gain_mean 1, gain_std 0.1

  Rng rng(13);
  const int draws = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int i = 0; i < draws; ++i) {
    CVec h = synthesize_near_channel(scene.user, arr, scene, fading, rng);
    // |h| = sqrt(2) * |zeta|; zeta stays positive at these parameters.
    double zeta = h.norm() / std::sqrt(2.0);
    sum += zeta;
    sum_sq += zeta * zeta;
  }
  double mean = sum / draws;
  double stdev = std::sqrt(sum_sq / draws - mean * mean);
  CHECK(mean == doctest::Approx(1.0).epsilon(0.002));
  CHECK(stdev > 0.097);
  CHECK(stdev < 0.103);
}

TEST_CASE("planar baseline ignores the receiver radius") {
  ArrayConfig arr = testutil::desk_array();
  SceneGeometry scene;
  FadingParams fading;

  Rng rng_a(5);
  CVec near = far_field_baseline_channel(PolarPosition{5.0, kPi / 4}, arr,
                                         scene, fading, rng_a);
  Rng rng_b(5);
  CVec far = far_field_baseline_channel(PolarPosition{25.0, kPi / 4}, arr,
                                        scene, fading, rng_b);
  CHECK((near - far).norm() == 0.0);

  // The exact spherical model does depend on the radius.
  Rng rng_c(5);
  CVec sph_near = synthesize_near_channel(PolarPosition{5.0, kPi / 4}, arr,
                                          scene, fading, rng_c);
  Rng rng_d(5);
  CVec sph_far = synthesize_near_channel(PolarPosition{25.0, kPi / 4}, arr,
                                         scene, fading, rng_d);
  CHECK((sph_near - sph_far).norm() > 1e-3);
}

TEST_CASE("same seed reproduces the full channel set bit for bit") {
  ChannelSet a = testutil::draw_desk(99);
  ChannelSet b = testutil::draw_desk(99);
  CHECK((a.bs_ris - b.bs_ris).norm() == 0.0);
  CHECK((a.user - b.user).norm() == 0.0);
  CHECK((a.eve - b.eve).norm() == 0.0);

  ChannelSet c = testutil::draw_desk(100);
  CHECK((a.bs_ris - c.bs_ris).norm() > 0.0);
}

TEST_CASE("swapping user and eve geometry swaps the receiver vectors") {
  ArrayConfig arr = testutil::desk_array();
  FadingParams fading;
  fading.gain_std = 0.0; // remove the per-receiver amplitude draw

  SceneGeometry scene;
  SceneGeometry swapped = scene;
  std::swap(swapped.user, swapped.eve);

  Rng rng_a(31);
  ChannelSet orig = draw_channel_set(arr, scene, fading,
                                     ReceiverModel::near_field, rng_a);
  Rng rng_b(31);
  ChannelSet flip = draw_channel_set(arr, swapped, fading,
                                     ReceiverModel::near_field, rng_b);
  CHECK((orig.user - flip.eve).norm() < 1e-14);
  CHECK((orig.eve - flip.user).norm() < 1e-14);
  CHECK((orig.bs_ris - flip.bs_ris).norm() == 0.0);
}

TEST_CASE("path set and distance validation reject nonsense inputs") {
  ArrayConfig arr = testutil::desk_array();
  FadingParams fading;
  Rng rng(1);

  FarFieldPathSet empty;
  CHECK_THROWS_AS(synthesize_far_channel(fading, empty, arr, 10.0, rng),
                  std::invalid_argument);

  FarFieldPathSet paths = los_path_set(SceneGeometry{});
  CHECK_THROWS_AS(synthesize_far_channel(fading, paths, arr, 0.0, rng),
                  std::invalid_argument);

  FarFieldPathSet ragged = paths;
  ragged.gains.push_back(cplx(0.5, 0.0)); // lengths now disagree
  CHECK_THROWS_AS(synthesize_far_channel(fading, ragged, arr, 10.0, rng),
                  std::invalid_argument);
}

} // TEST_SUITE
