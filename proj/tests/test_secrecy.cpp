#include <doctest.h>

#include <cmath>

#include <xlris/channel.hpp>
#include <xlris/rng.hpp>
#include <xlris/secrecy.hpp>
#include <xlris/types.hpp>

#include "helpers.hpp"

using namespace xlris;

namespace {

// Direct evaluation of the user tap h^H diag(v) G w.
cplx direct_tap(const CVec& h, const CVec& v, const CMat& g, const CVec& w) {
  return (h.conjugate().cwiseProduct(v)).transpose() * (g * w);
}

} // namespace

TEST_SUITE("secrecy") {

TEST_CASE("cascade matches the diagonal-phase identity") {
  Rng rng(2);
  ChannelSet ch = testutil::draw_desk(2);
  RisVector ris = testutil::random_phases(rng, 64);
  Precoders p = testutil::random_precoders(rng, 4, 1e-2);

  CascadedChannels cc = cascade(ch, ris);
  REQUIRE(cc.user.size() == 4);
  REQUIRE(cc.eve.size() == 4);

  // cc.user.dot(w) is user^H w = h^H diag(v) G w for both receivers.
  cplx via_cascade = cc.user.dot(p.info);
  cplx direct = direct_tap(ch.user, ris.v, ch.bs_ris, p.info);
  CHECK(std::abs(via_cascade - direct) < 1e-12 * std::abs(direct) + 1e-18);

  cplx via_eve = cc.eve.dot(p.jam);
  cplx direct_eve = direct_tap(ch.eve, ris.v, ch.bs_ris, p.jam);
  CHECK(std::abs(via_eve - direct_eve) < 1e-12 * std::abs(direct_eve) + 1e-18);
}

TEST_CASE("all-ones phases reduce the cascade to a plain product") {
  ChannelSet ch = testutil::draw_desk(3);
  CascadedChannels cc = cascade(ch, RisVector::all_ones(64));
  CVec expect_user = ch.bs_ris.adjoint() * ch.user;
  CVec expect_eve = ch.bs_ris.adjoint() * ch.eve;
  CHECK((cc.user - expect_user).norm() < 1e-14 * expect_user.norm());
  CHECK((cc.eve - expect_eve).norm() < 1e-14 * expect_eve.norm());
}

TEST_CASE("common phase rotation of the surface leaves the rates unchanged") {
  Rng rng(5);
  ChannelSet ch = testutil::draw_desk(5);
  RisVector ris = testutil::random_phases(rng, 64);
  Precoders p = testutil::random_precoders(rng, 4, 1e-2);
  NoiseAndLimits lim;

  RisVector rotated{std::polar(1.0, 0.83) * ris.v};
  Rates a = rates_and_secrecy(cascade(ch, ris), p, lim);
  Rates b = rates_and_secrecy(cascade(ch, rotated), p, lim);
  CHECK(a.user_bits == doctest::Approx(b.user_bits).epsilon(1e-9));
  CHECK(a.eve_bits == doctest::Approx(b.eve_bits).epsilon(1e-9));
  CHECK(a.secrecy_bits == doctest::Approx(b.secrecy_bits).epsilon(1e-9));
}

TEST_CASE("user sinr closed-form cases") {
  NoiseAndLimits lim;
  CascadedChannels cc;
  cc.user = CVec::Zero(2);
  cc.user(0) = cplx(1.0, 0.0);
  cc.eve = CVec::Zero(2);

  Precoders p;
  p.info = CVec::Zero(2);
  p.jam = CVec::Zero(2);

  // Information beam orthogonal to the user channel: zero SINR.
  p.info(1) = cplx(0.3, -0.4);
  CHECK(sinr_user(cc, p, lim) == 0.0);

  // Tap power equal to the noise floor: SINR exactly one.
  p.info(1) = 0.0;
  p.info(0) = cplx(std::sqrt(lim.noise_user), 0.0);
  CHECK(sinr_user(cc, p, lim) == doctest::Approx(1.0).epsilon(1e-12));

  // Random instance against the direct formula.
  Rng rng(6);
  ChannelSet ch = testutil::draw_desk(6);
  RisVector ris = testutil::random_phases(rng, 64);
  Precoders q = testutil::random_precoders(rng, 4, 1e-2);
  CascadedChannels cr = cascade(ch, ris);
  double tap = std::norm(cr.user.dot(q.info));
  CHECK(sinr_user(cr, q, lim) ==
        doctest::Approx(tap / lim.noise_user).epsilon(1e-12));
}

TEST_CASE("eve sinr treats the jamming beam as interference") {
  NoiseAndLimits lim;
  Rng rng(7);
  ChannelSet ch = testutil::draw_desk(7);
  RisVector ris = testutil::random_phases(rng, 64);
  Precoders p = testutil::random_precoders(rng, 4, 1e-2);
  CascadedChannels cc = cascade(ch, ris);

  double info_tap = std::norm(cc.eve.dot(p.info));
  double jam_tap = std::norm(cc.eve.dot(p.jam));
  double expect = info_tap / (jam_tap + lim.noise_eve);
  CHECK(sinr_eve(cc, p, lim) == doctest::Approx(expect).epsilon(1e-12));

  // Stronger jamming strictly lowers the eavesdropper rate.
  Precoders louder = p;
  louder.jam *= 2.0;
  CHECK(sinr_eve(cc, louder, lim) < sinr_eve(cc, p, lim));
}

TEST_CASE("secrecy rate special cases and clamping") {
  NoiseAndLimits lim;
  Rng rng(8);
  ChannelSet ch = testutil::draw_desk(8);
  RisVector ris = testutil::random_phases(rng, 64);
  Precoders p = testutil::random_precoders(rng, 4, 1e-2);

  // Silent eavesdropper channel: secrecy equals the user rate.
  ChannelSet deaf = ch;
  deaf.eve = CVec::Zero(64);
  CascadedChannels cc = cascade(deaf, ris);
  Rates r = rates_and_secrecy(cc, p, lim);
  CHECK(r.eve_bits == 0.0);
  CHECK(r.secrecy_bits == doctest::Approx(r.user_bits).epsilon(1e-14));

  // Identical receivers without jamming: the gap collapses to zero.
  ChannelSet twin = ch;
  twin.eve = twin.user;
  Precoders nj = p;
  nj.jam = CVec::Zero(4);
  Rates tr = rates_and_secrecy(cascade(twin, ris), nj, lim);
  CHECK(tr.secrecy_bits == 0.0);
  CHECK(tr.gap_bits == doctest::Approx(0.0));

  // The clamp never reports negative secrecy even when eve is stronger.
  ChannelSet strong = ch;
  strong.eve = 3.0 * strong.user;
  Rates sr = rates_and_secrecy(cascade(strong, ris), nj, lim);
  CHECK(sr.gap_bits < 0.0);
  CHECK(sr.secrecy_bits == 0.0);

  // Bits really are log base two of one plus the SINR.
  CascadedChannels cr = cascade(ch, ris);
  Rates rr = rates_and_secrecy(cr, p, lim);
  double expect_user = std::log2(1.0 + sinr_user(cr, p, lim));
  double expect_eve = std::log2(1.0 + sinr_eve(cr, p, lim));
  CHECK(rr.user_bits == doctest::Approx(expect_user).epsilon(1e-12));
  CHECK(rr.eve_bits == doctest::Approx(expect_eve).epsilon(1e-12));
  CHECK(rr.gap_bits ==
        doctest::Approx(expect_user - expect_eve).epsilon(1e-12));
}

TEST_CASE("constraint report flags each violation independently") {
  NoiseAndLimits lim;
  lim.noise_user = 1.0;
  lim.noise_eve = 1.0;
  lim.power_budget = 1.0;
  lim.qos_sinr_min = 1.0;

  CascadedChannels cc;
  cc.user = CVec::Zero(2);
  cc.user(0) = cplx(2.0, 0.0);
  cc.eve = CVec::Zero(2);
  cc.eve(1) = cplx(1.0, 0.0);

  Precoders p;
  p.info = CVec::Zero(2);
  p.jam = CVec::Zero(2);
  p.info(0) = cplx(0.6, 0.0);
  p.jam(0) = cplx(0.7, 0.0);

  RisVector ris = RisVector::all_ones(2);
  ConstraintReport rep = check_constraints(cc, p, ris, lim);
  // Power 0.36 + 0.49 = 0.85 fits; user tap 1.44 >= 1; jam tap 1.96 >= 1.44.
  CHECK(rep.power_ok());
  CHECK(rep.qos_ok());
  CHECK(rep.sic_ok());
  CHECK(rep.unit_modulus_ok());
  CHECK(rep.all_ok());

  // Equal beams satisfy the jamming-dominance constraint with equality.
  Precoders eq = p;
  eq.jam = eq.info;
  ConstraintReport req = check_constraints(cc, eq, ris, lim);
  CHECK(req.sic == doctest::Approx(0.0));
  CHECK(req.sic_ok());

  // Exceeding the power budget by more than the tolerance trips the flag.
  Precoders hot = p;
  hot.info *= 2.0;
  hot.jam *= 2.0;
  ConstraintReport rhot = check_constraints(cc, hot, ris, lim);
  CHECK_FALSE(rhot.power_ok());
  CHECK_FALSE(rhot.all_ok());

  // A barely off-circle phase entry fails only the unit-modulus check.
  RisVector off = ris;
  off.v(0) = cplx(1.1, 0.0);
  ConstraintReport roff = check_constraints(cc, p, off, lim);
  CHECK(roff.unit_modulus == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_FALSE(roff.unit_modulus_ok());
  CHECK(roff.power_ok());

  // Without jamming the dominance constraint is not enforced.
  Precoders nj = p;
  nj.jam = CVec::Zero(2);
  ConstraintReport rnj = check_constraints(cc, nj, ris, lim, 1e-6, false);
  CHECK(rnj.sic_ok());
  CHECK(rnj.all_ok());
}

TEST_CASE("total power adds both beams") {
  Precoders p;
  p.info = CVec::Zero(3);
  p.jam = CVec::Zero(3);
  p.info(0) = cplx(3.0, 4.0); // 25
  p.jam(2) = cplx(0.0, 2.0);  // 4
  CHECK(p.total_power() == doctest::Approx(29.0).epsilon(1e-15));
}

} // TEST_SUITE
