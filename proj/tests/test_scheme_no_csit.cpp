// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fdbia/dof.hpp"
#include "fdbia/errors.hpp"
#include "fdbia/rng.hpp"
#include "fdbia/scheme_no_csit.hpp"
#include "fdbia/verification.hpp"

using namespace fdbia;

TEST_CASE("precoders are the IDFT column split") {
  const NoCsitPrecoders p = build_no_csit({1, 2, 1, 2});
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(p.block_length == 2);
  CHECK(p.dl_basis.rows() == 2);
  CHECK(p.dl_basis.cols() == 1);
  CHECK(std::abs(p.dl_basis(0, 0) - Cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.dl_basis(1, 0) - Cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.ul_vector(0) - Cplx(s, 0)) < 1e-15);
  CHECK(std::abs(p.ul_vector(1) - Cplx(-s, 0)) < 1e-14);
  CHECK(p.schedule.tx_mode == std::vector<int>{1, 1});
  CHECK(p.schedule.rx_mode == std::vector<int>{1, 2});
}

TEST_CASE("single receive mode degenerates to UL-only") {
  const NoCsitPrecoders p = build_no_csit({2, 1, 2, 1});
  CHECK(p.block_length == 1);
  CHECK(p.dl_basis.cols() == 0);
  CHECK(std::abs(p.ul_vector(0) - Cplx(1, 0)) < 1e-15);
  CHECK(sum_dof_no_csit({2, 1, 2, 1}) == Rational(1));
}

TEST_CASE("precoder columns are exactly the IDFT columns") {
  for (int lu = 1; lu <= 6; ++lu) {
    const NoCsitPrecoders p = build_no_csit({1, lu, 1, lu});
    const CMat idft = idft_matrix(lu);
    CHECK((p.dl_basis - idft.leftCols(lu - 1)).norm() == 0.0);
    CHECK((p.ul_vector - idft.col(lu - 1)).norm() == 0.0);
  }
}

TEST_CASE("DL and UL precoders are orthogonal for every block length") {
  const auto check = verification::no_csit_orthogonality(36);
  CHECK(check.combinations == 36);
  CHECK(check.max_residual <= 1e-12);
}

TEST_CASE("topology errors") {
  CHECK_THROWS_AS(build_no_csit({0, 2, 1, 2}), UnsupportedTopologyError);
  CHECK_THROWS_AS(build_no_csit({2, 0, 1, 2}), UnsupportedTopologyError);
}

TEST_CASE("encoding applies the shared UL vector and preserves norms") {
  const NoCsitPrecoders p = build_no_csit({1, 3, 1, 3});
  const CVec zeros = CVec::Zero(2);
  const NoCsitTxSignals silent = encode_no_csit(p, zeros, {Cplx(0), Cplx(0), Cplx(0)});
  CHECK(silent.bs.norm() == 0.0);
  for (const CVec& x : silent.ul_users) CHECK(x.norm() == 0.0);

  // Orthonormal DL precoder preserves the symbol norm.
  const NoCsitPrecoders p2 = build_no_csit({1, 2, 1, 2});
  CVec one_symbol(1);
  one_symbol << Cplx(std::sqrt(2.0), 0);
  const NoCsitTxSignals tx =
      encode_no_csit(p2, one_symbol, {Cplx(std::sqrt(2.0), 0)});
  CHECK(tx.bs.squaredNorm() == doctest::Approx(2.0).epsilon(1e-12));

  // Identical symbol -> identical transmit vector for every UL user.
  const NoCsitTxSignals common =
      encode_no_csit(p, zeros, {Cplx(1, 1), Cplx(1, 1), Cplx(1, 1)});
  CHECK((common.ul_users[0] - common.ul_users[1]).norm() == 0.0);
  CHECK((common.ul_users[0] - common.ul_users[2]).norm() == 0.0);

  CHECK_THROWS_AS(encode_no_csit(p, CVec::Zero(1), {}), InvalidDimensionError);
}

TEST_CASE("average transmit power meets the power budget") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  const int lu = p.block_length;
  CounterRng rng(5);
  double dl_power = 0.0, ul_power = 0.0;
  const int draws = 20000;
  const double dl_sym = std::sqrt(static_cast<double>(lu) / (lu - 1));  // P = 1
  const double ul_sym = std::sqrt(static_cast<double>(lu));
  for (int d = 0; d < draws; ++d) {
    CVec s(lu - 1);
    for (int i = 0; i < lu - 1; ++i) s(i) = dl_sym * rng.next_cn();
    const NoCsitTxSignals tx = encode_no_csit(p, s, {ul_sym * rng.next_cn(),
                                                     ul_sym * rng.next_cn()});
    dl_power += tx.bs.squaredNorm() / lu;
    ul_power += tx.ul_users[0].squaredNorm() / lu;
  }
  CHECK(dl_power / draws == doctest::Approx(1.0).epsilon(0.02));
  CHECK(ul_power / draws == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("noiseless recovery across block lengths") {
  for (int lu = 2; lu <= 6; ++lu) {
    const NetworkConfig cfg{1, lu, 1, lu};
    const auto check = verification::no_csit_recovery(cfg, 200, 1000 + lu);
    CHECK(check.max_dl_error <= 1e-10);
    CHECK(check.max_ul_error <= 1e-8);
    CHECK(check.min_decodable_streams == lu);
  }
}

TEST_CASE("DL estimate ignores UL symbols and cross gains") {
  const auto check = verification::no_csit_alignment({2, 3, 2, 3}, 300, 77);
  CHECK(check.max_deviation <= 1e-12);
}

TEST_CASE("aligned interference leaves a zero-symbol block at zero") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  const ChannelRealization cr = sample_channels(cfg, 9);
  const NoCsitTxSignals tx =
      encode_no_csit(p, CVec::Zero(1), {Cplx(3, 1), Cplx(-2, 5)});
  const std::vector<CVec> zero_noise{CVec::Zero(2)};
  const ChannelOutput rx =
      apply_channel(cr, p.schedule, tx.bs, tx.ul_users, zero_noise, CVec::Zero(2));
  const CVec estimate = decode_dl_no_csit(p, cr.dl_user_csi(1), rx.dl[0]);
  CHECK(estimate.norm() <= 1e-12);
}

TEST_CASE("noise-only input passes through the orthonormal filter") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  const ChannelRealization cr = sample_channels(cfg, 21);
  CounterRng rng(2);
  const int draws = 40000;
  CMat acc = CMat::Zero(1, 1);
  for (int d = 0; d < draws; ++d) {
    CVec noise(2);
    noise << rng.next_cn(), rng.next_cn();
    const CVec out = decode_dl_no_csit(p, cr.dl_user_csi(1), noise);
    acc += out * out.adjoint();
  }
  acc /= draws;
  const double expected = 1.0 / std::norm(cr.dl_gain(0, 0));
  CHECK(acc(0, 0).real() == doctest::Approx(expected).epsilon(0.05));
}

TEST_CASE("UL decoding inverts the effective matrix") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  const ChannelRealization cr = sample_channels(cfg, 33);
  const std::vector<Cplx> symbols{Cplx(1, -2), Cplx(0.5, 3)};
  const NoCsitTxSignals tx = encode_no_csit(p, CVec::Zero(1), symbols);
  const std::vector<CVec> zero_noise{CVec::Zero(2)};
  const ChannelOutput rx =
      apply_channel(cr, p.schedule, tx.bs, tx.ul_users, zero_noise, CVec::Zero(2));
  const UlDecodeResult ul = decode_ul_no_csit(p, cr.bs_receive_csi(), rx.ul);
  CHECK(ul.decodable_streams == 2);
  CHECK(std::abs(ul.symbols[0] - symbols[0]) <= 1e-8);
  CHECK(std::abs(ul.symbols[1] - symbols[1]) <= 1e-8);
}

TEST_CASE("single UL user reduces to a matched solve") {
  const NetworkConfig cfg{1, 1, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  const ChannelRealization cr = sample_channels(cfg, 4);
  const NoCsitTxSignals tx = encode_no_csit(p, CVec::Zero(0), {Cplx(2, -1)});
  const ChannelOutput rx = apply_channel(cr, p.schedule, CVec::Zero(1), tx.ul_users,
                                         {CVec::Zero(1)}, CVec::Zero(1));
  const UlDecodeResult ul = decode_ul_no_csit(p, cr.bs_receive_csi(), rx.ul);
  CHECK(ul.decodable_streams == 1);
  CHECK(std::abs(ul.symbols[0] - Cplx(2, -1)) <= 1e-8);
}

TEST_CASE("effective UL matrix has full rank on random draws") {
  for (const NetworkConfig cfg : {NetworkConfig{1, 2, 1, 2}, NetworkConfig{1, 4, 1, 2}}) {
    const NoCsitPrecoders p = build_no_csit(cfg);
    for (int d = 0; d < 1000; ++d) {
      const ChannelRealization cr = sample_channels(cfg, 50000 + d);
      const CMat r = ul_effective_matrix(p, cr.bs_receive_csi());
      CHECK(numerical_rank(r) == p.block_length);
    }
  }
}

TEST_CASE("more UL users than modes still yields the full stream count") {
  const NetworkConfig cfg{1, 4, 1, 2};  // Lu = 2 < Ku = 4
  const NoCsitPrecoders p = build_no_csit(cfg);
  const ChannelRealization cr = sample_channels(cfg, 60);
  const std::vector<Cplx> symbols{Cplx(1, 0), Cplx(0, 1), Cplx(-1, 0), Cplx(0, -1)};
  const NoCsitTxSignals tx = encode_no_csit(p, CVec::Zero(1), symbols);
  const ChannelOutput rx = apply_channel(cr, p.schedule, CVec::Zero(2), tx.ul_users,
                                         {CVec::Zero(2)}, CVec::Zero(2));
  const UlDecodeResult ul = decode_ul_no_csit(p, cr.bs_receive_csi(), rx.ul);
  CHECK(ul.decodable_streams == 2);
  CHECK(ul.symbols.size() == 4);
}

TEST_CASE("vanishing DL gain raises a degenerate-channel error") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  ChannelRealization cr = sample_channels(cfg, 3);
  cr.dl_gain(0, 0) = Cplx(0, 0);
  CHECK_THROWS_AS(decode_dl_no_csit(p, cr.dl_user_csi(1), CVec::Zero(2)),
                  DegenerateChannelError);
}

TEST_CASE("rank-deficient UL gains raise a degenerate-channel error") {
  const NetworkConfig cfg{1, 2, 1, 2};
  const NoCsitPrecoders p = build_no_csit(cfg);
  ChannelRealization cr = sample_channels(cfg, 3);
  cr.ul_gain.setZero();
  CHECK_THROWS_AS(decode_ul_no_csit(p, cr.bs_receive_csi(), CVec::Zero(2)),
                  DegenerateChannelError);
}

TEST_CASE("DoF accounting matches the formula") {
  for (int lu = 1; lu <= 6; ++lu) {
    const NetworkConfig cfg{1, lu, 1, lu};
    const NoCsitPrecoders p = build_no_csit(cfg);
    const int dl_streams = static_cast<int>(p.dl_basis.cols());
    const Rational accounted =
        Rational(dl_streams, p.block_length) + Rational(p.block_length, p.block_length);
    CHECK(accounted == sum_dof_no_csit(cfg));
  }
}
