// SPDX-License-Identifier: Apache-2.0

#include "fdbia/verification.hpp"

#include <algorithm>

#include "fdbia/rng.hpp"
#include "fdbia/scheme_no_csit.hpp"
#include "fdbia/scheme_partial_csit.hpp"

namespace fdbia::verification {

namespace {

CVec random_symbols(CounterRng& rng, Index n) {
  CVec s(n);
  for (Index i = 0; i < n; ++i) s(i) = rng.next_cn();
  return s;
}

double relative_error(const CVec& estimate, const CVec& truth) {
  if (truth.size() == 0) return 0.0;
  return (estimate - truth).norm() / truth.norm();
}

std::uint64_t draw_seed(std::uint64_t seed, int draw) {
  return CounterRng(seed).substream(static_cast<std::uint64_t>(draw)).next_u64();
}

}  // namespace

OrthogonalityCheck no_csit_orthogonality(int max_block) {
  OrthogonalityCheck check;
  for (int lu = 1; lu <= max_block; ++lu) {
    const CMat idft = idft_matrix(lu);
    const double residual = (idft.leftCols(lu - 1).adjoint() * idft.col(lu - 1)).norm();
    check.max_residual = std::max(check.max_residual, residual);
    ++check.combinations;
  }
  return check;
}

OrthogonalityCheck partial_csit_orthogonality(int max_block) {
  OrthogonalityCheck check;
  for (int ld = 1; ld <= max_block; ++ld) {
    for (int lu = 1; ld * lu <= max_block; ++lu) {
      const int n = ld * lu;
      const CMat idft = idft_matrix(n);
      NetworkConfig cfg{ld, lu, ld, lu};
      for (int nd = 1; nd <= lu; ++nd) {
        for (int nu = 1; nu <= ld; ++nu) {
          if (!allocation_valid(cfg, SymbolAllocation{nd, nu})) continue;
          const double residual =
              (idft.middleCols(0, nd).adjoint() * idft.middleCols(nd, nu)).norm();
          check.max_residual = std::max(check.max_residual, residual);
          ++check.combinations;
        }
      }
    }
  }
  return check;
}

RecoveryCheck no_csit_recovery(const NetworkConfig& cfg, int draws, std::uint64_t seed) {
  const NoCsitPrecoders p = build_no_csit(cfg);
  const int lu = p.block_length;
  RecoveryCheck check;
  check.min_decodable_streams = lu;
  for (int d = 0; d < draws; ++d) {
    CounterRng rng = CounterRng(seed).substream(d);
    const ChannelRealization cr = sample_channels(cfg, draw_seed(seed, d));
    const CVec dl_symbols = random_symbols(rng, lu - 1);
    std::vector<Cplx> ul_symbols(cfg.ul_users);
    for (auto& s : ul_symbols) s = rng.next_cn();

    const NoCsitTxSignals tx = encode_no_csit(p, dl_symbols, ul_symbols);
    std::vector<CVec> noise_dl(cfg.dl_users, CVec::Zero(lu));
    const ChannelOutput rx = apply_channel(cr, p.schedule, tx.bs, tx.ul_users,
                                           noise_dl, CVec::Zero(lu));

    const CVec dl_hat = decode_dl_no_csit(p, cr.dl_user_csi(1), rx.dl[0]);
    check.max_dl_error = std::max(check.max_dl_error, relative_error(dl_hat, dl_symbols));

    const UlDecodeResult ul = decode_ul_no_csit(p, cr.bs_receive_csi(), rx.ul);
    check.min_decodable_streams = std::min(check.min_decodable_streams, ul.decodable_streams);
    if (cfg.ul_users <= lu) {
      CVec truth(cfg.ul_users), est(cfg.ul_users);
      for (int j = 0; j < cfg.ul_users; ++j) {
        truth(j) = ul_symbols[j];
        est(j) = ul.symbols[j];
      }
      check.max_ul_error = std::max(check.max_ul_error, relative_error(est, truth));
    }
    ++check.draws;
  }
  return check;
}

RecoveryCheck partial_csit_recovery(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                    int draws, std::uint64_t seed) {
  RecoveryCheck check;
  check.min_decodable_streams = cfg.active_tx_modes() * cfg.active_rx_modes() + 1;
  for (int d = 0; d < draws; ++d) {
    CounterRng rng = CounterRng(seed).substream(d);
    const ChannelRealization cr = sample_channels(cfg, draw_seed(seed, d));
    const PartialCsitPrecoders p = build_partial_csit(cfg, cr.bs_full_csi(), alloc);

    std::vector<CVec> dl_symbols, ul_symbols;
    for (int i = 0; i < p.served_dl_users; ++i)
      dl_symbols.push_back(random_symbols(rng, alloc.dl_symbols));
    for (int j = 0; j < cfg.ul_users; ++j)
      ul_symbols.push_back(random_symbols(rng, alloc.ul_symbols));

    const PartialTxSignals tx = encode_partial_csit(p, dl_symbols, ul_symbols);
    std::vector<CVec> noise_dl(cfg.dl_users, CVec::Zero(p.block_length));
    const ChannelOutput rx = apply_channel(cr, p.schedule, tx.bs, tx.ul_users,
                                           noise_dl, CVec::Zero(p.block_length));

    for (int i = 1; i <= p.served_dl_users; ++i) {
      const CVec dl_hat = decode_dl_partial_csit(p, i, rx.dl[i - 1]);
      check.max_dl_error =
          std::max(check.max_dl_error, relative_error(dl_hat, dl_symbols[i - 1]));
    }
    const UlBlockDecodeResult ul = decode_ul_partial_csit(p, rx.ul);
    check.min_decodable_streams =
        std::min(check.min_decodable_streams, ul.decodable_streams);
    if (ul.decodable_streams ==
        static_cast<int>(cfg.ul_users) * alloc.ul_symbols) {
      for (int j = 0; j < cfg.ul_users; ++j) {
        check.max_ul_error =
            std::max(check.max_ul_error, relative_error(ul.symbols[j], ul_symbols[j]));
      }
    }
    ++check.draws;
  }
  return check;
}

AlignmentCheck no_csit_alignment(const NetworkConfig& cfg, int draws, std::uint64_t seed) {
  const NoCsitPrecoders p = build_no_csit(cfg);
  const int lu = p.block_length;
  AlignmentCheck check;
  for (int d = 0; d < draws; ++d) {
    CounterRng rng = CounterRng(seed).substream(d);
    ChannelRealization cr = sample_channels(cfg, draw_seed(seed, d));
    const CVec dl_symbols = random_symbols(rng, lu - 1);
    std::vector<Cplx> ul_symbols(cfg.ul_users);
    for (auto& s : ul_symbols) s = rng.next_cn();
    CVec noise = random_symbols(rng, lu);

    auto decode_once = [&](const ChannelRealization& channel,
                           const std::vector<Cplx>& ul) {
      const NoCsitTxSignals tx = encode_no_csit(p, dl_symbols, ul);
      std::vector<CVec> noise_dl(cfg.dl_users, CVec::Zero(lu));
      noise_dl[0] = noise;
      const ChannelOutput rx = apply_channel(channel, p.schedule, tx.bs, tx.ul_users,
                                             noise_dl, CVec::Zero(lu));
      return decode_dl_no_csit(p, channel.dl_user_csi(1), rx.dl[0]);
    };

    const CVec baseline = decode_once(cr, ul_symbols);
    // Replace every UL symbol and every cross gain; the DL estimate may not move.
    for (auto& s : ul_symbols) s = rng.next_cn();
    for (Index i = 0; i < cr.cross_gain.rows(); ++i)
      for (Index j = 0; j < cr.cross_gain.cols(); ++j) cr.cross_gain(i, j) = rng.next_cn();
    const CVec perturbed = decode_once(cr, ul_symbols);
    check.max_deviation =
        std::max(check.max_deviation, (baseline - perturbed).norm());
    ++check.draws;
  }
  return check;
}

AlignmentCheck partial_csit_alignment(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                      int draws, std::uint64_t seed) {
  AlignmentCheck check;
  for (int d = 0; d < draws; ++d) {
    CounterRng rng = CounterRng(seed).substream(d);
    ChannelRealization cr = sample_channels(cfg, draw_seed(seed, d));
    const PartialCsitPrecoders p = build_partial_csit(cfg, cr.bs_full_csi(), alloc);

    std::vector<CVec> dl_symbols, ul_symbols;
    for (int i = 0; i < p.served_dl_users; ++i)
      dl_symbols.push_back(random_symbols(rng, alloc.dl_symbols));
    for (int j = 0; j < cfg.ul_users; ++j)
      ul_symbols.push_back(random_symbols(rng, alloc.ul_symbols));
    std::vector<CVec> noise_dl;
    for (int i = 0; i < cfg.dl_users; ++i)
      noise_dl.push_back(random_symbols(rng, p.block_length));

    auto decode_all = [&](const ChannelRealization& channel,
                          const std::vector<CVec>& ul) {
      const PartialTxSignals tx = encode_partial_csit(p, dl_symbols, ul);
      const ChannelOutput rx = apply_channel(channel, p.schedule, tx.bs, tx.ul_users,
                                             noise_dl, CVec::Zero(p.block_length));
      CVec stacked(p.served_dl_users * alloc.dl_symbols);
      for (int i = 1; i <= p.served_dl_users; ++i) {
        stacked.segment((i - 1) * alloc.dl_symbols, alloc.dl_symbols) =
            decode_dl_partial_csit(p, i, rx.dl[i - 1]);
      }
      return stacked;
    };

    const CVec baseline = decode_all(cr, ul_symbols);
    for (auto& s : ul_symbols) s = random_symbols(rng, alloc.ul_symbols);
    for (Index i = 0; i < cr.cross_gain.rows(); ++i)
      for (Index j = 0; j < cr.cross_gain.cols(); ++j) cr.cross_gain(i, j) = rng.next_cn();
    const CVec perturbed = decode_all(cr, ul_symbols);
    check.max_deviation =
        std::max(check.max_deviation, (baseline - perturbed).norm());
    ++check.draws;
  }
  return check;
}

CertificateCheck certificate_mc(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                int draws, std::uint64_t seed) {
  CertificateCheck check;
  const Index want_dl =
      static_cast<Index>(cfg.active_tx_modes()) * alloc.dl_symbols;
  const Index want_ul =
      static_cast<Index>(cfg.active_rx_modes()) * alloc.ul_symbols;
  for (int d = 0; d < draws; ++d) {
    const ChannelRealization cr = sample_channels(cfg, draw_seed(seed, d));
    const RankCertificate cert = rank_certificate(cfg, cr, alloc);
    check.ranks_ok = check.ranks_ok && cert.dl_response_rank == want_dl &&
                     cert.ul_response_rank >= want_ul;
    check.max_dl_residual = std::max(check.max_dl_residual, cert.dl_identity_residual);
    check.max_ul_residual = std::max(check.max_ul_residual, cert.ul_identity_residual);
    ++check.draws;
  }
  return check;
}

}  // namespace fdbia::verification
