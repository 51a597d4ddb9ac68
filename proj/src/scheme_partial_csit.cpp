// SPDX-License-Identifier: Apache-2.0

#include "fdbia/scheme_partial_csit.hpp"

#include <cmath>
#include <string>

#include "fdbia/errors.hpp"

namespace fdbia {

namespace {

ModeSchedule cyclic_schedule(int tx_period, int rx_period) {
  const int n = tx_period * rx_period;
  ModeSchedule sched;
  sched.tx_mode.resize(n);
  sched.rx_mode.resize(n);
  for (int t = 0; t < n; ++t) {
    sched.tx_mode[t] = t % tx_period + 1;
    sched.rx_mode[t] = t % rx_period + 1;
  }
  return sched;
}

/// Stacked filtered DL response: row block i is dl_basis^H * diag_t(h_i(alpha(t))).
CMat stacked_dl_response(const CMat& dl_basis, const CMat& dl_gain,
                         const ModeSchedule& sched, int served_users) {
  const int n = sched.length();
  const Index nd = dl_basis.cols();
  CMat p(served_users * nd, n);
  for (int i = 0; i < served_users; ++i) {
    CMat filtered(nd, n);
    for (int t = 0; t < n; ++t) {
      filtered.col(t) =
          dl_basis.row(t).adjoint() * dl_gain(i, sched.tx_mode[t] - 1);
    }
    p.middleRows(i * nd, nd) = filtered;
  }
  return p;
}

/// Effective UL response: column block j is diag_t(f_j(beta(t))) * ul_basis.
CMat effective_ul_response(const CMat& ul_basis, const CMat& ul_gain,
                           const ModeSchedule& sched) {
  const int n = sched.length();
  const Index nu = ul_basis.cols();
  const Index users = ul_gain.rows();
  CMat q(n, users * nu);
  for (Index j = 0; j < users; ++j) {
    for (int t = 0; t < n; ++t) {
      q.block(t, j * nu, 1, nu) =
          ul_gain(j, sched.rx_mode[t] - 1) * ul_basis.row(t);
    }
  }
  return q;
}

std::string alloc_str(const SymbolAllocation& a) {
  return "(" + std::to_string(a.dl_symbols) + "," + std::to_string(a.ul_symbols) + ")";
}

}  // namespace

PartialCsitPrecoders build_partial_csit(const NetworkConfig& cfg, const BsFullCsi& csi,
                                        const SymbolAllocation& alloc) {
  cfg.validate();
  if (cfg.dl_users < 1 || cfg.ul_users < 1) {
    throw UnsupportedTopologyError(
        "build_partial_csit: scheme needs at least one DL and one UL user");
  }
  if (!allocation_valid(cfg, alloc)) {
    throw InvalidAllocationError("build_partial_csit: allocation " + alloc_str(alloc) +
                                 " violates the constraint set");
  }
  const int ld = cfg.active_tx_modes();
  const int lu = cfg.active_rx_modes();
  const int n = ld * lu;
  const int nd = alloc.dl_symbols;
  const int nu = alloc.ul_symbols;

  PartialCsitPrecoders p;
  p.alloc = alloc;
  p.served_dl_users = ld;
  p.block_length = n;
  p.schedule = cyclic_schedule(ld, lu);

  const CMat idft = idft_matrix(n);
  p.dl_basis = idft.middleCols(0, nd);
  p.ul_basis = idft.middleCols(nd, nu);

  p.dl_response = stacked_dl_response(p.dl_basis, csi.dl_gain, p.schedule, ld);
  CMat pinv;
  try {
    pinv = right_pseudoinverse(p.dl_response);
  } catch (const SingularMatrixError&) {
    throw DegenerateChannelError("build_partial_csit: DL response rank-deficient");
  }
  p.dl_response_pinv_norm = pinv.norm();
  const CMat precoder_bank = pinv / p.dl_response_pinv_norm;
  p.dl_precoders.reserve(ld);
  for (int i = 0; i < ld; ++i) {
    p.dl_precoders.push_back(precoder_bank.middleCols(i * nd, nd));
  }

  p.ul_precoder = p.ul_basis / std::sqrt(static_cast<double>(nu));
  p.ul_response = effective_ul_response(p.ul_basis, csi.ul_gain, p.schedule);
  p.ul_response_rank = numerical_rank(p.ul_response);
  if (p.ul_response_rank < static_cast<Index>(lu) * nu) {
    throw DegenerateChannelError("build_partial_csit: UL response rank-deficient");
  }
  return p;
}

PartialTxSignals encode_partial_csit(const PartialCsitPrecoders& p,
                                     const std::vector<CVec>& dl_symbols,
                                     const std::vector<CVec>& ul_symbols) {
  if (dl_symbols.size() != p.dl_precoders.size()) {
    throw InvalidDimensionError("encode_partial_csit: DL stream count mismatch");
  }
  PartialTxSignals tx;
  tx.bs = CVec::Zero(p.block_length);
  for (size_t i = 0; i < dl_symbols.size(); ++i) {
    if (dl_symbols[i].size() != p.alloc.dl_symbols) {
      throw InvalidDimensionError("encode_partial_csit: DL symbol length mismatch");
    }
    tx.bs += p.dl_precoders[i] * dl_symbols[i];
  }
  tx.ul_users.reserve(ul_symbols.size());
  for (const CVec& s : ul_symbols) {
    if (s.size() != p.alloc.ul_symbols) {
      throw InvalidDimensionError("encode_partial_csit: UL symbol length mismatch");
    }
    tx.ul_users.push_back(p.ul_precoder * s);
  }
  return tx;
}

CVec decode_dl_partial_csit(const PartialCsitPrecoders& p, int dl_user,
                            const CVec& received) {
  if (dl_user < 1 || dl_user > p.served_dl_users) {
    throw InvalidRangeError("decode_dl_partial_csit: user index out of range");
  }
  if (received.size() != p.block_length) {
    throw InvalidDimensionError("decode_dl_partial_csit: received length mismatch");
  }
  return p.dl_response_pinv_norm * (p.dl_basis.adjoint() * received);
}

UlBlockDecodeResult decode_ul_partial_csit(const PartialCsitPrecoders& p,
                                           const CVec& received) {
  if (received.size() != p.block_length) {
    throw InvalidDimensionError("decode_ul_partial_csit: received length mismatch");
  }
  const int nu = p.alloc.ul_symbols;
  const Index rank = p.ul_response_rank;
  // The in-the-air response carries the 1/sqrt(nu) of the UL precoder.
  const CMat effective = p.ul_response / std::sqrt(static_cast<double>(nu));
  const CVec stacked = effective.completeOrthogonalDecomposition().solve(received);
  UlBlockDecodeResult out;
  out.decodable_streams = static_cast<int>(rank);
  const Index users = p.ul_response.cols() / nu;
  out.symbols.reserve(users);
  for (Index j = 0; j < users; ++j) {
    out.symbols.push_back(stacked.segment(j * nu, nu));
  }
  return out;
}

RankCertificate rank_certificate(const NetworkConfig& cfg, const ChannelRealization& cr,
                                 const SymbolAllocation& alloc) {
  cfg.validate();
  if (!allocation_valid(cfg, alloc)) {
    throw InvalidAllocationError("rank_certificate: allocation " + alloc_str(alloc) +
                                 " violates the constraint set");
  }
  const int ld = cfg.active_tx_modes();
  const int lu = cfg.active_rx_modes();
  const int n = ld * lu;
  const int nd = alloc.dl_symbols;
  const int nu = alloc.ul_symbols;
  const ModeSchedule sched = cyclic_schedule(ld, lu);
  const CMat idft = idft_matrix(n);
  const CMat dl_basis = idft.middleCols(0, nd);
  const CMat ul_basis = idft.middleCols(nd, nu);

  RankCertificate cert;

  // DL side. Group the response columns by transmit mode: slots with mode k
  // are {k, k+Ld, ...}, so the permuted response has block (i,k) equal to
  // h_i(k) times the mode-k IDFT block. Right-inverting each block collapses
  // the whole thing to (DL gain matrix) (x) I.
  const CMat dl_response = stacked_dl_response(dl_basis, cr.dl_gain, sched, ld);
  cert.dl_response_rank = numerical_rank(dl_response);
  {
    CMat permuted(dl_response.rows(), n);
    std::vector<CMat> block_inverses;
    block_inverses.reserve(ld);
    Index col = 0;
    for (int k = 1; k <= ld; ++k) {
      for (int m = 0; m < lu; ++m) {
        permuted.col(col++) = dl_response.col((k - 1) + m * ld);
      }
      CMat selector = CMat::Zero(ld, 1);
      selector(k - 1, 0) = 1.0;
      const CMat mode_block =
          dl_basis.adjoint() * kron(CMat::Identity(lu, lu), selector);  // nd x Lu
      block_inverses.push_back(right_pseudoinverse(mode_block));
    }
    const CMat gains = cr.dl_gain.topLeftCorner(ld, ld);
    const CMat identity =
        permuted * block_diag(std::span<const CMat>(block_inverses));
    cert.dl_identity_residual =
        (identity - kron(gains, CMat::Identity(nd, nd))).norm();
  }

  // UL side, mirrored: take the first Lu users' response, transpose, group
  // the columns (= slots) by receive mode, and right-invert the per-mode
  // transposed IDFT blocks.
  const CMat ul_response = effective_ul_response(ul_basis, cr.ul_gain, sched);
  cert.ul_response_rank = numerical_rank(ul_response);
  {
    const CMat sub = ul_response.leftCols(static_cast<Index>(lu) * nu);
    const CMat sub_t = sub.transpose();
    CMat permuted(sub_t.rows(), n);
    std::vector<CMat> block_inverses;
    block_inverses.reserve(lu);
    Index col = 0;
    for (int l = 1; l <= lu; ++l) {
      for (int m = 0; m < ld; ++m) {
        permuted.col(col++) = sub_t.col((l - 1) + m * lu);
      }
      CMat selector = CMat::Zero(lu, 1);
      selector(l - 1, 0) = 1.0;
      const CMat mode_block =
          ul_basis.transpose() * kron(CMat::Identity(ld, ld), selector);  // nu x Ld
      block_inverses.push_back(right_pseudoinverse(mode_block));
    }
    CMat gains(lu, lu);  // (j, l) = gain of UL user j at receive mode l
    for (int j = 0; j < lu; ++j) {
      for (int l = 0; l < lu; ++l) gains(j, l) = cr.ul_gain(j, l);
    }
    const CMat identity =
        permuted * block_diag(std::span<const CMat>(block_inverses));
    cert.ul_identity_residual =
        (identity - kron(gains, CMat::Identity(nu, nu))).norm();
  }
  return cert;
}

}  // namespace fdbia
