// SPDX-License-Identifier: Apache-2.0

#include "fdbia/scheme_no_csit.hpp"

#include <numeric>

#include "fdbia/errors.hpp"

namespace fdbia {

NoCsitPrecoders build_no_csit(const NetworkConfig& cfg) {
  cfg.validate();
  if (cfg.dl_users < 1 || cfg.ul_users < 1) {
    throw UnsupportedTopologyError(
        "build_no_csit: scheme needs at least one DL and one UL user");
  }
  const int lu = cfg.active_rx_modes();
  const CMat idft = idft_matrix(lu);

  NoCsitPrecoders p;
  p.block_length = lu;
  p.dl_basis = idft.leftCols(lu - 1);
  p.ul_vector = idft.col(lu - 1);
  p.schedule.tx_mode.assign(lu, 1);
  p.schedule.rx_mode.resize(lu);
  std::iota(p.schedule.rx_mode.begin(), p.schedule.rx_mode.end(), 1);
  return p;
}

NoCsitTxSignals encode_no_csit(const NoCsitPrecoders& p, const CVec& dl_symbols,
                               const std::vector<Cplx>& ul_symbols) {
  if (dl_symbols.size() != p.dl_basis.cols()) {
    throw InvalidDimensionError("encode_no_csit: DL symbol count mismatch");
  }
  NoCsitTxSignals tx;
  tx.bs = p.dl_basis * dl_symbols;
  tx.ul_users.reserve(ul_symbols.size());
  for (const Cplx& s : ul_symbols) {
    tx.ul_users.push_back(p.ul_vector * s);
  }
  return tx;
}

CVec decode_dl_no_csit(const NoCsitPrecoders& p, const DlUserCsi& csi,
                       const CVec& received) {
  if (received.size() != p.block_length) {
    throw InvalidDimensionError("decode_dl_no_csit: received length mismatch");
  }
  const Cplx gain = csi.dl_gains(0);  // transmit mode is fixed to 1
  if (std::abs(gain) < 1e-12) {
    throw DegenerateChannelError("decode_dl_no_csit: vanishing DL gain");
  }
  return (p.dl_basis.adjoint() * received) / gain;
}

CMat ul_effective_matrix(const NoCsitPrecoders& p, const BsReceiveCsi& csi) {
  const Index ul_users = csi.ul_gain.rows();
  CMat r(p.block_length, ul_users);
  for (Index j = 0; j < ul_users; ++j) {
    for (int t = 0; t < p.block_length; ++t) {
      r(t, j) = csi.ul_gain(j, p.schedule.rx_mode[t] - 1) * p.ul_vector(t);
    }
  }
  return r;
}

UlDecodeResult decode_ul_no_csit(const NoCsitPrecoders& p, const BsReceiveCsi& csi,
                                 const CVec& received) {
  if (received.size() != p.block_length) {
    throw InvalidDimensionError("decode_ul_no_csit: received length mismatch");
  }
  const CMat r = ul_effective_matrix(p, csi);
  const Index rank = numerical_rank(r);
  if (rank < std::min<Index>(r.cols(), p.block_length)) {
    throw DegenerateChannelError("decode_ul_no_csit: rank-deficient UL matrix");
  }
  // Minimum-norm least squares; exact in the noiseless determined case.
  const CVec solution = r.completeOrthogonalDecomposition().solve(received);
  UlDecodeResult out;
  out.decodable_streams = static_cast<int>(rank);
  out.symbols.assign(solution.data(), solution.data() + solution.size());
  return out;
}

}  // namespace fdbia
