// SPDX-License-Identifier: Apache-2.0
//
// Blind interference-alignment scheme for the no-CSIT model.
//
// Over a block of Lu = active_rx_modes slots the BS keeps transmit mode 1 and
// cycles its receive mode 1..Lu. The DL precoder is the first Lu-1 columns of
// the Lu-point IDFT matrix and every UL user precodes its single symbol with
// the last column. UL interference therefore lands in the one-dimensional
// subspace orthogonal to the DL precoder, and the DL receive filter removes
// it exactly without any transmit-side channel knowledge. This serves Lu-1 DL
// symbols (to user 1) plus Lu UL streams per Lu slots: sum DoF 2 - 1/Lu.

#ifndef FDBIA_SCHEME_NO_CSIT_HPP
#define FDBIA_SCHEME_NO_CSIT_HPP

#include <vector>

#include "fdbia/network.hpp"

namespace fdbia {

struct NoCsitPrecoders {
  CMat dl_basis;           // Lu x (Lu-1), orthonormal columns
  CVec ul_vector;          // Lu, common to all UL users
  ModeSchedule schedule;   // tx_mode constant 1, rx_mode = 1..Lu
  int block_length = 0;    // Lu
};

struct NoCsitTxSignals {
  CVec bs;                    // length Lu
  std::vector<CVec> ul_users; // one length-Lu vector per UL user
};

struct UlDecodeResult {
  std::vector<Cplx> symbols;   // least-squares estimates, one per UL user
  int decodable_streams = 0;   // numerical rank of the effective UL matrix
};

/// Builds precoders and schedule. Channel-independent by design.
/// Throws UnsupportedTopologyError when either user population is empty.
NoCsitPrecoders build_no_csit(const NetworkConfig& cfg);

/// bs = dl_basis * dl_symbols (dl_symbols has Lu-1 entries, for DL user 1);
/// ul_users[j] = ul_vector * ul_symbols[j]. Callers scale symbol powers; unit
/// per-slot power P needs E|dl symbol|^2 = Lu*P/(Lu-1), E|ul symbol|^2 = Lu*P.
NoCsitTxSignals encode_no_csit(const NoCsitPrecoders& p, const CVec& dl_symbols,
                               const std::vector<Cplx>& ul_symbols);

/// Matched filter dl_basis^H then division by the user's slot-1 gain. UL
/// interference is annihilated exactly. Throws DegenerateChannelError when
/// |gain| < 1e-12.
CVec decode_dl_no_csit(const NoCsitPrecoders& p, const DlUserCsi& csi,
                       const CVec& received);

/// Effective UL matrix [F_1(beta) ul_vector, ..., F_Ku(beta) ul_vector].
CMat ul_effective_matrix(const NoCsitPrecoders& p, const BsReceiveCsi& csi);

/// Least-squares solve against the effective UL matrix: exact recovery of all
/// UL symbols in the noiseless case when ul_users <= Lu; minimum-norm solution
/// with decodable_streams = rank otherwise. Throws DegenerateChannelError when
/// rank falls below min(ul_users, Lu).
UlDecodeResult decode_ul_no_csit(const NoCsitPrecoders& p, const BsReceiveCsi& csi,
                                 const CVec& received);

}  // namespace fdbia

#endif  // FDBIA_SCHEME_NO_CSIT_HPP
