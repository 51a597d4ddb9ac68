// SPDX-License-Identifier: Apache-2.0
//
// Blind interference-alignment scheme for the partial-CSIT model (CSI at the
// BS only).
//
// Over a block of N = Ld*Lu slots the BS cycles its transmit mode with period
// Ld and its receive mode with period Lu. Two orthogonal column blocks of the
// N-point IDFT matrix split the signal space: dl_basis (W3) carries DL data,
// ul_basis (W4) carries every UL user's data. DL precoders are the normalized
// right inverse of the stacked filtered DL response, so each DL user recovers
// its symbols by one matched filter; UL interference at DL users lives in
// col(ul_basis) and is annihilated exactly. The BS jointly decodes all UL
// users from the effective UL response. This delivers dl_symbols/Lu +
// ul_symbols/Ld sum DoF for every valid symbol allocation.

#ifndef FDBIA_SCHEME_PARTIAL_CSIT_HPP
#define FDBIA_SCHEME_PARTIAL_CSIT_HPP

#include <vector>

#include "fdbia/dof.hpp"
#include "fdbia/network.hpp"

namespace fdbia {

struct PartialCsitPrecoders {
  SymbolAllocation alloc;
  std::vector<CMat> dl_precoders;  // Ld matrices, each N x dl_symbols
  CMat ul_precoder;                // V = ul_basis / sqrt(ul_symbols), N x ul_symbols
  CMat dl_basis;                   // W3: N x dl_symbols (IDFT columns 1..nd)
  CMat ul_basis;                   // W4: N x ul_symbols (IDFT columns nd+1..nd+nu)
  CMat dl_response;                // P: stacked W3^H H_i, (Ld*nd) x N
  CMat ul_response;                // Q: [F_1 W4, ..., F_Ku W4], N x (Ku*nu)
  Index ul_response_rank = 0;      // numerical rank of Q, fixed at build time
  double dl_response_pinv_norm = 0.0;  // Frobenius norm of the right inverse of P
  ModeSchedule schedule;           // tx period Ld, rx period Lu
  int served_dl_users = 0;         // Ld
  int block_length = 0;            // N = Ld*Lu
};

struct PartialTxSignals {
  CVec bs;
  std::vector<CVec> ul_users;
};

struct UlBlockDecodeResult {
  std::vector<CVec> symbols;   // one length-nu vector per UL user
  int decodable_streams = 0;   // numerical rank of the UL response
};

/// Certificate that the scheme's two response matrices have the ranks the
/// construction relies on. The residuals come from re-assembling the (column
/// permuted) responses from per-mode IDFT blocks: with right inverses of those
/// blocks the permuted DL response collapses to (gain matrix) (x) I, and the
/// permuted-transposed UL response to (gain matrix) (x) I likewise. Both
/// residuals are ~1e-13 whenever the construction is healthy.
struct RankCertificate {
  Index dl_response_rank = 0;        // expected: Ld * dl_symbols
  Index ul_response_rank = 0;        // expected: >= Lu * ul_symbols
  double dl_identity_residual = 0.0;
  double ul_identity_residual = 0.0;
};

/// Builds the full precoder set from BS-side CSI. Throws
/// InvalidAllocationError for an allocation outside the constraint set and
/// DegenerateChannelError on (probability-zero) rank failures.
PartialCsitPrecoders build_partial_csit(const NetworkConfig& cfg, const BsFullCsi& csi,
                                        const SymbolAllocation& alloc);

/// bs = sum_i dl_precoders[i] * dl_symbols[i]; ul_users[j] = ul_precoder *
/// ul_symbols[j]. For per-slot power P scale symbols to per-entry variance
/// N*P (the precoder norms make the block powers come out to N*P).
PartialTxSignals encode_partial_csit(const PartialCsitPrecoders& p,
                                     const std::vector<CVec>& dl_symbols,
                                     const std::vector<CVec>& ul_symbols);

/// dl_response_pinv_norm * dl_basis^H * received: exact symbol recovery in
/// the noiseless case, independent of every UL symbol and cross gain.
CVec decode_dl_partial_csit(const PartialCsitPrecoders& p, int dl_user,
                            const CVec& received);

/// Joint least-squares against the UL response. Exact recovery when the
/// response has full column rank; otherwise minimum-norm with the decodable
/// stream count reported.
UlBlockDecodeResult decode_ul_partial_csit(const PartialCsitPrecoders& p,
                                           const CVec& received);

/// Builds the responses for (cfg, cr, alloc) and evaluates the certificate.
RankCertificate rank_certificate(const NetworkConfig& cfg, const ChannelRealization& cr,
                                 const SymbolAllocation& alloc);

}  // namespace fdbia

#endif  // FDBIA_SCHEME_PARTIAL_CSIT_HPP
