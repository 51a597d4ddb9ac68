// SPDX-License-Identifier: Apache-2.0
//
// Monte Carlo and exhaustive verification suites shared by the CLI `verify`
// subcommand and the acceptance tests: precoder orthogonality sweeps,
// noiseless end-to-end recovery, alignment invariance, and rank-certificate
// statistics.

#ifndef FDBIA_VERIFICATION_HPP
#define FDBIA_VERIFICATION_HPP

#include <cstdint>

#include "fdbia/dof.hpp"
#include "fdbia/network.hpp"

namespace fdbia::verification {

struct OrthogonalityCheck {
  int combinations = 0;
  double max_residual = 0.0;
};

/// |dl_basis^H ul_vector| over all block lengths in [1:max_block].
OrthogonalityCheck no_csit_orthogonality(int max_block);

/// |dl_basis^H ul_basis| over every valid (Ld, Lu, allocation) combination
/// with Ld*Lu <= max_block.
OrthogonalityCheck partial_csit_orthogonality(int max_block);

struct RecoveryCheck {
  int draws = 0;
  double max_dl_error = 0.0;  // worst relative error across draws
  double max_ul_error = 0.0;
  int min_decodable_streams = 0;
};

/// Noiseless encode -> channel -> decode round trips on random channels and
/// symbols. UL exactness is checked whenever the UL response has full column
/// rank (always, for ul_users == active_rx_modes).
RecoveryCheck no_csit_recovery(const NetworkConfig& cfg, int draws, std::uint64_t seed);
RecoveryCheck partial_csit_recovery(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                    int draws, std::uint64_t seed);

struct AlignmentCheck {
  int draws = 0;
  double max_deviation = 0.0;  // DL estimate change under UL/cross perturbation
};

/// Re-decodes the same DL block after replacing all UL symbols and cross
/// gains; the deviation is the worst absolute change of the DL estimate.
AlignmentCheck no_csit_alignment(const NetworkConfig& cfg, int draws, std::uint64_t seed);
AlignmentCheck partial_csit_alignment(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                      int draws, std::uint64_t seed);

struct CertificateCheck {
  int draws = 0;
  bool ranks_ok = true;          // DL rank == Ld*nd and UL rank >= Lu*nu on every draw
  double max_dl_residual = 0.0;  // worst certificate identity residuals
  double max_ul_residual = 0.0;
};

/// Rank-certificate statistics over random channel draws.
CertificateCheck certificate_mc(const NetworkConfig& cfg, const SymbolAllocation& alloc,
                                int draws, std::uint64_t seed);

}  // namespace fdbia::verification

#endif  // FDBIA_VERIFICATION_HPP
