// SPDX-License-Identifier: Apache-2.0
//
// Closed-form sum degrees-of-freedom values, achievable symbol-allocation
// enumeration, and the converse feasibility region. All arithmetic here is
// exact rational; floating point never enters a DoF value.

#ifndef FDBIA_DOF_HPP
#define FDBIA_DOF_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "fdbia/network.hpp"

namespace fdbia {

using Rational = boost::rational<long long>;

/// Lower/upper sum-DoF bounds; exact is set exactly when they coincide.
struct DofBounds {
  Rational lower;
  Rational upper;
  std::optional<Rational> exact;
};

/// Symbols per served user per block for the partial-CSIT scheme:
/// dl_symbols per DL user and ul_symbols per UL user.
struct SymbolAllocation {
  int dl_symbols = 1;  // in [1 : active_rx_modes]
  int ul_symbols = 1;  // in [1 : active_tx_modes]

  bool operator==(const SymbolAllocation&) const = default;
};

/// True when alloc satisfies the scheme's constraint set for cfg:
/// dl_symbols in [1:Lu], ul_symbols in [1:Ld], sum in [2 : Ld*Lu]
/// with Ld = active_tx_modes, Lu = active_rx_modes.
bool allocation_valid(const NetworkConfig& cfg, const SymbolAllocation& alloc);

/// Sum DoF without transmit-side CSI. Equals 2 - 1/Lu when both user
/// populations are nonempty, and min(max(dl_users, ul_users), 1) otherwise.
Rational sum_dof_no_csit(const NetworkConfig& cfg);

/// Sum-DoF bounds with CSI at the BS only. The upper bound imports a known
/// converse; the lower bound is the achievable value. exact is populated
/// whenever the two meet (in particular in the three closed-form regimes:
/// all counts >= 2; single DL user with rx_modes >= ul_users; single UL user
/// with tx_modes >= dl_users).
DofBounds sum_dof_partial_csit(const NetworkConfig& cfg);

/// Every valid allocation paired with its achieved sum DoF
/// dl_symbols/Lu + ul_symbols/Ld. Throws UnsupportedTopologyError when either
/// user population is empty. The list may be empty (Ld = Lu = 1).
std::vector<std::pair<SymbolAllocation, Rational>> enumerate_allocations(
    const NetworkConfig& cfg);

/// The valid allocation with maximal achieved DoF, ties broken toward larger
/// dl_symbols. Throws InvalidAllocationError when no allocation exists.
SymbolAllocation default_allocation(const NetworkConfig& cfg);

/// Converse region for the no-CSIT model: a (DL-sum, UL-sum) DoF pair is
/// feasible iff  dl_sum + ul_sum/Lu <= 1  and  ul_sum <= 1. A 1e-12 slack
/// absorbs floating-point representation of rational corners.
bool region_feasible(double dl_sum_dof, double ul_sum_dof, const NetworkConfig& cfg);

/// "3/2"-style rendering.
std::string to_string(const Rational& r);

}  // namespace fdbia

#endif  // FDBIA_DOF_HPP
