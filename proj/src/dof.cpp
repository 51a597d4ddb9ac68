// SPDX-License-Identifier: Apache-2.0

#include "fdbia/dof.hpp"

#include <algorithm>

#include "fdbia/errors.hpp"

namespace fdbia {

namespace {

Rational rmin(const Rational& a, const Rational& b) { return a < b ? a : b; }
Rational rmax(const Rational& a, const Rational& b) { return a > b ? a : b; }

/// min(max(dl_users, ul_users), 1): single-user transmission when one side
/// of the network is empty.
Rational degenerate_dof(const NetworkConfig& cfg) {
  return Rational(std::min(std::max(cfg.dl_users, cfg.ul_users), 1));
}

}  // namespace

bool allocation_valid(const NetworkConfig& cfg, const SymbolAllocation& alloc) {
  const int ld = cfg.active_tx_modes();
  const int lu = cfg.active_rx_modes();
  return alloc.dl_symbols >= 1 && alloc.dl_symbols <= lu &&  //
         alloc.ul_symbols >= 1 && alloc.ul_symbols <= ld &&  //
         alloc.dl_symbols + alloc.ul_symbols >= 2 &&
         alloc.dl_symbols + alloc.ul_symbols <= ld * lu;
}

Rational sum_dof_no_csit(const NetworkConfig& cfg) {
  cfg.validate();
  if (cfg.dl_users == 0 || cfg.ul_users == 0) return degenerate_dof(cfg);
  const long long lu = cfg.active_rx_modes();
  // min{ max(Kd, Ku), max(1 + (Lu-1)/Lu, 1) } = 2 - 1/Lu for Kd, Ku >= 1.
  const Rational inner = rmax(Rational(1) + Rational(lu - 1, lu), Rational(1));
  return rmin(Rational(std::max(cfg.dl_users, cfg.ul_users)), inner);
}

DofBounds sum_dof_partial_csit(const NetworkConfig& cfg) {
  cfg.validate();
  DofBounds out;
  if (cfg.dl_users == 0 || cfg.ul_users == 0) {
    out.lower = out.upper = degenerate_dof(cfg);
    out.exact = out.lower;
    return out;
  }
  const long long kd = cfg.dl_users;
  const long long ku = cfg.ul_users;
  const long long ld = cfg.active_tx_modes();
  const long long lu = cfg.active_rx_modes();
  const Rational user_cap(std::max(kd, ku));

  out.upper = rmin(Rational(2),
                   rmin(user_cap, rmax(Rational(1) + Rational(ku * (kd - 1), kd),
                                       Rational(1) + Rational(kd * (ku - 1), ku))));
  out.lower = rmin(Rational(2),
                   rmin(user_cap, rmax(Rational(1) + Rational(lu * (ld - 1), ld),
                                       Rational(1) + Rational(ld * (lu - 1), lu))));
  if (out.lower == out.upper) out.exact = out.lower;
  return out;
}

std::vector<std::pair<SymbolAllocation, Rational>> enumerate_allocations(
    const NetworkConfig& cfg) {
  cfg.validate();
  if (cfg.dl_users == 0 || cfg.ul_users == 0) {
    throw UnsupportedTopologyError(
        "enumerate_allocations: needs at least one DL and one UL user");
  }
  const long long ld = cfg.active_tx_modes();
  const long long lu = cfg.active_rx_modes();
  std::vector<std::pair<SymbolAllocation, Rational>> out;
  for (int nd = 1; nd <= lu; ++nd) {
    for (int nu = 1; nu <= ld; ++nu) {
      const SymbolAllocation alloc{nd, nu};
      if (!allocation_valid(cfg, alloc)) continue;
      out.emplace_back(alloc, Rational(nd, lu) + Rational(nu, ld));
    }
  }
  return out;
}

SymbolAllocation default_allocation(const NetworkConfig& cfg) {
  auto all = enumerate_allocations(cfg);
  if (all.empty()) {
    throw InvalidAllocationError("default_allocation: no valid allocation exists");
  }
  auto best = all.front();
  for (const auto& cand : all) {
    if (cand.second > best.second ||
        (cand.second == best.second &&
         cand.first.dl_symbols > best.first.dl_symbols)) {
      best = cand;
    }
  }
  return best.first;
}

bool region_feasible(double dl_sum_dof, double ul_sum_dof, const NetworkConfig& cfg) {
  cfg.validate();
  if (cfg.ul_users < 1) {
    throw UnsupportedTopologyError("region_feasible: needs at least one UL user");
  }
  if (dl_sum_dof < 0.0 || ul_sum_dof < 0.0) {
    throw InvalidRangeError("region_feasible: DoF values must be nonnegative");
  }
  constexpr double kSlack = 1e-12;
  const double lu = cfg.active_rx_modes();
  return dl_sum_dof + ul_sum_dof / lu <= 1.0 + kSlack && ul_sum_dof <= 1.0 + kSlack;
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace fdbia
