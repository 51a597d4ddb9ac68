// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "fdbia/dof.hpp"
#include "fdbia/errors.hpp"

using namespace fdbia;

TEST_CASE("no-CSIT sum DoF on pinned configurations") {
  CHECK(sum_dof_no_csit({2, 2, 2, 2}) == Rational(3, 2));
  CHECK(sum_dof_no_csit({3, 0, 1, 1}) == Rational(1));
  CHECK(sum_dof_no_csit({1, 5, 4, 3}) == Rational(5, 3));  // Lu = min(5,3) = 3
  CHECK(sum_dof_no_csit({0, 0, 1, 1}) == Rational(0));
  CHECK(sum_dof_no_csit({0, 4, 1, 2}) == Rational(1));
}

TEST_CASE("no-CSIT sum DoF ignores DL-side parameters") {
  for (int kd = 1; kd <= 5; ++kd) {
    for (int md = 1; md <= 5; ++md) {
      CHECK(sum_dof_no_csit({kd, 3, md, 2}) == sum_dof_no_csit({1, 3, 1, 2}));
    }
  }
}

TEST_CASE("symmetric sweep gives 2 - 1/K") {
  for (int k = 1; k <= 8; ++k) {
    CHECK(sum_dof_no_csit({k, k, k, k}) == Rational(2) - Rational(1, k));
  }
}

TEST_CASE("partial-CSIT closed-form regimes") {
  const DofBounds square = sum_dof_partial_csit({2, 2, 2, 2});
  REQUIRE(square.exact.has_value());
  CHECK(*square.exact == Rational(2));

  const DofBounds single_dl = sum_dof_partial_csit({1, 3, 1, 3});
  REQUIRE(single_dl.exact.has_value());
  CHECK(*single_dl.exact == Rational(1) + Rational(2, 3));

  const DofBounds tiny = sum_dof_partial_csit({1, 1, 1, 1});
  REQUIRE(tiny.exact.has_value());
  CHECK(*tiny.exact == Rational(1));

  // Regime sweeps at K, M <= 6.
  for (int kd = 2; kd <= 6; ++kd)
    for (int ku = 2; ku <= 6; ++ku)
      for (int md = 2; md <= 6; ++md)
        for (int mu = 2; mu <= 6; ++mu) {
          const DofBounds b = sum_dof_partial_csit({kd, ku, md, mu});
          REQUIRE(b.exact.has_value());
          CHECK(*b.exact == Rational(2));
        }
  for (int ku = 1; ku <= 6; ++ku)
    for (int mu = ku; mu <= 6; ++mu)
      for (int md = 1; md <= 6; ++md) {
        const DofBounds b = sum_dof_partial_csit({1, ku, md, mu});
        REQUIRE(b.exact.has_value());
        CHECK(*b.exact == Rational(1) + Rational(ku - 1, ku));
      }
  for (int kd = 1; kd <= 6; ++kd)
    for (int md = kd; md <= 6; ++md)
      for (int mu = 1; mu <= 6; ++mu) {
        const DofBounds b = sum_dof_partial_csit({kd, 1, md, mu});
        REQUIRE(b.exact.has_value());
        CHECK(*b.exact == Rational(1) + Rational(kd - 1, kd));
      }
}

TEST_CASE("bounds are ordered and dominate the no-CSIT value") {
  for (int kd = 0; kd <= 5; ++kd)
    for (int ku = 0; ku <= 5; ++ku)
      for (int md = 1; md <= 5; ++md)
        for (int mu = 1; mu <= 5; ++mu) {
          const NetworkConfig cfg{kd, ku, md, mu};
          const DofBounds b = sum_dof_partial_csit(cfg);
          CHECK(b.lower <= b.upper);
          CHECK(b.exact.has_value() == (b.lower == b.upper));
          CHECK(sum_dof_no_csit(cfg) <= b.upper);
        }
}

TEST_CASE("allocation enumeration on pinned cases") {
  const auto pairs = enumerate_allocations({2, 2, 2, 2});
  REQUIRE(pairs.size() == 4);
  std::set<std::pair<std::pair<int, int>, Rational>> got;
  for (const auto& [alloc, dof] : pairs) {
    got.insert({{alloc.dl_symbols, alloc.ul_symbols}, dof});
  }
  const std::set<std::pair<std::pair<int, int>, Rational>> expected{
      {{1, 1}, Rational(1)},
      {{1, 2}, Rational(3, 2)},
      {{2, 1}, Rational(3, 2)},
      {{2, 2}, Rational(2)}};
  CHECK(got == expected);

  CHECK(enumerate_allocations({1, 1, 1, 1}).empty());
  CHECK_THROWS_AS(enumerate_allocations({0, 2, 1, 1}), UnsupportedTopologyError);
}

TEST_CASE("distinguished allocation pairs appear whenever valid") {
  for (int ld = 1; ld <= 5; ++ld) {
    for (int lu = 1; lu <= 5; ++lu) {
      const NetworkConfig cfg{ld, lu, ld, lu};
      const auto pairs = enumerate_allocations(cfg);
      auto contains = [&](int nd, int nu) {
        return std::any_of(pairs.begin(), pairs.end(), [&](const auto& p) {
          return p.first.dl_symbols == nd && p.first.ul_symbols == nu;
        });
      };
      const SymbolAllocation first{lu, std::min(lu * (ld - 1), ld)};
      const SymbolAllocation second{std::min(ld * (lu - 1), lu), ld};
      if (allocation_valid(cfg, first)) {
        CHECK(contains(first.dl_symbols, first.ul_symbols));
      }
      if (allocation_valid(cfg, second)) {
        CHECK(contains(second.dl_symbols, second.ul_symbols));
      }
    }
  }
}

TEST_CASE("max achieved DoF matches the closed-form inner expression") {
  for (int ld = 1; ld <= 5; ++ld) {
    for (int lu = 1; lu <= 5; ++lu) {
      if (ld == 1 && lu == 1) continue;  // empty enumeration
      const NetworkConfig cfg{ld, lu, ld, lu};
      const auto pairs = enumerate_allocations(cfg);
      REQUIRE(!pairs.empty());
      Rational best(0);
      for (const auto& [alloc, dof] : pairs) best = std::max(best, dof);
      const Rational inner =
          std::max(Rational(1) + Rational(static_cast<long long>(ld) * (lu - 1), lu),
                   Rational(1) + Rational(static_cast<long long>(lu) * (ld - 1), ld));
      CHECK(best == std::min(Rational(2), inner));
    }
  }
}

TEST_CASE("default allocation maximizes DoF with ties to more DL symbols") {
  CHECK(default_allocation({2, 2, 2, 2}) == SymbolAllocation{2, 2});
  // Ld = 1, Lu = 3: candidates (1,1) -> 4/3 and (2,1) -> 5/3.
  CHECK(default_allocation({1, 3, 1, 3}) == SymbolAllocation{2, 1});
  CHECK_THROWS_AS(default_allocation({1, 1, 1, 1}), InvalidAllocationError);
}

TEST_CASE("feasibility region matches the converse half-spaces") {
  const NetworkConfig cfg{2, 2, 2, 2};  // Lu = 2
  CHECK(region_feasible(0.5, 1.0, cfg));
  CHECK(region_feasible(1.0, 0.0, cfg));
  CHECK_FALSE(region_feasible(1.0, 0.1, cfg));
  CHECK_FALSE(region_feasible(0.0, 1.01, cfg));
  CHECK_THROWS_AS(region_feasible(-0.1, 0.0, cfg), InvalidRangeError);
  CHECK_THROWS_AS(region_feasible(0.1, 0.0, NetworkConfig{2, 0, 2, 2}),
                  UnsupportedTopologyError);
}

TEST_CASE("the no-CSIT corner is feasible and meets the converse") {
  for (int kd = 1; kd <= 5; ++kd)
    for (int ku = 1; ku <= 5; ++ku)
      for (int md = 1; md <= 5; ++md)
        for (int mu = 1; mu <= 5; ++mu) {
          const NetworkConfig cfg{kd, ku, md, mu};
          const double lu = cfg.active_rx_modes();
          CHECK(region_feasible(1.0 - 1.0 / lu, 1.0, cfg));
          const Rational total = sum_dof_no_csit(cfg);
          CHECK(total == Rational(2) - Rational(1, cfg.active_rx_modes()));
        }
}

TEST_CASE("rational rendering") {
  CHECK(to_string(Rational(3, 2)) == "3/2");
  CHECK(to_string(Rational(2)) == "2");
  CHECK(to_string(Rational(5, 3)) == "5/3");
}
