// SPDX-License-Identifier: Apache-2.0
//
// Finite-SNR Monte Carlo sum-rate evaluation: the proposed full-duplex
// schemes against a half-duplex TDD baseline, single-cell SNR sweeps, and a
// 7-cell wrap-around multicell experiment with user scheduling.
//
// Rates are Gaussian-input mutual informations with interference treated as
// Gaussian noise: rate = (1/N) * [log2 det(C + S) - log2 det(C)] per block of
// N slots, with S the signal covariance and C the noise-plus-interference
// covariance at the receiver output. Residual self-interference enters only
// the BS receiver, as extra white noise of fixed power relative to unit
// thermal noise.

#ifndef FDBIA_RATE_ENGINE_HPP
#define FDBIA_RATE_ENGINE_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fdbia/network.hpp"
#include "fdbia/rng.hpp"

namespace fdbia {

enum class CsitModel { kNoCsit, kPartialCsit };
enum class Duplex { kFullDuplex, kHalfDuplex };
enum class Scheduler { kRoundRobin, kMaxSnr };

struct SystemId {
  Duplex duplex = Duplex::kFullDuplex;
  CsitModel model = CsitModel::kPartialCsit;
  bool operator==(const SystemId&) const = default;
};

std::string to_string(const SystemId& system);   // e.g. "fd-partial-csit"
std::string to_string(Scheduler scheduler);      // "round-robin" / "max-snr"

/// The four duplex/model combinations in canonical order.
std::array<SystemId, 4> all_systems();

struct SingleCellScenario {
  NetworkConfig cfg;
  CsitModel model = CsitModel::kPartialCsit;
  Duplex duplex = Duplex::kFullDuplex;
  double snr_db = 20.0;             // transmit power P over unit noise, in dB
  double residual_si_power = 1.0;   // linear, relative to unit noise
  int trials = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Whether DL-receiver covariances keep the (numerically zero) terms from
/// signals that alignment confines to the UL basis. kDropAligned exists so
/// tests can assert those terms change nothing.
enum class DlInterferenceAccounting { kFull, kDropAligned };

struct RateReport {
  std::vector<double> dl_rates;  // bits/slot per DL user
  std::vector<double> ul_rates;  // bits/slot per UL user
  double sum_rate = 0.0;
  SystemId system;
  double snr_db = 0.0;
  int trials = 1;
};

/// Rates of the proposed full-duplex scheme on one realization. block_index
/// rotates the successive-decoding order used for the per-user UL split (the
/// sum is order-invariant).
RateReport fd_rate_single_trial(const SingleCellScenario& scenario,
                                const ChannelRealization& cr,
                                std::uint64_t block_index = 0,
                                DlInterferenceAccounting accounting =
                                    DlInterferenceAccounting::kFull);

/// Rates of the TDD baseline: half the block serves one DL user (best user
/// and transmit mode under partial CSIT, a uniformly random pick otherwise),
/// half the block is an uplink MAC at the best receive mode. rng feeds only
/// the random pick.
RateReport hd_rate_single_trial(const SingleCellScenario& scenario,
                                const ChannelRealization& cr, CounterRng& rng);

struct SweepRow {
  double snr_db = 0.0;
  SystemId system;
  double mean_sum_rate = 0.0;
  double std_err = 0.0;
  int trials = 0;
};

/// Monte Carlo means over seeded trials, one row per (snr, system). All
/// systems see the same channel realizations; realizations are reused across
/// SNR points (the fading law does not depend on P).
std::vector<SweepRow> single_cell_sweep(const SingleCellScenario& base,
                                        std::span<const double> snr_grid_db,
                                        std::span<const SystemId> systems);

// ---------------------------------------------------------------------------
// Multicell: 7 wrap-around hexagonal cells, circumradius 1, path loss d^-alpha
// around reference SNR pref_db at unit distance.

struct MulticellScenario {
  NetworkConfig cfg;                      // per-cell served counts and modes
  CsitModel model = CsitModel::kPartialCsit;
  double pref_db = 10.0;                  // received SNR at distance 1
  double path_loss_exponent = 3.0;        // alpha
  double residual_si_power = 1.0;
  int users_per_cell = 2;                 // J DL and J UL candidates per cell
  Scheduler scheduler = Scheduler::kRoundRobin;
  int trials = 1000;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Center-cell sum rates of one uniform user drop, for the full-duplex scheme
/// and the TDD baseline under the scenario's CSIT model. Both systems share
/// the drop's positions and fading.
struct MulticellDropRates {
  double fd_sum_rate = 0.0;
  double hd_sum_rate = 0.0;
};

MulticellDropRates multicell_single_drop(const MulticellScenario& scenario,
                                         int users_per_cell, Scheduler scheduler,
                                         std::uint64_t drop_index,
                                         DlInterferenceAccounting accounting =
                                             DlInterferenceAccounting::kFull);

struct MulticellRow {
  int users_per_cell = 0;
  Scheduler scheduler = Scheduler::kRoundRobin;
  SystemId system;
  double mean_sum_rate = 0.0;
  double std_err = 0.0;
  double mean_gap = 0.0;      // mean of per-drop (fd - hd), paired
  double gap_std_err = 0.0;
  int trials = 0;
};

/// One row per (J, scheduler, duplex); the fd and hd rows of a pair carry the
/// same paired-gap statistics.
std::vector<MulticellRow> multicell_sweep(const MulticellScenario& base,
                                          std::span<const int> j_grid,
                                          std::span<const Scheduler> schedulers);

namespace hexgrid {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Flat-top hexagon centered at the origin with circumradius 1.
bool inside_hexagon(const Point& p);

/// Uniform sample by rejection from the bounding box.
Point sample_in_hexagon(CounterRng& rng);

/// Center cell first, then the six neighbors at distance sqrt(3).
std::array<Point, 7> cell_centers();

/// The six cluster translations (length sqrt(21)) that tile the plane with
/// 7-cell clusters.
std::array<Point, 6> wrap_translations();

/// Minimum distance over the identity image and the six wrapped images.
double wrap_distance(const Point& a, const Point& b);

}  // namespace hexgrid

}  // namespace fdbia

#endif  // FDBIA_RATE_ENGINE_HPP
