// SPDX-License-Identifier: Apache-2.0

#include "fdbia/rate_engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fdbia/dof.hpp"
#include "fdbia/errors.hpp"
#include "fdbia/scheme_no_csit.hpp"
#include "fdbia/scheme_partial_csit.hpp"

namespace fdbia {

namespace {

constexpr std::uint64_t kChannelStream = 0x101;
constexpr std::uint64_t kHdPickStream = 0x202;
constexpr std::uint64_t kMulticellStream = 0x303;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

std::uint64_t trial_channel_seed(std::uint64_t seed, std::uint64_t trial) {
  return CounterRng(seed).substream(kChannelStream).substream(trial).next_u64();
}

double log2det_hpd(const CMat& m) {
  Eigen::LLT<CMat> llt(m);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("log2det: matrix is not positive definite");
  }
  double acc = 0.0;
  const auto diag = llt.matrixLLT().diagonal();
  for (Index i = 0; i < diag.size(); ++i) acc += std::log2(diag(i).real());
  return 2.0 * acc;
}

/// (1/slots) * [log2 det(noise + signal) - log2 det(noise)].
double rate_increment(const CMat& noise_cov, const CMat& signal_cov, int slots) {
  return (log2det_hpd(noise_cov + signal_cov) - log2det_hpd(noise_cov)) /
         static_cast<double>(slots);
}

/// Per-user rates of a Gaussian MAC y = response * s + n, cov(n) = noise_cov,
/// per-symbol power sym_power, via successive decoding. rotate shifts the
/// decode order; the sum is order-invariant.
std::vector<double> sic_split(const CMat& noise_cov, const CMat& response,
                              int cols_per_user, double sym_power, int slots,
                              std::uint64_t rotate) {
  const int users = static_cast<int>(response.cols()) / cols_per_user;
  std::vector<int> order(users);
  for (int m = 0; m < users; ++m) {
    order[m] = static_cast<int>((m + rotate) % static_cast<std::uint64_t>(users));
  }
  std::vector<double> rates(users, 0.0);
  CMat tail = noise_cov;
  double tail_logdet = log2det_hpd(tail);
  // Walk the decode order backwards: the last-decoded user sees only noise.
  for (int m = users - 1; m >= 0; --m) {
    const int j = order[m];
    const CMat block = response.middleCols(j * cols_per_user, cols_per_user);
    tail += sym_power * block * block.adjoint();
    const double with_user = log2det_hpd(tail);
    rates[j] = (with_user - tail_logdet) / static_cast<double>(slots);
    tail_logdet = with_user;
  }
  return rates;
}

double checked_sum(const std::vector<double>& dl, const std::vector<double>& ul) {
  return std::accumulate(dl.begin(), dl.end(), 0.0) +
         std::accumulate(ul.begin(), ul.end(), 0.0);
}

/// Full-time single-link service for topologies with one side empty.
RateReport degenerate_fd_report(const SingleCellScenario& s, const ChannelRealization& cr) {
  const double power = db_to_linear(s.snr_db);
  RateReport report;
  report.system = {Duplex::kFullDuplex, s.model};
  report.snr_db = s.snr_db;
  report.dl_rates.assign(s.cfg.dl_users, 0.0);
  report.ul_rates.assign(s.cfg.ul_users, 0.0);
  if (s.cfg.dl_users >= 1) {
    int user = 0, mode = 0;
    if (s.model == CsitModel::kPartialCsit) {
      cr.dl_gain.cwiseAbs().maxCoeff(&user, &mode);
    }
    report.dl_rates[user] =
        std::log2(1.0 + power * std::norm(cr.dl_gain(user, mode)));
  } else if (s.cfg.ul_users >= 1) {
    Index best_mode = 0;
    cr.ul_gain.colwise().squaredNorm().maxCoeff(&best_mode);
    // No DL transmission, hence no self-interference at the BS.
    const CMat response = cr.ul_gain.col(best_mode).transpose();  // 1 x Ku
    report.ul_rates = sic_split(CMat::Identity(1, 1), response, 1, power, 1, 0);
  }
  report.sum_rate = checked_sum(report.dl_rates, report.ul_rates);
  return report;
}

}  // namespace

std::string to_string(const SystemId& system) {
  std::string s = system.duplex == Duplex::kFullDuplex ? "fd-" : "hd-";
  s += system.model == CsitModel::kNoCsit ? "no-csit" : "partial-csit";
  return s;
}

std::string to_string(Scheduler scheduler) {
  return scheduler == Scheduler::kRoundRobin ? "round-robin" : "max-snr";
}

std::array<SystemId, 4> all_systems() {
  return {SystemId{Duplex::kFullDuplex, CsitModel::kPartialCsit},
          SystemId{Duplex::kFullDuplex, CsitModel::kNoCsit},
          SystemId{Duplex::kHalfDuplex, CsitModel::kPartialCsit},
          SystemId{Duplex::kHalfDuplex, CsitModel::kNoCsit}};
}

void SingleCellScenario::validate() const {
  cfg.validate();
  if (trials < 1) throw InvalidScenarioError("scenario: trials must be >= 1");
  if (residual_si_power < 0.0) {
    throw InvalidScenarioError("scenario: residual SI power must be >= 0");
  }
}

RateReport fd_rate_single_trial(const SingleCellScenario& scenario,
                                const ChannelRealization& cr,
                                std::uint64_t block_index,
                                DlInterferenceAccounting accounting) {
  scenario.validate();
  const NetworkConfig& cfg = scenario.cfg;
  if (cfg.dl_users == 0 || cfg.ul_users == 0) {
    return degenerate_fd_report(scenario, cr);
  }
  const double power = db_to_linear(scenario.snr_db);
  const double si = scenario.residual_si_power;

  RateReport report;
  report.system = {Duplex::kFullDuplex, scenario.model};
  report.snr_db = scenario.snr_db;
  report.dl_rates.assign(cfg.dl_users, 0.0);
  report.ul_rates.assign(cfg.ul_users, 0.0);

  if (scenario.model == CsitModel::kNoCsit) {
    const NoCsitPrecoders p = build_no_csit(cfg);
    const int lu = p.block_length;
    const double ul_sym_power = lu * power;
    if (lu >= 2) {
      const double dl_sym_power = lu * power / (lu - 1);
      const CMat signal = dl_sym_power * std::norm(cr.dl_gain(0, 0)) *
                          CMat::Identity(lu - 1, lu - 1);
      CMat noise = CMat::Identity(lu - 1, lu - 1);
      if (accounting == DlInterferenceAccounting::kFull) {
        // Residual of the aligned UL interference after the DL filter;
        // numerically zero because the filter is orthogonal to ul_vector.
        const CVec leak = p.dl_basis.adjoint() * p.ul_vector;
        noise += ul_sym_power * cr.cross_gain.row(0).squaredNorm() *
                 (leak * leak.adjoint());
      }
      report.dl_rates[0] = rate_increment(noise, signal, lu);
    }
    const CMat response = ul_effective_matrix(p, cr.bs_receive_csi());
    const CMat ul_noise = (1.0 + si) * CMat::Identity(lu, lu);
    report.ul_rates = sic_split(ul_noise, response, 1, ul_sym_power, lu, block_index);
  } else {
    const auto allocations = enumerate_allocations(cfg);
    if (allocations.empty()) {
      // Degenerate single-mode case: serve whichever single link is better.
      const SingleCellScenario dl_only{cfg, scenario.model, scenario.duplex,
                                       scenario.snr_db, scenario.residual_si_power,
                                       scenario.trials, scenario.seed};
      NetworkConfig ul_cfg = cfg;
      ul_cfg.dl_users = 0;
      SingleCellScenario ul_only = dl_only;
      ul_only.cfg = ul_cfg;
      NetworkConfig dl_cfg = cfg;
      dl_cfg.ul_users = 0;
      SingleCellScenario dl_degen = dl_only;
      dl_degen.cfg = dl_cfg;
      ChannelRealization dl_cr{cr.dl_gain, CMat(0, cfg.rx_modes), CMat(cfg.dl_users, 0)};
      ChannelRealization ul_cr{CMat(0, cfg.tx_modes), cr.ul_gain, CMat(0, cfg.ul_users)};
      const RateReport dl_report = degenerate_fd_report(dl_degen, dl_cr);
      const RateReport ul_report = degenerate_fd_report(ul_only, ul_cr);
      const bool dl_wins = dl_report.sum_rate >= ul_report.sum_rate;
      report.dl_rates.assign(cfg.dl_users, 0.0);
      report.ul_rates.assign(cfg.ul_users, 0.0);
      if (dl_wins) {
        report.dl_rates = dl_report.dl_rates;
      } else {
        report.ul_rates = ul_report.ul_rates;
      }
      report.sum_rate = checked_sum(report.dl_rates, report.ul_rates);
      return report;
    }
    const SymbolAllocation alloc = default_allocation(cfg);
    const PartialCsitPrecoders p = build_partial_csit(cfg, cr.bs_full_csi(), alloc);
    const int n = p.block_length;
    const int nd = alloc.dl_symbols;
    const double sym_power = n * power;

    const CMat dl_signal = (sym_power / (p.dl_response_pinv_norm * p.dl_response_pinv_norm)) *
                           CMat::Identity(nd, nd);
    const CMat leak = p.dl_basis.adjoint() * p.ul_precoder;  // numerically zero
    for (int i = 0; i < p.served_dl_users; ++i) {
      CMat noise = CMat::Identity(nd, nd);
      if (accounting == DlInterferenceAccounting::kFull) {
        noise += sym_power * cr.cross_gain.row(i).squaredNorm() * (leak * leak.adjoint());
      }
      report.dl_rates[i] = rate_increment(noise, dl_signal, n);
    }
    const CMat ul_noise = (1.0 + si) * CMat::Identity(n, n);
    const CMat ul_effective =
        p.ul_response / std::sqrt(static_cast<double>(alloc.ul_symbols));
    report.ul_rates = sic_split(ul_noise, ul_effective, alloc.ul_symbols,
                                sym_power, n, block_index);
  }
  report.sum_rate = checked_sum(report.dl_rates, report.ul_rates);
  return report;
}

RateReport hd_rate_single_trial(const SingleCellScenario& scenario,
                                const ChannelRealization& cr, CounterRng& rng) {
  scenario.validate();
  const NetworkConfig& cfg = scenario.cfg;
  const double power = db_to_linear(scenario.snr_db);

  RateReport report;
  report.system = {Duplex::kHalfDuplex, scenario.model};
  report.snr_db = scenario.snr_db;
  report.dl_rates.assign(cfg.dl_users, 0.0);
  report.ul_rates.assign(cfg.ul_users, 0.0);

  if (cfg.dl_users >= 1) {
    int user = 0, mode = 0;
    if (scenario.model == CsitModel::kPartialCsit) {
      cr.dl_gain.cwiseAbs().maxCoeff(&user, &mode);
    } else {
      user = static_cast<int>(rng.next_u64() % cfg.dl_users);
      mode = static_cast<int>(rng.next_u64() % cfg.tx_modes);
    }
    report.dl_rates[user] =
        0.5 * std::log2(1.0 + power * std::norm(cr.dl_gain(user, mode)));
  }
  if (cfg.ul_users >= 1) {
    Index best_mode = 0;
    cr.ul_gain.colwise().squaredNorm().maxCoeff(&best_mode);
    // Single-antenna MAC sum capacity with a successive-decoding split; no
    // self-interference because the BS is not transmitting while receiving.
    double cum = 0.0;
    double prev = 0.0;
    for (int j = 0; j < cfg.ul_users; ++j) {
      cum += std::norm(cr.ul_gain(j, best_mode));
      const double now = 0.5 * std::log2(1.0 + power * cum);
      report.ul_rates[j] = now - prev;
      prev = now;
    }
  }
  report.sum_rate = checked_sum(report.dl_rates, report.ul_rates);
  return report;
}

std::vector<SweepRow> single_cell_sweep(const SingleCellScenario& base,
                                        std::span<const double> snr_grid_db,
                                        std::span<const SystemId> systems) {
  base.validate();
  const size_t cells = snr_grid_db.size() * systems.size();
  std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);

  for (int trial = 0; trial < base.trials; ++trial) {
    const ChannelRealization cr =
        sample_channels(base.cfg, trial_channel_seed(base.seed, trial));
    for (size_t si = 0; si < snr_grid_db.size(); ++si) {
      for (size_t sy = 0; sy < systems.size(); ++sy) {
        SingleCellScenario scenario = base;
        scenario.snr_db = snr_grid_db[si];
        scenario.model = systems[sy].model;
        scenario.duplex = systems[sy].duplex;
        double rate = 0.0;
        if (systems[sy].duplex == Duplex::kFullDuplex) {
          rate = fd_rate_single_trial(scenario, cr, trial).sum_rate;
        } else {
          CounterRng rng = CounterRng(base.seed)
                               .substream(kHdPickStream)
                               .substream(trial)
                               .substream(sy);
          rate = hd_rate_single_trial(scenario, cr, rng).sum_rate;
        }
        sum[si * systems.size() + sy] += rate;
        sumsq[si * systems.size() + sy] += rate * rate;
      }
    }
  }

  std::vector<SweepRow> rows;
  rows.reserve(cells);
  const double n = base.trials;
  for (size_t si = 0; si < snr_grid_db.size(); ++si) {
    for (size_t sy = 0; sy < systems.size(); ++sy) {
      const size_t idx = si * systems.size() + sy;
      const double mean = sum[idx] / n;
      double std_err = 0.0;
      if (base.trials > 1) {
        const double var = std::max(0.0, (sumsq[idx] - n * mean * mean) / (n - 1.0));
        std_err = std::sqrt(var / n);
      }
      rows.push_back({snr_grid_db[si], systems[sy], mean, std_err, base.trials});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Hexagonal geometry.

namespace hexgrid {

bool inside_hexagon(const Point& p) {
  const double ax = std::abs(p.x);
  const double ay = std::abs(p.y);
  const double root3 = std::sqrt(3.0);
  return ax <= 1.0 && ay <= root3 / 2.0 && root3 * ax + ay <= root3;
}

Point sample_in_hexagon(CounterRng& rng) {
  const double half_height = std::sqrt(3.0) / 2.0;
  for (;;) {
    Point p{2.0 * rng.next_unit() - 1.0, half_height * (2.0 * rng.next_unit() - 1.0)};
    if (inside_hexagon(p)) return p;
  }
}

std::array<Point, 7> cell_centers() {
  std::array<Point, 7> centers{};
  centers[0] = {0.0, 0.0};
  const double d = std::sqrt(3.0);
  for (int k = 0; k < 6; ++k) {
    const double angle = M_PI / 6.0 + k * M_PI / 3.0;
    centers[k + 1] = {d * std::cos(angle), d * std::sin(angle)};
  }
  return centers;
}

std::array<Point, 6> wrap_translations() {
  // Base translation 2u + v with u, v the lattice vectors between adjacent
  // cell centers; its rotations by 60 degrees complete the set.
  std::array<Point, 6> t{};
  const double bx = 3.0;
  const double by = 2.0 * std::sqrt(3.0);
  for (int k = 0; k < 6; ++k) {
    const double angle = k * M_PI / 3.0;
    t[k] = {bx * std::cos(angle) - by * std::sin(angle),
            bx * std::sin(angle) + by * std::cos(angle)};
  }
  return t;
}

double wrap_distance(const Point& a, const Point& b) {
  static const std::array<Point, 6> shifts = wrap_translations();
  double best = std::hypot(a.x - b.x, a.y - b.y);
  for (const Point& t : shifts) {
    best = std::min(best, std::hypot(a.x - b.x - t.x, a.y - b.y - t.y));
  }
  return best;
}

}  // namespace hexgrid

// ---------------------------------------------------------------------------
// Multicell engine.

namespace {

using hexgrid::Point;

constexpr int kCells = 7;
// Path-loss singularity guard: distances are floored at this value.
constexpr double kMinDistance = 0.05;

struct Drop {
  std::array<std::vector<Point>, kCells> dl_pos, ul_pos;
  // Own-cell gain tables, path loss included.
  std::array<CMat, kCells> dl_gain;  // J x tx_modes
  std::array<CMat, kCells> ul_gain;  // J x rx_modes
  // Links into the center cell from interfering cells (index 1..6).
  std::array<CMat, kCells> bs_to_center_dl;   // J x tx_modes (row: center DL user)
  std::array<CMat, kCells> ul_to_center_bs;   // J x rx_modes (row: cell-c UL user)
  std::array<CMat, kCells> bs_to_center_bs;   // tx_modes x rx_modes
  std::array<CMat, kCells> ul_to_center_dl;   // J x J: (center DL user, cell-c UL user)
};

double pathloss_amplitude(const Point& a, const Point& b, double alpha) {
  const double d = std::max(hexgrid::wrap_distance(a, b), kMinDistance);
  return std::pow(d, -alpha / 2.0);
}

CMat faded_table(CounterRng& rng, Index rows, Index cols, double amplitude_scale) {
  CMat m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) m(r, c) = amplitude_scale * rng.next_cn();
  return m;
}

Drop sample_drop(const MulticellScenario& s, int users_per_cell, std::uint64_t drop_index) {
  const auto centers = hexgrid::cell_centers();
  const double alpha = s.path_loss_exponent;
  const int j = users_per_cell;
  CounterRng root =
      CounterRng(s.seed).substream(kMulticellStream).substream(drop_index);
  CounterRng rng_pos = root.substream(0);
  CounterRng rng_fad = root.substream(1);

  Drop drop;
  for (int c = 0; c < kCells; ++c) {
    drop.dl_pos[c].reserve(j);
    drop.ul_pos[c].reserve(j);
    for (int u = 0; u < j; ++u) {
      const Point p = hexgrid::sample_in_hexagon(rng_pos);
      drop.dl_pos[c].push_back({centers[c].x + p.x, centers[c].y + p.y});
    }
    for (int u = 0; u < j; ++u) {
      const Point p = hexgrid::sample_in_hexagon(rng_pos);
      drop.ul_pos[c].push_back({centers[c].x + p.x, centers[c].y + p.y});
    }
  }
  for (int c = 0; c < kCells; ++c) {
    drop.dl_gain[c].resize(j, s.cfg.tx_modes);
    for (int u = 0; u < j; ++u) {
      const double a = pathloss_amplitude(centers[c], drop.dl_pos[c][u], alpha);
      for (int k = 0; k < s.cfg.tx_modes; ++k) drop.dl_gain[c](u, k) = a * rng_fad.next_cn();
    }
    drop.ul_gain[c].resize(j, s.cfg.rx_modes);
    for (int u = 0; u < j; ++u) {
      const double a = pathloss_amplitude(drop.ul_pos[c][u], centers[c], alpha);
      for (int l = 0; l < s.cfg.rx_modes; ++l) drop.ul_gain[c](u, l) = a * rng_fad.next_cn();
    }
  }
  for (int c = 1; c < kCells; ++c) {
    drop.bs_to_center_dl[c].resize(j, s.cfg.tx_modes);
    for (int u = 0; u < j; ++u) {
      const double a = pathloss_amplitude(centers[c], drop.dl_pos[0][u], alpha);
      for (int k = 0; k < s.cfg.tx_modes; ++k)
        drop.bs_to_center_dl[c](u, k) = a * rng_fad.next_cn();
    }
    drop.ul_to_center_bs[c].resize(j, s.cfg.rx_modes);
    for (int u = 0; u < j; ++u) {
      const double a = pathloss_amplitude(drop.ul_pos[c][u], centers[0], alpha);
      for (int l = 0; l < s.cfg.rx_modes; ++l)
        drop.ul_to_center_bs[c](u, l) = a * rng_fad.next_cn();
    }
    {
      const double a = pathloss_amplitude(centers[c], centers[0], alpha);
      drop.bs_to_center_bs[c] = faded_table(rng_fad, s.cfg.tx_modes, s.cfg.rx_modes, a);
    }
    drop.ul_to_center_dl[c].resize(j, j);
    for (int i = 0; i < j; ++i) {
      for (int u = 0; u < j; ++u) {
        const double a =
            pathloss_amplitude(drop.ul_pos[c][u], drop.dl_pos[0][i], alpha);
        drop.ul_to_center_dl[c](i, u) = a * rng_fad.next_cn();
      }
    }
  }
  drop.ul_to_center_dl[0].resize(j, j);
  for (int i = 0; i < j; ++i) {
    for (int u = 0; u < j; ++u) {
      const double a = pathloss_amplitude(drop.ul_pos[0][u], drop.dl_pos[0][i], alpha);
      drop.ul_to_center_dl[0](i, u) = a * rng_fad.next_cn();
    }
  }
  return drop;
}

std::vector<int> pick_users(const CMat& gain_table, int wanted, Scheduler scheduler,
                            std::uint64_t drop_index) {
  const int j = static_cast<int>(gain_table.rows());
  std::vector<int> picked;
  picked.reserve(wanted);
  if (scheduler == Scheduler::kRoundRobin) {
    for (int m = 0; m < wanted; ++m) {
      picked.push_back(static_cast<int>((drop_index + m) % static_cast<std::uint64_t>(j)));
    }
    std::sort(picked.begin(), picked.end());
    return picked;
  }
  // max-SNR: strongest per-user gain across modes, ties to the lower index.
  std::vector<int> idx(j);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
    return gain_table.row(a).cwiseAbs2().maxCoeff() >
           gain_table.row(b).cwiseAbs2().maxCoeff();
  });
  picked.assign(idx.begin(), idx.begin() + wanted);
  std::sort(picked.begin(), picked.end());
  return picked;
}

CMat select_rows(const CMat& m, const std::vector<int>& rows) {
  CMat out(static_cast<Index>(rows.size()), m.cols());
  for (size_t r = 0; r < rows.size(); ++r) out.row(static_cast<Index>(r)) = m.row(rows[r]);
  return out;
}

CMat diag_profile(const CMat& gains, int row, const std::vector<int>& modes) {
  const int n = static_cast<int>(modes.size());
  CMat d = CMat::Zero(n, n);
  for (int t = 0; t < n; ++t) d(t, t) = gains(row, modes[t] - 1);
  return d;
}

struct CellTx {
  CMat precoder_bank;       // block precoder of the cell's BS (N x streams)
  double dl_sym_power = 0;  // per-symbol transmit power of DL streams
  std::vector<int> ul_users;
  double ul_sym_power = 0;
};

/// Full-duplex center-cell sum rate for the scenario's model.
double fd_multicell_rate(const MulticellScenario& s, const Drop& drop,
                         Scheduler scheduler, std::uint64_t drop_index,
                         DlInterferenceAccounting accounting) {
  const double power = db_to_linear(s.pref_db);
  const int dl_served = s.model == CsitModel::kPartialCsit
                            ? s.cfg.dl_users
                            : std::min(1, s.cfg.dl_users);
  // Per-cell scheduling and transmit state. Every cell follows the same
  // protocol (same schedule, same UL basis), which is what aligns inter-cell
  // user-to-user interference with the intra-cell kind.
  std::array<CellTx, kCells> cells;
  std::array<std::vector<int>, kCells> dl_sched;
  const NetworkConfig cfg = s.cfg;

  if (s.model == CsitModel::kNoCsit) {
    const NoCsitPrecoders p = build_no_csit(cfg);
    const int lu = p.block_length;
    for (int c = 0; c < kCells; ++c) {
      dl_sched[c] = pick_users(drop.dl_gain[c], dl_served, scheduler, drop_index);
      cells[c].precoder_bank = p.dl_basis;
      cells[c].dl_sym_power = lu >= 2 ? lu * power / (lu - 1) : 0.0;
      cells[c].ul_users = pick_users(drop.ul_gain[c], cfg.ul_users, scheduler, drop_index);
      cells[c].ul_sym_power = lu * power;
    }
    const CMat center_dl = select_rows(drop.dl_gain[0], dl_sched[0]);
    const CMat center_ul = select_rows(drop.ul_gain[0], cells[0].ul_users);

    // DL rate of the single served user.
    double dl_rate = 0.0;
    if (lu >= 2) {
      const double cd = cells[0].dl_sym_power;
      const CMat signal = cd * std::norm(center_dl(0, 0)) *
                          CMat::Identity(lu - 1, lu - 1);
      CMat noise = CMat::Identity(lu - 1, lu - 1);
      if (accounting == DlInterferenceAccounting::kFull) {
        const CVec leak = p.dl_basis.adjoint() * p.ul_vector;  // numerically zero
        double aligned_power = 0.0;
        for (int c = 0; c < kCells; ++c) {
          for (int u : cells[c].ul_users) {
            aligned_power +=
                cells[c].ul_sym_power *
                std::norm(drop.ul_to_center_dl[c](dl_sched[0][0], u));
          }
        }
        noise += aligned_power * (leak * leak.adjoint());
      }
      for (int c = 1; c < kCells; ++c) {
        // Interfering BS holds transmit mode 1, like every cell.
        const Cplx gain = drop.bs_to_center_dl[c](dl_sched[0][0], 0);
        const CMat g = p.dl_basis.adjoint() * (gain * cells[c].precoder_bank);
        noise += cells[c].dl_sym_power * g * g.adjoint();
      }
      dl_rate = rate_increment(noise, signal, lu);
    }

    // UL sum rate at the center BS.
    CMat ul_noise = (1.0 + s.residual_si_power) * CMat::Identity(lu, lu);
    for (int c = 1; c < kCells; ++c) {
      for (int u : cells[c].ul_users) {
        CVec v(lu);
        for (int t = 0; t < lu; ++t) {
          v(t) = drop.ul_to_center_bs[c](u, p.schedule.rx_mode[t] - 1) * p.ul_vector(t);
        }
        ul_noise += cells[c].ul_sym_power * v * v.adjoint();
      }
      CMat profile = CMat::Zero(lu, lu);
      for (int t = 0; t < lu; ++t) {
        profile(t, t) = drop.bs_to_center_bs[c](0, p.schedule.rx_mode[t] - 1);
      }
      const CMat g = profile * cells[c].precoder_bank;
      ul_noise += cells[c].dl_sym_power * g * g.adjoint();
    }
    const CMat response = ul_effective_matrix(p, BsReceiveCsi{center_ul});
    const double ul_rate =
        rate_increment(ul_noise, cells[0].ul_sym_power * response * response.adjoint(), lu);
    return dl_rate + ul_rate;
  }

  // Partial CSIT.
  const SymbolAllocation alloc = default_allocation(cfg);
  const int nd = alloc.dl_symbols;
  std::array<PartialCsitPrecoders, kCells> schemes;
  for (int c = 0; c < kCells; ++c) {
    dl_sched[c] = pick_users(drop.dl_gain[c], dl_served, scheduler, drop_index);
    cells[c].ul_users = pick_users(drop.ul_gain[c], cfg.ul_users, scheduler, drop_index);
    const CMat dl = select_rows(drop.dl_gain[c], dl_sched[c]);
    const CMat ul = select_rows(drop.ul_gain[c], cells[c].ul_users);
    schemes[c] = build_partial_csit(cfg, BsFullCsi{dl, ul}, alloc);
    CMat bank(schemes[c].block_length, dl_served * nd);
    for (int i = 0; i < dl_served; ++i) {
      bank.middleCols(i * nd, nd) = schemes[c].dl_precoders[i];
    }
    cells[c].precoder_bank = bank;
    cells[c].dl_sym_power = schemes[c].block_length * power;
    cells[c].ul_sym_power = schemes[c].block_length * power;
  }
  const PartialCsitPrecoders& p = schemes[0];
  const int n = p.block_length;
  const double sym_power = n * power;

  double sum_rate = 0.0;
  const CMat leak = p.dl_basis.adjoint() * p.ul_precoder;  // numerically zero
  const CMat dl_signal =
      (sym_power / (p.dl_response_pinv_norm * p.dl_response_pinv_norm)) *
      CMat::Identity(nd, nd);
  for (int i = 0; i < dl_served; ++i) {
    const int user = dl_sched[0][i];
    CMat noise = CMat::Identity(nd, nd);
    if (accounting == DlInterferenceAccounting::kFull) {
      double aligned_power = 0.0;
      for (int c = 0; c < kCells; ++c) {
        for (int u : cells[c].ul_users) {
          aligned_power +=
              cells[c].ul_sym_power * std::norm(drop.ul_to_center_dl[c](user, u));
        }
      }
      noise += aligned_power * (leak * leak.adjoint());
    }
    for (int c = 1; c < kCells; ++c) {
      const CMat profile = diag_profile(drop.bs_to_center_dl[c], user, p.schedule.tx_mode);
      const CMat g = p.dl_basis.adjoint() * profile * cells[c].precoder_bank;
      noise += cells[c].dl_sym_power * g * g.adjoint();
    }
    sum_rate += rate_increment(noise, dl_signal, n);
  }

  CMat ul_noise = (1.0 + s.residual_si_power) * CMat::Identity(n, n);
  for (int c = 1; c < kCells; ++c) {
    for (int u : cells[c].ul_users) {
      CMat profile = CMat::Zero(n, n);
      for (int t = 0; t < n; ++t) {
        profile(t, t) = drop.ul_to_center_bs[c](u, p.schedule.rx_mode[t] - 1);
      }
      const CMat g = profile * p.ul_precoder;
      ul_noise += cells[c].ul_sym_power * g * g.adjoint();
    }
    CMat profile = CMat::Zero(n, n);
    for (int t = 0; t < n; ++t) {
      profile(t, t) =
          drop.bs_to_center_bs[c](p.schedule.tx_mode[t] - 1, p.schedule.rx_mode[t] - 1);
    }
    const CMat g = profile * cells[c].precoder_bank;
    ul_noise += cells[c].dl_sym_power * g * g.adjoint();
  }
  const CMat ul_effective =
      p.ul_response / std::sqrt(static_cast<double>(alloc.ul_symbols));
  sum_rate += rate_increment(ul_noise, sym_power * ul_effective * ul_effective.adjoint(), n);
  return sum_rate;
}

/// Half-duplex TDD center-cell sum rate for the scenario's model.
double hd_multicell_rate(const MulticellScenario& s, const Drop& drop,
                         Scheduler scheduler, std::uint64_t drop_index) {
  const double power = db_to_linear(s.pref_db);
  CounterRng rng_pick = CounterRng(s.seed)
                            .substream(kMulticellStream)
                            .substream(drop_index)
                            .substream(2);

  // One DL user per cell; the mode is the best one under partial CSIT and a
  // uniformly random one otherwise.
  std::array<int, kCells> dl_user{};
  std::array<int, kCells> dl_mode{};
  std::array<std::vector<int>, kCells> ul_users;
  for (int c = 0; c < kCells; ++c) {
    dl_user[c] = pick_users(drop.dl_gain[c], 1, scheduler, drop_index)[0];
    if (s.model == CsitModel::kPartialCsit) {
      Index best = 0;
      drop.dl_gain[c].row(dl_user[c]).cwiseAbs().maxCoeff(&best);
      dl_mode[c] = static_cast<int>(best);
    } else {
      dl_mode[c] = static_cast<int>(rng_pick.next_u64() %
                                    static_cast<std::uint64_t>(s.cfg.tx_modes));
    }
    ul_users[c] = pick_users(drop.ul_gain[c], s.cfg.ul_users, scheduler, drop_index);
  }

  // DL half: inter-cell interference comes from the other BSs only.
  double dl_interference = 0.0;
  for (int c = 1; c < kCells; ++c) {
    dl_interference +=
        power * std::norm(drop.bs_to_center_dl[c](dl_user[0], dl_mode[c]));
  }
  const double dl_snr = power * std::norm(drop.dl_gain[0](dl_user[0], dl_mode[0])) /
                        (1.0 + dl_interference);
  const double dl_rate = 0.5 * std::log2(1.0 + dl_snr);

  // UL half: the center BS fixes its best receive mode for its own users and
  // hears the other cells' scheduled UL users through it.
  double best_metric = -1.0;
  int best_mode = 0;
  for (int l = 0; l < s.cfg.rx_modes; ++l) {
    double metric = 0.0;
    for (int u : ul_users[0]) metric += std::norm(drop.ul_gain[0](u, l));
    if (metric > best_metric) {
      best_metric = metric;
      best_mode = l;
    }
  }
  double ul_interference = 0.0;
  for (int c = 1; c < kCells; ++c) {
    for (int u : ul_users[c]) {
      ul_interference += power * std::norm(drop.ul_to_center_bs[c](u, best_mode));
    }
  }
  const double ul_rate =
      0.5 * std::log2(1.0 + power * best_metric / (1.0 + ul_interference));
  return dl_rate + ul_rate;
}

}  // namespace

void MulticellScenario::validate() const {
  cfg.validate();
  if (trials < 1) throw InvalidScenarioError("multicell: trials must be >= 1");
  if (residual_si_power < 0.0) {
    throw InvalidScenarioError("multicell: residual SI power must be >= 0");
  }
  if (path_loss_exponent <= 0.0) {
    throw InvalidScenarioError("multicell: path-loss exponent must be > 0");
  }
  if (users_per_cell < std::max(cfg.dl_users, cfg.ul_users)) {
    throw InvalidScenarioError(
        "multicell: users per cell must cover the scheduled counts");
  }
}

MulticellDropRates multicell_single_drop(const MulticellScenario& scenario,
                                         int users_per_cell, Scheduler scheduler,
                                         std::uint64_t drop_index,
                                         DlInterferenceAccounting accounting) {
  MulticellScenario s = scenario;
  s.users_per_cell = users_per_cell;
  s.scheduler = scheduler;
  s.validate();
  const Drop drop = sample_drop(s, users_per_cell, drop_index);
  MulticellDropRates rates;
  rates.fd_sum_rate = fd_multicell_rate(s, drop, scheduler, drop_index, accounting);
  rates.hd_sum_rate = hd_multicell_rate(s, drop, scheduler, drop_index);
  return rates;
}

std::vector<MulticellRow> multicell_sweep(const MulticellScenario& base,
                                          std::span<const int> j_grid,
                                          std::span<const Scheduler> schedulers) {
  std::vector<MulticellRow> rows;
  for (int j : j_grid) {
    if (j < 2) throw InvalidScenarioError("multicell: users per cell must be >= 2");
    for (Scheduler sched : schedulers) {
      double fd_sum = 0.0, fd_sq = 0.0, hd_sum = 0.0, hd_sq = 0.0;
      double gap_sum = 0.0, gap_sq = 0.0;
      for (int t = 0; t < base.trials; ++t) {
        const MulticellDropRates r = multicell_single_drop(base, j, sched, t);
        fd_sum += r.fd_sum_rate;
        fd_sq += r.fd_sum_rate * r.fd_sum_rate;
        hd_sum += r.hd_sum_rate;
        hd_sq += r.hd_sum_rate * r.hd_sum_rate;
        const double gap = r.fd_sum_rate - r.hd_sum_rate;
        gap_sum += gap;
        gap_sq += gap * gap;
      }
      const double n = base.trials;
      auto std_err = [&](double sum, double sq) {
        if (base.trials <= 1) return 0.0;
        const double mean = sum / n;
        return std::sqrt(std::max(0.0, (sq - n * mean * mean) / (n - 1.0)) / n);
      };
      MulticellRow fd_row{j, sched, SystemId{Duplex::kFullDuplex, base.model},
                          fd_sum / n, std_err(fd_sum, fd_sq),
                          gap_sum / n, std_err(gap_sum, gap_sq), base.trials};
      MulticellRow hd_row{j, sched, SystemId{Duplex::kHalfDuplex, base.model},
                          hd_sum / n, std_err(hd_sum, hd_sq),
                          gap_sum / n, std_err(gap_sum, gap_sq), base.trials};
      rows.push_back(fd_row);
      rows.push_back(hd_row);
    }
  }
  return rows;
}

}  // namespace fdbia
