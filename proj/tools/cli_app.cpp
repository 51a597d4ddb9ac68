// SPDX-License-Identifier: Apache-2.0

#include "cli_app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <type_traits>

#include "fdbia/dof.hpp"
#include "fdbia/errors.hpp"
#include "fdbia/network.hpp"
#include "fdbia/rate_engine.hpp"
#include "fdbia/scheme_no_csit.hpp"
#include "fdbia/scheme_partial_csit.hpp"
#include "fdbia/verification.hpp"

namespace fdbia::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& values) {
  std::ostringstream os;
  for (size_t i = 0; i < values.size(); ++i) {
    if (i) os << ',';
    if constexpr (std::is_same_v<T, double>) {
      os << fmt(values[i]);
    } else {
      os << values[i];
    }
  }
  return os.str();
}

std::string manifest(const std::string& command, const std::string& args_line,
                     std::uint64_t seed, const std::string& out_path) {
  std::ostringstream os;
  os << "# tool: " << kToolVersion << "\n"
     << "# command: " << command << "\n"
     << "# args: " << args_line << "\n"
     << "# seed: " << seed << "\n"
     << "# output: " << (out_path.empty() ? "(stdout)" : out_path) << "\n";
  return os.str();
}

void write_output(const std::string& path, const std::string& content,
                  const std::string& file_manifest = "") {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw InvalidScenarioError("cannot open output file: " + path);
  file << file_manifest << content;
}

json manifest_json(const std::string& command, const std::string& args_line,
                   std::uint64_t seed) {
  return {{"tool", kToolVersion}, {"command", command}, {"args", args_line},
          {"seed", seed}};
}

struct ConfigFlags {
  int dl_users = 2;
  int ul_users = 2;
  int tx_modes = 2;
  int rx_modes = 2;

  NetworkConfig cfg() const { return {dl_users, ul_users, tx_modes, rx_modes}; }
  std::string args_line() const {
    std::ostringstream os;
    os << "--kd " << dl_users << " --ku " << ul_users << " --md " << tx_modes
       << " --mu " << rx_modes;
    return os.str();
  }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& c) {
  cmd->add_option("--kd", c.dl_users, "Number of DL users");
  cmd->add_option("--ku", c.ul_users, "Number of UL users");
  cmd->add_option("--md", c.tx_modes, "Transmit preset modes at the BS");
  cmd->add_option("--mu", c.rx_modes, "Receive preset modes at the BS");
}

CsitModel parse_model(const std::string& name) {
  if (name == "no-csit") return CsitModel::kNoCsit;
  if (name == "partial-csit") return CsitModel::kPartialCsit;
  throw InvalidScenarioError("unknown CSIT model: " + name);
}

// ---------------------------------------------------------------------- dof

struct DofArgs {
  ConfigFlags cfg;
  std::string preset;
  int sweep_max = 8;
  std::string out;
  bool as_json = false;
};

json dof_single_json(const NetworkConfig& cfg) {
  json j;
  j["config"] = {{"dl_users", cfg.dl_users},
                 {"ul_users", cfg.ul_users},
                 {"tx_modes", cfg.tx_modes},
                 {"rx_modes", cfg.rx_modes}};
  j["no_csit"] = to_string(sum_dof_no_csit(cfg));
  const DofBounds bounds = sum_dof_partial_csit(cfg);
  j["partial_csit"]["lower"] = to_string(bounds.lower);
  j["partial_csit"]["upper_converse_bound"] = to_string(bounds.upper);
  if (bounds.exact) j["partial_csit"]["exact"] = to_string(*bounds.exact);
  if (cfg.dl_users >= 1 && cfg.ul_users >= 1) {
    const auto allocations = enumerate_allocations(cfg);
    if (!allocations.empty()) {
      const SymbolAllocation best = default_allocation(cfg);
      Rational achieved(0);
      for (const auto& [alloc, dof] : allocations) {
        if (alloc == best) achieved = dof;
      }
      j["best_allocation"] = {{"dl_symbols", best.dl_symbols},
                              {"ul_symbols", best.ul_symbols},
                              {"achieved_dof", to_string(achieved)}};
    }
  }
  return j;
}

int run_dof(const DofArgs& a) {
  if (a.preset == "fig3") {
    std::ostringstream os;
    os << manifest("dof", "--preset fig3 --sweep-max " + std::to_string(a.sweep_max),
                   0, a.out);
    os << "users_and_modes,no_csit,partial_csit_lower,partial_csit_upper,hd_baseline\n";
    for (int k = 1; k <= a.sweep_max; ++k) {
      const NetworkConfig cfg{k, k, k, k};
      const DofBounds b = sum_dof_partial_csit(cfg);
      os << k << ',' << to_string(sum_dof_no_csit(cfg)) << ',' << to_string(b.lower)
         << ',' << to_string(b.upper) << ",1\n";
    }
    write_output(a.out, os.str());
    return 0;
  }
  if (!a.preset.empty()) throw InvalidScenarioError("unknown preset: " + a.preset);

  const NetworkConfig cfg = a.cfg.cfg();
  cfg.validate();
  if (a.as_json) {
    json j = dof_single_json(cfg);
    j["manifest"] = manifest_json("dof", a.cfg.args_line() + " --json", 0);
    write_output(a.out, j.dump(2) + "\n");
    return 0;
  }
  std::ostringstream os;
  os << "config: dl_users=" << cfg.dl_users << " ul_users=" << cfg.ul_users
     << " tx_modes=" << cfg.tx_modes << " rx_modes=" << cfg.rx_modes << " (active "
     << cfg.active_tx_modes() << "x" << cfg.active_rx_modes() << ")\n";
  os << "no-csit sum DoF: " << to_string(sum_dof_no_csit(cfg)) << "\n";
  const DofBounds b = sum_dof_partial_csit(cfg);
  os << "partial-csit sum DoF: ";
  if (b.exact) {
    os << "exact " << to_string(*b.exact);
  } else {
    os << "open";
  }
  os << "  [lower " << to_string(b.lower) << ", upper (converse bound) "
     << to_string(b.upper) << "]\n";
  if (cfg.dl_users >= 1 && cfg.ul_users >= 1) {
    const auto allocations = enumerate_allocations(cfg);
    if (allocations.empty()) {
      os << "best allocation: none (single-link fallback)\n";
    } else {
      const SymbolAllocation best = default_allocation(cfg);
      Rational achieved(0);
      for (const auto& [alloc, dof] : allocations) {
        if (alloc == best) achieved = dof;
      }
      os << "best allocation: dl_symbols=" << best.dl_symbols
         << " ul_symbols=" << best.ul_symbols << " -> " << to_string(achieved) << "\n";
    }
  }
  write_output(a.out, os.str(), manifest("dof", a.cfg.args_line(), 0, a.out));
  return 0;
}

// -------------------------------------------------------------------- region

struct RegionArgs {
  ConfigFlags cfg{1, 2, 1, 2};
  std::vector<double> point;
  std::string out;
  bool as_json = false;
};

int run_region(const RegionArgs& a) {
  const auto& coords = a.point;
  if (coords.size() != 2) {
    throw InvalidScenarioError("--point needs exactly two values: dl_sum,ul_sum");
  }
  const bool ok = region_feasible(coords[0], coords[1], a.cfg.cfg());
  const std::string args_line =
      a.cfg.args_line() + " --point " + fmt(coords[0]) + "," + fmt(coords[1]);
  if (a.as_json) {
    json j;
    j["dl_sum_dof"] = coords[0];
    j["ul_sum_dof"] = coords[1];
    j["active_rx_modes"] = a.cfg.cfg().active_rx_modes();
    j["feasible"] = ok;
    j["manifest"] = manifest_json("region", args_line + " --json", 0);
    write_output(a.out, j.dump(2) + "\n");
  } else {
    write_output(a.out, std::string(ok ? "feasible" : "infeasible") + "\n",
                 manifest("region", args_line, 0, a.out));
  }
  return 0;
}

// --------------------------------------------------------------- scheme-check

struct SchemeCheckArgs {
  ConfigFlags cfg;
  std::string model = "no-csit";
  std::vector<int> alloc;  // {nd, nu}; empty = default allocation
  std::uint64_t seed = 1;
  std::string dump_channels;
  std::string out;
  bool as_json = false;
};

int run_scheme_check(const SchemeCheckArgs& a) {
  const NetworkConfig cfg = a.cfg.cfg();
  const CsitModel model = parse_model(a.model);
  const ChannelRealization cr = sample_channels(cfg, a.seed);
  if (!a.dump_channels.empty()) {
    write_output(a.dump_channels, channel_to_csv(cr),
                 manifest("scheme-check", a.cfg.args_line() + " --model " + a.model +
                              " --seed " + std::to_string(a.seed),
                          a.seed, a.dump_channels));
  }


  std::string args_line = a.cfg.args_line() + " --model " + a.model;
  if (!a.alloc.empty()) {
    args_line += " --alloc " + std::to_string(a.alloc[0]) + "," +
                 std::to_string(a.alloc[1]);
  }
  args_line += " --seed " + std::to_string(a.seed);

  json j;
  j["config"] = a.cfg.args_line();
  j["model"] = a.model;
  j["seed"] = a.seed;
  if (model == CsitModel::kNoCsit) {
    const NoCsitPrecoders p = build_no_csit(cfg);
    j["block_length"] = p.block_length;
    j["basis_orthogonality_residual"] =
        (p.dl_basis.adjoint() * p.ul_vector).norm();
    j["ul_matrix_rank"] =
        static_cast<int>(numerical_rank(ul_effective_matrix(p, cr.bs_receive_csi())));
    j["ul_matrix_rank_expected"] = p.block_length;
    const auto rec = verification::no_csit_recovery(cfg, 1, a.seed);
    j["noiseless_dl_recovery_error"] = rec.max_dl_error;
    j["noiseless_ul_recovery_error"] = rec.max_ul_error;
    const auto align = verification::no_csit_alignment(cfg, 1, a.seed);
    j["dl_alignment_deviation"] = align.max_deviation;
  } else {
    SymbolAllocation alloc{};
    if (a.alloc.empty()) {
      alloc = default_allocation(cfg);
    } else {
      if (a.alloc.size() != 2) {
        throw InvalidAllocationError("--alloc needs exactly two values: nd,nu");
      }
      alloc = {a.alloc[0], a.alloc[1]};
    }
    const PartialCsitPrecoders p = build_partial_csit(cfg, cr.bs_full_csi(), alloc);
    j["allocation"] = {{"dl_symbols", alloc.dl_symbols},
                       {"ul_symbols", alloc.ul_symbols}};
    j["block_length"] = p.block_length;
    j["basis_orthogonality_residual"] = (p.dl_basis.adjoint() * p.ul_basis).norm();
    const RankCertificate cert = rank_certificate(cfg, cr, alloc);
    j["dl_response_rank"] = static_cast<int>(cert.dl_response_rank);
    j["dl_response_rank_expected"] = p.served_dl_users * alloc.dl_symbols;
    j["ul_response_rank"] = static_cast<int>(cert.ul_response_rank);
    j["ul_response_rank_expected_min"] = cfg.active_rx_modes() * alloc.ul_symbols;
    j["dl_certificate_residual"] = cert.dl_identity_residual;
    j["ul_certificate_residual"] = cert.ul_identity_residual;
    const auto rec = verification::partial_csit_recovery(cfg, alloc, 1, a.seed);
    j["noiseless_dl_recovery_error"] = rec.max_dl_error;
    j["noiseless_ul_recovery_error"] = rec.max_ul_error;
    const auto align = verification::partial_csit_alignment(cfg, alloc, 1, a.seed);
    j["dl_alignment_deviation"] = align.max_deviation;
  }

  if (a.as_json) {
    j["manifest"] = manifest_json("scheme-check", args_line + " --json", a.seed);
    write_output(a.out, j.dump(2) + "\n");
  } else {
    std::ostringstream os;
    for (const auto& [key, value] : j.items()) {
      os << key << ": " << value.dump() << "\n";
    }
    write_output(a.out, os.str(), manifest("scheme-check", args_line, a.seed, a.out));
  }
  return 0;
}

// -------------------------------------------------------------------- verify

struct VerifyArgs {
  int draws = 1000;
  int max_active_modes = 4;
  int block_limit = 36;
  std::uint64_t seed = 1;
  std::string out;
  bool as_json = false;
};

int run_verify(const VerifyArgs& a) {
  std::ostringstream os;
  json checks = json::array();
  bool all_ok = true;
  auto report = [&](bool ok, const std::string& line) {
    all_ok = all_ok && ok;
    os << (ok ? "[PASS] " : "[FAIL] ") << line << "\n";
    checks.push_back({{"passed", ok}, {"check", line}});
  };

  const auto ortho1 = verification::no_csit_orthogonality(a.block_limit);
  report(ortho1.max_residual <= 1e-12,
         "precoder orthogonality, no-csit blocks <= " + std::to_string(a.block_limit) +
             ": max residual " + fmt(ortho1.max_residual));
  const auto ortho2 = verification::partial_csit_orthogonality(a.block_limit);
  report(ortho2.max_residual <= 1e-12,
         "basis orthogonality, partial-csit blocks <= " + std::to_string(a.block_limit) +
             " (" + std::to_string(ortho2.combinations) + " combinations): max residual " +
             fmt(ortho2.max_residual));

  for (int lu = 1; lu <= a.max_active_modes; ++lu) {
    const NetworkConfig cfg{1, lu, 1, lu};
    const auto rec = verification::no_csit_recovery(cfg, a.draws, a.seed);
    report(rec.max_dl_error <= 1e-8 && rec.max_ul_error <= 1e-8 &&
               rec.min_decodable_streams == lu,
           "no-csit recovery, " + std::to_string(lu) + " active modes, " +
               std::to_string(a.draws) + " draws: dl " + fmt(rec.max_dl_error) +
               ", ul " + fmt(rec.max_ul_error));
  }

  for (int ld = 1; ld <= a.max_active_modes; ++ld) {
    for (int lu = 1; lu <= a.max_active_modes; ++lu) {
      const NetworkConfig cfg{ld, lu, ld, lu};
      const auto allocations = enumerate_allocations(cfg);
      if (allocations.empty()) continue;
      double worst_dl = 0.0, worst_ul = 0.0;
      double worst_cert_dl = 0.0, worst_cert_ul = 0.0;
      bool ranks_ok = true;
      for (const auto& [alloc, dof] : allocations) {
        const auto rec = verification::partial_csit_recovery(cfg, alloc, a.draws, a.seed);
        worst_dl = std::max(worst_dl, rec.max_dl_error);
        worst_ul = std::max(worst_ul, rec.max_ul_error);
        const auto cert = verification::certificate_mc(cfg, alloc, a.draws, a.seed);
        ranks_ok = ranks_ok && cert.ranks_ok;
        worst_cert_dl = std::max(worst_cert_dl, cert.max_dl_residual);
        worst_cert_ul = std::max(worst_cert_ul, cert.max_ul_residual);
      }
      const std::string label = std::to_string(ld) + "x" + std::to_string(lu);
      report(worst_dl <= 1e-8 && worst_ul <= 1e-8,
             "partial-csit recovery, active modes " + label + ", all allocations, " +
                 std::to_string(a.draws) + " draws: dl " + fmt(worst_dl) + ", ul " +
                 fmt(worst_ul));
      report(ranks_ok && worst_cert_dl <= 1e-8 && worst_cert_ul <= 1e-8,
             "rank certificate, active modes " + label + ", all allocations, " +
                 std::to_string(a.draws) + " draws: residuals " + fmt(worst_cert_dl) +
                 " / " + fmt(worst_cert_ul));
    }
  }

  os << (all_ok ? "all checks passed\n" : "some checks FAILED\n");
  const std::string args_line = "--draws " + std::to_string(a.draws) + " --max-l " +
                                std::to_string(a.max_active_modes) +
                                " --block-limit " + std::to_string(a.block_limit) +
                                " --seed " + std::to_string(a.seed);
  if (a.as_json) {
    json j;
    j["draws"] = a.draws;
    j["all_passed"] = all_ok;
    j["checks"] = checks;
    j["manifest"] = manifest_json("verify", args_line + " --json", a.seed);
    write_output(a.out, j.dump(2) + "\n");
  } else {
    write_output(a.out, os.str(), manifest("verify", args_line, a.seed, a.out));
  }
  return all_ok ? 0 : 2;
}

// ---------------------------------------------------------------- rate-sweep

struct RateSweepArgs {
  ConfigFlags cfg;
  std::string model = "all";
  std::string duplex = "all";
  std::vector<double> snr_grid{0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
  double residual_si = 1.0;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

std::vector<SystemId> filter_systems(const std::string& duplex, const std::string& model) {
  std::vector<SystemId> out;
  for (const SystemId& s : all_systems()) {
    const bool duplex_ok = duplex == "all" ||
                           (duplex == "fd" && s.duplex == Duplex::kFullDuplex) ||
                           (duplex == "hd" && s.duplex == Duplex::kHalfDuplex);
    const bool model_ok = model == "all" || parse_model(model) == s.model;
    if (duplex_ok && model_ok) out.push_back(s);
  }
  if (out.empty()) throw InvalidScenarioError("no systems match --duplex/--model");
  return out;
}

int run_rate_sweep(const RateSweepArgs& a) {
  SingleCellScenario scenario;
  scenario.cfg = a.cfg.cfg();
  scenario.residual_si_power = a.residual_si;
  scenario.trials = a.trials;
  scenario.seed = a.seed;
  if (a.snr_grid.empty()) throw InvalidScenarioError("--snr-grid is empty");
  const auto& grid = a.snr_grid;
  const auto systems = filter_systems(a.duplex, a.model);

  std::ostringstream args;
  args << a.cfg.args_line() << " --model " << a.model << " --duplex " << a.duplex
       << " --snr-grid " << join(a.snr_grid) << " --si " << fmt(a.residual_si)
       << " --trials " << a.trials << " --seed " << a.seed;

  const auto rows = single_cell_sweep(scenario, grid, systems);
  std::ostringstream os;
  os << manifest("rate-sweep", args.str(), a.seed, a.out);
  os << "snr_db,system,mean_sum_rate,std_err,trials\n";
  for (const SweepRow& row : rows) {
    os << fmt(row.snr_db) << ',' << to_string(row.system) << ','
       << fmt(row.mean_sum_rate) << ',' << fmt(row.std_err) << ',' << row.trials
       << "\n";
  }
  write_output(a.out, os.str());
  return 0;
}

// ----------------------------------------------------------------- multicell

struct MulticellArgs {
  ConfigFlags cfg;
  std::string model = "partial-csit";
  std::vector<int> j_grid{2, 4, 6, 8};
  std::string scheduler = "both";
  double alpha = 3.0;
  double pref_db = 10.0;
  double residual_si = 1.0;
  int trials = 1000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_multicell(const MulticellArgs& a) {
  MulticellScenario scenario;
  scenario.cfg = a.cfg.cfg();
  scenario.model = parse_model(a.model);
  scenario.path_loss_exponent = a.alpha;
  scenario.pref_db = a.pref_db;
  scenario.residual_si_power = a.residual_si;
  scenario.trials = a.trials;
  scenario.seed = a.seed;

  if (a.j_grid.empty()) throw InvalidScenarioError("--j-grid is empty");
  const auto& grid = a.j_grid;
  scenario.users_per_cell = *std::max_element(grid.begin(), grid.end());
  std::vector<Scheduler> schedulers;
  if (a.scheduler == "both") {
    schedulers = {Scheduler::kRoundRobin, Scheduler::kMaxSnr};
  } else if (a.scheduler == "round-robin") {
    schedulers = {Scheduler::kRoundRobin};
  } else if (a.scheduler == "max-snr") {
    schedulers = {Scheduler::kMaxSnr};
  } else {
    throw InvalidScenarioError("unknown scheduler: " + a.scheduler);
  }

  std::ostringstream args;
  args << a.cfg.args_line() << " --model " << a.model << " --j-grid " << join(a.j_grid)
       << " --scheduler " << a.scheduler << " --alpha " << fmt(a.alpha)
       << " --pref-db " << fmt(a.pref_db) << " --si " << fmt(a.residual_si)
       << " --trials " << a.trials << " --seed " << a.seed;

  const auto rows = multicell_sweep(scenario, grid, schedulers);
  std::ostringstream os;
  os << manifest("multicell", args.str(), a.seed, a.out);
  os << "users_per_cell,scheduler,system,mean_sum_rate,std_err,mean_gap,gap_std_err,"
        "trials\n";
  for (const MulticellRow& row : rows) {
    os << row.users_per_cell << ',' << to_string(row.scheduler) << ','
       << to_string(row.system) << ',' << fmt(row.mean_sum_rate) << ','
       << fmt(row.std_err) << ',' << fmt(row.mean_gap) << ',' << fmt(row.gap_std_err)
       << ',' << row.trials << "\n";
  }
  write_output(a.out, os.str());
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{std::string(kToolVersion) +
               " - blind interference alignment for full-duplex cellular networks"};
  app.set_config("--config", "", "Read options from an INI file (sections per subcommand)");
  app.require_subcommand(0, 1);
  app.set_version_flag("--version", std::string(kToolVersion));

  DofArgs dof_args;
  CLI::App* dof_cmd = app.add_subcommand("dof", "Closed-form sum DoF table or sweep");
  add_config_flags(dof_cmd, dof_args.cfg);
  dof_cmd->add_option("--preset", dof_args.preset, "Figure recipe preset (fig3)");
  dof_cmd->add_option("--sweep-max", dof_args.sweep_max,
                      "Largest symmetric size for --preset fig3");
  dof_cmd->add_option("--out", dof_args.out, "Output path (default stdout)");
  dof_cmd->add_flag("--json", dof_args.as_json, "Emit JSON");

  RegionArgs region_args;
  CLI::App* region_cmd =
      app.add_subcommand("region", "No-CSIT DoF-pair feasibility check");
  add_config_flags(region_cmd, region_args.cfg);
  region_cmd->add_option("--point", region_args.point, "dl_sum,ul_sum DoF pair")
      ->required()
      ->delimiter(',');
  region_cmd->add_option("--out", region_args.out, "Output path (default stdout)");
  region_cmd->add_flag("--json", region_args.as_json, "Emit JSON");

  SchemeCheckArgs check_args;
  CLI::App* check_cmd = app.add_subcommand(
      "scheme-check", "Alignment residuals, ranks and recovery on one seeded draw");
  add_config_flags(check_cmd, check_args.cfg);
  check_cmd->add_option("--model", check_args.model, "no-csit | partial-csit")
      ->required();
  check_cmd->add_option("--alloc", check_args.alloc,
                        "Symbol allocation nd,nu (partial-csit only)")
      ->delimiter(',');
  check_cmd->add_option("--seed", check_args.seed, "Channel seed");
  check_cmd->add_option("--dump-channels", check_args.dump_channels,
                        "Write the drawn channel realization to this path");
  check_cmd->add_option("--out", check_args.out, "Output path (default stdout)");
  check_cmd->add_flag("--json", check_args.as_json, "Emit JSON");

  VerifyArgs verify_args;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify", "Monte Carlo invariant suites (orthogonality, recovery, rank certificates)");
  verify_cmd->add_option("--draws", verify_args.draws, "Draws per configuration");
  verify_cmd->add_option("--max-l", verify_args.max_active_modes,
                         "Largest active-mode count per side");
  verify_cmd->add_option("--block-limit", verify_args.block_limit,
                         "Largest precoder block for orthogonality sweeps");
  verify_cmd->add_option("--seed", verify_args.seed, "Base seed");
  verify_cmd->add_option("--out", verify_args.out, "Output path (default stdout)");
  verify_cmd->add_flag("--json", verify_args.as_json, "Emit JSON");

  RateSweepArgs sweep_args;
  CLI::App* sweep_cmd =
      app.add_subcommand("rate-sweep", "Single-cell Monte Carlo sum-rate sweep");
  add_config_flags(sweep_cmd, sweep_args.cfg);
  sweep_cmd->add_option("--model", sweep_args.model, "no-csit | partial-csit | all");
  sweep_cmd->add_option("--duplex", sweep_args.duplex, "fd | hd | all");
  sweep_cmd->add_option("--snr-grid", sweep_args.snr_grid,
                        "Comma list of SNR points (dB)")
      ->delimiter(',');
  sweep_cmd->add_option("--si", sweep_args.residual_si,
                        "Residual self-interference power (linear)");
  sweep_cmd->add_option("--trials", sweep_args.trials, "Monte Carlo trials per point");
  sweep_cmd->add_option("--seed", sweep_args.seed, "Base seed");
  sweep_cmd->add_option("--out", sweep_args.out, "Output CSV path (default stdout)");
  std::string sweep_preset;
  sweep_cmd->add_option("--preset", sweep_preset, "Figure recipe preset (fig5)");

  MulticellArgs multi_args;
  CLI::App* multi_cmd =
      app.add_subcommand("multicell", "7-cell wrap-around Monte Carlo sum rates");
  add_config_flags(multi_cmd, multi_args.cfg);
  multi_cmd->add_option("--model", multi_args.model, "no-csit | partial-csit");
  multi_cmd->add_option("--j-grid,--J-grid", multi_args.j_grid,
                        "Comma list of users per cell")
      ->delimiter(',');
  multi_cmd->add_option("--scheduler", multi_args.scheduler,
                        "round-robin | max-snr | both");
  multi_cmd->add_option("--alpha", multi_args.alpha, "Path-loss exponent");
  multi_cmd->add_option("--pref-db", multi_args.pref_db, "SNR at unit distance (dB)");
  multi_cmd->add_option("--si", multi_args.residual_si,
                        "Residual self-interference power (linear)");
  multi_cmd->add_option("--trials", multi_args.trials, "Drops per grid point");
  multi_cmd->add_option("--seed", multi_args.seed, "Base seed");
  multi_cmd->add_option("--out", multi_args.out, "Output CSV path (default stdout)");
  std::string multi_preset;
  multi_cmd->add_option("--preset", multi_preset, "Figure recipe preset (fig6)");

  std::vector<std::string> argv_copy = args;
  std::vector<char*> argv;
  argv.reserve(argv_copy.size() + 1);
  static char prog[] = "fdbia";
  argv.push_back(prog);
  for (std::string& s : argv_copy) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());

    if (app.got_subcommand(dof_cmd)) return run_dof(dof_args);
    if (app.got_subcommand(region_cmd)) return run_region(region_args);
    if (app.got_subcommand(check_cmd)) return run_scheme_check(check_args);
    if (app.got_subcommand(verify_cmd)) return run_verify(verify_args);
    if (app.got_subcommand(sweep_cmd)) {
      if (sweep_preset == "fig5") {
        // Single-cell experiment recipe: symmetric 2x2 network, the full
        // duplex/model grid, dense SNR axis.
        if (sweep_cmd->count("--kd") == 0) sweep_args.cfg.dl_users = 2;
        if (sweep_cmd->count("--ku") == 0) sweep_args.cfg.ul_users = 2;
        if (sweep_cmd->count("--md") == 0) sweep_args.cfg.tx_modes = 2;
        if (sweep_cmd->count("--mu") == 0) sweep_args.cfg.rx_modes = 2;
        if (sweep_cmd->count("--snr-grid") == 0) {
          sweep_args.snr_grid = {0, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50, 55, 60};
        }
        if (sweep_cmd->count("--trials") == 0) sweep_args.trials = 10000;
      } else if (!sweep_preset.empty()) {
        throw InvalidScenarioError("unknown preset: " + sweep_preset);
      }
      return run_rate_sweep(sweep_args);
    }
    if (app.got_subcommand(multi_cmd)) {
      if (multi_preset == "fig6") {
        if (multi_cmd->count("--kd") == 0) multi_args.cfg.dl_users = 2;
        if (multi_cmd->count("--ku") == 0) multi_args.cfg.ul_users = 2;
        if (multi_cmd->count("--md") == 0) multi_args.cfg.tx_modes = 2;
        if (multi_cmd->count("--mu") == 0) multi_args.cfg.rx_modes = 2;
        if (multi_cmd->count("--j-grid") == 0) multi_args.j_grid = {2, 4, 6, 8};
        if (multi_cmd->count("--alpha") == 0) multi_args.alpha = 3.0;
        if (multi_cmd->count("--pref-db") == 0) multi_args.pref_db = 10.0;
        if (multi_cmd->count("--trials") == 0) multi_args.trials = 10000;
        if (multi_cmd->count("--scheduler") == 0) multi_args.scheduler = "both";
      } else if (!multi_preset.empty()) {
        throw InvalidScenarioError("unknown preset: " + multi_preset);
      }
      return run_multicell(multi_args);
    }

    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kToolVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace fdbia::cli
