// SPDX-License-Identifier: Apache-2.0
//
// Network topology, random channel generation, mode schedules, and the
// time-extended effective channel of one coherence block.
//
// The cellular model: a full-duplex base station with reconfigurable transmit
// and receive antennas serves single-antenna half-duplex downlink and uplink
// users. Per slot t the BS picks a transmit mode alpha(t) and a receive mode
// beta(t); the DL gain to user i is dl_gain(i, alpha(t)), the UL gain from
// user j is ul_gain(j, beta(t)), and UL user j interferes with DL user i
// through the mode-independent cross_gain(i, j).

#ifndef FDBIA_NETWORK_HPP
#define FDBIA_NETWORK_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fdbia/linalg.hpp"

namespace fdbia {

struct NetworkConfig {
  int dl_users = 0;  // number of DL users
  int ul_users = 0;  // number of UL users
  int tx_modes = 1;  // preset modes of the BS transmit antenna
  int rx_modes = 1;  // preset modes of the BS receive antenna

  /// Modes the schemes actually cycle through on each side.
  int active_tx_modes() const { return std::min(dl_users, tx_modes); }
  int active_rx_modes() const { return std::min(ul_users, rx_modes); }

  /// Throws ConfigError unless counts are sane (modes >= 1, users >= 0).
  void validate() const;

  bool operator==(const NetworkConfig&) const = default;
};

/// Read-only CSI views. Handing a scheme only the view its CSI model allows
/// keeps the information boundary visible in the code.
struct BsReceiveCsi {
  const CMat& ul_gain;  // ul_users x rx_modes
};

struct BsFullCsi {
  const CMat& dl_gain;  // dl_users x tx_modes
  const CMat& ul_gain;  // ul_users x rx_modes
};

struct DlUserCsi {
  int user;                       // 1-based index
  Eigen::RowVectorXcd dl_gains;   // gains of this user across tx modes
};

/// All complex gains of one coherence block. Immutable after creation.
struct ChannelRealization {
  CMat dl_gain;     // dl_users x tx_modes
  CMat ul_gain;     // ul_users x rx_modes
  CMat cross_gain;  // dl_users x ul_users (UL user j -> DL user i)

  BsReceiveCsi bs_receive_csi() const { return {ul_gain}; }
  BsFullCsi bs_full_csi() const { return {dl_gain, ul_gain}; }
  DlUserCsi dl_user_csi(int user) const;
};

/// Per-slot transmit/receive mode indices, 1-based, equal length.
struct ModeSchedule {
  std::vector<int> tx_mode;  // alpha
  std::vector<int> rx_mode;  // beta

  int length() const { return static_cast<int>(tx_mode.size()); }
  void validate(const NetworkConfig& cfg) const;
};

/// I.i.d. CN(0,1) gains, deterministic in (cfg, seed). Fill order: dl_gain
/// row-major, then ul_gain row-major, then cross_gain row-major.
ChannelRealization sample_channels(const NetworkConfig& cfg, std::uint64_t seed);

/// diag(h_i(alpha(1)), ..., h_i(alpha(n))) for DL user i (1-based).
CMat extended_dl_channel(const ChannelRealization& cr, int dl_user,
                         const ModeSchedule& sched);

/// diag(f_j(beta(1)), ..., f_j(beta(n))) for UL user j (1-based).
CMat extended_ul_channel(const ChannelRealization& cr, int ul_user,
                         const ModeSchedule& sched);

struct ChannelOutput {
  std::vector<CVec> dl;  // received vector per DL user
  CVec ul;               // received vector at the BS
};

/// Time-extended input-output relation over one block:
///   dl[i] = H_i(alpha) x_dl + sum_j cross(i,j) x_ul[j] + noise_dl[i]
///   ul    = sum_j F_j(beta) x_ul[j] + noise_ul
/// Self-interference is perfectly suppressed here; the rate engine injects
/// residual SI as extra receiver noise.
ChannelOutput apply_channel(const ChannelRealization& cr, const ModeSchedule& sched,
                            const CVec& x_dl, const std::vector<CVec>& x_ul,
                            const std::vector<CVec>& noise_dl, const CVec& noise_ul);

/// Text dump for regression fixtures, one gain per line:
/// link-type,index1,index2,real,imag  with link-type in {dl, ul, cross}.
std::string channel_to_csv(const ChannelRealization& cr);

/// Inverse of channel_to_csv. The target shape comes from cfg.
ChannelRealization channel_from_csv(const NetworkConfig& cfg, const std::string& text);

}  // namespace fdbia

#endif  // FDBIA_NETWORK_HPP
