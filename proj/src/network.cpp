// SPDX-License-Identifier: Apache-2.0

#include "fdbia/network.hpp"

#include <cstdio>
#include <sstream>

#include "fdbia/errors.hpp"
#include "fdbia/rng.hpp"

namespace fdbia {

void NetworkConfig::validate() const {
  if (dl_users < 0 || ul_users < 0) {
    throw InvalidDimensionError("NetworkConfig: user counts must be >= 0");
  }
  if (tx_modes < 1 || rx_modes < 1) {
    throw InvalidDimensionError("NetworkConfig: mode counts must be >= 1");
  }
}

DlUserCsi ChannelRealization::dl_user_csi(int user) const {
  if (user < 1 || user > dl_gain.rows()) {
    throw InvalidRangeError("dl_user_csi: user index out of range");
  }
  return {user, dl_gain.row(user - 1)};
}

void ModeSchedule::validate(const NetworkConfig& cfg) const {
  if (tx_mode.size() != rx_mode.size()) {
    throw InvalidDimensionError("ModeSchedule: tx/rx sequences differ in length");
  }
  for (int a : tx_mode) {
    if (a < 1 || a > cfg.tx_modes) {
      throw InvalidRangeError("ModeSchedule: tx mode out of range");
    }
  }
  for (int b : rx_mode) {
    if (b < 1 || b > cfg.rx_modes) {
      throw InvalidRangeError("ModeSchedule: rx mode out of range");
    }
  }
}

ChannelRealization sample_channels(const NetworkConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  CounterRng rng(seed);
  ChannelRealization cr;
  cr.dl_gain.resize(cfg.dl_users, cfg.tx_modes);
  cr.ul_gain.resize(cfg.ul_users, cfg.rx_modes);
  cr.cross_gain.resize(cfg.dl_users, cfg.ul_users);
  for (Index i = 0; i < cr.dl_gain.rows(); ++i)
    for (Index k = 0; k < cr.dl_gain.cols(); ++k) cr.dl_gain(i, k) = rng.next_cn();
  for (Index j = 0; j < cr.ul_gain.rows(); ++j)
    for (Index l = 0; l < cr.ul_gain.cols(); ++l) cr.ul_gain(j, l) = rng.next_cn();
  for (Index i = 0; i < cr.cross_gain.rows(); ++i)
    for (Index j = 0; j < cr.cross_gain.cols(); ++j) cr.cross_gain(i, j) = rng.next_cn();
  return cr;
}

namespace {

CMat extended_diag(const CMat& gains, int row, const std::vector<int>& modes,
                   const char* what) {
  if (row < 1 || row > gains.rows()) {
    throw InvalidRangeError(std::string(what) + ": user index out of range");
  }
  const int n = static_cast<int>(modes.size());
  CMat out = CMat::Zero(n, n);
  for (int t = 0; t < n; ++t) {
    const int mode = modes[t];
    if (mode < 1 || mode > gains.cols()) {
      throw InvalidRangeError(std::string(what) + ": mode index out of range");
    }
    out(t, t) = gains(row - 1, mode - 1);
  }
  return out;
}

}  // namespace

CMat extended_dl_channel(const ChannelRealization& cr, int dl_user,
                         const ModeSchedule& sched) {
  return extended_diag(cr.dl_gain, dl_user, sched.tx_mode, "extended_dl_channel");
}

CMat extended_ul_channel(const ChannelRealization& cr, int ul_user,
                         const ModeSchedule& sched) {
  return extended_diag(cr.ul_gain, ul_user, sched.rx_mode, "extended_ul_channel");
}

ChannelOutput apply_channel(const ChannelRealization& cr, const ModeSchedule& sched,
                            const CVec& x_dl, const std::vector<CVec>& x_ul,
                            const std::vector<CVec>& noise_dl, const CVec& noise_ul) {
  const int n = sched.length();
  const auto dl_users = cr.dl_gain.rows();
  const auto ul_users = cr.ul_gain.rows();
  if (x_dl.size() != n || noise_ul.size() != n ||
      static_cast<Index>(x_ul.size()) != ul_users ||
      static_cast<Index>(noise_dl.size()) != dl_users) {
    throw InvalidDimensionError("apply_channel: length mismatch");
  }
  for (const CVec& x : x_ul) {
    if (x.size() != n) throw InvalidDimensionError("apply_channel: UL input length mismatch");
  }
  for (const CVec& z : noise_dl) {
    if (z.size() != n) throw InvalidDimensionError("apply_channel: DL noise length mismatch");
  }

  ChannelOutput out;
  out.dl.reserve(dl_users);
  for (Index i = 1; i <= dl_users; ++i) {
    CVec y = extended_dl_channel(cr, static_cast<int>(i), sched) * x_dl;
    for (Index j = 0; j < ul_users; ++j) {
      y += cr.cross_gain(i - 1, j) * x_ul[j];
    }
    y += noise_dl[i - 1];
    out.dl.push_back(std::move(y));
  }
  out.ul = noise_ul;
  for (Index j = 1; j <= ul_users; ++j) {
    out.ul += extended_ul_channel(cr, static_cast<int>(j), sched) * x_ul[j - 1];
  }
  return out;
}

namespace {

void dump_block(std::ostringstream& os, const char* type, const CMat& m) {
  char buf[96];
  for (Index a = 0; a < m.rows(); ++a) {
    for (Index b = 0; b < m.cols(); ++b) {
      std::snprintf(buf, sizeof(buf), "%s,%lld,%lld,%.17g,%.17g\n", type,
                    static_cast<long long>(a + 1), static_cast<long long>(b + 1),
                    m(a, b).real(), m(a, b).imag());
      os << buf;
    }
  }
}

}  // namespace

std::string channel_to_csv(const ChannelRealization& cr) {
  std::ostringstream os;
  os << "link,index1,index2,real,imag\n";
  dump_block(os, "dl", cr.dl_gain);
  dump_block(os, "ul", cr.ul_gain);
  dump_block(os, "cross", cr.cross_gain);
  return os.str();
}

ChannelRealization channel_from_csv(const NetworkConfig& cfg, const std::string& text) {
  cfg.validate();
  ChannelRealization cr;
  cr.dl_gain = CMat::Zero(cfg.dl_users, cfg.tx_modes);
  cr.ul_gain = CMat::Zero(cfg.ul_users, cfg.rx_modes);
  cr.cross_gain = CMat::Zero(cfg.dl_users, cfg.ul_users);

  std::istringstream is(text);
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (first) {  // header row
      first = false;
      continue;
    }
    std::istringstream ls(line);
    std::string type, f1, f2, fre, fim;
    if (!std::getline(ls, type, ',') || !std::getline(ls, f1, ',') ||
        !std::getline(ls, f2, ',') || !std::getline(ls, fre, ',') ||
        !std::getline(ls, fim)) {
      throw InvalidRangeError("channel_from_csv: malformed line: " + line);
    }
    const Index a = std::stoll(f1) - 1;
    const Index b = std::stoll(f2) - 1;
    const Cplx v(std::stod(fre), std::stod(fim));
    CMat* target = nullptr;
    if (type == "dl") target = &cr.dl_gain;
    else if (type == "ul") target = &cr.ul_gain;
    else if (type == "cross") target = &cr.cross_gain;
    else throw InvalidRangeError("channel_from_csv: unknown link type: " + type);
    if (a < 0 || a >= target->rows() || b < 0 || b >= target->cols()) {
      throw InvalidRangeError("channel_from_csv: index out of range: " + line);
    }
    (*target)(a, b) = v;
  }
  return cr;
}

}  // namespace fdbia
