#include "cabinrl/tile_coder.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "cabinrl/rng.hpp"
#include "cabinrl/thermal.hpp"

namespace cabinrl {

TileCoderConfig TileCoderConfig::cabin_default() {
  const TileVar ta{"T_a", false, 0, 0.0, 50.0, 26};
  const TileVar tm{"T_m", false, 1, 10.0, 40.0, 7};
  const TileVar to{"T_o", false, 2, 0.0, 40.0, 7};
  const TileVar ti{"T_i", true, 0, 0.0, 60.0, 3};
  const TileVar vi{"v_i", true, 1, 1.0, 100.0, 3};
  const TileVar ar{"A_r", true, 2, 0.0, 1.0, 3};
  TileCoderConfig cfg;
  cfg.groups.push_back({10, {ta, tm, to, ti, vi, ar}});
  cfg.groups.push_back({20, {ta, ti, vi, ar}});
  return cfg;
}

std::vector<std::vector<double>> cabin_action_table() {
  std::vector<std::vector<double>> table(kActionCount);
  for (int a = 0; a < kActionCount; ++a) {
    const HvacAction act = decode_action(a);
    table[a] = {act.vent_temp, act.vent_flow, act.recirc};
  }
  return table;
}

std::string canonical_serialization(const TileCoderConfig& config,
                                    const std::vector<std::vector<double>>& action_values) {
  std::string s = "tilecoder-v1\n";
  char buf[128];
  for (const auto& g : config.groups) {
    std::snprintf(buf, sizeof buf, "group tilings=%d\n", g.tilings);
    s += buf;
    for (const auto& v : g.vars) {
      std::snprintf(buf, sizeof buf, "var %s %s %d %.17g %.17g %d\n", v.name.c_str(),
                    v.is_action ? "action" : "state", v.source, v.lo, v.hi, v.intervals);
      s += buf;
    }
  }
  std::snprintf(buf, sizeof buf, "actions %zu\n", action_values.size());
  s += buf;
  for (const auto& vals : action_values) {
    for (double v : vals) {
      std::snprintf(buf, sizeof buf, " %.17g", v);
      s += buf;
    }
    s += '\n';
  }
  return s;
}

namespace {

int bin_index(double x, double lo, double hi, double offset, double width, int intervals) {
  const double xc = std::clamp(x, lo, hi);
  // + width keeps the argument positive (|offset| < width), so integer
  // truncation equals floor without the libm call.
  int b = static_cast<int>((xc - lo + offset + width) / width) - 1;
  if (b < 0) b = 0;
  return b >= intervals ? intervals - 1 : b;
}

}  // namespace

TileCoder::TileCoder(TileCoderConfig config, std::vector<std::vector<double>> action_values)
    : config_(std::move(config)), action_values_(std::move(action_values)) {
  if (config_.groups.empty() || action_values_.empty()) {
    throw std::invalid_argument("TileCoder: empty config or action table");
  }
  action_count_ = static_cast<int>(action_values_.size());
  fingerprint_ = fnv1a64(canonical_serialization(config_, action_values_));

  int block_base = 0;
  for (const auto& g : config_.groups) {
    if (g.tilings < 1) throw std::invalid_argument("TileCoder: tilings must be >= 1");
    // Strides: last variable fastest.
    std::vector<int> strides(g.vars.size());
    int stride = 1;
    for (size_t i = g.vars.size(); i-- > 0;) {
      const auto& v = g.vars[i];
      if (v.intervals < 1 || !(v.hi > v.lo)) {
        throw std::invalid_argument("TileCoder: bad variable grid for " + v.name);
      }
      strides[i] = stride;
      stride *= v.intervals;
    }
    const int block_size = stride;

    for (int j = 0; j < g.tilings; ++j) {
      Tiling t;
      t.block_base = block_base;
      std::vector<const TileVar*> avars;
      std::vector<int> astrides;
      std::vector<double> aoffsets;
      for (size_t i = 0; i < g.vars.size(); ++i) {
        const auto& v = g.vars[i];
        const double width = (v.hi - v.lo) / v.intervals;
        // Offset magnitude is (j/n) cell widths; the direction alternates per
        // tiling so edge clamping collapses the bottom pair of grid values in
        // half the tilings and the top pair in the other half, instead of the
        // same pair everywhere.
        const double offset = (j % 2 == 0 ? 1.0 : -1.0) *
                              (static_cast<double>(j) / g.tilings) * width;
        if (v.is_action) {
          avars.push_back(&v);
          astrides.push_back(strides[i]);
          aoffsets.push_back(offset);
        } else {
          t.state_bins.push_back({v.source, v.lo, v.hi, offset, width, v.intervals, strides[i]});
        }
      }
      tilings_.push_back(std::move(t));

      for (int a = 0; a < action_count_; ++a) {
        int part = 0;
        for (size_t i = 0; i < avars.size(); ++i) {
          const auto& v = *avars[i];
          if (v.source < 0 || v.source >= static_cast<int>(action_values_[a].size())) {
            throw std::invalid_argument("TileCoder: action variable source out of range");
          }
          const double width = (v.hi - v.lo) / v.intervals;
          part += astrides[i] * bin_index(action_values_[a][v.source], v.lo, v.hi, aoffsets[i],
                                          width, v.intervals);
        }
        action_parts_.push_back(part);
      }
      block_base += block_size;
    }
  }
  num_tilings_ = static_cast<int>(tilings_.size());
  total_weights_ = static_cast<size_t>(block_base);
}

void TileCoder::state_bases(std::span<const double> state, int* out) const {
  for (int t = 0; t < num_tilings_; ++t) {
    const Tiling& tl = tilings_[static_cast<size_t>(t)];
    int base = tl.block_base;
    for (const StateBin& b : tl.state_bins) {
      base += b.stride *
              bin_index(state[static_cast<size_t>(b.source)], b.lo, b.hi, b.offset, b.width,
                        b.intervals);
    }
    out[t] = base;
  }
}

void TileCoder::active_tiles(std::span<const double> state, int action, int* out) const {
  if (action < 0 || action >= action_count_) {
    throw std::out_of_range("TileCoder: action index out of range");
  }
  state_bases(state, out);
  for (int t = 0; t < num_tilings_; ++t) {
    out[t] = tile_at(t, out[t], action);
  }
}

std::vector<int> TileCoder::active_tiles(std::span<const double> state, int action) const {
  std::vector<int> out(static_cast<size_t>(num_tilings_));
  active_tiles(state, action, out.data());
  return out;
}

void TileCoder::q_all(std::span<const double> theta, const int* bases, double* q_out) const {
  std::fill(q_out, q_out + action_count_, 0.0);
  for (int t = 0; t < num_tilings_; ++t) {
    const int* parts = &action_parts_[static_cast<size_t>(t) * action_count_];
    const double* th = theta.data() + bases[t];
    for (int a = 0; a < action_count_; ++a) {
      q_out[a] += th[parts[a]];
    }
  }
}

double TileCoder::q_value(std::span<const double> theta, std::span<const double> state,
                          int action) const {
  std::vector<int> tiles = active_tiles(state, action);
  double q = 0.0;
  for (int i : tiles) q += theta[static_cast<size_t>(i)];
  return q;
}

PolicyWeights zero_policy(const TileCoder& coder) {
  return {coder.fingerprint(), std::vector<double>(coder.total_weights(), 0.0)};
}

void check_policy(const PolicyWeights& policy, const TileCoder& coder) {
  if (policy.fingerprint != coder.fingerprint()) {
    throw std::runtime_error("policy/config fingerprint mismatch");
  }
  if (policy.theta.size() != coder.total_weights()) {
    throw std::runtime_error("policy weight count does not match tile configuration");
  }
}

static_assert(std::endian::native == std::endian::little,
              "policy files are little-endian; big-endian hosts are unsupported");

void save_policy(const std::string& path, const PolicyWeights& policy) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open policy file for writing: " + path);
  char header[160];
  std::snprintf(header, sizeof header,
                "magic=cabinrl-policy\nversion=1\nconfig_fingerprint=%016llx\nweights=%zu\n",
                static_cast<unsigned long long>(policy.fingerprint), policy.theta.size());
  f << header;
  f.write(reinterpret_cast<const char*>(policy.theta.data()),
          static_cast<std::streamsize>(policy.theta.size() * sizeof(double)));
  if (!f) throw std::runtime_error("failed writing policy file: " + path);
}

PolicyWeights load_policy(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open policy file: " + path);
  auto expect_line = [&](const std::string& prefix) {
    std::string line;
    if (!std::getline(f, line) || line.rfind(prefix, 0) != 0) {
      throw std::runtime_error("malformed policy file (" + prefix + "): " + path);
    }
    return line.substr(prefix.size());
  };
  expect_line("magic=cabinrl-policy");
  const std::string version = expect_line("version=");
  if (version != "1") throw std::runtime_error("unsupported policy version: " + version);
  const std::string fp_hex = expect_line("config_fingerprint=");
  const std::string count_str = expect_line("weights=");

  PolicyWeights p;
  p.fingerprint = std::stoull(fp_hex, nullptr, 16);
  const size_t n = std::stoull(count_str);
  p.theta.resize(n);
  f.read(reinterpret_cast<char*>(p.theta.data()), static_cast<std::streamsize>(n * sizeof(double)));
  if (f.gcount() != static_cast<std::streamsize>(n * sizeof(double))) {
    throw std::runtime_error("truncated policy file: " + path);
  }
  return p;
}

}  // namespace cabinrl
