#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace cabinrl {

struct TileVar {
  std::string name;
  bool is_action = false;  // false: indexes into the state vector, true: into action variables
  int source = 0;
  double lo = 0.0;
  double hi = 1.0;
  int intervals = 1;
};

struct TilingGroup {
  int tilings = 1;
  std::vector<TileVar> vars;  // slowest-varying first
};

struct TileCoderConfig {
  std::vector<TilingGroup> groups;

  // Table-2 layout: 10 tilings over (T_a, T_m, T_o, T_i, v_i, A_r) plus 20
  // tilings over (T_a, T_i, v_i, A_r).
  static TileCoderConfig cabin_default();
};

// Action variable values for the cabin grid, ordered (T_i, v_i, A_r).
std::vector<std::vector<double>> cabin_action_table();

std::string canonical_serialization(const TileCoderConfig& config,
                                    const std::vector<std::vector<double>>& action_values);

// Binary tile features over the joint state-action space. Each tiling owns a
// contiguous weight block; tiling j within a group of n is offset by
// (j/n) * cell width along every variable; inputs are clamped to [lo, hi].
class TileCoder {
 public:
  TileCoder(TileCoderConfig config, std::vector<std::vector<double>> action_values);

  int num_tilings() const { return num_tilings_; }
  size_t total_weights() const { return total_weights_; }
  int action_count() const { return action_count_; }
  uint64_t fingerprint() const { return fingerprint_; }
  const TileCoderConfig& config() const { return config_; }

  // One weight-block base index per tiling for the state part.
  void state_bases(std::span<const double> state, int* out) const;

  // Active weight index in tiling t given its state base.
  int tile_at(int tiling, int state_base, int action) const {
    return state_base + action_parts_[static_cast<size_t>(tiling) * action_count_ + action];
  }

  void active_tiles(std::span<const double> state, int action, int* out) const;
  std::vector<int> active_tiles(std::span<const double> state, int action) const;

  // Q for every action at once (theta indexed by weight).
  void q_all(std::span<const double> theta, const int* state_bases, double* q_out) const;

  double q_value(std::span<const double> theta, std::span<const double> state, int action) const;

 private:
  struct StateBin {
    int source;
    double lo, hi, offset, width;
    int intervals, stride;
  };
  struct Tiling {
    int block_base;
    std::vector<StateBin> state_bins;
  };

  TileCoderConfig config_;
  std::vector<std::vector<double>> action_values_;
  std::vector<Tiling> tilings_;
  std::vector<int> action_parts_;  // [tiling * action_count + action]
  int num_tilings_ = 0;
  int action_count_ = 0;
  size_t total_weights_ = 0;
  uint64_t fingerprint_ = 0;
};

struct PolicyWeights {
  uint64_t fingerprint = 0;
  std::vector<double> theta;
};

PolicyWeights zero_policy(const TileCoder& coder);

// Versioned policy file: text header (magic, version, fingerprint, weight
// count) followed by the raw little-endian doubles.
void save_policy(const std::string& path, const PolicyWeights& policy);
PolicyWeights load_policy(const std::string& path);

// Throws on fingerprint mismatch between policy and coder.
void check_policy(const PolicyWeights& policy, const TileCoder& coder);

}  // namespace cabinrl
