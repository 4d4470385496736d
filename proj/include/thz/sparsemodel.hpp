#pragma once

#include <vector>

#include "thz/channel.hpp"
#include "thz/linalg.hpp"
#include "thz/types.hpp"

namespace thz::sparse {

// Uniformly spaced directional-cosine grid: cos(theta_t) = 2(t-1)/G - 1.
struct AngularGrid {
  int size = 0;
  std::vector<double> cosines;
  std::vector<double> angles;
};

AngularGrid make_grid(int grid_size);

// Per-subcarrier transmit/receive array-response dictionaries.
struct DictionaryPair {
  MatC a_t;  // N_T x G_T
  MatC a_r;  // N_R x G_R
};

DictionaryPair build_dictionaries(const AngularGrid& tx_grid,
                                  const AngularGrid& rx_grid, double delta_k,
                                  int n_t, int n_r);

/// Sparsifying dictionary Psi[k] = conj(A_T[k]) (x) A_R[k], size
/// N_T N_R x G_T G_R; satisfies Psi vec(H_b) = vec(A_R H_b A_T^H).
MatC sparsifying_dictionary(const DictionaryPair& pair);

/// Equivalent sensing matrix Psi_tilde[k] = Phi[k] Psi[k].
MatC equivalent_sensing(const MatC& phi, const MatC& psi);

/// Maps a beamspace vector back to the antenna domain:
/// H[k] = A_R unvec(h_b) A_T^H.
MatC beamspace_to_channel(const VecC& h_b, const DictionaryPair& pair);

// Dictionaries for every subcarrier of one scenario, built once and shared.
class DictionarySet {
 public:
  DictionarySet(const channel::PhysicalConfig& config, int grid_tx, int grid_rx,
                int n_t, int n_r);

  const DictionaryPair& at(int k) const { return pairs_.at(k); }
  const MatC& psi(int k) const { return psis_.at(k); }
  int n_subcarriers() const { return static_cast<int>(pairs_.size()); }
  int grid_tx() const { return grid_tx_; }
  int grid_rx() const { return grid_rx_; }

 private:
  int grid_tx_;
  int grid_rx_;
  std::vector<DictionaryPair> pairs_;
  std::vector<MatC> psis_;
};

}  // namespace thz::sparse
