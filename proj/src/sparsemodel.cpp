#include "thz/sparsemodel.hpp"

#include <cmath>
#include <stdexcept>

namespace thz::sparse {

AngularGrid make_grid(int grid_size) {
  if (grid_size < 1) throw std::invalid_argument("make_grid: G >= 1");
  AngularGrid g;
  g.size = grid_size;
  g.cosines.reserve(grid_size);
  g.angles.reserve(grid_size);
  for (int t = 1; t <= grid_size; ++t) {
    const double c = 2.0 * (t - 1) / grid_size - 1.0;
    g.cosines.push_back(c);
    g.angles.push_back(std::acos(c));
  }
  return g;
}

DictionaryPair build_dictionaries(const AngularGrid& tx_grid,
                                  const AngularGrid& rx_grid, double delta_k,
                                  int n_t, int n_r) {
  DictionaryPair pair;
  pair.a_t.resize(n_t, tx_grid.size);
  pair.a_r.resize(n_r, rx_grid.size);
  for (int g = 0; g < tx_grid.size; ++g)
    pair.a_t.col(g) = channel::steering_vector(tx_grid.angles[g], delta_k, n_t);
  for (int g = 0; g < rx_grid.size; ++g)
    pair.a_r.col(g) = channel::steering_vector(rx_grid.angles[g], delta_k, n_r);
  return pair;
}

MatC sparsifying_dictionary(const DictionaryPair& pair) {
  return linalg::kron(pair.a_t.conjugate(), pair.a_r);
}

MatC equivalent_sensing(const MatC& phi, const MatC& psi) {
  if (phi.cols() != psi.rows())
    throw std::invalid_argument("equivalent_sensing: inner dimensions differ");
  return phi * psi;
}

MatC beamspace_to_channel(const VecC& h_b, const DictionaryPair& pair) {
  if (h_b.size() != pair.a_r.cols() * pair.a_t.cols())
    throw std::invalid_argument("beamspace_to_channel: length mismatch");
  const MatC h_beam = linalg::unvec(h_b, pair.a_r.cols(), pair.a_t.cols());
  return pair.a_r * h_beam * pair.a_t.adjoint();
}

DictionarySet::DictionarySet(const channel::PhysicalConfig& config, int grid_tx,
                             int grid_rx, int n_t, int n_r)
    : grid_tx_(grid_tx), grid_rx_(grid_rx) {
  const AngularGrid tx = make_grid(grid_tx);
  const AngularGrid rx = make_grid(grid_rx);
  pairs_.reserve(config.n_subcarriers);
  psis_.reserve(config.n_subcarriers);
  for (int k = 0; k < config.n_subcarriers; ++k) {
    pairs_.push_back(
        build_dictionaries(tx, rx, config.relative_frequency(k), n_t, n_r));
    psis_.push_back(sparsifying_dictionary(pairs_.back()));
  }
}

}  // namespace thz::sparse
