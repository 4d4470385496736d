#pragma once

#include <bit>
#include <stdexcept>
#include <string>
#include <vector>

#include "thz/rng.hpp"
#include "thz/types.hpp"

namespace thz {

// Unit-power M-ary PSK alphabet with Gray-coded bit labels.
class Constellation {
 public:
  static Constellation psk(int order) {
    if (order < 2 || (order & (order - 1)) != 0)
      throw std::invalid_argument("Constellation: order must be a power of two");
    Constellation c;
    c.order_ = order;
    c.bits_per_symbol_ = std::bit_width(static_cast<unsigned>(order)) - 1;
    c.points_.resize(order);
    // pi/M offset for QPSK yields the conventional {+-1 +-1j}/sqrt(2) points.
    const double offset = (order == 4) ? kPi / 4.0 : 0.0;
    for (int i = 0; i < order; ++i)
      c.points_[i] = std::polar(1.0, 2.0 * kPi * i / order + offset);
    return c;
  }

  static Constellation from_name(const std::string& name) {
    if (name == "qpsk" || name == "4psk") return psk(4);
    if (name == "8psk") return psk(8);
    if (name == "bpsk" || name == "2psk") return psk(2);
    throw std::invalid_argument("Constellation: unknown name '" + name + "'");
  }

  int order() const { return order_; }
  int bits_per_symbol() const { return bits_per_symbol_; }
  cxd point(int i) const { return points_.at(i); }

  cxd draw(Rng& rng) const {
    return points_[static_cast<int>(rng.uniform_index(order_))];
  }

  // Nearest-neighbour demodulation; ties resolve to the lowest index.
  int demodulate(cxd x) const {
    int best = 0;
    double best_d2 = std::norm(x - points_[0]);
    for (int i = 1; i < order_; ++i) {
      const double d2 = std::norm(x - points_[i]);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    return best;
  }

  int index_of(cxd symbol) const { return demodulate(symbol); }

  // Bit errors between two symbol indices under binary-reflected Gray labels.
  int bit_errors(int i, int j) const {
    const unsigned gi = static_cast<unsigned>(i) ^ (static_cast<unsigned>(i) >> 1);
    const unsigned gj = static_cast<unsigned>(j) ^ (static_cast<unsigned>(j) >> 1);
    return std::popcount(gi ^ gj);
  }

 private:
  int order_ = 0;
  int bits_per_symbol_ = 0;
  std::vector<cxd> points_;
};

}  // namespace thz
