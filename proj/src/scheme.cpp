#include "qca/scheme.hpp"

#include <stdexcept>

namespace qca {

std::vector<int> StepScheme::gate_order(int n_targets) const {
  std::vector<int> order;
  order.reserve(n_targets);
  if (kind == SchemeKind::alternating) {
    int lo = 0, hi = n_targets - 1;
    bool left = true;
    while (lo <= hi) {
      if (left)
        order.push_back(lo++);
      else
        order.push_back(hi--);
      left = !left;
    }
  } else {
    for (int j = 0; j < n_targets; ++j)
      if ((j + parity_offset) % 2 == 1) order.push_back(j);
    for (int j = 0; j < n_targets; ++j)
      if ((j + parity_offset) % 2 == 0) order.push_back(j);
  }
  return order;
}

std::vector<int> StepScheme::dense_order(int n_targets) const {
  if (kind == SchemeKind::alternating) return gate_order(n_targets);
  // Interleave the two commuting passes: emit each odd gate, then every even
  // gate whose odd neighbours (the only gates it fails to commute with) have
  // already been emitted.
  std::vector<int> order;
  std::vector<bool> emitted(n_targets, false);
  auto is_odd = [&](int j) { return (j + parity_offset) % 2 == 1; };
  auto even_ready = [&](int j) {
    for (int nb : {j - 1, j + 1})
      if (nb >= 0 && nb < n_targets && !emitted[nb]) return false;
    return true;
  };
  auto flush_evens = [&] {
    for (int j = 0; j < n_targets; ++j)
      if (!is_odd(j) && !emitted[j] && even_ready(j)) {
        order.push_back(j);
        emitted[j] = true;
      }
  };
  for (int j = 0; j < n_targets; ++j) {
    if (!is_odd(j)) continue;
    order.push_back(j);
    emitted[j] = true;
    flush_evens();
  }
  flush_evens();
  return order;
}

std::string StepScheme::name() const {
  return kind == SchemeKind::alternating ? "alternating" : "odd_even";
}

StepScheme StepScheme::parse(const std::string& text) {
  if (text == "alternating") return StepScheme::alternating();
  if (text == "odd_even" || text == "odd-even") return StepScheme::odd_even();
  throw std::invalid_argument("unknown step scheme: " + text);
}

}  // namespace qca
