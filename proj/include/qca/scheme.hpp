#pragma once

#include <string>
#include <utility>
#include <vector>

namespace qca {

enum class SchemeKind { alternating, odd_even };

/// Gate-ordering scheme for one time step. Targets are indexed 0..n-1 left to
/// right; target j is controlled by padded-row sites j and j+1.
struct StepScheme {
  SchemeKind kind = SchemeKind::alternating;
  /// odd-even only: parity label of the leftmost target (0 = even, the
  /// default convention; 1 relabels it odd).
  int parity_offset = 0;

  static StepScheme alternating() { return {SchemeKind::alternating, 0}; }
  static StepScheme odd_even(int parity_offset = 0) {
    return {SchemeKind::odd_even, parity_offset};
  }

  int growth() const { return kind == SchemeKind::alternating ? 1 : 2; }
  std::pair<int, int> pads() const {
    return kind == SchemeKind::alternating ? std::pair{1, 1} : std::pair{1, 2};
  }
  int target_count(int length) const { return length + growth(); }

  /// Application order of the gates, as target indices.
  std::vector<int> gate_order(int n_targets) const;

  /// A reordering of gate_order that only swaps gates with disjoint support
  /// (an operator identity), used by the dense oracle to keep the active
  /// window small. For the alternating scheme it is gate_order itself.
  std::vector<int> dense_order(int n_targets) const;

  std::string name() const;
  static StepScheme parse(const std::string& text);
};

}  // namespace qca
