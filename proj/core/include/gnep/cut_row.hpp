#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace gnep {

enum class CutKind { Equilibrium, AggregatedEquilibrium, NoGood, Intersection };
enum class CutScope { Global, Subtree };

std::string_view to_string(CutKind kind);

/// coeffs^T (x, eta) <= rhs. `coeffs` is dense: all strategy variables
/// followed by one eta entry per player.
struct CutRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
  CutKind kind = CutKind::Equilibrium;
  CutScope scope = CutScope::Global;

  /// coeffs^T point - rhs; positive means the point violates the cut.
  double violation(std::span<const double> point) const;
};

}  // namespace gnep
