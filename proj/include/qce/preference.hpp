#pragma once

#include "qce/influence.hpp"

namespace qce {

/// The 2n decompositions of a bubble, one ingoing and one outgoing per
/// wire, stored in temporal order (In before Out per wire).
struct PreferredSet {
  Bubble bubble;
  std::vector<PlacedDecomp> entries;

  const PlacedDecomp* find(const std::string& wire, Side side) const;
};

/// The unique decomposition on A with span{P_A^i} (x) I_B =
/// centre(A ^ comm(D)) for the channel A (x) B -> C (x) D.
ProjDecomp preferred_decomposition(const ChannelSplit& ch, double tol,
                                   std::uint64_t seed);

/// Def.-4 preferred set: cut every bubble wire; each outgoing
/// decomposition is preferred by the ingoing halves under the single-shot
/// channel, each ingoing one by the outgoing halves under its adjoint.
/// Computed per wire on the exact forward light cone.
PreferredSet preferred_set(const Circuit& c, const Bubble& b, double tol,
                           std::uint64_t seed);

struct PatternReport {
  InfluenceGraph graph;
  std::vector<int> violations;  // edge indices breaking In->Out, m <= k
  bool ok() const { return violations.empty(); }
};

/// Checks that the only interference influences among the placed
/// decompositions run from ingoing to outgoing entries up the circuit.
PatternReport check_influence_pattern(const Circuit& c, const PreferredSet& ps,
                                      double tol);

/// Algebra {M on factor `a_pos` : U (M (x) I) U^dag acts as identity on the
/// output factors `d_positions`}; the building block of preference.
AlgebraBasis commuting_input_algebra(const Matrix& u, const DimVector& in_dims,
                                     int a_pos, const DimVector& out_dims,
                                     const std::vector<int>& d_positions,
                                     double tol);

}  // namespace qce
