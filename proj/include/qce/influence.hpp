#pragma once

#include "qce/circuit.hpp"

namespace qce {

/// Unitary channel A (x) B -> C (x) D with explicit factor dimensions.
struct ChannelSplit {
  Matrix unitary;
  Index dim_a = 1, dim_b = 1, dim_c = 1, dim_d = 1;

  void validate() const;
  ChannelSplit reversed() const;  // the channel of U^dag: C (x) D -> A (x) B
};

/// Heisenberg lift of an operator on D: U^dag (I_C (x) n) U.
Matrix lift_output(const ChannelSplit& ch, const Matrix& n);

/// Schroedinger embed of an operator on A: m (x) I_B.
Matrix lift_input(const ChannelSplit& ch, const Matrix& m);

/// Quantum causal influence A -> D: true iff some [M_A (x) I_B,
/// U^dag (I_C (x) N_D) U] has max-norm above tol, scanned over full
/// operator bases.
bool quantum_influence(const ChannelSplit& ch, double tol);

struct InfluenceWitness {
  bool influence = false;
  double norm = 0.0;  // largest commutator max-norm seen
  int i = -1, j = -1;  // witnessing projector pair, when applicable
};

/// Interference influence {P_A^i} -> {P_D^j}: some pair of Heisenberg
/// projectors fails to commute.
InfluenceWitness interference_influence(const ChannelSplit& ch,
                                        const ProjDecomp& pa,
                                        const ProjDecomp& pd, double tol);

/// Operational detector: phases between the P_A^i change some outcome
/// probability Tr((I_C (x) P_D^j) U V p V^dag U^dag) on a basis-state
/// input. Independent cross-check of the commutator test.
bool phase_signal_oracle(const ChannelSplit& ch, const ProjDecomp& pa,
                         const ProjDecomp& pd,
                         const std::vector<RealVector>& phase_grid, double tol);

/// Per-projector pi flips plus `extra` seeded random phase vectors.
std::vector<RealVector> default_phase_grid(Index n_projectors, int extra,
                                           std::uint64_t seed);

struct PlacedDecomp {
  Placement at;
  ProjDecomp decomp;
};

struct InfluenceEdge {
  int from = 0, to = 0;  // node indices, `from` earlier in temporal order
  bool influence = false;
  double witness_norm = 0.0;
  int witness_i = -1, witness_j = -1;
};

struct InfluenceGraph {
  std::vector<PlacedDecomp> nodes;  // sorted by placement temporal order
  std::vector<InfluenceEdge> edges; // all ordered pairs from < to
};

/// Fig.-2-style graph: Heisenberg-embed every placed decomposition in the
/// circuit and test pairwise commutation, earlier placement to later.
InfluenceGraph influence_graph(const Circuit& c,
                               const std::vector<PlacedDecomp>& placed,
                               double tol);

/// Sort placements by (temporal wire rank, In < Out). Stable.
void sort_placements(const CompiledCircuit& cc, std::vector<PlacedDecomp>& placed);

}  // namespace qce
