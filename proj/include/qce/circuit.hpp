#pragma once

#include "qce/algebra.hpp"

#include <map>
#include <optional>
#include <string>

namespace qce {

/// A system: one wire of the circuit. Source/sink are derived from the
/// gate list; boundary ends are encoded as -1.
struct Wire {
  std::string id;
  Index dim = 0;
  int source = -1;  // gate index producing this wire, -1 = circuit input
  int sink = -1;    // gate index consuming it, -1 = circuit output
};

struct Gate {
  std::string id;
  std::vector<std::string> inputs;   // ordered, leftmost most significant
  std::vector<std::string> outputs;
  Matrix matrix;                     // unitary, dim = prod(input dims)
};

struct Circuit {
  std::vector<Wire> wires;
  std::vector<Gate> gates;
};

struct Bubble {
  std::vector<std::string> wires;
};

enum class Side { In, Out };

/// A point on a wire: ingoing decompositions sit just before the wire's
/// midpoint, outgoing ones just after.
struct Placement {
  std::string wire;
  Side side = Side::In;
};

inline bool operator==(const Placement& a, const Placement& b) {
  return a.wire == b.wire && a.side == b.side;
}

struct LabeledFactor {
  std::string label;
  Index dim = 0;
};

/// Single-shot unitary obtained by cutting every bubble wire: inputs are
/// the upper halves (bubble order first, then remaining circuit inputs),
/// outputs the lower halves then remaining circuit outputs.
struct SingleShotChannel {
  Matrix unitary;
  std::vector<LabeledFactor> inputs;
  std::vector<LabeledFactor> outputs;
  int n_cut = 0;  // leading factors on both sides are the cut wires
};

/// Names every invariant violation; empty means the circuit is valid.
std::vector<std::string> validate_circuit(const Circuit& c);

/// Total order over wires extending the DAG order, lexicographic tie-break.
std::vector<std::string> temporal_order(const Circuit& c);

/// Composition of all gates; maps boundary inputs to boundary outputs,
/// both ordered lexicographically by wire id.
Matrix total_unitary(const Circuit& c);

/// Gates reversed and conjugated; sources and sinks swap roles.
Circuit reverse_circuit(const Circuit& c);

SingleShotChannel cut_bubble(const Circuit& c, const Bubble& b);

/// Contract each cut output back into the matching cut input; recovers
/// total_unitary of the original circuit.
Matrix resplice(const SingleShotChannel& ch);

/// Heisenberg representation: the operator at its slice, conjugated back
/// to the circuit input slice.
Matrix heisenberg_embed(const Circuit& c, const Matrix& op, const Placement& at);

/// Validated circuit with the execution machinery used by the heavier
/// operations. Row spaces of matrices are tracked as "frames": ordered
/// lists of live wires.
class CompiledCircuit {
 public:
  explicit CompiledCircuit(const Circuit& c);  // throws InputError if invalid

  const Circuit& circuit() const { return c_; }
  const std::vector<std::string>& boundary_inputs() const { return boundary_in_; }
  const std::vector<std::string>& boundary_outputs() const { return boundary_out_; }
  const std::vector<std::string>& wire_order() const { return wire_order_; }
  Index total_dim() const { return total_dim_; }

  int wire_index(const std::string& id) const;
  const Wire& wire(int idx) const { return c_.wires[idx]; }
  int n_gates() const { return static_cast<int>(c_.gates.size()); }
  const Gate& gate(int idx) const { return c_.gates[idx]; }
  const std::vector<int>& gate_topo() const { return gate_topo_; }

  /// g reaches h through the gate DAG (reflexive).
  bool gate_reaches(int g, int h) const { return reach_[g][h]; }

  /// Gates that must fire before wire w exists, in topological order.
  std::vector<int> ancestors_of_wire(int w) const;

  /// Position of wire w in the temporal total order.
  int temporal_rank(int w) const { return temporal_rank_[w]; }

  struct Frame {
    std::vector<int> wires;
    DimVector dims;
    Index dim() const { return product(dims); }
    int position_of(int wire) const;
  };

  Frame initial_frame() const;

  /// m <- G m (forward) or m <- G^dag m (backward), G the gate embedded at
  /// the frame; the frame is updated in place.
  void apply_gate_rows(Matrix& m, Frame& f, int g, bool forward) const;

  /// m <- op m with op acting on the given frame positions (in order).
  void apply_op_rows(Matrix& m, const Frame& f, const Matrix& op,
                     const std::vector<int>& positions) const;

  /// Reorder frame factors; m's rows are shuffled accordingly.
  void permute_rows(Matrix& m, Frame& f, const std::vector<int>& new_wires) const;

  /// Unitary from the circuit input slice to the slice where `w` is live
  /// (all ancestor gates applied), with the resulting frame.
  std::pair<Matrix, Frame> slice_unitary(int w) const;

 private:
  Circuit c_;
  std::map<std::string, int> wire_idx_;
  std::vector<std::string> boundary_in_, boundary_out_, wire_order_;
  std::vector<int> gate_topo_;
  std::vector<std::vector<bool>> reach_;
  std::vector<int> temporal_rank_;
  Index total_dim_ = 0;
};

}  // namespace qce
