#include "qce/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace qce {

namespace {

struct Derived {
  std::map<std::string, int> wire_idx;
  bool ok = true;
};

Derived derive_endpoints(Circuit& c, std::vector<std::string>* diags) {
  Derived d;
  auto report = [&](const std::string& msg) {
    d.ok = false;
    if (diags) diags->push_back(msg);
  };

  for (int i = 0; i < static_cast<int>(c.wires.size()); ++i) {
    const auto& w = c.wires[i];
    if (w.dim < 1) report("wire '" + w.id + "': dim must be >= 1");
    if (!d.wire_idx.emplace(w.id, i).second)
      report("wire '" + w.id + "': duplicate id");
    c.wires[i].source = -1;
    c.wires[i].sink = -1;
  }

  std::set<std::string> gate_ids;
  for (int g = 0; g < static_cast<int>(c.gates.size()); ++g) {
    const auto& gate = c.gates[g];
    if (!gate_ids.insert(gate.id).second)
      report("gate '" + gate.id + "': duplicate id");
    if (gate.inputs.empty() || gate.outputs.empty())
      report("gate '" + gate.id + "': needs at least one input and output");
    for (const auto& in : gate.inputs) {
      auto it = d.wire_idx.find(in);
      if (it == d.wire_idx.end()) {
        report("gate '" + gate.id + "': unknown input wire '" + in + "'");
        continue;
      }
      if (c.wires[it->second].sink != -1)
        report("wire '" + in + "': consumed by more than one gate");
      c.wires[it->second].sink = g;
    }
    for (const auto& out : gate.outputs) {
      auto it = d.wire_idx.find(out);
      if (it == d.wire_idx.end()) {
        report("gate '" + gate.id + "': unknown output wire '" + out + "'");
        continue;
      }
      if (c.wires[it->second].source != -1)
        report("wire '" + out + "': produced by more than one gate");
      c.wires[it->second].source = g;
    }
  }
  return d;
}

Index dims_product(const Circuit& c, const Derived& d,
                   const std::vector<std::string>& ids) {
  Index p = 1;
  for (const auto& id : ids) {
    auto it = d.wire_idx.find(id);
    if (it == d.wire_idx.end()) return -1;
    p *= c.wires[it->second].dim;
  }
  return p;
}

// deterministic topological order of gates (lexicographic by gate id
// among ready gates); empty result + flag on cycle
std::pair<std::vector<int>, bool> topo_gates(const Circuit& c) {
  const int n = static_cast<int>(c.gates.size());
  std::vector<std::set<int>> preds(n);
  std::map<std::string, int> src;
  for (int g = 0; g < n; ++g)
    for (const auto& out : c.gates[g].outputs) src[out] = g;
  for (int g = 0; g < n; ++g)
    for (const auto& in : c.gates[g].inputs) {
      auto it = src.find(in);
      if (it != src.end() && it->second != g) preds[g].insert(it->second);
      if (it != src.end() && it->second == g) return {{}, false};  // self-loop
    }

  std::vector<int> order;
  std::vector<bool> done(n, false);
  std::vector<int> remaining(n);
  for (int g = 0; g < n; ++g) remaining[g] = static_cast<int>(preds[g].size());
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int g = 0; g < n; ++g)
      if (!done[g] && remaining[g] == 0 &&
          (pick < 0 || c.gates[g].id < c.gates[pick].id))
        pick = g;
    if (pick < 0) return {{}, false};  // cycle
    done[pick] = true;
    order.push_back(pick);
    for (int g = 0; g < n; ++g)
      if (!done[g] && preds[g].count(pick)) --remaining[g];
  }
  return {order, true};
}

}  // namespace

std::vector<std::string> validate_circuit(const Circuit& c) {
  std::vector<std::string> diags;
  Circuit copy = c;
  Derived d = derive_endpoints(copy, &diags);
  if (!d.ok) return diags;

  for (const auto& gate : c.gates) {
    const Index din = dims_product(copy, d, gate.inputs);
    const Index dout = dims_product(copy, d, gate.outputs);
    if (gate.matrix.rows() != gate.matrix.cols() ||
        gate.matrix.rows() != din || din != dout) {
      diags.push_back("gate '" + gate.id + "': dim mismatch (matrix " +
                      std::to_string(gate.matrix.rows()) + "x" +
                      std::to_string(gate.matrix.cols()) + ", inputs " +
                      std::to_string(din) + ", outputs " + std::to_string(dout) +
                      ")");
      continue;
    }
    if (!is_unitary(gate.matrix, 1e-8))
      diags.push_back("gate '" + gate.id + "': matrix is not unitary");
  }

  auto [order, acyclic] = topo_gates(c);
  if (!acyclic) diags.push_back("circuit: gate graph has a cycle");
  return diags;
}

CompiledCircuit::CompiledCircuit(const Circuit& c) : c_(c) {
  auto diags = validate_circuit(c_);
  if (!diags.empty()) {
    std::string msg = "invalid circuit:";
    for (const auto& s : diags) msg += "\n  " + s;
    throw InputError(msg);
  }
  Derived d = derive_endpoints(c_, nullptr);
  wire_idx_ = d.wire_idx;
  gate_topo_ = topo_gates(c_).first;

  const int ng = static_cast<int>(c_.gates.size());
  reach_.assign(ng, std::vector<bool>(ng, false));
  for (int g : gate_topo_) reach_[g][g] = true;
  // process in reverse topological order, propagating reachability
  for (auto it = gate_topo_.rbegin(); it != gate_topo_.rend(); ++it) {
    int g = *it;
    for (const auto& out : c_.gates[g].outputs) {
      int snk = c_.wires[wire_idx_[out]].sink;
      if (snk < 0) continue;
      for (int h = 0; h < ng; ++h)
        if (reach_[snk][h]) reach_[g][h] = true;
    }
  }

  for (const auto& w : c_.wires) {
    if (w.source < 0) boundary_in_.push_back(w.id);
    if (w.sink < 0) boundary_out_.push_back(w.id);
  }
  std::sort(boundary_in_.begin(), boundary_in_.end());
  std::sort(boundary_out_.begin(), boundary_out_.end());

  total_dim_ = 1;
  for (const auto& id : boundary_in_) total_dim_ *= c_.wires[wire_idx_[id]].dim;
  check_dim(total_dim_, "circuit");

  // wire partial order: u < w iff sink(u) reaches source(w)
  const int nw = static_cast<int>(c_.wires.size());
  auto precedes = [&](int u, int w) {
    int su = c_.wires[u].sink, sw = c_.wires[w].source;
    return su >= 0 && sw >= 0 && reach_[su][sw];
  };
  std::vector<bool> placed(nw, false);
  temporal_rank_.assign(nw, -1);
  for (int step = 0; step < nw; ++step) {
    int pick = -1;
    for (int w = 0; w < nw; ++w) {
      if (placed[w]) continue;
      bool ready = true;
      for (int u = 0; u < nw && ready; ++u)
        if (!placed[u] && u != w && precedes(u, w)) ready = false;
      if (ready && (pick < 0 || c_.wires[w].id < c_.wires[pick].id)) pick = w;
    }
    placed[pick] = true;
    temporal_rank_[pick] = step;
    wire_order_.push_back(c_.wires[pick].id);
  }
}

int CompiledCircuit::wire_index(const std::string& id) const {
  auto it = wire_idx_.find(id);
  if (it == wire_idx_.end()) throw InputError("unknown wire '" + id + "'");
  return it->second;
}

std::vector<int> CompiledCircuit::ancestors_of_wire(int w) const {
  std::vector<int> out;
  int src = c_.wires[w].source;
  if (src < 0) return out;
  for (int g : gate_topo_)
    if (reach_[g][src]) out.push_back(g);
  return out;
}

int CompiledCircuit::Frame::position_of(int wire) const {
  for (int i = 0; i < static_cast<int>(wires.size()); ++i)
    if (wires[i] == wire) return i;
  return -1;
}

CompiledCircuit::Frame CompiledCircuit::initial_frame() const {
  Frame f;
  for (const auto& id : boundary_in_) {
    int w = wire_idx_.at(id);
    f.wires.push_back(w);
    f.dims.push_back(c_.wires[w].dim);
  }
  return f;
}

namespace {

std::vector<Index> frame_strides(const DimVector& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

// offsets of the multi-index over `dims` against the given strides
std::vector<Index> offsets_of(const DimVector& dims, const std::vector<Index>& strides) {
  Index n = 1;
  for (Index d : dims) n *= d;
  std::vector<Index> off(n, 0);
  for (Index lin = 0; lin < n; ++lin) {
    Index rem = lin;
    for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
      off[lin] += (rem % dims[i]) * strides[i];
      rem /= dims[i];
    }
  }
  return off;
}

// m <- A m where A acts as `op` on `positions` of the in-frame and maps
// those factors to `out_dims` (inserted at the smallest position); all
// other factors pass through.
void apply_general(Matrix& m, const DimVector& in_frame_dims,
                   const std::vector<int>& positions, const DimVector& op_in_dims,
                   const DimVector& op_out_dims, const Matrix& op,
                   DimVector* out_frame_dims_result) {
  const Index d_total = product(in_frame_dims);
  if (m.rows() != d_total) throw InputError("apply: frame/matrix mismatch");
  const Index p_in = product(op_in_dims);
  const Index p_out = product(op_out_dims);
  if (op.rows() != p_out || op.cols() != p_in)
    throw InputError("apply: operator dims mismatch");

  // output frame: drop positions, splice op_out_dims at the smallest one
  const int insert_at = *std::min_element(positions.begin(), positions.end());
  DimVector out_frame_dims;
  std::vector<int> rest_positions;  // positions (in-frame) of pass-through factors
  std::vector<int> rest_out_positions;
  {
    std::vector<bool> taken(in_frame_dims.size(), false);
    for (int p : positions) taken[p] = true;
    int out_pos = 0;
    for (int i = 0; i < static_cast<int>(in_frame_dims.size()); ++i) {
      if (i == insert_at)
        for (Index dd : op_out_dims) {
          out_frame_dims.push_back(dd);
          ++out_pos;
        }
      if (!taken[i]) {
        rest_positions.push_back(i);
        out_frame_dims.push_back(in_frame_dims[i]);
        rest_out_positions.push_back(out_pos++);
      }
    }
    if (insert_at == static_cast<int>(in_frame_dims.size()))
      for (Index dd : op_out_dims) out_frame_dims.push_back(dd);
  }
  const auto in_strides = frame_strides(in_frame_dims);
  const auto out_strides = frame_strides(out_frame_dims);

  DimVector rest_dims;
  std::vector<Index> rest_in_strides, rest_out_strides;
  for (std::size_t k = 0; k < rest_positions.size(); ++k) {
    rest_dims.push_back(in_frame_dims[rest_positions[k]]);
    rest_in_strides.push_back(in_strides[rest_positions[k]]);
    rest_out_strides.push_back(out_strides[rest_out_positions[k]]);
  }
  std::vector<Index> gate_in_strides, gate_out_strides;
  for (std::size_t k = 0; k < positions.size(); ++k)
    gate_in_strides.push_back(in_strides[positions[k]]);
  {
    int out_pos_first = 0;
    std::vector<bool> taken(in_frame_dims.size(), false);
    for (int p : positions) taken[p] = true;
    for (int i = 0; i < insert_at; ++i)
      if (!taken[i]) ++out_pos_first;
    for (std::size_t k = 0; k < op_out_dims.size(); ++k)
      gate_out_strides.push_back(out_strides[out_pos_first + k]);
  }

  const auto off_gate_in = offsets_of(op_in_dims, gate_in_strides);
  const auto off_gate_out = offsets_of(op_out_dims, gate_out_strides);
  const auto off_rest_in = offsets_of(rest_dims, rest_in_strides);
  const auto off_rest_out = offsets_of(rest_dims, rest_out_strides);

  const Index cols = m.cols();
  Matrix out = Matrix::Zero(product(out_frame_dims), cols);
  Vector x(p_in), y(p_out);
  for (Index c = 0; c < cols; ++c) {
    const Complex* src = m.col(c).data();
    Complex* dst = out.col(c).data();
    for (std::size_t r = 0; r < off_rest_in.size(); ++r) {
      const Index oi = off_rest_in[r], oo = off_rest_out[r];
      for (Index a = 0; a < p_in; ++a) x(a) = src[oi + off_gate_in[a]];
      y.noalias() = op * x;
      for (Index b = 0; b < p_out; ++b) dst[oo + off_gate_out[b]] = y(b);
    }
  }
  m.swap(out);
  if (out_frame_dims_result) *out_frame_dims_result = out_frame_dims;
}

}  // namespace

void CompiledCircuit::apply_gate_rows(Matrix& m, Frame& f, int g,
                                      bool forward) const {
  const Gate& gate = c_.gates[g];
  const auto& from_ids = forward ? gate.inputs : gate.outputs;
  const auto& to_ids = forward ? gate.outputs : gate.inputs;

  std::vector<int> positions;
  DimVector op_in_dims, op_out_dims;
  for (const auto& id : from_ids) {
    int w = wire_idx_.at(id);
    int pos = f.position_of(w);
    if (pos < 0)
      throw InputError("apply_gate: wire '" + id + "' not live in frame");
    positions.push_back(pos);
    op_in_dims.push_back(c_.wires[w].dim);
  }
  std::vector<int> to_wires;
  for (const auto& id : to_ids) {
    int w = wire_idx_.at(id);
    to_wires.push_back(w);
    op_out_dims.push_back(c_.wires[w].dim);
  }

  Matrix op = forward ? gate.matrix : Matrix(gate.matrix.adjoint());
  DimVector new_dims;
  apply_general(m, f.dims, positions, op_in_dims, op_out_dims, op, &new_dims);

  // rebuild frame wire list to match apply_general's factor splice
  const int insert_at = *std::min_element(positions.begin(), positions.end());
  std::vector<int> new_wires;
  std::vector<bool> taken(f.wires.size(), false);
  for (int p : positions) taken[p] = true;
  for (int i = 0; i < static_cast<int>(f.wires.size()); ++i) {
    if (i == insert_at)
      for (int w : to_wires) new_wires.push_back(w);
    if (!taken[i]) new_wires.push_back(f.wires[i]);
  }
  if (insert_at == static_cast<int>(f.wires.size()))
    for (int w : to_wires) new_wires.push_back(w);
  f.wires = std::move(new_wires);
  f.dims = std::move(new_dims);
}

void CompiledCircuit::apply_op_rows(Matrix& m, const Frame& f, const Matrix& op,
                                    const std::vector<int>& positions) const {
  DimVector in_dims, out_dims;
  for (int p : positions) {
    in_dims.push_back(f.dims[p]);
    out_dims.push_back(f.dims[p]);
  }
  DimVector scratch;
  apply_general(m, f.dims, positions, in_dims, out_dims, op, &scratch);
}

void CompiledCircuit::permute_rows(Matrix& m, Frame& f,
                                   const std::vector<int>& new_wires) const {
  if (new_wires.size() != f.wires.size())
    throw InputError("permute_rows: wire count mismatch");
  const auto in_strides = frame_strides(f.dims);
  DimVector new_dims;
  std::vector<Index> src_strides;
  for (int w : new_wires) {
    int pos = f.position_of(w);
    if (pos < 0) throw InputError("permute_rows: wire not in frame");
    new_dims.push_back(f.dims[pos]);
    src_strides.push_back(in_strides[pos]);
  }
  const auto src_off = offsets_of(new_dims, src_strides);
  Matrix out(m.rows(), m.cols());
  for (Index i = 0; i < m.rows(); ++i) out.row(i) = m.row(src_off[i]);
  m.swap(out);
  f.wires = new_wires;
  f.dims = std::move(new_dims);
}

std::pair<Matrix, CompiledCircuit::Frame> CompiledCircuit::slice_unitary(
    int w) const {
  Frame f = initial_frame();
  Matrix m = Matrix::Identity(total_dim_, total_dim_);
  for (int g : ancestors_of_wire(w)) apply_gate_rows(m, f, g, true);
  return {std::move(m), std::move(f)};
}

std::vector<std::string> temporal_order(const Circuit& c) {
  return CompiledCircuit(c).wire_order();
}

Matrix total_unitary(const Circuit& c) {
  CompiledCircuit cc(c);
  auto f = cc.initial_frame();
  Matrix m = Matrix::Identity(cc.total_dim(), cc.total_dim());
  for (int g : cc.gate_topo()) cc.apply_gate_rows(m, f, g, true);
  std::vector<int> out_order;
  for (const auto& id : cc.boundary_outputs()) out_order.push_back(cc.wire_index(id));
  cc.permute_rows(m, f, out_order);
  return m;
}

Circuit reverse_circuit(const Circuit& c) {
  Circuit r = c;
  for (auto& g : r.gates) {
    std::swap(g.inputs, g.outputs);
    g.matrix = g.matrix.adjoint().eval();
  }
  return r;
}

Matrix heisenberg_embed(const Circuit& c, const Matrix& op, const Placement& at) {
  CompiledCircuit cc(c);
  const int w = cc.wire_index(at.wire);
  if (op.rows() != cc.wire(w).dim || op.cols() != cc.wire(w).dim)
    throw InputError("heisenberg_embed: operator dim != wire dim");
  auto [wmat, frame] = cc.slice_unitary(w);
  Matrix x = wmat;
  cc.apply_op_rows(x, frame, op, {frame.position_of(w)});
  return wmat.adjoint() * x;
}

namespace {

// suffix appended to the upper half of a cut wire
const char* kCutSuffix = "::out";

}  // namespace

SingleShotChannel cut_bubble(const Circuit& c, const Bubble& b) {
  CompiledCircuit cc(c);  // validates
  std::set<std::string> cut;
  for (const auto& id : b.wires) {
    cc.wire_index(id);  // throws if missing
    if (!cut.insert(id).second)
      throw InputError("bubble: duplicate wire '" + id + "'");
  }
  // bubble wires in temporal order
  std::vector<std::string> ordered(b.wires.begin(), b.wires.end());
  std::sort(ordered.begin(), ordered.end(), [&](const auto& x, const auto& y) {
    return cc.temporal_rank(cc.wire_index(x)) < cc.temporal_rank(cc.wire_index(y));
  });

  // augmented circuit: each cut wire w keeps its id for the lower half and
  // gains w::out for the upper half feeding the original sink
  Circuit aug = c;
  for (const auto& id : ordered) {
    const Wire& w = cc.wire(cc.wire_index(id));
    Wire upper;
    upper.id = id + kCutSuffix;
    upper.dim = w.dim;
    aug.wires.push_back(upper);
    if (w.sink >= 0)
      for (auto& in : aug.gates[w.sink].inputs)
        if (in == id) in = upper.id;
  }
  Matrix u = total_unitary(aug);

  CompiledCircuit ac(aug);
  // reorder inputs: cut uppers (bubble temporal order), then the rest lex;
  // outputs: cut lowers, then the rest lex
  std::vector<std::string> in_order, out_order;
  for (const auto& id : ordered) in_order.push_back(id + kCutSuffix);
  for (const auto& id : ac.boundary_inputs())
    if (!id.ends_with(kCutSuffix) || !cut.count(id.substr(0, id.size() - 5)))
      in_order.push_back(id);
  for (const auto& id : ordered) out_order.push_back(id);
  for (const auto& id : ac.boundary_outputs())
    if (!cut.count(id)) out_order.push_back(id);

  // build permutations from lex order to the contract order
  auto perm_matrix_indices = [&](const std::vector<std::string>& target,
                                 const std::vector<std::string>& lex) {
    DimVector tdims;
    std::vector<Index> strides_lex(lex.size());
    DimVector ldims;
    for (const auto& id : lex) ldims.push_back(ac.wire(ac.wire_index(id)).dim);
    auto ls = frame_strides(ldims);
    std::vector<Index> tstrides;
    for (const auto& id : target) {
      auto it = std::find(lex.begin(), lex.end(), id);
      tdims.push_back(ac.wire(ac.wire_index(id)).dim);
      tstrides.push_back(ls[it - lex.begin()]);
    }
    return offsets_of(tdims, tstrides);  // target linear index -> lex index
  };

  auto row_map = perm_matrix_indices(out_order, ac.boundary_outputs());
  auto col_map = perm_matrix_indices(in_order, ac.boundary_inputs());
  Matrix v(u.rows(), u.cols());
  for (Index i = 0; i < u.rows(); ++i)
    for (Index j = 0; j < u.cols(); ++j) v(i, j) = u(row_map[i], col_map[j]);

  SingleShotChannel ch;
  ch.unitary = std::move(v);
  ch.n_cut = static_cast<int>(ordered.size());
  for (const auto& id : in_order)
    ch.inputs.push_back({id, ac.wire(ac.wire_index(id)).dim});
  for (const auto& id : out_order)
    ch.outputs.push_back({id, ac.wire(ac.wire_index(id)).dim});
  return ch;
}

Matrix resplice(const SingleShotChannel& ch) {
  DimVector in_dims, out_dims;
  for (const auto& f : ch.inputs) in_dims.push_back(f.dim);
  for (const auto& f : ch.outputs) out_dims.push_back(f.dim);
  Index dc = 1;
  for (int k = 0; k < ch.n_cut; ++k) {
    if (in_dims[k] != out_dims[k])
      throw InputError("resplice: cut dims disagree");
    dc *= in_dims[k];
  }
  const Index din = product(in_dims) / dc;
  const Index dout = product(out_dims) / dc;
  Matrix v = Matrix::Zero(dout, din);
  // cut factors are leading on both sides: row = a*dout + f, col = a*din + g
  for (Index a = 0; a < dc; ++a)
    v += ch.unitary.block(a * dout, a * din, dout, din);
  return v;
}

}  // namespace qce
