#include "qce/influence.hpp"

#include <algorithm>

namespace qce {

void ChannelSplit::validate() const {
  if (dim_a < 1 || dim_b < 1 || dim_c < 1 || dim_d < 1)
    throw InputError("channel split: dims must be >= 1");
  if (dim_a * dim_b != dim_c * dim_d)
    throw InputError("channel split: input and output dims differ");
  if (unitary.rows() != dim_c * dim_d || unitary.cols() != dim_a * dim_b)
    throw InputError("channel split: matrix does not match dims");
  if (!is_unitary(unitary, 1e-8))
    throw InputError("channel split: matrix is not unitary");
}

ChannelSplit ChannelSplit::reversed() const {
  ChannelSplit r;
  r.unitary = unitary.adjoint();
  r.dim_a = dim_c;
  r.dim_b = dim_d;
  r.dim_c = dim_a;
  r.dim_d = dim_b;
  return r;
}

Matrix lift_output(const ChannelSplit& ch, const Matrix& n) {
  if (n.rows() != ch.dim_d) throw InputError("lift_output: dim mismatch");
  return ch.unitary.adjoint() * kron(eye(ch.dim_c), n) * ch.unitary;
}

Matrix lift_input(const ChannelSplit& ch, const Matrix& m) {
  if (m.rows() != ch.dim_a) throw InputError("lift_input: dim mismatch");
  return kron(m, eye(ch.dim_b));
}

namespace {

// elementary matrix units as an operator basis
std::vector<Matrix> unit_basis(Index d) {
  std::vector<Matrix> out;
  out.reserve(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      out.push_back(std::move(e));
    }
  return out;
}

}  // namespace

bool quantum_influence(const ChannelSplit& ch, double tol) {
  ch.validate();
  const auto ea = unit_basis(ch.dim_a);
  const auto ed = unit_basis(ch.dim_d);
  for (const auto& n : ed) {
    const Matrix k = lift_output(ch, n);
    for (const auto& m : ea) {
      const Matrix me = lift_input(ch, m);
      if (max_abs(me * k - k * me) > tol) return true;
    }
  }
  return false;
}

InfluenceWitness interference_influence(const ChannelSplit& ch,
                                        const ProjDecomp& pa,
                                        const ProjDecomp& pd, double tol) {
  ch.validate();
  if (pa.dim() != ch.dim_a)
    throw InputError("interference_influence: input decomposition dim mismatch");
  if (pd.dim() != ch.dim_d)
    throw InputError("interference_influence: output decomposition dim mismatch");
  InfluenceWitness w;
  std::vector<Matrix> lifted_d;
  for (const auto& q : pd.projectors) lifted_d.push_back(lift_output(ch, q));
  for (Index i = 0; i < pa.size(); ++i) {
    const Matrix pi = lift_input(ch, pa.projectors[i]);
    for (Index j = 0; j < pd.size(); ++j) {
      const double norm = max_abs(pi * lifted_d[j] - lifted_d[j] * pi);
      if (norm > w.norm) {
        w.norm = norm;
        w.i = static_cast<int>(i);
        w.j = static_cast<int>(j);
      }
    }
  }
  w.influence = w.norm > tol;
  return w;
}

std::vector<RealVector> default_phase_grid(Index n_projectors, int extra,
                                           std::uint64_t seed) {
  std::vector<RealVector> grid;
  for (Index i = 0; i < n_projectors; ++i) {
    RealVector v = RealVector::Zero(n_projectors);
    v(i) = M_PI;
    grid.push_back(v);
  }
  Rng rng(seed ^ 0x9d2c5680u);
  for (int k = 0; k < extra; ++k) {
    RealVector v(n_projectors);
    for (Index i = 0; i < n_projectors; ++i) v(i) = 2.0 * M_PI * rng.uniform();
    grid.push_back(v);
  }
  return grid;
}

bool phase_signal_oracle(const ChannelSplit& ch, const ProjDecomp& pa,
                         const ProjDecomp& pd,
                         const std::vector<RealVector>& phase_grid, double tol) {
  ch.validate();
  if (phase_grid.empty()) throw InputError("phase_signal_oracle: empty grid");
  const Index d_in = ch.dim_a * ch.dim_b;

  std::vector<Matrix> lifted_d;
  for (const auto& q : pd.projectors) lifted_d.push_back(lift_output(ch, q));

  for (const auto& phases : phase_grid) {
    if (phases.size() != pa.size())
      throw InputError("phase_signal_oracle: phase vector size mismatch");
    Matrix va = Matrix::Zero(ch.dim_a, ch.dim_a);
    for (Index i = 0; i < pa.size(); ++i)
      va += std::exp(Complex(0.0, phases(i))) * pa.projectors[i];
    const Matrix v = kron(va, eye(ch.dim_b));
    for (const auto& kd : lifted_d) {
      const Matrix delta = v.adjoint() * kd * v - kd;
      // outcome probabilities on every basis-state input
      for (Index b = 0; b < d_in; ++b)
        if (std::abs(delta(b, b).real()) > tol) return true;
    }
  }
  return false;
}

void sort_placements(const CompiledCircuit& cc, std::vector<PlacedDecomp>& placed) {
  std::stable_sort(placed.begin(), placed.end(),
                   [&](const PlacedDecomp& a, const PlacedDecomp& b) {
                     int ra = cc.temporal_rank(cc.wire_index(a.at.wire));
                     int rb = cc.temporal_rank(cc.wire_index(b.at.wire));
                     if (ra != rb) return ra < rb;
                     return a.at.side == Side::In && b.at.side == Side::Out;
                   });
}

InfluenceGraph influence_graph(const Circuit& c,
                               const std::vector<PlacedDecomp>& placed,
                               double tol) {
  CompiledCircuit cc(c);
  InfluenceGraph g;
  g.nodes = placed;
  sort_placements(cc, g.nodes);

  std::vector<std::vector<Matrix>> lifted(g.nodes.size());
  for (std::size_t k = 0; k < g.nodes.size(); ++k) {
    const auto& node = g.nodes[k];
    const int w = cc.wire_index(node.at.wire);
    if (node.decomp.dim() != cc.wire(w).dim)
      throw InputError("influence_graph: decomposition dim != wire dim");
    for (const auto& p : node.decomp.projectors)
      lifted[k].push_back(heisenberg_embed(c, p, node.at));
  }

  for (std::size_t a = 0; a < g.nodes.size(); ++a)
    for (std::size_t b = a + 1; b < g.nodes.size(); ++b) {
      InfluenceEdge e;
      e.from = static_cast<int>(a);
      e.to = static_cast<int>(b);
      for (std::size_t i = 0; i < lifted[a].size(); ++i)
        for (std::size_t j = 0; j < lifted[b].size(); ++j) {
          double norm =
              max_abs(lifted[a][i] * lifted[b][j] - lifted[b][j] * lifted[a][i]);
          if (norm > e.witness_norm) {
            e.witness_norm = norm;
            e.witness_i = static_cast<int>(i);
            e.witness_j = static_cast<int>(j);
          }
        }
      e.influence = e.witness_norm > tol;
      g.edges.push_back(e);
    }
  return g;
}

}  // namespace qce
