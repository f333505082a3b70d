#pragma once

#include "qce/tensor.hpp"

namespace qce {

/// Family of orthogonal projectors summing to the identity.
struct ProjDecomp {
  std::vector<Matrix> projectors;

  Index size() const { return static_cast<Index>(projectors.size()); }
  Index dim() const { return projectors.empty() ? 0 : projectors[0].rows(); }
  bool trivial() const { return projectors.size() == 1; }
};

/// The one-projector decomposition {I_d}.
ProjDecomp trivial_decomp(Index d);

/// Z-basis (computational) rank-1 decomposition on dimension d.
ProjDecomp computational_decomp(Index d);

/// Conjugate every projector: {U P U^dag}.
ProjDecomp conjugate(const ProjDecomp& d, const Matrix& u);

void validate_decomp(const ProjDecomp& d, double tol);

/// Sort projectors by (descending rank, then descending real part of the
/// first nonzero entry in row-major scan). Deterministic event labels.
void canonical_order(ProjDecomp& d);

/// Greedy max-overlap matching distance between two decompositions
/// (max-norm of matched differences; infinity-like value on size mismatch).
double decomp_distance(const ProjDecomp& a, const ProjDecomp& b);

/// HS-orthonormal basis of a *-closed subalgebra of L(C^dim).
struct AlgebraBasis {
  OperatorBasis basis;
  bool contains_identity = false;

  Index dim() const { return basis.dim; }
  Index size() const { return basis.size(); }
};

/// H = (+)_i H_L^i (x) H_R^i with the algebra acting as M_{L^i} (x) pi_{R^i}.
struct BlockStructure {
  struct Block {
    Index left_dim = 0;
    Index right_dim = 0;
    Matrix isometry;  // (ambient) x (left_dim*right_dim), orthonormal columns
  };
  Index ambient_dim = 0;
  std::vector<Block> blocks;
};

/// Smallest unital *-algebra containing the generators.
AlgebraBasis generate_algebra(const std::vector<Matrix>& generators, double tol);

/// {X : [X, G] = 0 for every basis element G}, via vectorized nullspace.
AlgebraBasis commutant(const AlgebraBasis& a, double tol);

/// Basis of the subspace intersection (closed under products when the
/// inputs are algebras).
AlgebraBasis intersect(const AlgebraBasis& a, const AlgebraBasis& b, double tol);

/// comm(a) intersected with a.
AlgebraBasis center(const AlgebraBasis& a, double tol);

/// The unique minimal projective decomposition spanning a commutative
/// algebra. Seeded generic-element extraction with retries.
ProjDecomp central_decomposition(const AlgebraBasis& a, double tol,
                                 std::uint64_t seed);

/// Artin-Wedderburn block structure of a unital *-algebra.
BlockStructure block_structure(const AlgebraBasis& a, double tol,
                               std::uint64_t seed);

/// Subspace equality via principal angles (threshold 1e-7 unless given).
bool same_span(const OperatorBasis& a, const OperatorBasis& b,
               double tol = 1e-7);

/// Membership of x in span(basis) up to tol * |x|.
bool in_span(const OperatorBasis& basis, const Matrix& x, double tol);

}  // namespace qce
