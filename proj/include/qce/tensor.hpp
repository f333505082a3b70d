#pragma once

#include "qce/types.hpp"

#include <utility>

namespace qce {

/// Deterministic RNG for everything seeded. mt19937_64 with a hand-rolled
/// Box-Muller so that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  double uniform();               // [0, 1)
  double gaussian();              // N(0, 1)
  Complex complex_gaussian();     // standard complex normal
  std::uint64_t integer();

 private:
  std::uint64_t next();
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Kronecker product, leftmost factor most significant.
template <typename DA, typename DB>
Matrix kron(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b) {
  check_dim(a.rows() * b.rows(), "kron");
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

Matrix kron_all(const std::vector<Matrix>& factors);

/// Identity of the given dimension.
Matrix eye(Index d);

/// Largest absolute entry.
double max_abs(const Matrix& m);

/// Hilbert-Schmidt inner product Tr(a^dag b).
Complex hs_inner(const Matrix& a, const Matrix& b);

bool is_unitary(const Matrix& m, double tol);
bool is_projector(const Matrix& m, double tol);
bool is_hermitian(const Matrix& m, double tol);

/// Trace over the factors *not* in `keep`; `keep` lists factor indices in
/// ascending order. Result factors stay in their original relative order.
Matrix partial_trace(const Matrix& m, const DimVector& dims,
                     const std::vector<int>& keep);

/// Embed `op` acting on the factors `at` (in that order) of a space with
/// factor dims `dims`, identity elsewhere.
Matrix embed_at(const Matrix& op, const DimVector& dims,
                const std::vector<int>& at);

/// Orthonormal basis (Hilbert-Schmidt) of a *-closed operator subspace.
struct OperatorBasis {
  Index dim = 0;                // ambient Hilbert space dimension
  std::vector<Matrix> ops;      // pairwise HS-orthonormal

  Index size() const { return static_cast<Index>(ops.size()); }
};

/// HS-orthonormal basis of span(ops) via modified Gram-Schmidt with
/// scale-aware rank decisions. Empty input gives an empty basis.
OperatorBasis orthonormalize(const std::vector<Matrix>& ops, double tol);

/// Orthonormal basis of {v : ||Av|| <= tol * sigma_max * max(rows, cols)}.
std::vector<Vector> nullspace(const Matrix& linear_map, double tol);

/// Eigendecomposition of a Hermitian matrix with eigenvalues grouped when
/// |l_i - l_j| <= group_tol; projectors are orthogonal and sum to I.
std::vector<std::pair<double, Matrix>> herm_eig_projectors(const Matrix& h,
                                                           double group_tol);

/// Haar-random unitary: QR of a complex Gaussian matrix with the R diagonal
/// phase-fixed. Deterministic for a fixed seed.
Matrix haar_random_unitary(Index dim, std::uint64_t seed);

/// Random Hermitian matrix with Gaussian entries (test-instance helper).
Matrix random_hermitian(Index dim, Rng& rng);

/// Random state vector, Haar on the sphere.
Vector random_state(Index dim, Rng& rng);

}  // namespace qce
