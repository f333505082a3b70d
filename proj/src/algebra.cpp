#include "qce/algebra.hpp"

#include <algorithm>
#include <cmath>

namespace qce {

ProjDecomp trivial_decomp(Index d) {
  ProjDecomp out;
  out.projectors.push_back(eye(d));
  return out;
}

ProjDecomp computational_decomp(Index d) {
  ProjDecomp out;
  for (Index i = 0; i < d; ++i) {
    Matrix p = Matrix::Zero(d, d);
    p(i, i) = 1.0;
    out.projectors.push_back(std::move(p));
  }
  return out;
}

ProjDecomp conjugate(const ProjDecomp& d, const Matrix& u) {
  ProjDecomp out;
  for (const auto& p : d.projectors) out.projectors.push_back(u * p * u.adjoint());
  return out;
}

void validate_decomp(const ProjDecomp& d, double tol) {
  if (d.projectors.empty()) throw InputError("decomposition: empty");
  const Index n = d.dim();
  Matrix sum = Matrix::Zero(n, n);
  for (const auto& p : d.projectors) {
    if (p.rows() != n || p.cols() != n)
      throw InputError("decomposition: mixed dimensions");
    if (!is_projector(p, tol)) throw InputError("decomposition: not a projector");
    sum += p;
  }
  if (max_abs(sum - eye(n)) > tol)
    throw InputError("decomposition: projectors do not sum to identity");
  for (std::size_t i = 0; i < d.projectors.size(); ++i)
    for (std::size_t j = i + 1; j < d.projectors.size(); ++j)
      if (max_abs(d.projectors[i] * d.projectors[j]) > tol)
        throw InputError("decomposition: projectors not orthogonal");
}

void canonical_order(ProjDecomp& d) {
  auto key = [](const Matrix& p) {
    const double rank = std::round(p.trace().real());
    const double scale = std::max(max_abs(p), 1e-300);
    double first = 0.0;
    for (Index i = 0; i < p.rows() && first == 0.0; ++i)
      for (Index j = 0; j < p.cols(); ++j)
        if (std::abs(p(i, j)) > 1e-9 * scale) {
          first = p(i, j).real();
          break;
        }
    return std::make_pair(-rank, -first);
  };
  std::stable_sort(d.projectors.begin(), d.projectors.end(),
                   [&](const Matrix& a, const Matrix& b) { return key(a) < key(b); });
}

double decomp_distance(const ProjDecomp& a, const ProjDecomp& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) return 1e300;
  std::vector<bool> used(b.projectors.size(), false);
  double dist = 0.0;
  for (const auto& p : a.projectors) {
    int best = -1;
    double best_overlap = -1.0;
    for (std::size_t j = 0; j < b.projectors.size(); ++j) {
      if (used[j]) continue;
      double ov = hs_inner(p, b.projectors[j]).real();
      if (ov > best_overlap) {
        best_overlap = ov;
        best = static_cast<int>(j);
      }
    }
    used[best] = true;
    dist = std::max(dist, max_abs(p - b.projectors[best]));
  }
  return dist;
}

bool in_span(const OperatorBasis& basis, const Matrix& x, double tol) {
  Matrix r = x;
  for (const auto& b : basis.ops) r -= hs_inner(b, r) * b;
  return r.norm() <= tol * std::max(x.norm(), 1e-300);
}

bool same_span(const OperatorBasis& a, const OperatorBasis& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const auto& m : a.ops)
    if (!in_span(b, m, tol)) return false;
  return true;
}

AlgebraBasis generate_algebra(const std::vector<Matrix>& generators, double tol) {
  AlgebraBasis out;
  if (generators.empty()) return out;
  const Index d = generators[0].rows();

  std::vector<Matrix> seed = generators;
  seed.push_back(eye(d));
  for (const auto& g : generators) seed.push_back(g.adjoint());
  OperatorBasis basis = orthonormalize(seed, tol);

  // Closure strictly grows until stable; d*d iterations is a hard cap and
  // exceeding it is a defect, not an input error.
  const Index cap = d * d + 2;
  for (Index iter = 0; iter < cap; ++iter) {
    std::vector<Matrix> next = basis.ops;
    for (const auto& x : basis.ops) {
      next.push_back(x.adjoint());
      for (const auto& y : basis.ops) next.push_back(x * y);
    }
    OperatorBasis grown = orthonormalize(next, tol);
    if (grown.size() == basis.size()) {
      out.basis = std::move(grown);
      out.contains_identity = true;
      return out;
    }
    basis = std::move(grown);
  }
  throw NumericDefect("generate_algebra: closure failed to stabilize");
}

namespace {

Matrix vec(const Matrix& m) {
  Matrix out = m;
  out.resize(m.size(), 1);
  return out;
}

Matrix unvec(const Vector& v, Index d) {
  Matrix out(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) out(i, j) = v(j * d + i);
  return out;
}

AlgebraBasis finish(std::vector<Matrix> ops, Index d, double tol) {
  AlgebraBasis out;
  out.basis = orthonormalize(ops, tol);
  out.basis.dim = d;
  out.contains_identity = out.basis.size() > 0 && in_span(out.basis, eye(d), 1e-7);
  return out;
}

}  // namespace

AlgebraBasis commutant(const AlgebraBasis& a, double tol) {
  const Index d = a.dim();
  if (d == 0) throw InputError("commutant: empty basis");
  // vec([X, G]) = (I (x) G - G^T (x) I) vec(X). The stacked commutation map
  // is condensed into its Gram matrix so the kernel solve stays d^2 x d^2.
  Matrix gram = Matrix::Zero(d * d, d * d);
  for (const auto& g : a.basis.ops) {
    Matrix t = kron(eye(d), g) - kron(g.transpose(), eye(d));
    gram += t.adjoint() * t;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
  const double lmax = es.eigenvalues().size()
                          ? std::max(es.eigenvalues().maxCoeff(), 0.0)
                          : 0.0;
  const double thresh = tol * std::sqrt(std::max(lmax, 1e-300)) *
                        static_cast<double>(d * d);
  std::vector<Matrix> sols;
  for (Index i = 0; i < d * d; ++i)
    if (std::sqrt(std::max(es.eigenvalues()(i), 0.0)) <= thresh)
      sols.push_back(unvec(es.eigenvectors().col(i), d));
  return finish(std::move(sols), d, tol);
}

AlgebraBasis intersect(const AlgebraBasis& a, const AlgebraBasis& b, double tol) {
  if (a.dim() != b.dim()) throw InputError("intersect: ambient dims differ");
  const Index d = a.dim();
  if (a.size() == 0 || b.size() == 0) return finish({}, d, tol);
  // range(A) ^ range(B) from the nullspace of [A | -B]
  Matrix ab(d * d, a.size() + b.size());
  for (Index k = 0; k < a.size(); ++k) ab.col(k) = vec(a.basis.ops[k]);
  for (Index k = 0; k < b.size(); ++k)
    ab.col(a.size() + k) = -vec(b.basis.ops[k]);
  std::vector<Matrix> sols;
  for (const auto& v : nullspace(ab, tol)) {
    Vector x = Vector::Zero(d * d);
    for (Index k = 0; k < a.size(); ++k)
      x += v(k) * Eigen::Map<const Vector>(a.basis.ops[k].data(), d * d);
    sols.push_back(unvec(x, d));
  }
  return finish(std::move(sols), d, tol);
}

AlgebraBasis center(const AlgebraBasis& a, double tol) {
  return intersect(a, commutant(a, tol), tol);
}

ProjDecomp central_decomposition(const AlgebraBasis& a, double tol,
                                 std::uint64_t seed) {
  const Index d = a.dim();
  if (d == 0 || a.size() == 0)
    throw InputError("central_decomposition: empty algebra");
  for (const auto& x : a.basis.ops)
    for (const auto& y : a.basis.ops)
      if (max_abs(x * y - y * x) > 1e-7 * std::max(1.0, max_abs(x) * max_abs(y)))
        throw InputError("central_decomposition: algebra is not commutative");

  const Index want = a.size();
  Rng rng(seed ^ 0xabcd1234u);
  for (int attempt = 0; attempt < 8; ++attempt) {
    Matrix h = Matrix::Zero(d, d);
    for (const auto& b : a.basis.ops) {
      // random Hermitian combination staying inside the (*-closed) span
      Complex c(rng.gaussian(), rng.gaussian());
      h += c * b + std::conj(c) * b.adjoint();
    }
    h = (h + h.adjoint()) / 2.0;
    auto pairs = herm_eig_projectors(h, config().group_tol);
    if (static_cast<Index>(pairs.size()) < want) continue;
    ProjDecomp out;
    for (auto& [val, p] : pairs) out.projectors.push_back(std::move(p));
    canonical_order(out);
    return out;
  }
  throw NumericDefect("central_decomposition: generic element extraction failed");
}

BlockStructure block_structure(const AlgebraBasis& a, double tol,
                               std::uint64_t seed) {
  const Index d = a.dim();
  if (!a.contains_identity)
    throw InputError("block_structure: algebra must be unital");
  BlockStructure out;
  out.ambient_dim = d;

  ProjDecomp centrals = central_decomposition(center(a, tol), tol, seed);
  Rng rng(seed ^ 0x5151u);

  for (const auto& zp : centrals.projectors) {
    const Index rank = static_cast<Index>(std::llround(zp.trace().real()));
    // orthonormal basis of the block subspace
    Eigen::SelfAdjointEigenSolver<Matrix> es(zp);
    Matrix v(d, rank);
    Index col = 0;
    for (Index i = 0; i < d; ++i)
      if (es.eigenvalues()(i) > 0.5) v.col(col++) = es.eigenvectors().col(i);

    // compress the algebra into the block
    std::vector<Matrix> compressed;
    for (const auto& m : a.basis.ops) compressed.push_back(v.adjoint() * m * v);
    OperatorBasis ab = orthonormalize(compressed, tol);

    // dim(M_L (x) I_R) = L^2 pins the factor split of the block
    const Index left = static_cast<Index>(std::llround(
        std::sqrt(static_cast<double>(ab.size()))));
    if (left * left != ab.size() || rank % left != 0)
      throw NumericDefect("block_structure: inconsistent block factorization");
    const Index right = rank / left;

    // generic Hermitian element of the compressed algebra: its eigenspaces
    // are the minimal-projector ranges, each of dimension right_dim
    std::vector<std::pair<double, Matrix>> pairs;
    for (int tries = 0; tries < 8; ++tries) {
      Matrix h = Matrix::Zero(rank, rank);
      for (const auto& b : ab.ops) {
        Complex c(rng.gaussian(), rng.gaussian());
        h += c * b + std::conj(c) * b.adjoint();
      }
      h = (h + h.adjoint()) / 2.0;
      pairs = herm_eig_projectors(h, config().group_tol);
      if (static_cast<Index>(pairs.size()) == left) break;
      pairs.clear();
    }
    if (pairs.empty())
      throw NumericDefect("block_structure: generic element extraction failed");

    // range basis of the first minimal projector
    Eigen::SelfAdjointEigenSolver<Matrix> e0(pairs[0].second);
    Matrix r0(rank, right);
    Index c0 = 0;
    for (Index i = 0; i < rank; ++i)
      if (e0.eigenvalues()(i) > 0.5) r0.col(c0++) = e0.eigenvectors().col(i);

    // partial isometries v_i : range(e_0) -> range(e_i) inside the algebra
    Matrix iso(rank, left * right);
    for (Index i = 0; i < left; ++i) {
      Matrix s;
      bool ok = false;
      for (int tries = 0; tries < 8 && !ok; ++tries) {
        Matrix g = Matrix::Zero(rank, rank);
        for (const auto& b : ab.ops)
          g += Complex(rng.gaussian(), rng.gaussian()) * b;
        s = pairs[i].second * g * pairs[0].second * r0;  // rank x right
        Eigen::JacobiSVD<Matrix> svd(s, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (svd.singularValues().minCoeff() >
            1e-8 * std::max(1.0, svd.singularValues().maxCoeff())) {
          s = svd.matrixU() * svd.matrixV().adjoint();  // polar isometry
          ok = true;
        }
      }
      if (!ok) throw NumericDefect("block_structure: partial isometry failed");
      // columns ordered |i>_L (x) |r>_R, left factor most significant
      for (Index r = 0; r < right; ++r) iso.col(i * right + r) = s.col(r);
    }

    BlockStructure::Block blk;
    blk.left_dim = left;
    blk.right_dim = right;
    blk.isometry = v * iso;
    out.blocks.push_back(std::move(blk));
  }
  return out;
}

}  // namespace qce
