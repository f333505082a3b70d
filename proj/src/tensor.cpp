#include "qce/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace qce {

Config& config() {
  static Config cfg = [] {
    Config c;
    if (const char* env = std::getenv("QCE_MAX_DIM")) {
      char* end = nullptr;
      long v = std::strtol(env, &end, 10);
      if (end && *end == '\0' && v > 0) c.max_dim = static_cast<Index>(v);
    }
    return c;
  }();
  return cfg;
}

std::uint64_t Rng::next() {
  // splitmix64; stable across platforms
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::integer() { return next(); }

double Rng::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Complex Rng::complex_gaussian() {
  double re = gaussian();
  double im = gaussian();
  return Complex(re, im) / std::sqrt(2.0);
}

Matrix kron_all(const std::vector<Matrix>& factors) {
  if (factors.empty()) return Matrix::Identity(1, 1);
  Matrix out = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) out = kron(out, factors[i]);
  return out;
}

Matrix eye(Index d) { return Matrix::Identity(d, d); }

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
  return (a.adjoint() * b).trace();
}

bool is_unitary(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m.adjoint() * m - eye(m.rows())) <= tol;
}

bool is_projector(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs(m * m - m) <= tol && max_abs(m - m.adjoint()) <= tol;
}

bool is_hermitian(const Matrix& m, double tol) {
  return m.rows() == m.cols() && max_abs(m - m.adjoint()) <= tol;
}

namespace {

// Strides of each factor, leftmost most significant.
std::vector<Index> strides_of(const DimVector& dims) {
  std::vector<Index> s(dims.size());
  Index acc = 1;
  for (int i = static_cast<int>(dims.size()) - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= dims[i];
  }
  return s;
}

}  // namespace

Matrix partial_trace(const Matrix& m, const DimVector& dims,
                     const std::vector<int>& keep) {
  const Index d = product(dims);
  if (m.rows() != d || m.cols() != d)
    throw InputError("partial_trace: dims inconsistent with matrix");
  for (std::size_t i = 1; i < keep.size(); ++i)
    if (keep[i] <= keep[i - 1])
      throw InputError("partial_trace: keep indices must be ascending");
  for (int k : keep)
    if (k < 0 || k >= static_cast<int>(dims.size()))
      throw InputError("partial_trace: keep index out of range");

  std::vector<int> traced;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) traced.push_back(i);

  const auto strides = strides_of(dims);
  Index dk = 1, dt = 1;
  for (int k : keep) dk *= dims[k];
  for (int t : traced) dt *= dims[t];

  // offsets of every kept / traced multi-index
  std::vector<Index> keep_off(dk, 0), tr_off(dt, 0);
  for (Index lin = 0; lin < dk; ++lin) {
    Index rem = lin, off = 0;
    for (int i = static_cast<int>(keep.size()) - 1; i >= 0; --i) {
      off += (rem % dims[keep[i]]) * strides[keep[i]];
      rem /= dims[keep[i]];
    }
    keep_off[lin] = off;
  }
  for (Index lin = 0; lin < dt; ++lin) {
    Index rem = lin, off = 0;
    for (int i = static_cast<int>(traced.size()) - 1; i >= 0; --i) {
      off += (rem % dims[traced[i]]) * strides[traced[i]];
      rem /= dims[traced[i]];
    }
    tr_off[lin] = off;
  }

  Matrix out = Matrix::Zero(dk, dk);
  for (Index r = 0; r < dk; ++r)
    for (Index c = 0; c < dk; ++c) {
      Complex acc = 0.0;
      for (Index t = 0; t < dt; ++t)
        acc += m(keep_off[r] + tr_off[t], keep_off[c] + tr_off[t]);
      out(r, c) = acc;
    }
  return out;
}

Matrix embed_at(const Matrix& op, const DimVector& dims,
                const std::vector<int>& at) {
  const Index d = product(dims);
  check_dim(d, "embed_at");
  Index dop = 1;
  for (int a : at) dop *= dims[a];
  if (op.rows() != dop || op.cols() != dop)
    throw InputError("embed_at: operator dims do not match factors");

  const auto strides = strides_of(dims);
  std::vector<int> rest;
  for (int i = 0; i < static_cast<int>(dims.size()); ++i)
    if (std::find(at.begin(), at.end(), i) == at.end()) rest.push_back(i);
  Index dr = 1;
  for (int r : rest) dr *= dims[r];

  std::vector<Index> op_off(dop, 0), rest_off(dr, 0);
  for (Index lin = 0; lin < dop; ++lin) {
    Index rem = lin, off = 0;
    for (int i = static_cast<int>(at.size()) - 1; i >= 0; --i) {
      off += (rem % dims[at[i]]) * strides[at[i]];
      rem /= dims[at[i]];
    }
    op_off[lin] = off;
  }
  for (Index lin = 0; lin < dr; ++lin) {
    Index rem = lin, off = 0;
    for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
      off += (rem % dims[rest[i]]) * strides[rest[i]];
      rem /= dims[rest[i]];
    }
    rest_off[lin] = off;
  }

  Matrix out = Matrix::Zero(d, d);
  for (Index a = 0; a < dop; ++a)
    for (Index b = 0; b < dop; ++b) {
      const Complex v = op(a, b);
      if (v == Complex(0.0)) continue;
      for (Index r = 0; r < dr; ++r)
        out(op_off[a] + rest_off[r], op_off[b] + rest_off[r]) = v;
    }
  return out;
}

OperatorBasis orthonormalize(const std::vector<Matrix>& ops, double tol) {
  OperatorBasis basis;
  if (ops.empty()) return basis;
  basis.dim = ops[0].rows();
  double scale = 0.0;
  for (const auto& m : ops) {
    if (m.rows() != basis.dim || m.cols() != basis.dim)
      throw InputError("orthonormalize: mixed dimensions");
    scale = std::max(scale, m.norm());
  }
  if (scale == 0.0) return basis;

  for (const auto& m : ops) {
    Matrix r = m;
    // two passes of modified Gram-Schmidt for numerical stability
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& b : basis.ops) r -= hs_inner(b, r) * b;
    double n = r.norm();
    if (n > tol * scale * static_cast<double>(basis.dim))
      basis.ops.push_back(r / n);
  }
  return basis;
}

std::vector<Vector> nullspace(const Matrix& a, double tol) {
  std::vector<Vector> out;
  if (a.cols() == 0) return out;
  if (a.rows() == 0) {
    for (Index i = 0; i < a.cols(); ++i) {
      Vector e = Vector::Zero(a.cols());
      e(i) = 1.0;
      out.push_back(e);
    }
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() ? sv(0) : 0.0;
  const double thresh =
      tol * std::max(smax, 1e-300) * static_cast<double>(std::max(a.rows(), a.cols()));
  const Index rank_bound = std::min(a.rows(), a.cols());
  for (Index i = 0; i < a.cols(); ++i) {
    const double s = i < rank_bound ? sv(i) : 0.0;
    if (s <= thresh) out.push_back(svd.matrixV().col(i));
  }
  return out;
}

std::vector<std::pair<double, Matrix>> herm_eig_projectors(const Matrix& h,
                                                           double group_tol) {
  if (!is_hermitian(h, 1e-9 * std::max(1.0, max_abs(h))))
    throw InputError("herm_eig_projectors: matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es((h + h.adjoint()) / 2.0);
  const auto& vals = es.eigenvalues();
  const auto& vecs = es.eigenvectors();

  std::vector<std::pair<double, Matrix>> out;
  Index i = 0;
  const Index n = h.rows();
  while (i < n) {
    Index j = i;
    while (j + 1 < n && vals(j + 1) - vals(j) <= group_tol) ++j;
    Matrix p = Matrix::Zero(n, n);
    double mean = 0.0;
    for (Index k = i; k <= j; ++k) {
      p += vecs.col(k) * vecs.col(k).adjoint();
      mean += vals(k);
    }
    mean /= static_cast<double>(j - i + 1);
    out.emplace_back(mean, std::move(p));
    i = j + 1;
  }
  return out;
}

Matrix haar_random_unitary(Index dim, std::uint64_t seed) {
  if (dim < 1) throw InputError("haar_random_unitary: dim must be >= 1");
  Rng rng(seed);
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_gaussian();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < dim; ++i) {
    Complex d = r(i, i);
    double a = std::abs(d);
    q.col(i) *= (a > 0.0) ? d / a : Complex(1.0);
  }
  return q;
}

Matrix random_hermitian(Index dim, Rng& rng) {
  Matrix g(dim, dim);
  for (Index j = 0; j < dim; ++j)
    for (Index i = 0; i < dim; ++i) g(i, j) = rng.complex_gaussian();
  return (g + g.adjoint()) / 2.0;
}

Vector random_state(Index dim, Rng& rng) {
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = rng.complex_gaussian();
  double n = v.norm();
  if (n == 0.0) return random_state(dim, rng);
  return v / n;
}

}  // namespace qce
