#ifndef CSTAR_ALGEBRA_HPP
#define CSTAR_ALGEBRA_HPP

// Unital *-subalgebras of M_n carried by a Hilbert-Schmidt orthonormal basis.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "cstar/matcore.hpp"
#include "cstar/random.hpp"

namespace cstar {

namespace detail {

inline ComplexVector vec(const ComplexMatrix& a) {
  return Eigen::Map<const ComplexVector>(a.data(), a.size());
}

inline ComplexMatrix unvec(const ComplexVector& v, Eigen::Index n) {
  return Eigen::Map<const ComplexMatrix>(v.data(), n, n);
}

// Rotate by a global phase so the largest entry is real and positive.
// Spans are unaffected; printed bases become readable and stable.
inline void canonical_phase(ComplexMatrix& a) {
  Eigen::Index r = 0, c = 0;
  a.cwiseAbs().maxCoeff(&r, &c);
  const double mag = std::abs(a(r, c));
  if (mag > 0.0) a *= std::conj(a(r, c)) / mag;
}

/// Incremental orthonormal frame in C^{n^2}: modified Gram-Schmidt with one
/// re-orthogonalization pass.
class SpanBuilder {
 public:
  SpanBuilder(Eigen::Index n, double tol) : n_(n), tol_(tol) {}

  /// Adds the component of `a` orthogonal to the current frame, if it is
  /// not negligible. Returns true when the dimension grew.
  bool add(const ComplexMatrix& a) {
    ComplexVector v = vec(a);
    const double original = v.norm();
    if (original == 0.0) return false;
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexVector& q : frame_) v -= q * q.dot(v);
    }
    const double residual = v.norm();
    if (residual <= tol_ * std::max(1.0, original)) return false;
    frame_.push_back(v / residual);
    return true;
  }

  std::size_t size() const { return frame_.size(); }

  std::vector<ComplexMatrix> matrices() const {
    std::vector<ComplexMatrix> out;
    out.reserve(frame_.size());
    for (const ComplexVector& q : frame_) {
      ComplexMatrix m = unvec(q, n_);
      canonical_phase(m);
      out.push_back(std::move(m));
    }
    return out;
  }

  ComplexMatrix element(std::size_t i) const { return unvec(frame_[i], n_); }

  /// HS distance from `a` to the current span.
  double distance(const ComplexMatrix& a) const {
    ComplexVector v = vec(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (const ComplexVector& q : frame_) v -= q * q.dot(v);
    }
    return v.norm();
  }

 private:
  Eigen::Index n_;
  double tol_;
  std::vector<ComplexVector> frame_;
};

}  // namespace detail

struct Membership {
  bool member = false;
  double residual = 0.0;
};

class StarAlgebra {
 public:
  StarAlgebra() = default;

  /// Wraps an already HS-orthonormal basis. With `check`, every structural
  /// invariant (orthonormality, *-closure, product closure, unit) is verified.
  static StarAlgebra from_orthonormal_basis(Eigen::Index ambient_dim,
                                            std::vector<ComplexMatrix> basis,
                                            const ToleranceConfig& cfg = {}, bool check = true) {
    if (ambient_dim <= 0) {
      throw Error(ErrorKind::InvalidInput, "ambient dimension must be positive");
    }
    for (std::size_t i = 0; i < basis.size(); ++i) {
      require_same_dim(basis[i], ambient_dim, ("basis element " + std::to_string(i)).c_str());
    }
    StarAlgebra alg;
    alg.n_ = ambient_dim;
    alg.basis_ = std::move(basis);
    alg.frame_.resize(ambient_dim * ambient_dim, static_cast<Eigen::Index>(alg.basis_.size()));
    for (std::size_t i = 0; i < alg.basis_.size(); ++i) {
      alg.frame_.col(static_cast<Eigen::Index>(i)) = detail::vec(alg.basis_[i]);
    }
    if (check) {
      const double worst = alg.structure_residual();
      if (worst > cfg.tol_rel * 10.0 * std::max<double>(1.0, static_cast<double>(ambient_dim))) {
        throw Error(ErrorKind::InvalidInput,
                    "basis does not span a unital *-algebra (residual " + detail::num(worst) +
                        ")");
      }
    }
    return alg;
  }

  Eigen::Index ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<ComplexMatrix>& basis() const { return basis_; }
  const ComplexMatrix& basis(std::size_t i) const { return basis_[i]; }
  bool contains_identity() const { return true; }

  /// HS coordinates <b_i, a> = tr(b_i* a).
  ComplexVector coefficients(const ComplexMatrix& a) const {
    require_same_dim(a, n_);
    return frame_.adjoint() * detail::vec(a);
  }

  ComplexMatrix combine(const ComplexVector& coeffs) const {
    if (coeffs.size() != static_cast<Eigen::Index>(dim())) {
      throw Error(ErrorKind::DimensionMismatch, "coefficient vector has length " +
                                                    std::to_string(coeffs.size()) + ", expected " +
                                                    std::to_string(dim()));
    }
    return detail::unvec(frame_ * coeffs, n_);
  }

  ComplexMatrix project(const ComplexMatrix& a) const { return combine(coefficients(a)); }

  /// HS distance from `a` to the span.
  double distance(const ComplexMatrix& a) const { return (a - project(a)).norm(); }

  /// Worst violation of the basis invariants.
  double structure_residual() const {
    const auto d = static_cast<Eigen::Index>(dim());
    double worst = (frame_.adjoint() * frame_ - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    worst = std::max(worst, distance(identity(n_)) / std::sqrt(static_cast<double>(n_)));
    for (std::size_t i = 0; i < dim(); ++i) {
      worst = std::max(worst, distance(basis_[i].adjoint()));
      for (std::size_t j = 0; j < dim(); ++j) {
        worst = std::max(worst, distance(basis_[i] * basis_[j]));
      }
    }
    return worst;
  }

 private:
  Eigen::Index n_ = 0;
  std::vector<ComplexMatrix> basis_;
  ComplexMatrix frame_;  // n^2 x d, column i = vec(basis_[i])
};

inline Membership contains(const StarAlgebra& alg, const ComplexMatrix& a,
                           const ToleranceConfig& cfg = {}) {
  if (a.rows() != alg.ambient_dim() || a.cols() != alg.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch,
                "element is " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    ", algebra acts on dimension " + std::to_string(alg.ambient_dim()));
  }
  const double residual = alg.distance(a);
  return {residual <= cfg.bound(operator_norm(a)), residual};
}

/// max over basis elements of `inner` of their distance to `outer`.
inline double containment_residual(const StarAlgebra& inner, const StarAlgebra& outer) {
  if (inner.ambient_dim() != outer.ambient_dim()) {
    throw Error(ErrorKind::DimensionMismatch, "algebras act on different dimensions");
  }
  double worst = 0.0;
  for (const ComplexMatrix& b : inner.basis()) worst = std::max(worst, outer.distance(b));
  return worst;
}

inline double span_equality_residual(const StarAlgebra& a, const StarAlgebra& b) {
  if (a.dim() != b.dim()) return std::numeric_limits<double>::infinity();
  return std::max(containment_residual(a, b), containment_residual(b, a));
}

/// Smallest unital *-subalgebra of M_n containing the generators.
inline StarAlgebra generate_algebra(Eigen::Index ambient_dim,
                                    const std::vector<ComplexMatrix>& generators,
                                    const ToleranceConfig& cfg = {}) {
  if (ambient_dim <= 0) {
    throw Error(ErrorKind::InvalidInput, "ambient dimension must be positive");
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    const ComplexMatrix& g = generators[i];
    if (g.rows() != ambient_dim || g.cols() != ambient_dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  "generator " + std::to_string(i) + " is " + std::to_string(g.rows()) + "x" +
                      std::to_string(g.cols()) + ", expected " + std::to_string(ambient_dim) +
                      "x" + std::to_string(ambient_dim));
    }
    require_square(g, ("generator " + std::to_string(i)).c_str());
  }
  const std::size_t cap = static_cast<std::size_t>(ambient_dim * ambient_dim);
  detail::SpanBuilder span(ambient_dim, cfg.tol_rel);
  span.add(identity(ambient_dim));
  for (const ComplexMatrix& g : generators) {
    span.add(g);
    span.add(g.adjoint());
  }
  // Breadth-first: each round multiplies the newest elements against the
  // whole current frame, on both sides, and adds adjoints.
  std::size_t frontier_begin = 0;
  for (std::size_t round = 0; round < 2 * cap && span.size() < cap; ++round) {
    const std::size_t frontier_end = span.size();
    if (frontier_begin == frontier_end) break;
    for (std::size_t i = frontier_begin; i < frontier_end && span.size() < cap; ++i) {
      const ComplexMatrix x = span.element(i);
      span.add(x.adjoint());
      for (std::size_t j = 0; j < frontier_end && span.size() < cap; ++j) {
        const ComplexMatrix y = span.element(j);
        span.add(x * y);
        span.add(y * x);
      }
    }
    frontier_begin = frontier_end;
  }
  return StarAlgebra::from_orthonormal_basis(ambient_dim, span.matrices(), cfg, false);
}

/// Direct sum of full matrix blocks M_{n_1} + ... + M_{n_k}, block-diagonal
/// in M_n with n = sum n_i. The basis is the matrix units of each block.
inline StarAlgebra block_algebra(const std::vector<int>& block_sizes) {
  if (block_sizes.empty()) {
    throw Error(ErrorKind::InvalidInput, "block list is empty");
  }
  Eigen::Index n = 0;
  for (int s : block_sizes) {
    if (s <= 0) throw Error(ErrorKind::InvalidInput, "block sizes must be positive");
    n += s;
  }
  std::vector<ComplexMatrix> basis;
  Eigen::Index offset = 0;
  for (int s : block_sizes) {
    for (Eigen::Index i = 0; i < s; ++i) {
      for (Eigen::Index j = 0; j < s; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        e(offset + i, offset + j) = 1.0;
        basis.push_back(std::move(e));
      }
    }
    offset += s;
  }
  return StarAlgebra::from_orthonormal_basis(n, std::move(basis), {}, false);
}

namespace detail {

/// Numerical nullspace of a positive semidefinite Gram operator, as
/// orthonormal columns: eigenvalues <= tol_rel * lambda_max.
inline ComplexMatrix gram_nullspace(const ComplexMatrix& gram, const ToleranceConfig& cfg) {
  const HermitianEig eig = detail::eigh(detail::hermitian_part(gram));
  const Eigen::Index m = eig.eigenvalues.size();
  const double top = m == 0 ? 0.0 : std::max(0.0, eig.eigenvalues(m - 1));
  const double threshold = top <= cfg.tol_abs ? std::numeric_limits<double>::infinity()
                                               : cfg.tol_rel * top;
  Eigen::Index count = 0;
  while (count < m && eig.eigenvalues(count) <= threshold) ++count;
  return eig.eigenvectors.leftCols(count);
}

}  // namespace detail

inline StarAlgebra commutant(const StarAlgebra& alg, const ToleranceConfig& cfg = {}) {
  const Eigen::Index n = alg.ambient_dim();
  const ComplexMatrix id = identity(n);
  // vec(XB - BX) = (B^T (x) I - I (x) B) vec(X); accumulate sum L_i* L_i.
  ComplexMatrix gram = ComplexMatrix::Zero(n * n, n * n);
  for (const ComplexMatrix& b : alg.basis()) {
    const ComplexMatrix op = Eigen::kroneckerProduct(b.transpose(), id).eval() -
                             Eigen::kroneckerProduct(id, b).eval();
    gram.noalias() += op.adjoint() * op;
  }
  const ComplexMatrix null = detail::gram_nullspace(gram, cfg);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    ComplexMatrix m = detail::unvec(null.col(c), n);
    detail::canonical_phase(m);
    basis.push_back(std::move(m));
  }
  return StarAlgebra::from_orthonormal_basis(n, std::move(basis), cfg, false);
}

/// commutant(commutant(alg)); equality with `alg` is checked on the way out.
inline StarAlgebra bicommutant(const StarAlgebra& alg, const ToleranceConfig& cfg = {}) {
  StarAlgebra result = commutant(commutant(alg, cfg), cfg);
  const double residual = span_equality_residual(result, alg);
  if (!(residual <= cfg.bound(1.0) * 100.0)) {
    throw Error(ErrorKind::Internal,
                "bicommutant differs from the algebra (dim " + std::to_string(result.dim()) +
                    " vs " + std::to_string(alg.dim()) + ", residual " + detail::num(residual) +
                    ")");
  }
  return result;
}

/// Z(A) = A intersected with its commutant, solved in A's own coordinates:
/// sum_j c_j [b_j, b_i] = 0 for every basis element b_i.
inline StarAlgebra center(const StarAlgebra& alg, const ToleranceConfig& cfg = {}) {
  const auto d = static_cast<Eigen::Index>(alg.dim());
  const Eigen::Index n = alg.ambient_dim();
  ComplexMatrix gram = ComplexMatrix::Zero(d, d);
  ComplexMatrix column_block(n * n, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const ComplexMatrix& bi = alg.basis(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < d; ++j) {
      const ComplexMatrix& bj = alg.basis(static_cast<std::size_t>(j));
      column_block.col(j) = detail::vec(bj * bi - bi * bj);
    }
    gram.noalias() += column_block.adjoint() * column_block;
  }
  const ComplexMatrix null = detail::gram_nullspace(gram, cfg);
  std::vector<ComplexMatrix> basis;
  for (Eigen::Index c = 0; c < null.cols(); ++c) {
    ComplexMatrix z = alg.combine(null.col(c));
    detail::canonical_phase(z);
    basis.push_back(std::move(z));
  }
  return StarAlgebra::from_orthonormal_basis(n, std::move(basis), cfg, false);
}

struct CentralProjectionSet {
  std::vector<ComplexMatrix> minimal;
  std::size_t count() const { return minimal.size(); }
};

/// Sum of the minimal projections whose bit is set in `mask`.
inline ComplexMatrix lattice_element(const CentralProjectionSet& set, Eigen::Index ambient_dim,
                                     std::uint64_t mask) {
  ComplexMatrix p = ComplexMatrix::Zero(ambient_dim, ambient_dim);
  for (std::size_t m = 0; m < set.count(); ++m) {
    if ((mask >> m) & 1U) p += set.minimal[m];
  }
  return p;
}

inline ComplexMatrix projection_from_selector(const CentralProjectionSet& set,
                                              Eigen::Index ambient_dim,
                                              const std::vector<std::size_t>& selector) {
  std::uint64_t mask = 0;
  for (std::size_t idx : selector) {
    if (idx >= set.count()) {
      throw Error(ErrorKind::InvalidInput, "projection selector index " + std::to_string(idx) +
                                               " out of range (k = " +
                                               std::to_string(set.count()) + ")");
    }
    mask |= std::uint64_t{1} << idx;
  }
  return lattice_element(set, ambient_dim, mask);
}

inline std::vector<std::size_t> selector_from_mask(std::uint64_t mask, std::size_t k) {
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < k; ++m) {
    if ((mask >> m) & 1U) out.push_back(m);
  }
  return out;
}

/// Every element of the lattice, indexed by mask (2^k entries).
inline std::vector<ComplexMatrix> projection_lattice(const CentralProjectionSet& set,
                                                     Eigen::Index ambient_dim) {
  if (set.count() > 20) {
    throw Error(ErrorKind::InvalidInput, "lattice too large to materialize");
  }
  std::vector<ComplexMatrix> out;
  const std::uint64_t total = std::uint64_t{1} << set.count();
  out.reserve(total);
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    out.push_back(lattice_element(set, ambient_dim, mask));
  }
  return out;
}

/// Minimal central projections, as spectral projections of a generic
/// Hermitian element of the center. Probes whose eigenvalues fall into an
/// ambiguous gap, or whose distinct-eigenvalue count differs from dim Z(A),
/// are discarded and the probe is redrawn (up to 8 seeds).
///
/// Ordering is canonical (independent of the probe): projections are sorted
/// by their real diagonals, lexicographically descending, so for
/// block-diagonal algebras index m is block m.
inline CentralProjectionSet central_projections(const StarAlgebra& alg,
                                                const ToleranceConfig& cfg = {}) {
  const StarAlgebra z = center(alg, cfg);
  const Eigen::Index n = alg.ambient_dim();
  std::vector<ComplexMatrix> hermitian;
  for (const ComplexMatrix& c : z.basis()) {
    hermitian.push_back(c + c.adjoint());
    hermitian.push_back((c - c.adjoint()) * Complex(0.0, 1.0));
  }
  constexpr Seed kProbeSeed{0x63656e7465727072ULL};
  for (std::uint64_t attempt = 0; attempt < 8; ++attempt) {
    NormalStream rng(derive(kProbeSeed, attempt));
    ComplexMatrix probe = ComplexMatrix::Zero(n, n);
    for (const ComplexMatrix& h : hermitian) probe += rng.next() * h;
    const HermitianEig eig = detail::eigh(detail::hermitian_part(probe));
    const double scale = std::max(1e-300, eig.eigenvalues.cwiseAbs().maxCoeff());
    const double same = 1e3 * cfg.tol_rel * scale;
    const double distinct = 1e-4 * scale;
    std::vector<Eigen::Index> starts{0};
    bool ambiguous = false;
    for (Eigen::Index i = 1; i < eig.eigenvalues.size(); ++i) {
      const double gap = eig.eigenvalues(i) - eig.eigenvalues(i - 1);
      if (gap <= same) continue;
      if (gap < distinct) {
        ambiguous = true;
        break;
      }
      starts.push_back(i);
    }
    if (ambiguous || starts.size() != z.dim()) continue;
    starts.push_back(eig.eigenvalues.size());
    CentralProjectionSet set;
    for (std::size_t g = 0; g + 1 < starts.size(); ++g) {
      const auto cols = eig.eigenvectors.middleCols(starts[g], starts[g + 1] - starts[g]);
      set.minimal.push_back(detail::hermitian_part(cols * cols.adjoint()));
    }
    std::sort(set.minimal.begin(), set.minimal.end(),
              [](const ComplexMatrix& a, const ComplexMatrix& b) {
                for (Eigen::Index i = 0; i < a.rows(); ++i) {
                  const double da = a(i, i).real();
                  const double db = b(i, i).real();
                  if (std::abs(da - db) > 1e-6) return da > db;
                }
                return false;
              });
    return set;
  }
  throw Error(ErrorKind::CenterDegenerate,
              "no generic central element separated the blocks after 8 probes");
}

inline ComplexMatrix random_hermitian(const StarAlgebra& alg, Seed seed) {
  NormalStream rng(seed);
  const Eigen::Index n = alg.ambient_dim();
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& b : alg.basis()) {
    const double x = rng.next();
    const double y = rng.next();
    h += x * (b + b.adjoint()) + y * ((b - b.adjoint()) * Complex(0.0, 1.0));
  }
  return detail::hermitian_part(h);
}

/// Complex Gaussian combination of the basis.
inline ComplexMatrix random_element(const StarAlgebra& alg, Seed seed) {
  NormalStream rng(seed);
  ComplexVector coeffs(static_cast<Eigen::Index>(alg.dim()));
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) coeffs(i) = rng.next_complex();
  return alg.combine(coeffs);
}

/// exp(i h) for h = random_hermitian(alg, seed).
inline ComplexMatrix random_unitary_in(const StarAlgebra& alg, Seed seed) {
  const ComplexMatrix h = random_hermitian(alg, seed);
  const HermitianEig eig = detail::eigh(h);
  ComplexVector phases(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::polar(1.0, eig.eigenvalues(i));
  }
  return detail::reconstruct(eig.eigenvectors, phases);
}

inline ComplexMatrix random_invertible_in(const StarAlgebra& alg, Seed seed,
                                          const ToleranceConfig& cfg = {}) {
  const ComplexMatrix base = random_element(alg, seed);
  const double scale = std::max(1.0, operator_norm(base));
  const ComplexMatrix id = identity(alg.ambient_dim());
  for (int attempt = 0; attempt <= 16; ++attempt) {
    const ComplexMatrix a = base + (0.125 * attempt * scale) * id;
    if (is_invertible(a, cfg)) return a;
  }
  throw Error(ErrorKind::CouldNotInvert, "no invertible shift found after 16 retries");
}

}  // namespace cstar

#endif  // CSTAR_ALGEBRA_HPP
