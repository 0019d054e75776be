#ifndef CSTAR_MATCORE_HPP
#define CSTAR_MATCORE_HPP

// Dense complex matrices and everything spectral built on one kernel, the
// Hermitian eigendecomposition: norms, spectral radius of normal elements,
// functional calculus, PSD square roots and the polar decomposition.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cstar/error.hpp"

namespace cstar {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct ToleranceConfig {
  double tol_rel = 1e-9;
  double tol_abs = 1e-12;
  /// Smallest singular value, relative to the norm, still treated as invertible.
  double invertibility_floor = 1e-8;

  void validate() const {
    if (!(tol_rel > 0.0) || !(tol_abs > 0.0) || !(invertibility_floor > 0.0)) {
      throw Error(ErrorKind::InvalidTolerance, "tolerances must be strictly positive");
    }
    if (tol_abs > tol_rel) {
      throw Error(ErrorKind::InvalidTolerance, "tol_abs must not exceed tol_rel");
    }
  }

  /// tol_rel scaled by max(1, scale).
  double bound(double scale) const { return tol_rel * std::max(1.0, scale); }
};

struct HermitianEig {
  RealVector eigenvalues;       // ascending
  ComplexMatrix eigenvectors;   // columns, unitary
};

struct PolarParts {
  ComplexMatrix unitary;
  ComplexMatrix modulus;
};

inline ComplexMatrix identity(Eigen::Index n) { return ComplexMatrix::Identity(n, n); }

inline void require_square(const ComplexMatrix& a, const char* what = "matrix") {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::NotSquare, std::string(what) + " is " + std::to_string(a.rows()) +
                                          "x" + std::to_string(a.cols()));
  }
  if (!a.allFinite()) {
    throw Error(ErrorKind::NonFinite, std::string(what) + " has NaN or Inf entries");
  }
}

inline void require_same_dim(const ComplexMatrix& a, Eigen::Index n, const char* what = "matrix") {
  require_square(a, what);
  if (a.rows() != n) {
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has dimension " +
                                                  std::to_string(a.rows()) + ", expected " +
                                                  std::to_string(n));
  }
}

inline ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

namespace detail {

// Unchecked kernel; input must already be Hermitian (only the lower
// triangle is read).
inline HermitianEig eigh(const ComplexMatrix& h) {
  if (h.rows() == 0) return {};
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorKind::Internal, "Hermitian eigensolver did not converge");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

inline ComplexMatrix hermitian_part(const ComplexMatrix& a) { return (a + a.adjoint()) * 0.5; }

inline ComplexMatrix reconstruct(const ComplexMatrix& v, const ComplexVector& values) {
  return v * values.asDiagonal() * v.adjoint();
}

/// Singular triplets from the Hermitian dilation [[0, a], [a*, 0]], whose
/// eigenvalues are +-sigma_i. The dilation resolves small singular values
/// to absolute accuracy eps*|a|, unlike the Gram matrix a*a.
struct DilationSvd {
  RealVector sigma;    // descending
  ComplexMatrix left;  // a * right.col(i) = sigma(i) * left.col(i)
  ComplexMatrix right;
};

inline DilationSvd dilation_svd(const ComplexMatrix& a) {
  const Eigen::Index n = a.rows();
  ComplexMatrix dilation = ComplexMatrix::Zero(2 * n, 2 * n);
  dilation.topRightCorner(n, n) = a;
  dilation.bottomLeftCorner(n, n) = a.adjoint();
  const HermitianEig eig = eigh(dilation);
  DilationSvd out{RealVector(n), ComplexMatrix(n, n), ComplexMatrix(n, n)};
  const double root2 = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index col = 2 * n - 1 - i;
    out.sigma(i) = std::abs(eig.eigenvalues(col));
    out.left.col(i) = root2 * eig.eigenvectors.col(col).head(n);
    out.right.col(i) = root2 * eig.eigenvectors.col(col).tail(n);
  }
  return out;
}

}  // namespace detail

/// Largest singular value, sqrt(lambda_max(a*a)).
inline double operator_norm(const ComplexMatrix& a) {
  require_square(a);
  if (a.size() == 0) return 0.0;
  const ComplexMatrix gram = a.adjoint() * a;
  const HermitianEig eig = detail::eigh(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues(eig.eigenvalues.size() - 1)));
}

inline double hermitian_residual(const ComplexMatrix& a) { return operator_norm(a - a.adjoint()); }

inline double unitarity_residual(const ComplexMatrix& u) {
  return operator_norm(u.adjoint() * u - identity(u.rows()));
}

/// max(|p^2 - p|, |p - p*|)
inline double projection_residual(const ComplexMatrix& p) {
  return std::max(operator_norm(p * p - p), hermitian_residual(p));
}

inline double commutator_norm(const ComplexMatrix& a, const ComplexMatrix& b) {
  return operator_norm(a * b - b * a);
}

/// Singular values, descending.
inline RealVector singular_values(const ComplexMatrix& a) {
  require_square(a);
  return detail::dilation_svd(a).sigma;
}

inline HermitianEig hermitian_eig(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  require_square(a);
  const double residual = hermitian_residual(a);
  if (residual > cfg.bound(operator_norm(a))) {
    throw Error(ErrorKind::NotHermitian,
                "|a - a*| = " + detail::num(residual) + " exceeds tolerance");
  }
  return detail::eigh(detail::hermitian_part(a));
}

/// Eigenvalues of a normal matrix, computed without a non-Hermitian solver:
/// the real and imaginary parts H, K of a normal matrix commute, so the
/// eigenvectors of H + cK for a generic real c diagonalize a itself.
inline ComplexVector normal_eigenvalues(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  require_square(a);
  const double norm = operator_norm(a);
  const double defect = commutator_norm(a.adjoint(), a);
  if (defect > cfg.tol_rel * std::max(1.0, norm * norm)) {
    throw Error(ErrorKind::NotNormal, "|a*a - aa*| = " + detail::num(defect));
  }
  if (a.size() == 0) return {};
  const ComplexMatrix re = detail::hermitian_part(a);
  const ComplexMatrix im = (a - a.adjoint()) * Complex(0.0, -0.5);
  constexpr double kMixers[] = {0.7548776662466927, 1.3247179572447460, 0.4142135623730951,
                                2.2360679774997896, 0.1234567891011121};
  double best_offdiag = std::numeric_limits<double>::infinity();
  ComplexVector best;
  for (double c : kMixers) {
    const HermitianEig eig = detail::eigh(re + c * im);
    ComplexMatrix diag = eig.eigenvectors.adjoint() * a * eig.eigenvectors;
    const ComplexVector values = diag.diagonal();
    diag.diagonal().setZero();
    const double offdiag = diag.norm();
    if (offdiag < best_offdiag) {
      best_offdiag = offdiag;
      best = values;
    }
    if (offdiag <= cfg.bound(norm)) break;
  }
  return best;
}

inline double spectral_radius_normal(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  const ComplexVector values = normal_eigenvalues(a, cfg);
  return values.size() == 0 ? 0.0 : values.cwiseAbs().maxCoeff();
}

/// f(a) = V diag(f(lambda_i)) V* for Hermitian a.
inline ComplexMatrix apply_hermitian_function(const ComplexMatrix& a,
                                              const std::function<Complex(double)>& f,
                                              const ToleranceConfig& cfg = {}) {
  const HermitianEig eig = hermitian_eig(a, cfg);
  ComplexVector values(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < values.size(); ++i) values(i) = f(eig.eigenvalues(i));
  return detail::reconstruct(eig.eigenvectors, values);
}

inline ComplexMatrix sqrt_psd(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  const HermitianEig eig = hermitian_eig(a, cfg);
  if (eig.eigenvalues.size() == 0) return a;
  const double scale = eig.eigenvalues.cwiseAbs().maxCoeff();
  const double lowest = eig.eigenvalues(0);
  if (lowest < -cfg.tol_rel * scale) {
    throw Error(ErrorKind::NotPSD, "eigenvalue " + detail::num(lowest) + " is negative");
  }
  ComplexVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    roots(i) = std::sqrt(std::max(0.0, eig.eigenvalues(i)));
  }
  return detail::reconstruct(eig.eigenvectors, roots);
}

/// PSD within tolerance: Hermitian and lambda_min >= -tol_rel * max(1, |a|).
/// Returns the deficiency max(|a - a*|, -lambda_min) (0 when comfortably PSD).
inline double psd_deficiency(const ComplexMatrix& a) {
  require_square(a);
  if (a.size() == 0) return 0.0;
  const double skew = hermitian_residual(a);
  const HermitianEig eig = detail::eigh(detail::hermitian_part(a));
  return std::max(skew, std::max(0.0, -eig.eigenvalues(0)));
}

inline bool is_psd(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  return psd_deficiency(a) <= cfg.bound(operator_norm(a));
}

/// True iff sigma_min >= invertibility_floor * |a| (and a != 0).
inline bool is_invertible(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  const RealVector sigma = singular_values(a);
  if (sigma.size() == 0) return true;
  return sigma(0) > 0.0 && sigma(sigma.size() - 1) >= cfg.invertibility_floor * sigma(0);
}

/// a = unitary * modulus for invertible a.
///
/// Both factors come from the singular triplets of the Hermitian dilation:
/// unitary = W V*, modulus = V diag(sigma) V*. This is a |a|^{-1} and
/// sqrt(a*a) evaluated without forming a*a. A few Newton-Schulz steps
/// U <- U (3 - U*U) / 2 then push U onto the unitary group; every step is a
/// polynomial in U and U*, so U stays inside any *-algebra containing a.
inline PolarParts polar_decompose(const ComplexMatrix& a, const ToleranceConfig& cfg = {}) {
  require_square(a);
  const Eigen::Index n = a.rows();
  if (n == 0) return {a, a};
  const detail::DilationSvd svd = detail::dilation_svd(a);
  const double norm = svd.sigma(0);
  const double smallest = svd.sigma(n - 1);
  if (!(norm > 0.0) || smallest < cfg.invertibility_floor * norm) {
    throw Error(ErrorKind::Singular,
                "smallest singular value " + detail::num(smallest) + " is below " +
                    detail::num(cfg.invertibility_floor) + " * |a| = " +
                    detail::num(cfg.invertibility_floor * norm) +
                    "; the polar unitary is only unique for invertible elements");
  }
  PolarParts parts;
  parts.unitary = svd.left * svd.right.adjoint();
  parts.modulus = detail::hermitian_part(
      svd.right * svd.sigma.cast<Complex>().asDiagonal() * svd.right.adjoint());
  const ComplexMatrix id = identity(n);
  for (int step = 0; step < 4; ++step) {
    const ComplexMatrix gram = parts.unitary.adjoint() * parts.unitary;
    if ((gram - id).norm() <= 8.0 * std::numeric_limits<double>::epsilon() * n) break;
    parts.unitary = parts.unitary * (3.0 * id - gram) * 0.5;
  }
  return parts;
}

}  // namespace cstar

#endif  // CSTAR_MATCORE_HPP
