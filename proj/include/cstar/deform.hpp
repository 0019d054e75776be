#ifndef CSTAR_DEFORM_HPP
#define CSTAR_DEFORM_HPP

// Deformed C*-structures A(u, p) on a fixed algebra and fixed norm:
//
//   a o b = p a u b + (1 - p) b u a,      a* (deformed) = u* a* u*,
//
// with u unitary in A and p a central projection. The unit of (A, o) is u*.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar/algebra.hpp"
#include "cstar/report.hpp"

namespace cstar {

class DeformedAlgebra {
 public:
  /// Validated construction; throws InvalidDeformation naming the first
  /// violated requirement ("u not unitary", "p not central", ...).
  DeformedAlgebra(StarAlgebra base, ComplexMatrix u, ComplexMatrix p,
                  const ToleranceConfig& cfg = {})
      : base_(std::move(base)), u_(std::move(u)), p_(std::move(p)) {
    const std::vector<std::string> problems = violations(cfg);
    if (!problems.empty()) throw Error(ErrorKind::InvalidDeformation, problems.front());
  }

  /// No validation. Used to inject faults (non-unitary u, non-central p).
  static DeformedAlgebra unchecked(StarAlgebra base, ComplexMatrix u, ComplexMatrix p) {
    return DeformedAlgebra(std::move(base), std::move(u), std::move(p), Unchecked{});
  }

  const StarAlgebra& base() const { return base_; }
  const ComplexMatrix& u() const { return u_; }
  const ComplexMatrix& p() const { return p_; }
  ComplexMatrix unit() const { return u_.adjoint(); }

  /// p a u b + (1 - p) b u a, no membership checks.
  ComplexMatrix product(const ComplexMatrix& a, const ComplexMatrix& b) const {
    const ComplexMatrix aub = a * u_ * b;
    const ComplexMatrix bua = b * u_ * a;
    return bua + p_ * (aub - bua);
  }

  ComplexMatrix star(const ComplexMatrix& a) const { return u_.adjoint() * a.adjoint() * u_.adjoint(); }

  std::vector<std::string> violations(const ToleranceConfig& cfg = {}) const {
    std::vector<std::string> out;
    const Eigen::Index n = base_.ambient_dim();
    if (u_.rows() != n || u_.cols() != n || p_.rows() != n || p_.cols() != n) {
      out.emplace_back("u and p must match the ambient dimension " + std::to_string(n));
      return out;
    }
    if (!u_.allFinite() || !p_.allFinite()) {
      out.emplace_back("u and p must be finite");
      return out;
    }
    const double unitarity = unitarity_residual(u_);
    if (unitarity > cfg.bound(1.0)) {
      out.emplace_back("u not unitary (|u*u - 1| = " + detail::num(unitarity) + ")");
    }
    const Membership um = contains(base_, u_, cfg);
    if (!um.member) {
      out.emplace_back("u not in algebra (residual " + detail::num(um.residual) + ")");
    }
    const double proj = projection_residual(p_);
    if (proj > cfg.bound(1.0)) {
      out.emplace_back("p not a projection (residual " + detail::num(proj) + ")");
    }
    const Membership pm = contains(base_, p_, cfg);
    if (!pm.member) {
      out.emplace_back("p not in algebra (residual " + detail::num(pm.residual) + ")");
    }
    double comm = 0.0;
    for (const ComplexMatrix& b : base_.basis()) comm = std::max(comm, commutator_norm(p_, b));
    if (comm > cfg.bound(1.0)) {
      out.emplace_back("p not central (commutator norm " + detail::num(comm) + ")");
    }
    if (out.empty()) {
      const ComplexMatrix e = unit();
      double worst = 0.0;
      for (const ComplexMatrix& b : base_.basis()) {
        worst = std::max({worst, operator_norm(product(e, b) - b), operator_norm(product(b, e) - b)});
      }
      if (worst > cfg.bound(1.0)) {
        out.emplace_back("u* is not a two-sided unit (residual " + detail::num(worst) + ")");
      }
    }
    return out;
  }

 private:
  struct Unchecked {};
  DeformedAlgebra(StarAlgebra base, ComplexMatrix u, ComplexMatrix p, Unchecked)
      : base_(std::move(base)), u_(std::move(u)), p_(std::move(p)) {}

  StarAlgebra base_;
  ComplexMatrix u_;
  ComplexMatrix p_;
};

namespace detail {

inline void require_member(const StarAlgebra& alg, const ComplexMatrix& a, const char* name,
                           const ToleranceConfig& cfg) {
  const Membership m = contains(alg, a, cfg);
  if (!m.member) {
    throw Error(ErrorKind::NotMember, std::string(name) + " is not in the algebra (residual " +
                                          detail::num(m.residual) + ")");
  }
}

}  // namespace detail

inline ComplexMatrix deformed_mul(const DeformedAlgebra& d, const ComplexMatrix& a,
                                  const ComplexMatrix& b, const ToleranceConfig& cfg = {}) {
  detail::require_member(d.base(), a, "a", cfg);
  detail::require_member(d.base(), b, "b", cfg);
  return d.product(a, b);
}

inline ComplexMatrix deformed_star(const DeformedAlgebra& d, const ComplexMatrix& a,
                                   const ToleranceConfig& cfg = {}) {
  detail::require_member(d.base(), a, "a", cfg);
  return d.star(a);
}

inline ComplexMatrix deformed_unit(const DeformedAlgebra& d) { return d.unit(); }

struct Verdict {
  bool holds = false;
  double residual = 0.0;
};

/// a is self-adjoint in A(u, p) iff a u = u* a*. Does not read p.
inline Verdict is_selfadjoint_deformed(const DeformedAlgebra& d, const ComplexMatrix& a,
                                       const ToleranceConfig& cfg = {}) {
  detail::require_member(d.base(), a, "a", cfg);
  const ComplexMatrix& u = d.u();
  const double residual = operator_norm(a * u - u.adjoint() * a.adjoint());
  return {residual <= cfg.bound(operator_norm(a)), residual};
}

struct Positivity {
  bool positive = false;
  double deficiency = 0.0;             // distance of u a from the PSD cone, see psd_deficiency
  std::optional<ComplexMatrix> witness;  // b with b o b = a and b deformed-self-adjoint
};

/// a is positive in A(u, p) iff a = b* o b (deformed) for some b, which
/// happens iff u a is positive semidefinite. Does not read p. On success the
/// witness b = u* (u a)^{1/2} is returned; it is deformed-self-adjoint and
/// b o b = b u b = a for every central p.
inline Positivity is_positive_deformed(const DeformedAlgebra& d, const ComplexMatrix& a,
                                       const ToleranceConfig& cfg = {}) {
  detail::require_member(d.base(), a, "a", cfg);
  const ComplexMatrix& u = d.u();
  const ComplexMatrix ua = u * a;
  Positivity out;
  out.deficiency = psd_deficiency(ua);
  out.positive = out.deficiency <= cfg.bound(operator_norm(a));
  if (out.positive) {
    const HermitianEig eig = detail::eigh(detail::hermitian_part(ua));
    ComplexVector roots(eig.eigenvalues.size());
    for (Eigen::Index i = 0; i < roots.size(); ++i) {
      roots(i) = std::sqrt(std::max(0.0, eig.eigenvalues(i)));
    }
    out.witness = u.adjoint() * detail::reconstruct(eig.eigenvectors, roots);
  }
  return out;
}

struct Positivizer {
  ComplexMatrix unitary;
  ComplexMatrix modulus;
  double membership_residual = 0.0;
  double unitarity_residual = 0.0;
  double modulus_min_eigenvalue = 0.0;
};

/// Polar data of an invertible a in alg: a = u |a| with u in alg, which
/// makes a positive in A(u*, p) for every central p.
inline Positivizer positivize(const StarAlgebra& alg, const ComplexMatrix& a,
                              const ToleranceConfig& cfg = {}) {
  detail::require_member(alg, a, "a", cfg);
  PolarParts parts = polar_decompose(a, cfg);
  Positivizer out;
  out.membership_residual = alg.distance(parts.unitary);
  if (out.membership_residual > cfg.bound(1.0) * 100.0) {
    throw Error(ErrorKind::Internal, "polar unitary left the algebra (residual " +
                                         detail::num(out.membership_residual) + ")");
  }
  out.unitarity_residual = unitarity_residual(parts.unitary);
  out.modulus_min_eigenvalue = detail::eigh(parts.modulus).eigenvalues(0);
  out.unitary = std::move(parts.unitary);
  out.modulus = std::move(parts.modulus);
  return out;
}

inline ComplexMatrix positivizing_unitary(const StarAlgebra& alg, const ComplexMatrix& a,
                                          const ToleranceConfig& cfg = {}) {
  return positivize(alg, a, cfg).unitary;
}

/// The polar modulus m = |a| is positive. For a unitary w != 1 in alg, w m
/// must not be positive as well. A case fails when w m is PSD within
/// tolerance; its residual is the margin by which it got inside the
/// tolerance band, max(0, bound - deficiency(w m)), so a clean run reports 0.
inline LawReport check_positivizer_uniqueness(const StarAlgebra& alg, const ComplexMatrix& a,
                                              std::size_t trials, Seed seed,
                                              const ToleranceConfig& cfg = {}) {
  detail::require_member(alg, a, "a", cfg);
  const PolarParts parts = polar_decompose(a, cfg);
  const ComplexMatrix id = identity(alg.ambient_dim());
  const double bound = cfg.bound(operator_norm(parts.modulus));
  LawCheck check("positivizer_uniqueness", seed);
  std::uint64_t draw = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    ComplexMatrix w;
    do {
      w = random_unitary_in(alg, derive(seed, 0x7057, draw++));
    } while (operator_norm(w - id) <= cfg.bound(1.0) && draw < 64 * (trials + 1));
    const ComplexMatrix wm = w * parts.modulus;
    const double deficiency = psd_deficiency(wm);
    const double margin = std::max(0.0, bound - deficiency);
    if (deficiency <= bound) {
      check.fail(Json{{"a", matrix_to_json(a)}, {"w", matrix_to_json(w)}, {"deficiency", deficiency}});
    } else {
      check.record(margin, 0.0, nullptr);
    }
  }
  return check.report();
}

/// Coefficient tables of a candidate product and involution in a fixed basis:
/// b_i o b_j = sum_k table(i, j)[k] b_k and b_i* = sum_k star[i][k] b_k.
struct StructureConstants {
  std::size_t dim = 0;
  std::vector<ComplexVector> table;  // row-major, index i * dim + j

  const ComplexVector& at(std::size_t i, std::size_t j) const { return table[i * dim + j]; }
  ComplexVector& at(std::size_t i, std::size_t j) { return table[i * dim + j]; }
};

inline StructureConstants structure_constants(const DeformedAlgebra& d) {
  const StarAlgebra& alg = d.base();
  StructureConstants sc{alg.dim(), std::vector<ComplexVector>(alg.dim() * alg.dim())};
  for (std::size_t i = 0; i < alg.dim(); ++i) {
    for (std::size_t j = 0; j < alg.dim(); ++j) {
      sc.at(i, j) = alg.coefficients(d.product(alg.basis(i), alg.basis(j)));
    }
  }
  return sc;
}

inline std::vector<ComplexVector> star_table(const DeformedAlgebra& d) {
  std::vector<ComplexVector> out;
  for (const ComplexMatrix& b : d.base().basis()) out.push_back(d.base().coefficients(d.star(b)));
  return out;
}

/// The algebra's own product, i.e. the identity deformation u = 1, p = 1.
inline StructureConstants original_structure_constants(const StarAlgebra& alg) {
  const Eigen::Index n = alg.ambient_dim();
  return structure_constants(DeformedAlgebra::unchecked(alg, identity(n), identity(n)));
}

struct DeformationRecovery {
  ComplexMatrix u;
  ComplexMatrix p;
  std::vector<std::size_t> selector;  // indices into central_projections(alg).minimal
  double max_residual = 0.0;
};

namespace detail {

inline void check_table_shape(const StarAlgebra& alg, const StructureConstants& sc,
                              const std::vector<ComplexVector>& star) {
  const std::size_t d = alg.dim();
  if (sc.dim != d || sc.table.size() != d * d || star.size() != d) {
    throw Error(ErrorKind::DimensionMismatch,
                "structure constants have dimension " + std::to_string(sc.dim) +
                    ", algebra has dimension " + std::to_string(d));
  }
  for (const ComplexVector& v : sc.table) {
    if (v.size() != static_cast<Eigen::Index>(d)) {
      throw Error(ErrorKind::DimensionMismatch, "structure constant vector of wrong length");
    }
  }
  for (const ComplexVector& v : star) {
    if (v.size() != static_cast<Eigen::Index>(d)) {
      throw Error(ErrorKind::DimensionMismatch, "star table vector of wrong length");
    }
  }
}

}  // namespace detail

/// Recovers (u, p) with a o b = p a u b + (1 - p) b u a from the structure
/// constants of a candidate product.
///
/// The unit e of the candidate is solved from e o b_i = b_i = b_i o e; then
/// u = e*, which must be unitary, and the star table must equal
/// a -> u* a* u*. Finally p is chosen from the central projection lattice by
/// residual minimization: exhaustively for k <= 12 minimal projections,
/// blockwise otherwise (the residual splits over minimal projections because
/// they are central). On commutative blocks both choices give the same
/// product; ties go to including the block in p.
inline DeformationRecovery recover_deformation(const StarAlgebra& alg, const StructureConstants& sc,
                                               const std::vector<ComplexVector>& star,
                                               const ToleranceConfig& cfg = {}) {
  detail::check_table_shape(alg, sc, star);
  const std::size_t d = alg.dim();
  const auto di = static_cast<Eigen::Index>(d);
  const Eigen::Index n = alg.ambient_dim();

  double table_scale = 1.0;
  for (const ComplexVector& v : sc.table) table_scale = std::max(table_scale, v.norm());
  const double tol = 10.0 * cfg.tol_rel * table_scale * std::sqrt(static_cast<double>(d));

  // Unit: rows (j, left) sum_k x_k T(k, j) = e_j and (j, right) sum_k x_k T(j, k) = e_j.
  ComplexMatrix system = ComplexMatrix::Zero(2 * di * di, di);
  ComplexVector rhs = ComplexVector::Zero(2 * di * di);
  for (Eigen::Index j = 0; j < di; ++j) {
    for (Eigen::Index k = 0; k < di; ++k) {
      const auto jj = static_cast<std::size_t>(j);
      const auto kk = static_cast<std::size_t>(k);
      system.block(j * di, k, di, 1) = sc.at(kk, jj);
      system.block((di + j) * di, k, di, 1) = sc.at(jj, kk);
    }
    rhs(j * di + j) = 1.0;
    rhs((di + j) * di + j) = 1.0;
  }
  const ComplexVector x = system.colPivHouseholderQr().solve(rhs);
  const double unit_residual = (system * x - rhs).norm();
  if (!(unit_residual <= tol)) {
    throw Error(ErrorKind::NoUnit, "candidate product has no two-sided unit (residual " +
                                       detail::num(unit_residual) + ")");
  }
  DeformationRecovery out;
  out.u = alg.combine(x).adjoint();
  const double unitarity = unitarity_residual(out.u);
  if (unitarity > tol) {
    throw Error(ErrorKind::NotDeformation,
                "unit is not the adjoint of a unitary (|u*u - 1| = " + detail::num(unitarity) + ")");
  }
  double star_residual = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    const ComplexMatrix& b = alg.basis(i);
    const ComplexVector expected = alg.coefficients(out.u.adjoint() * b.adjoint() * out.u.adjoint());
    star_residual = std::max(star_residual, (expected - star[i]).norm());
  }
  if (star_residual > tol) {
    throw Error(ErrorKind::NotDeformation, "involution does not match a -> u* a* u* (residual " +
                                               detail::num(star_residual) + ")");
  }

  const CentralProjectionSet cps = central_projections(alg, cfg);
  const std::size_t k = cps.count();
  // Per minimal projection q_m and basis pair (i, j): the q_m-part of the
  // table entry, of b_i u b_j ("in p") and of b_j u b_i ("not in p").
  std::vector<ComplexVector> target(k * d * d), in_p(k * d * d), out_p(k * d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const ComplexMatrix entry = alg.combine(sc.at(i, j));
      const ComplexMatrix left = alg.basis(i) * out.u * alg.basis(j);
      const ComplexMatrix right = alg.basis(j) * out.u * alg.basis(i);
      for (std::size_t m = 0; m < k; ++m) {
        const ComplexMatrix& q = cps.minimal[m];
        const std::size_t idx = (m * d + i) * d + j;
        target[idx] = alg.coefficients(q * entry);
        in_p[idx] = alg.coefficients(q * left);
        out_p[idx] = alg.coefficients(q * right);
      }
    }
  }
  auto residual_of = [&](std::uint64_t mask) {
    double worst = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        double sq = 0.0;
        for (std::size_t m = 0; m < k; ++m) {
          const std::size_t idx = (m * d + i) * d + j;
          const ComplexVector& model = ((mask >> m) & 1U) ? in_p[idx] : out_p[idx];
          sq += (target[idx] - model).squaredNorm();
        }
        worst = std::max(worst, std::sqrt(sq));
      }
    }
    return worst;
  };
  auto popcount = [](std::uint64_t v) {
    int c = 0;
    for (; v; v &= v - 1) ++c;
    return c;
  };

  std::uint64_t chosen = 0;
  if (k <= 12) {
    const std::uint64_t total = std::uint64_t{1} << k;
    std::vector<double> residuals(total);
    double best = std::numeric_limits<double>::infinity();
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      residuals[mask] = residual_of(mask);
      best = std::min(best, residuals[mask]);
    }
    int best_pop = -1;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      if (residuals[mask] <= best + tol && popcount(mask) > best_pop) {
        best_pop = popcount(mask);
        chosen = mask;
      }
    }
  } else {
    chosen = 0;
    for (std::size_t m = 0; m < k && m < 64; ++m) {
      double err_in = 0.0, err_out = 0.0;
      for (std::size_t ij = 0; ij < d * d; ++ij) {
        const std::size_t idx = m * d * d + ij;
        err_in = std::max(err_in, (target[idx] - in_p[idx]).norm());
        err_out = std::max(err_out, (target[idx] - out_p[idx]).norm());
      }
      if (err_in <= err_out + tol) chosen |= std::uint64_t{1} << m;
    }
  }
  out.max_residual = std::max({residual_of(chosen), unit_residual, star_residual});
  out.selector = selector_from_mask(chosen, k);
  out.p = lattice_element(cps, n, chosen);
  if (!(out.max_residual <= tol)) {
    throw Error(ErrorKind::NotDeformation,
                "unit found but no central projection reproduces the product (residual floor " +
                    detail::num(out.max_residual) + ")");
  }
  return out;
}

/// |a o a| = |a|^2 for sampled a (deformed involution), together with the
/// block identity |a o a| = max(|pa|, |(1-p)a|)^2.
inline LawReport verify_cstar_identity(const DeformedAlgebra& d, std::size_t samples, Seed seed,
                                       const ToleranceConfig& cfg = {}) {
  LawCheck check("cstar_identity", seed);
  const ComplexMatrix q = identity(d.base().ambient_dim()) - d.p();
  for (std::size_t s = 0; s < samples; ++s) {
    const ComplexMatrix a = random_element(d.base(), derive(seed, 0xC5, s));
    const double norm = operator_norm(a);
    const double sq = norm * norm;
    const double lhs = operator_norm(d.product(d.star(a), a));
    const double block = std::max(operator_norm(d.p() * a), operator_norm(q * a));
    const double scale = std::max(1.0, sq);
    auto describe = [&] { return Json{{"a", matrix_to_json(a)}, {"norm_star_product", lhs}, {"norm_squared", sq}}; };
    check.record(std::abs(lhs - sq) / scale, cfg.tol_rel, describe);
    check.record(std::abs(lhs - block * block) / scale, cfg.tol_rel, describe);
  }
  return check.report();
}

}  // namespace cstar

#endif  // CSTAR_DEFORM_HPP
