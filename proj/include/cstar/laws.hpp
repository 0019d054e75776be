#ifndef CSTAR_LAWS_HPP
#define CSTAR_LAWS_HPP

// Seeded property suites, one per structural claim about deformed
// C*-structures. Every suite is a pure function of (instance, options) and
// emits a LawReport; each has a designated fault that must make it fail.
//
// Identities that are (bi)linear are checked on the full basis plus random
// samples, which makes the check exhaustive up to rounding. Non-linear
// identities (norms) are checked on random samples only.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cstar/algebra.hpp"
#include "cstar/deform.hpp"
#include "cstar/report.hpp"

namespace cstar {

struct InstanceSpec {
  std::vector<int> block_sizes{1};
  Seed seed{};
  std::size_t samples = 50;

  void validate() const {
    if (block_sizes.empty()) throw Error(ErrorKind::InvalidInput, "block list is empty");
    int total = 0;
    for (int s : block_sizes) {
      if (s <= 0) throw Error(ErrorKind::InvalidInput, "block sizes must be positive");
      total += s;
    }
    if (total > 32) {
      throw Error(ErrorKind::InvalidInput,
                  "sum of block sizes is " + std::to_string(total) + ", the cap is 32");
    }
    if (samples == 0) throw Error(ErrorKind::InvalidInput, "samples must be >= 1");
  }
};

enum class Fault {
  None,
  NonUnitaryU,     // u + eps h, h Hermitian in A with |h| = 1
  NonCentralP,     // rank-one projection onto (e_0 + e_{n-1}) / sqrt 2
  DegenerateU,     // u = 0
  ForeignNorm,     // Frobenius norm in place of the operator norm
  SingularElement, // singular test subjects for the positivizer
};

struct SuiteOptions {
  ToleranceConfig cfg{};
  Fault fault = Fault::None;
  double fault_size = 1e-2;
};

/// A base algebra with its central projections and a sampled (u, p).
struct Instance {
  StarAlgebra alg;
  CentralProjectionSet projections;
  ComplexMatrix u;
  std::uint64_t p_mask = 0;
  ComplexMatrix p;
  Seed seed;
  std::size_t samples = 50;

  std::size_t blocks() const { return projections.count(); }
};

inline Instance make_instance(const StarAlgebra& alg, Seed seed, std::size_t samples,
                              const ToleranceConfig& cfg = {}) {
  Instance inst;
  inst.alg = alg;
  inst.projections = central_projections(alg, cfg);
  inst.u = random_unitary_in(alg, derive(seed, 0x75));
  NormalStream rng(derive(seed, 0x70));
  const std::size_t k = inst.blocks();
  inst.p_mask = k >= 64 ? rng.bits() : rng.bits() & ((std::uint64_t{1} << k) - 1);
  inst.p = lattice_element(inst.projections, alg.ambient_dim(), inst.p_mask);
  inst.seed = seed;
  inst.samples = samples;
  return inst;
}

inline Instance make_instance(const InstanceSpec& spec, const ToleranceConfig& cfg = {}) {
  spec.validate();
  return make_instance(block_algebra(spec.block_sizes), spec.seed, spec.samples, cfg);
}

namespace detail {

inline ComplexMatrix non_central_projection(Eigen::Index n) {
  ComplexVector v = ComplexVector::Zero(n);
  v(0) = 1.0;
  v(n - 1) += 1.0;
  v.normalize();
  return v * v.adjoint();
}

inline ComplexMatrix perturbed_unitary(const Instance& inst, double size) {
  ComplexMatrix h = random_hermitian(inst.alg, derive(inst.seed, 0xFA17));
  const double norm = operator_norm(h);
  if (norm > 0.0) h /= norm;
  return inst.u + size * h;
}

/// The instance's deformation with the requested fault applied (faults that
/// do not concern u or p leave it untouched).
inline DeformedAlgebra deformation(const Instance& inst, const SuiteOptions& opts) {
  ComplexMatrix u = inst.u;
  ComplexMatrix p = inst.p;
  const Eigen::Index n = inst.alg.ambient_dim();
  switch (opts.fault) {
    case Fault::NonUnitaryU: u = perturbed_unitary(inst, opts.fault_size); break;
    case Fault::NonCentralP:
      if (n >= 2) p = non_central_projection(n);
      break;
    case Fault::DegenerateU: u = ComplexMatrix::Zero(n, n); break;
    default: break;
  }
  return DeformedAlgebra::unchecked(inst.alg, std::move(u), std::move(p));
}

/// Basis elements followed by `extra` random elements.
inline std::vector<ComplexMatrix> sample_set(const StarAlgebra& alg, Seed seed, std::size_t extra) {
  std::vector<ComplexMatrix> out = alg.basis();
  for (std::size_t s = 0; s < extra; ++s) out.push_back(random_element(alg, derive(seed, 0x5A, s)));
  return out;
}

inline double scale(std::initializer_list<double> norms) {
  double product = 1.0;
  for (double v : norms) product *= v;
  return std::max(1.0, product);
}

}  // namespace detail

/// Associativity, bilinearity, involution laws, unit and C*-identity for
/// one deformation.
inline LawReport deformation_law_report(const DeformedAlgebra& d, std::size_t samples, Seed seed,
                                        const ToleranceConfig& cfg = {}) {
  LawCheck check("lemma_construction", seed);
  const StarAlgebra& alg = d.base();
  const double tol = cfg.tol_rel;
  const std::vector<ComplexMatrix> elems = detail::sample_set(alg, seed, samples);
  std::vector<double> norms;
  for (const ComplexMatrix& e : elems) norms.push_back(operator_norm(e));
  const std::size_t dim = alg.dim();
  auto mat = [](const ComplexMatrix& m) { return matrix_to_json(m); };

  // associativity: all basis triples when affordable, plus random triples
  auto assoc = [&](std::size_t i, std::size_t j, std::size_t k) {
    const ComplexMatrix& a = elems[i];
    const ComplexMatrix& b = elems[j];
    const ComplexMatrix& c = elems[k];
    const double r = operator_norm(d.product(d.product(a, b), c) - d.product(a, d.product(b, c)));
    check.record(r / detail::scale({norms[i], norms[j], norms[k]}), tol, [&] {
      return Json{{"law", "associativity"}, {"a", mat(a)}, {"b", mat(b)}, {"c", mat(c)}};
    });
  };
  if (dim * dim * dim <= 4096) {
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = 0; j < dim; ++j)
        for (std::size_t k = 0; k < dim; ++k) assoc(i, j, k);
  }
  NormalStream pick(derive(seed, 0x71C));
  auto any = [&] { return static_cast<std::size_t>(pick.bits() % elems.size()); };
  for (std::size_t s = 0; s < samples; ++s) assoc(dim + s, any(), any());

  const ComplexMatrix e = d.unit();
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const ComplexMatrix& a = elems[i];
    const double na = std::max(1.0, norms[i]);
    auto describe = [&](const char* law) { return [&, law] { return Json{{"law", law}, {"a", mat(a)}}; }; };
    check.record(operator_norm(d.product(e, a) - a) / na, tol, describe("left_unit"));
    check.record(operator_norm(d.product(a, e) - a) / na, tol, describe("right_unit"));
    check.record(operator_norm(d.star(d.star(a)) - a) / na, tol, describe("star_involutive"));
    const Complex lambda = pick.next_complex();
    check.record(operator_norm(d.star(lambda * a) - std::conj(lambda) * d.star(a)) /
                     std::max(1.0, std::abs(lambda) * norms[i]),
                 tol, describe("star_conjugate_linear"));
  }
  for (std::size_t s = 0; s < elems.size(); ++s) {
    const std::size_t i = s < dim ? s : any();
    const std::size_t j = any();
    const std::size_t k = any();
    const ComplexMatrix& a = elems[i];
    const ComplexMatrix& b = elems[j];
    const ComplexMatrix& c = elems[k];
    check.record(operator_norm(d.star(d.product(a, b)) - d.product(d.star(b), d.star(a))) /
                     detail::scale({norms[i], norms[j]}),
                 tol, [&] { return Json{{"law", "star_antimultiplicative"}, {"a", mat(a)}, {"b", mat(b)}}; });
    const Complex alpha = pick.next_complex();
    const Complex beta = pick.next_complex();
    const double lin_scale =
        std::max(1.0, (std::abs(alpha) * norms[j] + std::abs(beta) * norms[k]) * norms[i]);
    check.record(operator_norm(d.product(a, alpha * b + beta * c) -
                               (alpha * d.product(a, b) + beta * d.product(a, c))) / lin_scale,
                 tol, [&] { return Json{{"law", "right_linear"}, {"a", mat(a)}, {"b", mat(b)}, {"c", mat(c)}}; });
    check.record(operator_norm(d.product(alpha * b + beta * c, a) -
                               (alpha * d.product(b, a) + beta * d.product(c, a))) / lin_scale,
                 tol, [&] { return Json{{"law", "left_linear"}, {"a", mat(a)}, {"b", mat(b)}, {"c", mat(c)}}; });
  }
  check.merge(verify_cstar_identity(d, samples, derive(seed, 0xC5), cfg));
  return check.report();
}

inline LawReport suite_lemma_construction(const Instance& inst, const SuiteOptions& opts = {}) {
  return deformation_law_report(detail::deformation(inst, opts), inst.samples, inst.seed, opts.cfg);
}

/// Bicommutant equals the algebra; the minimal central projections are
/// orthogonal, sum to 1, lie in the center and commute with the algebra;
/// dim Z(A) equals their count.
inline LawReport suite_structure(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("structure", inst.seed);
  const StarAlgebra& alg = inst.alg;
  const double tol = opts.cfg.tol_rel;
  const Eigen::Index n = alg.ambient_dim();
  const StarAlgebra bicomm = commutant(commutant(alg, opts.cfg), opts.cfg);
  check.record(span_equality_residual(bicomm, alg), tol * 10.0, [&] {
    return Json{{"law", "bicommutant"}, {"dim_algebra", alg.dim()}, {"dim_bicommutant", bicomm.dim()}};
  });
  const StarAlgebra z = center(alg, opts.cfg);
  const CentralProjectionSet& cps = inst.projections;
  if (z.dim() == cps.count()) {
    check.pass();
  } else {
    check.fail(Json{{"law", "center_dimension"}, {"dim_center", z.dim()}, {"k", cps.count()}});
  }
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  const std::vector<ComplexMatrix> elems = detail::sample_set(alg, inst.seed, inst.samples);
  for (std::size_t m = 0; m < cps.count(); ++m) {
    const ComplexMatrix& q = cps.minimal[m];
    sum += q;
    auto law = [m](const char* name) { return [m, name] { return Json{{"law", name}, {"index", m}}; }; };
    check.record(projection_residual(q), tol, law("projection"));
    check.record(z.distance(q), tol * 10.0, law("in_center"));
    for (std::size_t m2 = m + 1; m2 < cps.count(); ++m2) {
      check.record(operator_norm(q * cps.minimal[m2]), tol, law("orthogonal"));
    }
    for (const ComplexMatrix& a : elems) {
      check.record(commutator_norm(q, a) / std::max(1.0, operator_norm(a)), tol, law("commutes"));
    }
  }
  check.record(operator_norm(sum - identity(n)), tol, [] { return Json{{"law", "partition_of_unity"}}; });
  return check.report();
}

/// A commutative iff A(o) commutative, via the pairwise identity
/// a o b - b o a = (2p - 1)(a u b - b u a), so |[a, b]_o| = |a u b - b u a|.
inline LawReport suite_commutativity_equivalence(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("commutativity_equivalence", inst.seed);
  const DeformedAlgebra d = detail::deformation(inst, opts);
  const StarAlgebra& alg = inst.alg;
  const double tol = opts.cfg.tol_rel;
  const std::vector<ComplexMatrix> elems = detail::sample_set(alg, inst.seed, inst.samples);
  const ComplexMatrix& u = d.u();
  double worst_orig = 0.0, worst_def = 0.0;
  std::size_t wi = 0, wj = 0;
  for (std::size_t i = 0; i < elems.size(); ++i) {
    for (std::size_t j = 0; j < elems.size(); ++j) {
      if (i >= alg.dim() && j >= alg.dim() && i != j) continue;
      const ComplexMatrix& a = elems[i];
      const ComplexMatrix& b = elems[j];
      const double s = detail::scale({operator_norm(a), operator_norm(b)});
      const double orig = commutator_norm(a, b) / s;
      const double def = operator_norm(d.product(a, b) - d.product(b, a)) / s;
      const double twisted = operator_norm(a * u * b - b * u * a) / s;
      check.record(std::abs(def - twisted), tol, [&] {
        return Json{{"law", "pairwise_criterion"}, {"a", matrix_to_json(a)}, {"b", matrix_to_json(b)}};
      });
      if (orig > worst_orig) {
        worst_orig = orig;
      }
      if (def > worst_def) {
        worst_def = def;
        wi = i;
        wj = j;
      }
    }
  }
  const bool commutative = worst_orig <= tol;
  const bool deformed_commutative = worst_def <= tol;
  if (commutative == deformed_commutative) {
    check.pass();
  } else {
    check.fail(Json{{"law", "commutativity_equivalence"},
                    {"algebra_commutative", commutative},
                    {"deformed_commutative", deformed_commutative},
                    {"max_commutator", worst_orig},
                    {"max_deformed_commutator", worst_def},
                    {"witness", {wi, wj}}});
  }
  return check.report();
}

namespace detail {

/// {a in A : a o b = b o a for all b}, solved in A's coordinates.
inline SpanBuilder deformed_center(const DeformedAlgebra& d, const ToleranceConfig& cfg) {
  const StarAlgebra& alg = d.base();
  const auto dim = static_cast<Eigen::Index>(alg.dim());
  const Eigen::Index n = alg.ambient_dim();
  ComplexMatrix gram = ComplexMatrix::Zero(dim, dim);
  ComplexMatrix columns(n * n, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const ComplexMatrix& bi = alg.basis(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < dim; ++j) {
      const ComplexMatrix& bj = alg.basis(static_cast<std::size_t>(j));
      columns.col(j) = vec(d.product(bj, bi) - d.product(bi, bj));
    }
    gram.noalias() += columns.adjoint() * columns;
  }
  const ComplexMatrix null = gram_nullspace(gram, cfg);
  SpanBuilder span(n, cfg.tol_rel);
  for (Eigen::Index c = 0; c < null.cols(); ++c) span.add(alg.combine(null.col(c)));
  return span;
}

}  // namespace detail

/// Z(A(o)) = Z(A) u*, by mutual containment of the two spans.
inline LawReport suite_center_correspondence(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("center_correspondence", inst.seed);
  const DeformedAlgebra d = detail::deformation(inst, opts);
  const double tol = opts.cfg.tol_rel * 10.0;
  const detail::SpanBuilder deformed = detail::deformed_center(d, opts.cfg);
  const StarAlgebra z = center(inst.alg, opts.cfg);
  detail::SpanBuilder expected(inst.alg.ambient_dim(), opts.cfg.tol_rel);
  for (const ComplexMatrix& c : z.basis()) expected.add(c * d.u().adjoint());

  if (deformed.size() == expected.size()) {
    check.pass();
  } else {
    check.fail(Json{{"law", "center_dimension"}, {"deformed", deformed.size()}, {"expected", expected.size()}});
  }
  for (std::size_t i = 0; i < deformed.size(); ++i) {
    check.record(expected.distance(deformed.element(i)), tol,
                 [&] { return Json{{"law", "deformed_center_in_Zu*"}, {"index", i}}; });
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    check.record(deformed.distance(expected.element(i)), tol,
                 [&] { return Json{{"law", "Zu*_in_deformed_center"}, {"index", i}}; });
  }
  if (inst.blocks() == 1) {
    if (deformed.size() == 1) {
      check.pass();
    } else {
      check.fail(Json{{"law", "trivial_center_dimension"}, {"deformed", deformed.size()}});
    }
    const ComplexMatrix unit = d.unit();
    check.record(deformed.distance(unit) / std::max(1.0, unit.norm()), tol,
                 [] { return Json{{"law", "unit_spans_center"}}; });
  }
  return check.report();
}

/// I = sum of the selected blocks (q_I A). For a in A and b in I both a o b
/// and b o a stay in I.
inline LawReport suite_ideal_stability(const Instance& inst, const std::vector<std::size_t>& ideal_blocks,
                                       const SuiteOptions& opts = {}) {
  LawCheck check("ideal_stability", inst.seed);
  const DeformedAlgebra d = detail::deformation(inst, opts);
  const StarAlgebra& alg = inst.alg;
  const ComplexMatrix q = projection_from_selector(inst.projections, alg.ambient_dim(), ideal_blocks);
  auto ideal_residual = [&](const ComplexMatrix& x) { return (x - q * x).norm() + alg.distance(x); };
  std::vector<ComplexMatrix> ideal;
  for (const ComplexMatrix& b : alg.basis()) {
    const ComplexMatrix qb = q * b;
    if (qb.norm() > 0.5) ideal.push_back(qb);
  }
  for (std::size_t s = 0; s < inst.samples; ++s) {
    ideal.push_back(q * random_element(alg, derive(inst.seed, 0x1DE, s)));
  }
  const std::vector<ComplexMatrix> elems = detail::sample_set(alg, inst.seed, inst.samples);
  for (std::size_t s = 0; s < std::max(elems.size(), ideal.size()); ++s) {
    const ComplexMatrix& a = elems[s % elems.size()];
    const ComplexMatrix& b = ideal[s % ideal.size()];
    const double sc = detail::scale({operator_norm(a), operator_norm(b)});
    auto describe = [&](const char* law) {
      return [&, law] { return Json{{"law", law}, {"a", matrix_to_json(a)}, {"b", matrix_to_json(b)}}; };
    };
    check.record(ideal_residual(d.product(a, b)) / sc, opts.cfg.tol_rel, describe("left_ideal"));
    check.record(ideal_residual(d.product(b, a)) / sc, opts.cfg.tol_rel, describe("right_ideal"));
  }
  return check.report();
}

/// z = sum_m c_m q_m with c_m spread over [1, 2]: central, positive,
/// invertible, not a multiple of a unitary.
inline ComplexMatrix converse_witness(const StarAlgebra& alg, const CentralProjectionSet& cps) {
  if (cps.count() < 2) {
    throw Error(ErrorKind::CenterTrivial, "the algebra has trivial center; no central non-scalar witness exists");
  }
  ComplexMatrix z = ComplexMatrix::Zero(alg.ambient_dim(), alg.ambient_dim());
  for (std::size_t m = 0; m < cps.count(); ++m) {
    z += (1.0 + static_cast<double>(m) / static_cast<double>(cps.count() - 1)) * cps.minimal[m];
  }
  return z;
}

/// Operator-norm distance from z / |z| to the unitary group, 1 - s_min / s_max.
inline double distance_to_scaled_unitary(const ComplexMatrix& z) {
  const RealVector s = singular_values(z);
  return s(0) > 0.0 ? 1.0 - s(s.size() - 1) / s(0) : 1.0;
}

/// Isometric pairs: scaled unitary pairs (lambda w, v / lambda) satisfy
/// |a x b| = |x|; in a trivial-center instance the hypothesis
/// |a^{-1} x a| <= |x| forces a a* to be scalar; with a nontrivial center a
/// central non-scalar z gives an isometric pair (z, z^{-1}) that is not of
/// that form.
inline LawReport suite_trivial_center_isometries(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("trivial_center_isometries", inst.seed);
  const StarAlgebra& alg = inst.alg;
  const double tol = opts.cfg.tol_rel;
  const Eigen::Index n = alg.ambient_dim();
  const std::vector<ComplexMatrix> xs = detail::sample_set(alg, inst.seed, inst.samples);
  NormalStream rng(derive(inst.seed, 0x150));
  const std::size_t pairs = std::max<std::size_t>(1, std::min<std::size_t>(inst.samples, 16));
  for (std::size_t t = 0; t < pairs; ++t) {
    const ComplexMatrix w = random_unitary_in(alg, derive(inst.seed, 0x151, t));
    const ComplexMatrix v = random_unitary_in(alg, derive(inst.seed, 0x152, t));
    const double lambda = std::exp(rng.next());
    ComplexMatrix a = lambda * w;
    if (opts.fault == Fault::NonUnitaryU) {
      ComplexMatrix h = random_hermitian(alg, derive(inst.seed, 0x153, t));
      h /= std::max(1e-300, operator_norm(h));
      a = lambda * (w + opts.fault_size * h);
    }
    const ComplexMatrix b = v / lambda;
    for (const ComplexMatrix& x : xs) {
      const double nx = operator_norm(x);
      check.record(std::abs(operator_norm(a * x * b) - nx) / std::max(1.0, nx), tol, [&] {
        return Json{{"law", "scaled_unitary_isometry"}, {"a", matrix_to_json(a)}, {"b", matrix_to_json(b)},
                    {"x", matrix_to_json(x)}};
      });
    }
    // lambda: the common singular value of a, inverted.
    const double recovered = 1.0 / singular_values(a)(0);
    check.record(unitarity_residual(recovered * a), tol, [&] { return Json{{"law", "lambda_a_unitary"}, {"lambda", recovered}}; });
    check.record(unitarity_residual(b / recovered), tol, [&] { return Json{{"law", "b_over_lambda_unitary"}, {"lambda", recovered}}; });
    if (inst.blocks() == 1) {
      // Operative step of (i) => (ii): contraction of x -> a^{-1} x a forces a a* scalar.
      const ComplexMatrix inv = a.inverse();
      double contraction = 0.0;
      for (const ComplexMatrix& x : xs) {
        const double nx = operator_norm(x);
        contraction = std::max(contraction, (operator_norm(inv * x * a) - nx) / std::max(1.0, nx));
      }
      if (contraction <= tol) {
        const double na = operator_norm(a);
        check.record(operator_norm(a * a.adjoint() / (na * na) - identity(n)), tol,
                     [&] { return Json{{"law", "aa*_scalar"}, {"a", matrix_to_json(a)}}; });
      } else {
        check.fail(Json{{"law", "contraction_hypothesis"}, {"excess", contraction}});
      }
    }
  }
  if (inst.blocks() == 1 && n >= 2) {
    // Contrapositive: an invertible a that is not a scaled unitary violates
    // the contraction hypothesis on some sampled x.
    const ComplexMatrix a = random_invertible_in(alg, derive(inst.seed, 0x154), opts.cfg);
    if (distance_to_scaled_unitary(a) > 1e-3) {
      const ComplexMatrix inv = a.inverse();
      double excess = 0.0;
      for (const ComplexMatrix& x : xs) {
        const double nx = operator_norm(x);
        excess = std::max(excess, (operator_norm(inv * x * a) - nx) / std::max(1.0, nx));
      }
      if (excess > tol) {
        check.pass();
      } else {
        check.fail(Json{{"law", "non_unitary_breaks_contraction"}, {"a", matrix_to_json(a)}});
      }
    }
  }
  if (inst.blocks() >= 2) {
    const ComplexMatrix z = converse_witness(alg, inst.projections);
    ComplexMatrix z_inv = ComplexMatrix::Zero(n, n);
    for (std::size_t m = 0; m < inst.blocks(); ++m) {
      z_inv += inst.projections.minimal[m] /
               (1.0 + static_cast<double>(m) / static_cast<double>(inst.blocks() - 1));
    }
    const double witness_tol = std::min(tol, 1e-10);
    for (const ComplexMatrix& x : xs) {
      const double nx = operator_norm(x);
      check.record(std::abs(operator_norm(z * x * z_inv) - nx) / std::max(1.0, nx), witness_tol, [&] {
        return Json{{"law", "central_isometry"}, {"z", matrix_to_json(z)}, {"x", matrix_to_json(x)}};
      });
    }
    const double dist = distance_to_scaled_unitary(z);
    if (dist >= 0.1) {
      check.pass();
    } else {
      check.fail(Json{{"law", "witness_not_scaled_unitary"}, {"distance", dist}});
    }
  }
  return check.report();
}

/// theta(a) = a u is a Jordan *-isomorphism from A(o) onto A:
/// theta(a o a) = theta(a)^2 and theta(a*) = theta(a)* (deformed star on the left).
inline LawReport suite_jordan_theta(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("jordan_theta", inst.seed);
  const DeformedAlgebra d = detail::deformation(inst, opts);
  const ComplexMatrix& u = d.u();
  const double tol = opts.cfg.tol_rel;
  const std::vector<ComplexMatrix> elems = detail::sample_set(inst.alg, inst.seed, inst.samples);
  NormalStream pick(derive(inst.seed, 0x7E7A));
  for (std::size_t i = 0; i < elems.size(); ++i) {
    const ComplexMatrix& a = elems[i];
    const ComplexMatrix& b = elems[pick.bits() % elems.size()];
    const double na = operator_norm(a);
    const double nb = operator_norm(b);
    const ComplexMatrix ta = a * u;
    const ComplexMatrix tb = b * u;
    auto describe = [&](const char* law) { return [&, law] { return Json{{"law", law}, {"a", matrix_to_json(a)}}; }; };
    const ComplexMatrix square = d.product(a, a);
    check.record(operator_norm(square - a * u * a) / detail::scale({na, na}), tol, describe("square_is_aua"));
    check.record(operator_norm(square * u - ta * ta) / detail::scale({na, na}), tol, describe("preserves_squares"));
    check.record(operator_norm(d.star(a) * u - ta.adjoint()) / std::max(1.0, na), tol, describe("preserves_star"));
    const ComplexMatrix jordan = (d.product(a, b) + d.product(b, a)) * u;
    check.record(operator_norm(jordan - (ta * tb + tb * ta)) / detail::scale({na, nb}), tol,
                 describe("preserves_jordan_product"));
  }
  return check.report();
}

/// |a|^2 = r(a* a): the operator norm against the spectral radius of the
/// Gram element (Rayleigh route) and the top singular value (dilation route).
inline LawReport suite_norm_uniqueness(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("norm_uniqueness", inst.seed);
  const double tol = opts.cfg.tol_rel;
  const Eigen::Index n = inst.alg.ambient_dim();
  std::vector<ComplexMatrix> elems = detail::sample_set(inst.alg, inst.seed, inst.samples);
  for (std::size_t s = 0; s < inst.samples; ++s) {
    NormalStream rng(derive(inst.seed, 0x90, s));
    ComplexMatrix a(n, n);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = rng.next_complex();
    elems.push_back(std::move(a));
  }
  for (const ComplexMatrix& a : elems) {
    const double norm = opts.fault == Fault::ForeignNorm ? a.norm() : operator_norm(a);
    const double sq = norm * norm;
    const double radius = spectral_radius_normal(a.adjoint() * a, opts.cfg);
    const double top = singular_values(a)(0);
    auto describe = [&](const char* law) {
      return [&, law] { return Json{{"law", law}, {"a", matrix_to_json(a)}, {"norm", norm}, {"radius", radius}}; };
    };
    check.record(std::abs(sq - radius) / std::max(1.0, sq), tol, describe("norm_squared_is_radius"));
    check.record(std::abs(norm - top) / std::max(1.0, norm), tol, describe("norm_is_top_singular_value"));
  }
  return check.report();
}

/// Nonzero singular normal element n(a) with both kernel-flip positivizers
/// admissible: for normal singular a, u_+ = a|a|^+ + P_ker and
/// u_- = a|a|^+ - P_ker are unitaries in A and u_+* a = u_-* a = |a|.
struct SingularDemo {
  bool singular_raised = false;
  std::vector<ComplexMatrix> admissible;
};

inline SingularDemo demo_singular_nonuniqueness(const StarAlgebra& alg, const ComplexMatrix& a,
                                                const ToleranceConfig& cfg = {}) {
  detail::require_member(alg, a, "a", cfg);
  const double norm = operator_norm(a);
  if (commutator_norm(a.adjoint(), a) > cfg.bound(norm * norm)) {
    throw Error(ErrorKind::NotNormal, "the non-uniqueness demo needs a normal element");
  }
  SingularDemo demo;
  try {
    (void)polar_decompose(a, cfg);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Singular) throw;
    demo.singular_raised = true;
  }
  if (!demo.singular_raised) return demo;
  const Eigen::Index n = a.rows();
  const HermitianEig eig = detail::eigh(detail::hermitian_part(a.adjoint() * a));
  const double cutoff = std::pow(cfg.invertibility_floor * std::max(norm, 1e-300), 2);
  ComplexVector pinv(n), kernel(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s2 = eig.eigenvalues(i);
    const bool null = s2 < cutoff;
    pinv(i) = null ? 0.0 : 1.0 / std::sqrt(s2);
    kernel(i) = null ? 1.0 : 0.0;
  }
  const ComplexMatrix partial = a * detail::reconstruct(eig.eigenvectors, pinv);
  const ComplexMatrix pk = detail::reconstruct(eig.eigenvectors, kernel);
  for (const ComplexMatrix& candidate : {ComplexMatrix(partial + pk), ComplexMatrix(partial - pk)}) {
    const bool unitary = unitarity_residual(candidate) <= cfg.bound(1.0) * 10.0;
    const bool member = contains(alg, candidate, cfg).member;
    if (unitary && member && is_psd(candidate.adjoint() * a, cfg)) demo.admissible.push_back(candidate);
  }
  return demo;
}

namespace detail {

/// Top spectral projection of a random Hermitian element (0 when n = 1):
/// a singular, normal member of A.
inline ComplexMatrix singular_subject(const Instance& inst) {
  const Eigen::Index n = inst.alg.ambient_dim();
  const HermitianEig eig = eigh(random_hermitian(inst.alg, derive(inst.seed, 0x51)));
  ComplexVector top = ComplexVector::Zero(n);
  if (n >= 2) top(n - 1) = 1.0;
  return reconstruct(eig.eigenvectors, top);
}

}  // namespace detail

/// Polar positivizers of random invertible elements: unitary, in A, PSD
/// modulus, and a positive in A(u*, p) for every lattice p. Uniqueness is
/// checked separately by suite_positivizer_uniqueness.
inline LawReport suite_positivizer(const Instance& inst, const SuiteOptions& opts = {}) {
  LawCheck check("positivizer", inst.seed);
  const StarAlgebra& alg = inst.alg;
  const ToleranceConfig& cfg = opts.cfg;
  const Eigen::Index n = alg.ambient_dim();
  if (opts.fault == Fault::SingularElement) {
    const ComplexMatrix a = detail::singular_subject(inst);
    const SingularDemo demo = demo_singular_nonuniqueness(alg, a, cfg);
    check.fail(Json{{"law", "invertibility_hypothesis"}, {"singular_raised", demo.singular_raised},
                    {"admissible_unitaries", demo.admissible.size()}});
    return check.report();
  }
  const std::vector<ComplexMatrix> lattice = inst.blocks() <= 10
      ? projection_lattice(inst.projections, n)
      : std::vector<ComplexMatrix>{inst.p};
  for (std::size_t s = 0; s < inst.samples; ++s) {
    const ComplexMatrix a = random_invertible_in(alg, derive(inst.seed, 0x50, s), cfg);
    const double na = operator_norm(a);
    const Positivizer pos = positivize(alg, a, cfg);
    auto describe = [&](const char* law) { return [&, law] { return Json{{"law", law}, {"a", matrix_to_json(a)}}; }; };
    check.record(pos.unitarity_residual, cfg.tol_rel, describe("unitary"));
    check.record(pos.membership_residual, cfg.tol_rel * 10.0, describe("in_algebra"));
    check.record(std::max(0.0, -pos.modulus_min_eigenvalue) / std::max(1.0, na), cfg.tol_rel, describe("modulus_psd"));
    check.record(operator_norm(pos.unitary * pos.modulus - a) / std::max(1.0, na), cfg.tol_rel, describe("reconstructs"));
    for (const ComplexMatrix& p : lattice) {
      const DeformedAlgebra d = DeformedAlgebra::unchecked(alg, pos.unitary.adjoint(), p);
      const Positivity verdict = is_positive_deformed(d, a, cfg);
      check.record(verdict.deficiency / std::max(1.0, na), cfg.tol_rel, describe("positive_in_A(u*,p)"));
      if (verdict.witness) {
        const ComplexMatrix& b = *verdict.witness;
        check.record(operator_norm(d.product(b, b) - a) / std::max(1.0, na), cfg.tol_rel, describe("witness_square"));
      }
    }
  }
  return check.report();
}

/// Uniqueness spot checks on random invertible elements: no unitary w != 1
/// in A keeps w |a| positive.
inline LawReport suite_positivizer_uniqueness(const Instance& inst, std::size_t trials = 20,
                                              const SuiteOptions& opts = {}) {
  LawCheck check("positivizer_uniqueness", inst.seed);
  const StarAlgebra& alg = inst.alg;
  if (opts.fault == Fault::SingularElement) {
    const ComplexMatrix a = detail::singular_subject(inst);
    const SingularDemo demo = demo_singular_nonuniqueness(alg, a, opts.cfg);
    if (demo.admissible.size() >= 2) {
      check.fail(Json{{"law", "double_positive"}, {"a", matrix_to_json(a)},
                      {"admissible_unitaries", demo.admissible.size()}});
    } else {
      check.pass();
    }
    return check.report();
  }
  for (std::size_t s = 0; s < inst.samples; ++s) {
    const ComplexMatrix a = random_invertible_in(alg, derive(inst.seed, 0x50, s), opts.cfg);
    check.merge(check_positivizer_uniqueness(alg, a, trials, derive(inst.seed, 0x52, s), opts.cfg));
  }
  return check.report();
}

struct RunOptions {
  ToleranceConfig cfg{};
  /// law_id of the one suite to run with its designated fault.
  std::optional<std::string> corrupt;
  double fault_size = 1e-2;
};

inline const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids{
      "structure",           "lemma_construction",        "commutativity_equivalence",
      "center_correspondence", "ideal_stability",         "trivial_center_isometries",
      "jordan_theta",        "norm_uniqueness",           "cstar_identity",
      "positivizer",         "positivizer_uniqueness"};
  return ids;
}

/// The fault that must break a given suite.
inline Fault designated_fault(const std::string& id) {
  if (id == "commutativity_equivalence") return Fault::DegenerateU;
  if (id == "ideal_stability" || id == "structure") return Fault::NonCentralP;
  if (id == "norm_uniqueness") return Fault::ForeignNorm;
  if (id == "positivizer" || id == "positivizer_uniqueness") return Fault::SingularElement;
  return Fault::NonUnitaryU;
}

inline std::vector<LawReport> run_all(const Instance& inst, const RunOptions& options = {}) {
  std::vector<LawReport> reports;
  const auto& ids = suite_ids();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    const std::string& id = ids[i];
    Instance sub = inst;
    sub.seed = derive(inst.seed, 0x5E7, i);
    SuiteOptions opts{options.cfg, Fault::None, options.fault_size};
    if (options.corrupt && *options.corrupt == id) opts.fault = designated_fault(id);
    LawReport report;
    if (id == "structure") {
      report = suite_structure(sub, opts);
      if (opts.fault == Fault::NonCentralP) {
        // structure has no deformation; corrupt the projection set instead
        Instance broken = sub;
        broken.projections.minimal.front() = detail::non_central_projection(sub.alg.ambient_dim());
        report = suite_structure(broken, opts);
      }
    } else if (id == "lemma_construction") {
      report = suite_lemma_construction(sub, opts);
    } else if (id == "commutativity_equivalence") {
      report = suite_commutativity_equivalence(sub, opts);
    } else if (id == "center_correspondence") {
      report = suite_center_correspondence(sub, opts);
    } else if (id == "ideal_stability") {
      const std::size_t k = sub.blocks();
      report = suite_ideal_stability(sub, {k - 1}, opts);
    } else if (id == "trivial_center_isometries") {
      report = suite_trivial_center_isometries(sub, opts);
    } else if (id == "jordan_theta") {
      report = suite_jordan_theta(sub, opts);
    } else if (id == "norm_uniqueness") {
      report = suite_norm_uniqueness(sub, opts);
    } else if (id == "cstar_identity") {
      report = verify_cstar_identity(detail::deformation(sub, opts), sub.samples, sub.seed, opts.cfg);
    } else if (id == "positivizer") {
      report = suite_positivizer(sub, opts);
    } else if (id == "positivizer_uniqueness") {
      Instance small = sub;
      small.samples = std::min<std::size_t>(sub.samples, 10);
      report = suite_positivizer_uniqueness(small, 20, opts);
    }
    reports.push_back(std::move(report));
  }
  return reports;
}

inline std::vector<LawReport> run_all(const InstanceSpec& spec, const RunOptions& options = {}) {
  return run_all(make_instance(spec, options.cfg), options);
}

inline bool all_passed(const std::vector<LawReport>& reports) {
  for (const LawReport& r : reports) {
    if (!r.passed()) return false;
  }
  return true;
}

}  // namespace cstar

#endif  // CSTAR_LAWS_HPP
