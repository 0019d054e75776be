#ifndef CSTAR_TOOLS_CLI_HPP
#define CSTAR_TOOLS_CLI_HPP

// Command implementations for the `cstar` tool. Each command writes to the
// given streams and returns the process exit code:
//   0  every check passed
//   1  mathematical violation or failed hypothesis (Singular, NoUnit, ...)
//   2  input error (unreadable file, bad flag, invalid deformation)

#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cstar/cstar.hpp"

namespace cstar::cli {

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Singular:
    case ErrorKind::NoUnit:
    case ErrorKind::NotDeformation:
    case ErrorKind::CenterDegenerate:
    case ErrorKind::CouldNotInvert:
    case ErrorKind::CenterTrivial:
    case ErrorKind::Internal:
      return 1;
    default:
      return 2;
  }
}

struct CommonOptions {
  std::optional<double> tol;
  std::optional<std::string> json_path;
  std::uint64_t seed = 0;
  std::size_t cases = 50;
};

/// --tol wins over CSTAR_TOL, which wins over the default; tol_abs follows
/// tol_rel at a factor 1e-3.
inline ToleranceConfig resolve_tolerance(const std::optional<double>& flag) {
  ToleranceConfig cfg;
  std::optional<double> tol = flag;
  if (!tol) {
    if (const char* env = std::getenv("CSTAR_TOL"); env != nullptr && *env != '\0') {
      char* end = nullptr;
      const double v = std::strtod(env, &end);
      if (end == env || *end != '\0') {
        throw Error(ErrorKind::InvalidTolerance, std::string("CSTAR_TOL is not a number: ") + env);
      }
      tol = v;
    }
  }
  if (tol) {
    cfg.tol_rel = *tol;
    cfg.tol_abs = *tol * 1e-3;
  }
  cfg.validate();
  return cfg;
}

inline std::string format_complex(Complex z) {
  std::ostringstream os;
  os << std::setprecision(6);
  const double re = std::abs(z.real()) < 5e-13 ? 0.0 : z.real();
  const double im = std::abs(z.imag()) < 5e-13 ? 0.0 : z.imag();
  if (im == 0.0) {
    os << re;
  } else if (re == 0.0) {
    os << im << "i";
  } else {
    os << re << (im < 0 ? "-" : "+") << std::abs(im) << "i";
  }
  return os.str();
}

inline void print_matrix(std::ostream& out, const ComplexMatrix& a, const std::string& indent = "  ") {
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    out << indent << "[";
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
      out << (c ? ", " : "") << std::setw(10) << format_complex(a(r, c));
    }
    out << "]\n";
  }
}

inline void print_reports(std::ostream& out, const std::vector<LawReport>& reports) {
  for (const LawReport& r : reports) out << to_json(r).dump() << '\n';
  out << '\n' << std::left << std::setw(28) << "law" << std::right << std::setw(8) << "cases"
      << std::setw(8) << "failed" << std::setw(14) << "worst" << "  verdict\n";
  for (const LawReport& r : reports) {
    out << std::left << std::setw(28) << r.law_id << std::right << std::setw(8) << r.cases_run
        << std::setw(8) << r.cases_failed << std::setw(14) << std::setprecision(3)
        << std::scientific << r.worst_residual << std::defaultfloat << "  "
        << (r.passed() ? "PASS" : "FAIL") << '\n';
  }
}

inline void sink(const CommonOptions& opts, const Json& j) {
  if (opts.json_path) write_json_file(*opts.json_path, j);
}

inline Json reports_json(const std::vector<LawReport>& reports) {
  Json arr = Json::array();
  for (const LawReport& r : reports) arr.push_back(to_json(r));
  return arr;
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

inline int cmd_analyze(const std::string& algebra_path, const CommonOptions& opts, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    const ToleranceConfig cfg = resolve_tolerance(opts.tol);
    const StarAlgebra alg = build_algebra(load_algebra_file(algebra_path), cfg);
    const StarAlgebra comm = commutant(alg, cfg);
    const StarAlgebra bicomm = commutant(comm, cfg);
    const double bicomm_residual = span_equality_residual(bicomm, alg);
    const bool bicomm_equal = bicomm_residual <= cfg.bound(1.0) * 10.0;
    const StarAlgebra z = center(alg, cfg);
    const CentralProjectionSet cps = central_projections(alg, cfg);
    out << "ambient dimension      " << alg.ambient_dim() << '\n'
        << "algebra dimension      " << alg.dim() << '\n'
        << "commutant dimension    " << comm.dim() << '\n'
        << "bicommutant = algebra  " << (bicomm_equal ? "yes" : "no") << " (residual "
        << bicomm_residual << ")\n"
        << "center dimension       " << z.dim() << '\n'
        << "minimal central projections k = " << cps.count() << '\n';
    Json projections = Json::array();
    for (std::size_t m = 0; m < cps.count(); ++m) {
      out << " q" << m << ":\n";
      print_matrix(out, cps.minimal[m], "   ");
      projections.push_back(matrix_to_json(cps.minimal[m]));
    }
    Json basis = Json::array();
    for (const ComplexMatrix& b : alg.basis()) basis.push_back(matrix_to_json(b));
    sink(opts, Json{{"ambient_dim", alg.ambient_dim()},
                    {"dim", alg.dim()},
                    {"commutant_dim", comm.dim()},
                    {"bicommutant_equals_algebra", bicomm_equal},
                    {"bicommutant_residual", bicomm_residual},
                    {"center_dim", z.dim()},
                    {"k", cps.count()},
                    {"central_projections", projections},
                    {"basis", basis}});
    return bicomm_equal && z.dim() == cps.count() ? 0 : 1;
  });
}

inline int cmd_deform(const std::string& deformation_path, const CommonOptions& opts,
                      const std::optional<std::string>& emit_structure, std::ostream& out,
                      std::ostream& err) {
  return guarded(err, [&] {
    const ToleranceConfig cfg = resolve_tolerance(opts.tol);
    if (opts.cases == 0) throw Error(ErrorKind::InvalidInput, "samples must be ≥ 1");
    const DeformationFile file = load_deformation_file(deformation_path);
    const StarAlgebra alg = build_algebra(file.algebra, cfg);
    require_same_dim(file.u, alg.ambient_dim(), "u");
    const CentralProjectionSet cps = central_projections(alg, cfg);
    const ComplexMatrix p = projection_from_selector(cps, alg.ambient_dim(), file.p_selector);
    const DeformedAlgebra d(alg, file.u, p, cfg);
    if (emit_structure) write_json_file(*emit_structure, structure_to_json(structure_constants(d), star_table(d)));
    const Seed seed{opts.seed};
    std::vector<LawReport> reports{deformation_law_report(d, opts.cases, seed, cfg)};
    print_reports(out, reports);
    sink(opts, reports_json(reports));
    return all_passed(reports) ? 0 : 1;
  });
}

inline std::vector<int> parse_blocks(const std::string& text) {
  std::vector<int> blocks;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size() || v <= 0) throw std::invalid_argument(item);
      blocks.push_back(v);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidInput, "--blocks expects a comma list of positive integers, got \"" + text + "\"");
    }
  }
  if (blocks.empty()) throw Error(ErrorKind::InvalidInput, "--blocks is empty");
  return blocks;
}

inline int cmd_verify(const std::optional<std::string>& algebra_path, const std::optional<std::string>& blocks,
                      const CommonOptions& opts, const std::optional<std::string>& corrupt,
                      std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ToleranceConfig cfg = resolve_tolerance(opts.tol);
    if (opts.cases == 0) throw Error(ErrorKind::InvalidInput, "cases must be ≥ 1");
    if (algebra_path && blocks) throw Error(ErrorKind::InvalidInput, "give either an algebra file or --blocks, not both");
    if (corrupt) {
      const auto& ids = suite_ids();
      if (std::find(ids.begin(), ids.end(), *corrupt) == ids.end()) {
        throw Error(ErrorKind::InvalidInput, "unknown suite for --corrupt: " + *corrupt);
      }
    }
    RunOptions run{cfg, corrupt, 1e-2};
    Instance inst;
    if (algebra_path) {
      inst = make_instance(build_algebra(load_algebra_file(*algebra_path), cfg), Seed{opts.seed}, opts.cases, cfg);
    } else {
      InstanceSpec spec{parse_blocks(blocks.value_or("2,3")), Seed{opts.seed}, opts.cases};
      spec.validate();
      inst = make_instance(spec, cfg);
    }
    const std::vector<LawReport> reports = run_all(inst, run);
    print_reports(out, reports);
    out << "\nseed " << opts.seed << ", " << (all_passed(reports) ? "all suites pass" : "FAILURES") << '\n';
    sink(opts, reports_json(reports));
    return all_passed(reports) ? 0 : 1;
  });
}

inline int cmd_positivize(const std::string& algebra_path, const std::string& element_path,
                          const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ToleranceConfig cfg = resolve_tolerance(opts.tol);
    const StarAlgebra alg = build_algebra(load_algebra_file(algebra_path), cfg);
    const ComplexMatrix a = load_element_file(element_path);
    require_same_dim(a, alg.ambient_dim(), "element");
    const Positivizer pos = positivize(alg, a, cfg);
    const LawReport uniqueness = check_positivizer_uniqueness(alg, a, opts.cases, Seed{opts.seed}, cfg);
    const double na = operator_norm(a);
    const bool modulus_ok = pos.modulus_min_eigenvalue >= -cfg.tol_rel * std::max(1.0, na);
    out << "u =\n";
    print_matrix(out, pos.unitary);
    out << "|a| =\n";
    print_matrix(out, pos.modulus);
    out << "membership residual     " << pos.membership_residual << '\n'
        << "unitarity residual      " << pos.unitarity_residual << '\n'
        << "modulus min eigenvalue  " << pos.modulus_min_eigenvalue << (modulus_ok ? " (PSD)" : " (NOT PSD)") << '\n';
    print_reports(out, {uniqueness});
    sink(opts, Json{{"u", matrix_to_json(pos.unitary)},
                    {"modulus", matrix_to_json(pos.modulus)},
                    {"membership_residual", pos.membership_residual},
                    {"unitarity_residual", pos.unitarity_residual},
                    {"modulus_min_eigenvalue", pos.modulus_min_eigenvalue},
                    {"uniqueness", to_json(uniqueness)}});
    return modulus_ok && uniqueness.passed() ? 0 : 1;
  });
}

inline int cmd_recover(const std::string& algebra_path, const std::string& structure_path,
                       const CommonOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ToleranceConfig cfg = resolve_tolerance(opts.tol);
    const StarAlgebra alg = build_algebra(load_algebra_file(algebra_path), cfg);
    const StructureFile file = load_structure_file(structure_path);
    const DeformationRecovery rec = recover_deformation(alg, file.constants, file.star, cfg);
    out << "u =\n";
    print_matrix(out, rec.u);
    out << "p_selector [";
    for (std::size_t i = 0; i < rec.selector.size(); ++i) out << (i ? ", " : "") << rec.selector[i];
    out << "]\np =\n";
    print_matrix(out, rec.p);
    out << "max residual  " << rec.max_residual << '\n';
    sink(opts, Json{{"u", matrix_to_json(rec.u)},
                    {"p", matrix_to_json(rec.p)},
                    {"p_selector", rec.selector},
                    {"max_residual", rec.max_residual}});
    return 0;
  });
}

}  // namespace cstar::cli

#endif  // CSTAR_TOOLS_CLI_HPP
