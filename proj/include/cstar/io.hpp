#ifndef CSTAR_IO_HPP
#define CSTAR_IO_HPP

// JSON file formats: algebra, deformation, structure constants, elements.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cstar/algebra.hpp"
#include "cstar/deform.hpp"
#include "cstar/json.hpp"

namespace cstar {

struct AlgebraFile {
  Eigen::Index ambient_dim = 0;
  std::vector<ComplexMatrix> generators;
};

struct DeformationFile {
  AlgebraFile algebra;
  ComplexMatrix u;
  std::vector<std::size_t> p_selector;
};

struct StructureFile {
  StructureConstants constants;
  std::vector<ComplexVector> star;
};

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidInput, path.string() + ": " + e.what());
  }
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

inline AlgebraFile algebra_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("ambient_dim") || !j.contains("generators")) {
    throw Error(ErrorKind::InvalidInput, "algebra file needs \"ambient_dim\" and \"generators\"");
  }
  if (!j["ambient_dim"].is_number_integer() || j["ambient_dim"].get<long long>() <= 0) {
    throw Error(ErrorKind::InvalidInput, "ambient_dim must be a positive integer");
  }
  if (!j["generators"].is_array()) {
    throw Error(ErrorKind::InvalidInput, "generators must be an array of matrices");
  }
  AlgebraFile out;
  out.ambient_dim = j["ambient_dim"].get<Eigen::Index>();
  for (std::size_t i = 0; i < j["generators"].size(); ++i) {
    const std::string where = "generator " + std::to_string(i);
    ComplexMatrix g = matrix_from_json(j["generators"][i], where);
    if (g.rows() != out.ambient_dim) {
      throw Error(ErrorKind::DimensionMismatch,
                  where + " is " + std::to_string(g.rows()) + "x" + std::to_string(g.cols()) +
                      ", expected " + std::to_string(out.ambient_dim) + "x" +
                      std::to_string(out.ambient_dim));
    }
    out.generators.push_back(std::move(g));
  }
  return out;
}

inline Json to_json(const AlgebraFile& a) {
  Json gens = Json::array();
  for (const ComplexMatrix& g : a.generators) gens.push_back(matrix_to_json(g));
  return Json{{"ambient_dim", a.ambient_dim}, {"generators", std::move(gens)}};
}

inline AlgebraFile load_algebra_file(const std::filesystem::path& path) {
  try {
    return algebra_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

inline StarAlgebra build_algebra(const AlgebraFile& file, const ToleranceConfig& cfg = {}) {
  return generate_algebra(file.ambient_dim, file.generators, cfg);
}

/// "algebra" may be an inline algebra object or a path, resolved relative
/// to the deformation file.
inline DeformationFile load_deformation_file(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  if (!j.is_object() || !j.contains("algebra") || !j.contains("u") || !j.contains("p_selector")) {
    throw Error(ErrorKind::InvalidInput,
                path.string() + ": deformation file needs \"algebra\", \"u\" and \"p_selector\"");
  }
  DeformationFile out;
  if (j["algebra"].is_string()) {
    std::filesystem::path ref = j["algebra"].get<std::string>();
    if (ref.is_relative()) ref = path.parent_path() / ref;
    out.algebra = load_algebra_file(ref);
  } else {
    out.algebra = algebra_from_json(j["algebra"]);
  }
  out.u = matrix_from_json(j["u"], "u");
  if (!j["p_selector"].is_array()) {
    throw Error(ErrorKind::InvalidInput, "p_selector must be an array of indices");
  }
  for (const Json& idx : j["p_selector"]) {
    if (!idx.is_number_integer() || idx.get<long long>() < 0) {
      throw Error(ErrorKind::InvalidInput, "p_selector entries must be non-negative integers");
    }
    out.p_selector.push_back(idx.get<std::size_t>());
  }
  return out;
}

inline Json structure_to_json(const StructureConstants& sc, const std::vector<ComplexVector>& star) {
  Json table = Json::array();
  for (std::size_t i = 0; i < sc.dim; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < sc.dim; ++j) row.push_back(vector_to_json(sc.at(i, j)));
    table.push_back(std::move(row));
  }
  Json stars = Json::array();
  for (const ComplexVector& v : star) stars.push_back(vector_to_json(v));
  return Json{{"dim", sc.dim}, {"table", std::move(table)}, {"star", std::move(stars)}};
}

inline StructureFile structure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("table") || !j.contains("star")) {
    throw Error(ErrorKind::InvalidInput, "structure file needs \"dim\", \"table\" and \"star\"");
  }
  if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0) {
    throw Error(ErrorKind::InvalidInput, "dim must be a positive integer");
  }
  const auto d = j["dim"].get<std::size_t>();
  StructureFile out;
  out.constants.dim = d;
  out.constants.table.resize(d * d);
  const Json& table = j["table"];
  if (!table.is_array() || table.size() != d) {
    throw Error(ErrorKind::InvalidInput, "table must be a dim x dim x dim array");
  }
  for (std::size_t i = 0; i < d; ++i) {
    if (!table[i].is_array() || table[i].size() != d) {
      throw Error(ErrorKind::InvalidInput, "table row " + std::to_string(i) + " must have dim entries");
    }
    for (std::size_t k = 0; k < d; ++k) {
      out.constants.at(i, k) = vector_from_json(
          table[i][k], d, "table[" + std::to_string(i) + "][" + std::to_string(k) + "]");
    }
  }
  const Json& star = j["star"];
  if (!star.is_array() || star.size() != d) {
    throw Error(ErrorKind::InvalidInput, "star must be a dim x dim array");
  }
  for (std::size_t i = 0; i < d; ++i) {
    out.star.push_back(vector_from_json(star[i], d, "star[" + std::to_string(i) + "]"));
  }
  return out;
}

inline StructureFile load_structure_file(const std::filesystem::path& path) {
  try {
    return structure_from_json(read_json_file(path));
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

/// A bare matrix, or {"element": matrix}.
inline ComplexMatrix load_element_file(const std::filesystem::path& path) {
  const Json j = read_json_file(path);
  try {
    if (j.is_object() && j.contains("element")) return matrix_from_json(j["element"], "element");
    return matrix_from_json(j, "element");
  } catch (const Error& e) {
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
}

}  // namespace cstar

#endif  // CSTAR_IO_HPP
