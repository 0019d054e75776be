#ifndef CSTAR_JSON_HPP
#define CSTAR_JSON_HPP

// Shared wire encoding: a complex scalar is [re, im]; a matrix is a
// row-major array of rows of scalars.

#include <string>

#include <json.hpp>

#include "cstar/error.hpp"
#include "cstar/matcore.hpp"

namespace cstar {

using Json = nlohmann::json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error(ErrorKind::InvalidInput, where + ": expected [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json matrix_to_json(const ComplexMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(complex_to_json(a(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline ComplexMatrix matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorKind::InvalidInput, where + ": expected a non-empty array of rows");
  }
  const auto n = static_cast<Eigen::Index>(j.size());
  ComplexMatrix a(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) {
      throw Error(ErrorKind::NotSquare, where + ": row " + std::to_string(r) + " has " +
                                            std::to_string(row.is_array() ? row.size() : 0) +
                                            " entries, expected " + std::to_string(n));
    }
    for (Eigen::Index c = 0; c < n; ++c) {
      a(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                  where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  if (!a.allFinite()) throw Error(ErrorKind::NonFinite, where + ": non-finite entry");
  return a;
}

inline Json vector_to_json(const ComplexVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline ComplexVector vector_from_json(const Json& j, std::size_t expected, const std::string& where) {
  if (!j.is_array() || j.size() != expected) {
    throw Error(ErrorKind::InvalidInput,
                where + ": expected " + std::to_string(expected) + " coefficients");
  }
  ComplexVector v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where + "[" + std::to_string(i) + "]");
  }
  return v;
}

}  // namespace cstar

#endif  // CSTAR_JSON_HPP
