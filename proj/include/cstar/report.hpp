#ifndef CSTAR_REPORT_HPP
#define CSTAR_REPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <functional>
#include <optional>
#include <string>

#include "cstar/json.hpp"
#include "cstar/random.hpp"

namespace cstar {

/// Outcome of one property suite.
struct LawReport {
  std::string law_id;
  std::size_t cases_run = 0;
  std::size_t cases_failed = 0;
  double worst_residual = 0.0;
  Seed seed;
  std::optional<Json> counterexample;  // present iff cases_failed > 0

  bool passed() const { return cases_failed == 0; }
};

inline Json to_json(const LawReport& r) {
  Json j{{"law_id", r.law_id},
         {"cases_run", r.cases_run},
         {"cases_failed", r.cases_failed},
         {"worst_residual", r.worst_residual},
         {"seed", r.seed.value},
         {"passed", r.passed()}};
  j["counterexample"] = r.counterexample ? *r.counterexample : Json(nullptr);
  return j;
}

/// Accumulates residuals into a LawReport. Each case carries its own
/// threshold; the counterexample kept is the worst failing case.
class LawCheck {
 public:
  LawCheck(std::string law_id, Seed seed) {
    report_.law_id = std::move(law_id);
    report_.seed = seed;
  }

  bool record(double residual, double threshold, const std::function<Json()>& describe) {
    ++report_.cases_run;
    if (std::isnan(residual)) residual = std::numeric_limits<double>::infinity();
    report_.worst_residual = std::max(report_.worst_residual, residual);
    if (residual <= threshold) return true;
    ++report_.cases_failed;
    if (residual > worst_failure_) {
      worst_failure_ = residual;
      Json payload = describe ? describe() : Json::object();
      payload["residual"] = residual;
      payload["threshold"] = threshold;
      report_.counterexample = std::move(payload);
    }
    return false;
  }

  /// A structural check that passed.
  void pass() { ++report_.cases_run; }

  /// A structural failure that has no residual (e.g. a missing witness).
  void fail(Json payload) {
    ++report_.cases_run;
    ++report_.cases_failed;
    if (!report_.counterexample) report_.counterexample = std::move(payload);
  }

  void merge(const LawReport& other) {
    report_.cases_run += other.cases_run;
    report_.cases_failed += other.cases_failed;
    report_.worst_residual = std::max(report_.worst_residual, other.worst_residual);
    if (other.counterexample && !report_.counterexample) {
      report_.counterexample = other.counterexample;
      worst_failure_ = other.worst_residual;
    }
  }

  const LawReport& report() const { return report_; }

 private:
  LawReport report_;
  double worst_failure_ = -1.0;
};

}  // namespace cstar

#endif  // CSTAR_REPORT_HPP
