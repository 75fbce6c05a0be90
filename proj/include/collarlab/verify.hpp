#ifndef COLLARLAB_VERIFY_HPP
#define COLLARLAB_VERIFY_HPP

#include "collarlab/pipeline.hpp"

namespace collarlab {

struct CriterionResult {
  std::string name;
  std::string detail;    // what was measured, human-readable
  Real target = 0.0;
  Real measured = 0.0;
  Real tolerance = 0.0;
  bool pass = false;
  Real seconds = 0.0;
};

/// Names of all acceptance criteria, in execution order.
const std::vector<std::string>& criterion_names();

/// Run the acceptance criteria (all, or the named subset); each criterion
/// pins its targets and tolerances in code.
std::vector<CriterionResult> run_acceptance(const Config& cfg,
                                            const std::vector<std::string>& only = {});

/// Render the pass/fail table.
std::string format_table(const std::vector<CriterionResult>& results);

/// True when every criterion passed.
bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace collarlab

#endif
