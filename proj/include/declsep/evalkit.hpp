#pragma once

#include <declsep/closure.hpp>
#include <declsep/discovery.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace declsep
{

struct eval_result
{
  std::size_t model_size = 0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t accepted_positives = 0;
  std::size_t rejected_negatives = 0;
  /* fractions in [0, 1]; an empty side counts as fully correct */
  double violated_neg_pct = 0.0;
  double satisfied_pos_pct = 0.0;
  double accuracy = 0.0;
};

eval_result evaluate( model const& m, trace_set const& positives, trace_set const& negatives );
eval_result evaluate( model const& m, labeled_log const& log );

struct fold_plan
{
  std::size_t k = 5;
  std::uint64_t seed = 1;
  /* fold index of every trace, in set order */
  std::vector<std::size_t> positive_folds;
  std::vector<std::size_t> negative_folds;
};

/*! Seeded shuffle of each label class, then round-robin assignment, so per-class fold sizes differ by at most one. */
fold_plan make_fold_plan( labeled_log const& log, std::size_t k, std::uint64_t seed );

struct fold_outcome
{
  std::size_t fold = 0;
  bool failed = false;
  std::string failure;
  model selected;
  eval_result held_out;
};

struct cv_result
{
  std::vector<fold_outcome> folds;
  std::size_t succeeded = 0;
  double mean_accuracy = 0.0;
  /* population standard deviation over successful folds */
  double stddev_accuracy = 0.0;
};

struct cv_config
{
  template_catalog catalog = template_catalog::full();
  model initial;
  discovery_options discovery;
};

/*! Discover on k-1 folds and score the first reported model on the held-out fold. */
cv_result cross_validate( labeled_log const& log, fold_plan const& plan, rule_set const& rules, cv_config const& config );

struct phase_row
{
  std::string phase;
  double ms = 0.0;
};

/* compatibles, sheriffs, optimisation, total */
std::vector<phase_row> time_phases( discovery_report const& report );

std::string to_csv( eval_result const& r );
std::string to_json( eval_result const& r );
std::string to_csv( cv_result const& r );
std::string to_json( cv_result const& r, alphabet const& alpha );

/* two decimals, as printed in result tables */
std::string format_percent( double fraction );

} // namespace declsep
