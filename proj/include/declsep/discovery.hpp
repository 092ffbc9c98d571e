#pragma once

#include <declsep/closure.hpp>
#include <declsep/declare.hpp>
#include <declsep/log.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace declsep
{

/*! Constraints satisfied by every positive trace, in constraint order. */
std::vector<ground_constraint> compatibles( std::vector<ground_constraint> const& constraints,
                                            trace_set const& positives,
                                            unsigned threads = 1 );

/* negative trace -> compatible constraints rejecting it (possibly none) */
using sheriffs_map = std::map<trace, std::vector<ground_constraint>>;

sheriffs_map sheriffs( std::vector<ground_constraint> const& compatible, trace_set const& negatives, unsigned threads = 1 );

struct negative_split
{
  trace_set effective;
  trace_set empty_sheriffs;
  trace_set rejected_by_initial;
};

/*! Effective negatives: rejectable by some sheriff and still accepted by `initial`. */
negative_split effective_negatives( sheriffs_map const& smap, model const& initial, trace_set const& negatives );

struct candidate_pool
{
  /* union of the sheriffs of the effective negatives, in constraint order */
  std::vector<ground_constraint> constraints;
  /* effective negatives rejected by each pool constraint */
  std::map<ground_constraint, std::vector<trace>> coverage;
  /* every compatible constraint; the specific criterion may select any of them */
  std::vector<ground_constraint> compatible;
};

candidate_pool make_candidate_pool( sheriffs_map const& smap, trace_set const& effective, std::vector<ground_constraint> const& compatible );

enum class criterion
{
  subset,
  specific,
  cardinality
};

std::string_view to_string( criterion c );
criterion criterion_from_name( std::string_view name );

/*! \brief Strict preference between two candidate solutions.
 *
 * subset: cl(lhs∪P) ⊂ cl(rhs∪P), or lhs ⊂ rhs with equal closures.
 * specific: cl(lhs∪P) ⊃ cl(rhs∪P), or lhs ⊂ rhs with equal closures.
 * cardinality: (|cl(lhs∪P)|, |lhs|) lexicographically smaller.
 * Returns false for incomparable pairs.
 */
bool is_better( criterion mode, model const& lhs, model const& rhs, model const& initial, closure_engine const& engine );

struct solution
{
  model constraints;
  std::size_t closure_size = 0;
  std::size_t cardinality = 0;
  std::size_t violated_negatives = 0;
};

struct solution_set
{
  std::vector<solution> models;
  bool truncated = false;
};

class contract_error : public error
{
public:
  using error::error;
};

struct solve_options
{
  std::size_t max_models = 20;
  std::size_t node_budget = 1'000'000;
};

/*! \brief Select the optimal constraint sets for the effective negatives.
 *
 * `violated_negatives` counts rejected traces of `effective`. Throws
 * contract_error when some effective negative has no covering constraint.
 */
solution_set solve( candidate_pool const& pool,
                    trace_set const& effective,
                    model const& initial,
                    criterion mode,
                    closure_engine const& engine,
                    solve_options const& options = {} );

struct phase_timings
{
  double compatibles_ms = 0.0;
  double sheriffs_ms = 0.0;
  double optimisation_ms = 0.0;
  double total_ms = 0.0;
};

struct discovery_options
{
  criterion mode = criterion::subset;
  std::size_t max_models = 20;
  std::size_t node_budget = 1'000'000;
  bool strict_initial_model = false;
  bool allow_reflexive = false;
  unsigned threads = 1;
};

struct discovery_report
{
  declsep::alphabet alphabet;
  solution_set solutions;
  trace_set empty_sheriffs;
  trace_set rejected_by_initial;
  std::size_t positives_used = 0;
  std::size_t positives_filtered = 0;
  std::size_t negatives_total = 0;
  std::vector<std::string> warnings;
  phase_timings timings;
};

/*! \brief Ground, filter, compute sheriffs and solve.
 *
 * Positives rejected by `initial` are dropped with a warning, or rejected
 * with contract_error under `strict_initial_model`. `violated_negatives` in
 * the result counts all negatives rejected by S ∪ P.
 */
discovery_report discover( labeled_log const& log,
                           template_catalog const& catalog,
                           model const& initial,
                           rule_set const& rules,
                           discovery_options const& options = {} );

} // namespace declsep
