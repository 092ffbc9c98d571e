#pragma once

#include <declsep/declare.hpp>
#include <declsep/log.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace declsep
{

enum class generation_mode
{
  exhaustive,
  sampled
};

enum class violation_mode
{
  /* negatives violate every target */
  all_targets,
  /* negatives violate at least one target */
  any_target
};

struct generation_spec
{
  declsep::alphabet alphabet;
  model reference;
  /* scenario targets, a subset of `reference` */
  model violated;
  std::size_t min_len = 1;
  std::size_t max_len = 10;
  std::size_t count_pos = 100;
  std::size_t count_neg = 100;
  std::uint64_t seed = 1;
  generation_mode mode = generation_mode::sampled;
  violation_mode negatives = violation_mode::all_targets;
};

/* the requested language has no word in the length band */
class infeasible_error : public error
{
public:
  using error::error;
};

/*! \brief Explicit product of constraint automata over a concrete alphabet.
 *
 * Accepts the words satisfying every `required` automaton and violating
 * every (or, with `violate_any`, some) `rejected` automaton. Reachable
 * states are built eagerly; more than `state_limit` of them is an error.
 */
class product_automaton
{
public:
  product_automaton( std::vector<constraint_automaton> required,
                     std::vector<constraint_automaton> rejected,
                     std::size_t alphabet_size,
                     bool violate_any = false,
                     std::size_t state_limit = 1'000'000 );

  std::uint32_t initial() const noexcept { return 0; }
  std::uint32_t next( std::uint32_t s, activity_id a ) const { return next_[s * alphabet_size_ + a]; }
  bool accepting( std::uint32_t s ) const { return accepting_[s]; }
  std::size_t num_states() const noexcept { return accepting_.size(); }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }

  bool accepts( trace const& t ) const;

  /* length of a shortest accepted word; nullopt for the empty language */
  std::optional<std::size_t> shortest_accepted_length() const;

  /*! counts[k][s] = number of accepted words of length k read from state s */
  std::vector<std::vector<double>> count_table( std::size_t max_len ) const;

private:
  std::size_t alphabet_size_;
  std::vector<std::uint32_t> next_;
  std::vector<bool> accepting_;
};

product_automaton positive_automaton( generation_spec const& spec );
product_automaton negative_automaton( generation_spec const& spec );

/*! Words of the product language with length in [min_len, max_len].
 *
 * Exhaustive mode returns the first `count` words in (length, lexicographic)
 * order. Sampled mode draws distinct words uniformly from the band with a
 * seeded generator; when `count` covers most of the band the whole band is
 * enumerated and a seeded subset kept. Throws infeasible_error on an empty band.
 */
trace_set generate_words( product_automaton const& product,
                          std::size_t min_len,
                          std::size_t max_len,
                          std::size_t count,
                          std::uint64_t seed,
                          generation_mode mode );

trace_set generate_positives( generation_spec const& spec );

/*! Throws `error` when `violated` is empty or not part of the reference model. */
trace_set generate_negatives( generation_spec const& spec );

struct loan_scenarios
{
  declsep::alphabet alphabet;
  model reference;
  generation_spec scenario_a;
  generation_spec scenario_b;
};

/*! The loan-approval reference model with both violation scenarios. */
loan_scenarios loan_fixture();

/*
 * {"activities": [...], "model": ["Init[a]", ...], "violated": [...],
 *  "min_len": 1, "max_len": 9, "count_pos": 100, "count_neg": 100,
 *  "seed": 7, "mode": "sampled", "negatives": "all"}
 * `activities` is optional and extends the names used by the constraints.
 */
generation_spec parse_generation_spec( std::string_view json_text );
generation_spec load_generation_spec( std::string const& path );
std::string serialize_generation_spec( generation_spec const& spec );

} // namespace declsep
