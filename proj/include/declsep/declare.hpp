#pragma once

#include <declsep/log.hpp>
#include <declsep/symbolic_dfa.hpp>

#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace declsep
{

/* Catalog order; the enumerator value is the catalog index used for sorting. */
enum class template_kind : std::uint8_t
{
  existence,
  absence,
  absence2,
  exactly1,
  init,
  end,
  responded_existence,
  response,
  alternate_response,
  chain_response,
  precedence,
  alternate_precedence,
  chain_precedence,
  succession,
  alternate_succession,
  chain_succession,
  co_existence,
  not_co_existence,
  not_succession,
  not_chain_succession,
  exclusive_choice
};

inline constexpr std::size_t num_templates = 21;

struct template_info
{
  template_kind kind;
  std::string_view name;
  unsigned arity;
  /* finite-word semantics over `a` (first parameter) and `b` (second) */
  std::string_view regex;
};

template_info const& info( template_kind kind );
std::span<template_info const> all_templates();

class catalog_error : public error
{
public:
  using error::error;
};

/*! Case-insensitive lookup; also accepts snake_case (`exclusive_choice`). */
template_kind template_from_name( std::string_view name );

/*! \brief The language bias: an ordered subset of the template catalog. */
class template_catalog
{
public:
  template_catalog() = default;
  explicit template_catalog( std::vector<template_kind> kinds );

  static template_catalog full();
  static template_catalog from_names( std::vector<std::string> const& names );

  std::vector<template_kind> const& kinds() const noexcept { return kinds_; }
  std::size_t size() const noexcept { return kinds_.size(); }
  bool contains( template_kind kind ) const;

private:
  std::vector<template_kind> kinds_;
};

inline constexpr activity_id no_activity = std::numeric_limits<activity_id>::max();

struct ground_constraint
{
  template_kind kind;
  activity_id first;
  activity_id second = no_activity;

  unsigned arity() const { return info( kind ).arity; }

  auto operator<=>( ground_constraint const& ) const = default;
};

ground_constraint make_constraint( template_kind kind, activity_id first, activity_id second = no_activity );

/*! `Response[a, b]` / `Existence[a]` */
std::string to_string( ground_constraint const& c, alphabet const& alpha );

/* a constraint whose parameters are still activity names */
struct named_constraint
{
  template_kind kind;
  std::vector<std::string> args;
};

named_constraint parse_named_constraint( std::string_view text );

/*! Throws when an argument is missing from `alpha`. */
ground_constraint bind( named_constraint const& c, alphabet const& alpha );

/*! Parse the textual form; the names must exist in `alpha`. */
ground_constraint parse_constraint( std::string_view text, alphabet const& alpha );

struct grounding_options
{
  bool allow_reflexive = false;
};

/*! All groundings of the catalog over the alphabet in constraint order. */
std::vector<ground_constraint> ground( template_catalog const& catalog, alphabet const& alpha, grounding_options const& options = {} );
std::vector<ground_constraint> ground( template_catalog const& catalog, std::size_t alphabet_size, grounding_options const& options = {} );

/*! \brief A Declare model: a duplicate-free, sorted conjunction of constraints. */
class model
{
public:
  using const_iterator = std::vector<ground_constraint>::const_iterator;

  model() = default;
  model( std::initializer_list<ground_constraint> constraints );
  explicit model( std::vector<ground_constraint> constraints );

  void insert( ground_constraint const& c );
  bool contains( ground_constraint const& c ) const;
  bool includes( model const& other ) const;

  std::size_t size() const noexcept { return constraints_.size(); }
  bool empty() const noexcept { return constraints_.empty(); }
  const_iterator begin() const noexcept { return constraints_.begin(); }
  const_iterator end() const noexcept { return constraints_.end(); }
  std::vector<ground_constraint> const& constraints() const noexcept { return constraints_; }

  auto operator<=>( model const& ) const = default;

private:
  std::vector<ground_constraint> constraints_;
};

model model_union( model const& lhs, model const& rhs );

/*! \brief Deterministic complete automaton for one grounded constraint.
 *
 * Shares the compiled template DFA; events are mapped to symbol classes by
 * comparing against the grounded parameters, so the transition function is
 * total over every activity id.
 */
class constraint_automaton
{
public:
  using state = std::uint8_t;

  constraint_automaton( symbolic_dfa const& dfa, activity_id first, activity_id second );

  state initial() const noexcept { return 0; }
  state step( state s, activity_id a ) const noexcept { return dfa_->next[s][static_cast<std::size_t>( classify( a ) )]; }
  bool accepting( state s ) const noexcept { return dfa_->accepting[s]; }
  std::size_t num_states() const noexcept { return dfa_->num_states(); }

  symbol_class classify( activity_id a ) const noexcept
  {
    unsigned c = ( a == first_ ? 1u : 0u ) | ( a == second_ ? 2u : 0u );
    return static_cast<symbol_class>( c );
  }

  struct run_result
  {
    state final_state;
    std::size_t steps;
  };

  run_result run( trace const& t ) const noexcept;
  bool accepts( trace const& t ) const noexcept { return accepting( run( t ).final_state ); }

  symbolic_dfa const& dfa() const noexcept { return *dfa_; }
  activity_id first() const noexcept { return first_; }
  activity_id second() const noexcept { return second_; }

private:
  symbolic_dfa const* dfa_;
  activity_id first_;
  activity_id second_;
};

/*! Compiled template DFA (cached for the process lifetime). */
symbolic_dfa const& template_dfa( template_kind kind );

/*! Throws catalog_error when an argument is outside the alphabet. */
constraint_automaton compile( ground_constraint const& c, alphabet const& alpha );
constraint_automaton compile( ground_constraint const& c );

bool compliant( trace const& t, ground_constraint const& c );
bool model_accepts( model const& m, trace const& t );

/* constraints not satisfied by `t`, in constraint order */
std::vector<ground_constraint> violated_constraints( model const& m, trace const& t );

/*! \brief Row-major boolean matrix: rows are constraints, columns traces. */
class compliance_matrix
{
public:
  compliance_matrix() = default;
  compliance_matrix( std::size_t rows, std::size_t cols );

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool operator()( std::size_t row, std::size_t col ) const { return cells_[row * cols_ + col] != 0; }
  void set( std::size_t row, std::size_t col, bool value ) { cells_[row * cols_ + col] = value ? 1 : 0; }

  bool row_all( std::size_t row ) const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> cells_;
};

/*! Evaluated in parallel over constraint rows when `threads` > 1. */
compliance_matrix make_compliance_matrix( std::span<ground_constraint const> constraints,
                                          std::span<trace const> traces,
                                          unsigned threads = 1 );

} // namespace declsep
