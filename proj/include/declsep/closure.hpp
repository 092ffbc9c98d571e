#pragma once

#include <declsep/declare.hpp>

#include <boost/dynamic_bitset.hpp>

#include <cstdint>
#include <iosfwd>
#include <map>
#include <shared_mutex>
#include <string>
#include <vector>

namespace declsep
{

/* A template applied to rule variables (0 = X, 1 = Y, ... in order of appearance). */
struct rule_atom
{
  template_kind kind;
  std::vector<std::uint8_t> vars;

  bool operator==( rule_atom const& ) const = default;
};

/*! \brief `head <- body...`: whenever every body atom holds, so does the head.
 *
 * Distinct variables always bind distinct activities. Head variables that do
 * not occur in the body range over the whole alphabet.
 */
struct subsumption_rule
{
  rule_atom head;
  std::vector<rule_atom> body;
  std::vector<std::string> var_names;

  std::size_t num_vars() const noexcept { return var_names.size(); }
};

std::string to_string( subsumption_rule const& rule );

class rule_set
{
public:
  rule_set() = default;
  explicit rule_set( std::vector<subsumption_rule> rules ) : rules_( std::move( rules ) ) {}

  /*! The shipped rule set (see `default_rules_text`). */
  static rule_set defaults();

  std::vector<subsumption_rule> const& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }

private:
  std::vector<subsumption_rule> rules_;
};

/*! One rule per line: `Head(X, Y) <- Body1(X, Y), Body2(Y)`; `#` starts a comment. */
rule_set parse_rules( std::istream& in );
rule_set parse_rules( std::string const& text );
rule_set load_rules( std::string const& path );
std::string const& default_rules_text();

using constraint_bits = boost::dynamic_bitset<std::uint64_t>;

/*! \brief Dense indexing of every grounding of the full catalog. */
class constraint_universe
{
public:
  constraint_universe( std::size_t alphabet_size, grounding_options const& options = {} );

  std::size_t size() const noexcept { return size_; }
  std::size_t alphabet_size() const noexcept { return alphabet_size_; }
  bool contains( ground_constraint const& c ) const noexcept;
  std::size_t index( ground_constraint const& c ) const;
  ground_constraint at( std::size_t index ) const;

  constraint_bits to_bits( model const& m ) const;
  model to_model( constraint_bits const& bits ) const;

private:
  std::size_t alphabet_size_;
  bool reflexive_;
  std::size_t pairs_;
  std::array<std::size_t, num_templates + 1> offsets_{};
  std::size_t size_ = 0;
};

enum class generality
{
  strictly_more_general,
  equal,
  strictly_less_general,
  incomparable
};

std::string_view to_string( generality g );

/*! \brief Deductive closure under a grounded rule set.
 *
 * `close` is memoized; concurrent calls are safe (shared reads, exclusive
 * memo writes). The bitset entry points bypass the memo.
 */
class closure_engine
{
public:
  closure_engine( rule_set const& rules, std::size_t alphabet_size, grounding_options const& options = {} );

  constraint_universe const& universe() const noexcept { return universe_; }
  std::size_t num_grounded_rules() const noexcept { return grounded_.size(); }

  model close( model const& m ) const;
  void close_in_place( constraint_bits& bits ) const;
  constraint_bits close_bits( constraint_bits bits ) const;

  /*! Compare cl(lhs ∪ p) with cl(rhs ∪ p) by set inclusion. */
  generality more_general( model const& lhs, model const& rhs, model const& p = {} ) const;

private:
  struct grounded_rule
  {
    std::uint32_t head;
    std::array<std::uint32_t, 2> body;
    std::uint8_t body_size;
  };

  constraint_universe universe_;
  std::vector<grounded_rule> grounded_;
  std::vector<std::vector<std::uint32_t>> triggers_;

  mutable std::shared_mutex memo_mutex_;
  mutable std::map<model, model> memo_;
};

struct rule_violation
{
  std::size_t rule_index;
  std::string rule;
  std::string grounding;
  std::string witness;
};

struct rule_report
{
  std::size_t rules_checked = 0;
  std::size_t groundings_checked = 0;
  std::size_t words_checked = 0;
  std::vector<rule_violation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/*! \brief Check every grounding of every rule over all words up to `max_len`.
 *
 * Activities are named `a`, `b`, ...; the witness is the shortest (then
 * lexicographically first) word that satisfies the body but not the head.
 */
rule_report verify_rules( rule_set const& rules, std::size_t alphabet_size, std::size_t max_len );

} // namespace declsep
