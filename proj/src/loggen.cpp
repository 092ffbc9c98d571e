#include <declsep/loggen.hpp>

#include "rng.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <iterator>
#include <limits>
#include <random>
#include <set>
#include <unordered_map>

namespace declsep
{

product_automaton::product_automaton( std::vector<constraint_automaton> required,
                                      std::vector<constraint_automaton> rejected,
                                      std::size_t alphabet_size,
                                      bool violate_any,
                                      std::size_t state_limit )
    : alphabet_size_( alphabet_size )
{
  auto const nreq = required.size();
  std::vector<constraint_automaton> parts = std::move( required );
  parts.insert( parts.end(), rejected.begin(), rejected.end() );

  auto accepting = [&]( std::string const& key ) {
    for ( std::size_t i = 0; i < nreq; ++i )
    {
      if ( !parts[i].accepting( static_cast<std::uint8_t>( key[i] ) ) )
      {
        return false;
      }
    }
    if ( parts.size() == nreq )
    {
      return true;
    }
    std::size_t violated = 0;
    for ( std::size_t i = nreq; i < parts.size(); ++i )
    {
      violated += parts[i].accepting( static_cast<std::uint8_t>( key[i] ) ) ? 0 : 1;
    }
    return violate_any ? violated > 0 : violated == parts.size() - nreq;
  };

  /*
   * A component that can no longer reach an accepting state (required) or a
   * rejecting one (rejected) decides the outcome, so every such joint state
   * is merged into a single sink. Liveness is over-approximated by assuming
   * every symbol class occurs, which keeps the merge sound.
   */
  auto can_reach = []( constraint_automaton const& part, bool want_accepting ) {
    auto const& dfa = part.dfa();
    std::vector<symbol_class> classes;
    if ( part.first() == part.second() )
    {
      classes = { symbol_class::other, symbol_class::both };
    }
    else
    {
      classes = { symbol_class::other, symbol_class::first };
      if ( part.second() != no_activity )
      {
        classes.push_back( symbol_class::second );
      }
    }
    std::vector<bool> live( dfa.num_states(), false );
    for ( std::size_t q = 0; q < dfa.num_states(); ++q )
    {
      live[q] = dfa.accepting[q] == want_accepting;
    }
    for ( bool changed = true; changed; )
    {
      changed = false;
      for ( std::size_t q = 0; q < dfa.num_states(); ++q )
      {
        if ( live[q] )
        {
          continue;
        }
        for ( auto c : classes )
        {
          if ( live[dfa.next[q][static_cast<std::size_t>( c )]] )
          {
            live[q] = changed = true;
            break;
          }
        }
      }
    }
    return live;
  };
  std::vector<std::vector<bool>> live;
  for ( std::size_t i = 0; i < parts.size(); ++i )
  {
    live.push_back( can_reach( parts[i], i < nreq ) );
  }
  auto is_dead = [&]( std::string const& key ) {
    for ( std::size_t i = 0; i < nreq; ++i )
    {
      if ( !live[i][static_cast<std::uint8_t>( key[i] )] )
      {
        return true;
      }
    }
    if ( parts.size() == nreq )
    {
      return false;
    }
    std::size_t dead_targets = 0;
    for ( std::size_t i = nreq; i < parts.size(); ++i )
    {
      dead_targets += live[i][static_cast<std::uint8_t>( key[i] )] ? 0 : 1;
    }
    return violate_any ? dead_targets == parts.size() - nreq : dead_targets > 0;
  };

  /* joint states are byte strings of component states; the sink is the empty key */
  std::unordered_map<std::string, std::uint32_t> ids;
  std::vector<std::string> keys;
  std::string start( parts.size(), '\0' );
  for ( std::size_t i = 0; i < parts.size(); ++i )
  {
    start[i] = static_cast<char>( parts[i].initial() );
  }
  if ( !parts.empty() && is_dead( start ) )
  {
    start.clear();
  }
  ids.emplace( start, 0 );
  keys.push_back( start );

  for ( std::size_t s = 0; s < keys.size(); ++s )
  {
    bool const sink = keys[s].empty() && !parts.empty();
    accepting_.push_back( !sink && accepting( keys[s] ) );
    for ( activity_id a = 0; a < alphabet_size_; ++a )
    {
      std::string succ;
      if ( !sink )
      {
        succ = keys[s];
        for ( std::size_t i = 0; i < parts.size(); ++i )
        {
          succ[i] = static_cast<char>( parts[i].step( static_cast<std::uint8_t>( succ[i] ), a ) );
        }
        if ( is_dead( succ ) )
        {
          succ.clear();
        }
      }
      auto [it, inserted] = ids.emplace( succ, static_cast<std::uint32_t>( keys.size() ) );
      if ( inserted )
      {
        if ( keys.size() >= state_limit )
        {
          throw error( "product automaton exceeds " + std::to_string( state_limit ) + " states" );
        }
        keys.push_back( std::move( succ ) );
      }
      next_.push_back( it->second );
    }
  }
}

bool product_automaton::accepts( trace const& t ) const
{
  std::uint32_t s = initial();
  for ( auto a : t )
  {
    if ( a >= alphabet_size_ )
    {
      return false;
    }
    s = next( s, a );
  }
  return accepting( s );
}

std::optional<std::size_t> product_automaton::shortest_accepted_length() const
{
  std::vector<std::size_t> depth( num_states(), SIZE_MAX );
  std::deque<std::uint32_t> queue{ initial() };
  depth[initial()] = 0;
  while ( !queue.empty() )
  {
    auto const s = queue.front();
    queue.pop_front();
    if ( accepting( s ) )
    {
      return depth[s];
    }
    for ( activity_id a = 0; a < alphabet_size_; ++a )
    {
      auto const t = next( s, a );
      if ( depth[t] == SIZE_MAX )
      {
        depth[t] = depth[s] + 1;
        queue.push_back( t );
      }
    }
  }
  return std::nullopt;
}

std::vector<std::vector<double>> product_automaton::count_table( std::size_t max_len ) const
{
  std::vector<std::vector<double>> counts( max_len + 1, std::vector<double>( num_states(), 0.0 ) );
  for ( std::size_t s = 0; s < num_states(); ++s )
  {
    counts[0][s] = accepting_[s] ? 1.0 : 0.0;
  }
  for ( std::size_t k = 1; k <= max_len; ++k )
  {
    for ( std::size_t s = 0; s < num_states(); ++s )
    {
      double total = 0.0;
      for ( activity_id a = 0; a < alphabet_size_; ++a )
      {
        total += counts[k - 1][next_[s * alphabet_size_ + a]];
      }
      counts[k][s] = total;
    }
  }
  return counts;
}

namespace
{

std::vector<constraint_automaton> compile_all( model const& m, alphabet const& alpha )
{
  std::vector<constraint_automaton> result;
  for ( auto const& c : m )
  {
    result.push_back( compile( c, alpha ) );
  }
  return result;
}

/* all accepted words of length `len`, lexicographic, until `out` reaches `limit` */
void enumerate_length( product_automaton const& product, std::vector<std::vector<double>> const& counts, std::size_t len,
                       std::size_t limit, std::vector<trace>& out )
{
  trace word;
  auto visit = [&]( auto&& self, std::uint32_t s, std::size_t remaining ) -> void {
    if ( out.size() >= limit )
    {
      return;
    }
    if ( remaining == 0 )
    {
      out.push_back( word );
      return;
    }
    for ( activity_id a = 0; a < product.alphabet_size(); ++a )
    {
      auto const t = product.next( s, a );
      if ( counts[remaining - 1][t] > 0.0 )
      {
        word.push_back( a );
        self( self, t, remaining - 1 );
        word.pop_back();
      }
    }
  };
  if ( counts[len][product.initial()] > 0.0 )
  {
    visit( visit, product.initial(), len );
  }
}

trace sample_word( product_automaton const& product, std::vector<std::vector<double>> const& counts, std::size_t min_len,
                   std::size_t max_len, double total, std::mt19937_64& rng )
{
  auto pick = [&]( double target, auto weight, std::size_t n ) {
    std::size_t last_positive = n;
    for ( std::size_t i = 0; i < n; ++i )
    {
      auto const w = weight( i );
      if ( w <= 0.0 )
      {
        continue;
      }
      last_positive = i;
      if ( target < w )
      {
        return i;
      }
      target -= w;
    }
    return last_positive;
  };

  auto const len = min_len + pick( detail::uniform_unit( rng ) * total, [&]( std::size_t i ) { return counts[min_len + i][product.initial()]; }, max_len - min_len + 1 );
  trace word;
  std::uint32_t s = product.initial();
  for ( std::size_t remaining = len; remaining > 0; --remaining )
  {
    auto const a = static_cast<activity_id>( pick(
        detail::uniform_unit( rng ) * counts[remaining][s], [&]( std::size_t i ) { return counts[remaining - 1][product.next( s, static_cast<activity_id>( i ) )]; },
        product.alphabet_size() ) );
    word.push_back( a );
    s = product.next( s, a );
  }
  return word;
}

/* above this many words in the band, sampling never enumerates it */
constexpr double enumeration_limit = 5e6;

} // namespace

trace_set generate_words( product_automaton const& product,
                          std::size_t min_len,
                          std::size_t max_len,
                          std::size_t count,
                          std::uint64_t seed,
                          generation_mode mode )
{
  if ( min_len > max_len )
  {
    throw error( "min_len exceeds max_len" );
  }
  auto const counts = product.count_table( max_len );
  double total = 0.0;
  for ( std::size_t len = min_len; len <= max_len; ++len )
  {
    total += counts[len][product.initial()];
  }
  if ( total == 0.0 )
  {
    auto const shortest = product.shortest_accepted_length();
    std::string message = "no accepted trace with length in [" + std::to_string( min_len ) + ", " + std::to_string( max_len ) + "]";
    message += shortest ? "; shortest accepted length is " + std::to_string( *shortest ) : "; the language is empty";
    throw infeasible_error( message );
  }

  auto const everything = static_cast<double>( count ) >= total;
  if ( mode == generation_mode::exhaustive || everything || ( total <= enumeration_limit && total <= 4.0 * static_cast<double>( count ) ) )
  {
    std::vector<trace> words;
    auto const limit = mode == generation_mode::exhaustive || everything ? count : static_cast<std::size_t>( total );
    for ( std::size_t len = min_len; len <= max_len && words.size() < limit; ++len )
    {
      enumerate_length( product, counts, len, limit, words );
    }
    if ( mode == generation_mode::sampled && words.size() > count )
    {
      std::mt19937_64 rng( seed );
      detail::shuffle( words, rng );
      words.resize( count );
    }
    return { words.begin(), words.end() };
  }

  std::mt19937_64 rng( seed );
  trace_set result;
  std::size_t const max_attempts = 100 * count + 1000;
  for ( std::size_t attempt = 0; result.size() < count; ++attempt )
  {
    if ( attempt == max_attempts )
    {
      throw error( "sampling stalled after " + std::to_string( max_attempts ) + " draws" );
    }
    result.insert( sample_word( product, counts, min_len, max_len, total, rng ) );
  }
  return result;
}

product_automaton positive_automaton( generation_spec const& spec )
{
  return product_automaton( compile_all( spec.reference, spec.alphabet ), {}, spec.alphabet.size() );
}

product_automaton negative_automaton( generation_spec const& spec )
{
  if ( spec.violated.empty() )
  {
    throw error( "negative generation needs at least one violated constraint" );
  }
  if ( !spec.reference.includes( spec.violated ) )
  {
    throw error( "violated constraints must belong to the reference model" );
  }
  std::vector<ground_constraint> kept;
  std::set_difference( spec.reference.begin(), spec.reference.end(), spec.violated.begin(), spec.violated.end(), std::back_inserter( kept ) );
  return product_automaton( compile_all( model( std::move( kept ) ), spec.alphabet ), compile_all( spec.violated, spec.alphabet ),
                            spec.alphabet.size(), spec.negatives == violation_mode::any_target );
}

trace_set generate_positives( generation_spec const& spec )
{
  return generate_words( positive_automaton( spec ), spec.min_len, spec.max_len, spec.count_pos, spec.seed, spec.mode );
}

trace_set generate_negatives( generation_spec const& spec )
{
  /* a separate stream, so negatives do not mirror the positive draws */
  return generate_words( negative_automaton( spec ), spec.min_len, spec.max_len, spec.count_neg, spec.seed ^ 0x9e3779b97f4a7c15ull, spec.mode );
}

loan_scenarios loan_fixture()
{
  std::vector<std::string> const names{ "receive_loan_application", "appraise_property",      "assess_loan_risk",
                                        "assess_eligibility",       "reject_application",     "send_acceptance_pack",
                                        "notify_approval",          "receive_positive_feedback", "receive_negative_feedback" };
  loan_scenarios fx;
  fx.alphabet = alphabet( names );
  auto const& alpha = fx.alphabet;
  auto c = [&]( template_kind k, std::string_view a, std::string_view b = {} ) {
    return make_constraint( k, alpha.id( a ), b.empty() ? no_activity : alpha.id( b ) );
  };

  using enum template_kind;
  std::vector<ground_constraint> constraints{
      c( init, "receive_loan_application" ),
      c( precedence, "appraise_property", "assess_loan_risk" ),
      c( precedence, "assess_loan_risk", "assess_eligibility" ),
      c( precedence, "assess_eligibility", "reject_application" ),
      c( precedence, "assess_eligibility", "send_acceptance_pack" ),
      c( not_co_existence, "reject_application", "send_acceptance_pack" ),
      c( precedence, "send_acceptance_pack", "notify_approval" ),
      c( not_co_existence, "notify_approval", "reject_application" ),
      c( exclusive_choice, "receive_positive_feedback", "receive_negative_feedback" ),
      c( not_co_existence, "send_acceptance_pack", "receive_negative_feedback" ),
      /* scenario (b) violates this one, so it must be part of the reference */
      c( exclusive_choice, "send_acceptance_pack", "receive_negative_feedback" ),
  };
  for ( auto const& name : names )
  {
    constraints.push_back( c( absence2, name ) );
  }
  fx.reference = model( std::move( constraints ) );

  generation_spec base;
  base.alphabet = alpha;
  base.reference = fx.reference;
  base.min_len = 1;
  base.max_len = 9;
  base.count_pos = 2000;
  base.seed = 20210;

  fx.scenario_a = base;
  fx.scenario_a.violated = model{ c( precedence, "assess_loan_risk", "assess_eligibility" ) };
  fx.scenario_a.count_neg = 800;

  fx.scenario_b = base;
  fx.scenario_b.violated = model{ c( exclusive_choice, "send_acceptance_pack", "receive_negative_feedback" ) };
  fx.scenario_b.count_neg = 400;
  fx.scenario_b.seed = 20211;
  return fx;
}

generation_spec parse_generation_spec( std::string_view json_text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( json_text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw error( std::string( "invalid generation spec JSON: " ) + e.what() );
  }
  if ( !doc.is_object() )
  {
    throw error( "generation spec must be a JSON object" );
  }

  auto strings = [&]( char const* key ) {
    std::vector<std::string> out;
    if ( doc.contains( key ) )
    {
      if ( !doc[key].is_array() )
      {
        throw error( std::string( "generation spec field '" ) + key + "' must be an array" );
      }
      for ( auto const& item : doc[key] )
      {
        if ( !item.is_string() )
        {
          throw error( std::string( "generation spec field '" ) + key + "' must contain strings" );
        }
        out.push_back( item.get<std::string>() );
      }
    }
    return out;
  };
  auto number = [&]( char const* key, std::uint64_t fallback ) {
    if ( !doc.contains( key ) )
    {
      return fallback;
    }
    if ( !doc[key].is_number_unsigned() )
    {
      throw error( std::string( "generation spec field '" ) + key + "' must be a non-negative integer" );
    }
    return doc[key].get<std::uint64_t>();
  };

  std::vector<named_constraint> reference;
  std::vector<named_constraint> violated;
  for ( auto const& text : strings( "model" ) )
  {
    reference.push_back( parse_named_constraint( text ) );
  }
  for ( auto const& text : strings( "violated" ) )
  {
    violated.push_back( parse_named_constraint( text ) );
  }

  std::set<std::string> names;
  for ( auto const& name : strings( "activities" ) )
  {
    names.insert( name );
  }
  for ( auto const& c : reference )
  {
    names.insert( c.args.begin(), c.args.end() );
  }
  for ( auto const& c : violated )
  {
    names.insert( c.args.begin(), c.args.end() );
  }

  generation_spec spec;
  spec.alphabet = alphabet( std::vector<std::string>( names.begin(), names.end() ) );
  auto bind_all = [&]( std::vector<named_constraint> const& cs ) {
    std::vector<ground_constraint> out;
    for ( auto const& c : cs )
    {
      out.push_back( bind( c, spec.alphabet ) );
    }
    return model( std::move( out ) );
  };
  spec.reference = bind_all( reference );
  spec.violated = bind_all( violated );
  spec.min_len = number( "min_len", spec.min_len );
  spec.max_len = number( "max_len", spec.max_len );
  spec.count_pos = number( "count_pos", spec.count_pos );
  spec.count_neg = number( "count_neg", spec.count_neg );
  spec.seed = number( "seed", spec.seed );

  if ( doc.contains( "mode" ) )
  {
    auto const mode = doc["mode"].is_string() ? doc["mode"].get<std::string>() : std::string{};
    if ( mode == "sampled" )
    {
      spec.mode = generation_mode::sampled;
    }
    else if ( mode == "exhaustive" )
    {
      spec.mode = generation_mode::exhaustive;
    }
    else
    {
      throw error( "generation spec 'mode' must be \"sampled\" or \"exhaustive\"" );
    }
  }
  if ( doc.contains( "negatives" ) )
  {
    auto const mode = doc["negatives"].is_string() ? doc["negatives"].get<std::string>() : std::string{};
    if ( mode == "all" )
    {
      spec.negatives = violation_mode::all_targets;
    }
    else if ( mode == "any" )
    {
      spec.negatives = violation_mode::any_target;
    }
    else
    {
      throw error( "generation spec 'negatives' must be \"all\" or \"any\"" );
    }
  }
  if ( spec.min_len > spec.max_len )
  {
    throw error( "generation spec has min_len > max_len" );
  }
  return spec;
}

generation_spec load_generation_spec( std::string const& path )
{
  return parse_generation_spec( read_file( path ) );
}

std::string serialize_generation_spec( generation_spec const& spec )
{
  nlohmann::ordered_json doc;
  doc["activities"] = spec.alphabet.names();
  auto constraints = [&]( model const& m ) {
    auto out = nlohmann::ordered_json::array();
    for ( auto const& c : m )
    {
      out.push_back( to_string( c, spec.alphabet ) );
    }
    return out;
  };
  doc["model"] = constraints( spec.reference );
  doc["violated"] = constraints( spec.violated );
  doc["min_len"] = spec.min_len;
  doc["max_len"] = spec.max_len;
  doc["count_pos"] = spec.count_pos;
  doc["count_neg"] = spec.count_neg;
  doc["seed"] = spec.seed;
  doc["mode"] = spec.mode == generation_mode::sampled ? "sampled" : "exhaustive";
  doc["negatives"] = spec.negatives == violation_mode::all_targets ? "all" : "any";
  return doc.dump( 2 ) + "\n";
}

} // namespace declsep
