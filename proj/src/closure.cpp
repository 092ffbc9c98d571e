#include <declsep/closure.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <sstream>

namespace declsep
{

/* Every rule below is checked by verify_rules in the test suite. */
std::string const& default_rules_text()
{
  static std::string const text = R"(# unary templates
Existence(X) <- Init(X)
Existence(X) <- End(X)
Existence(X) <- Exactly1(X)
Absence2(X) <- Exactly1(X)
Absence2(X) <- Absence(X)
Exactly1(X) <- Existence(X), Absence2(X)

# an initial (final) activity precedes (responds to) every other one
Precedence(X, Y) <- Init(X)
Response(Y, X) <- End(X)

# response hierarchy
AlternateResponse(X, Y) <- ChainResponse(X, Y)
Response(X, Y) <- AlternateResponse(X, Y)
RespondedExistence(X, Y) <- Response(X, Y)

# precedence hierarchy
AlternatePrecedence(X, Y) <- ChainPrecedence(X, Y)
Precedence(X, Y) <- AlternatePrecedence(X, Y)
RespondedExistence(Y, X) <- Precedence(X, Y)

# succession = response and precedence
Response(X, Y) <- Succession(X, Y)
Precedence(X, Y) <- Succession(X, Y)
Succession(X, Y) <- Response(X, Y), Precedence(X, Y)
AlternateResponse(X, Y) <- AlternateSuccession(X, Y)
AlternatePrecedence(X, Y) <- AlternateSuccession(X, Y)
AlternateSuccession(X, Y) <- AlternateResponse(X, Y), AlternatePrecedence(X, Y)
ChainResponse(X, Y) <- ChainSuccession(X, Y)
ChainPrecedence(X, Y) <- ChainSuccession(X, Y)
ChainSuccession(X, Y) <- ChainResponse(X, Y), ChainPrecedence(X, Y)

# co-existence
RespondedExistence(X, Y) <- CoExistence(X, Y)
RespondedExistence(Y, X) <- CoExistence(X, Y)
CoExistence(X, Y) <- RespondedExistence(X, Y), RespondedExistence(Y, X)
Existence(Y) <- Existence(X), RespondedExistence(X, Y)

# negative templates
NotCoExistence(Y, X) <- NotCoExistence(X, Y)
NotCoExistence(X, Y) <- ExclusiveChoice(X, Y)
ExclusiveChoice(Y, X) <- ExclusiveChoice(X, Y)
ExclusiveChoice(X, Y) <- Existence(X), NotCoExistence(X, Y)
Absence(Y) <- Existence(X), NotCoExistence(X, Y)
NotSuccession(X, Y) <- NotCoExistence(X, Y)
NotChainSuccession(X, Y) <- NotSuccession(X, Y)
)";
  return text;
}

std::string to_string( subsumption_rule const& rule )
{
  auto atom = [&]( rule_atom const& a ) {
    std::string out( info( a.kind ).name );
    out += '(';
    for ( std::size_t i = 0; i < a.vars.size(); ++i )
    {
      out += i ? ", " : "";
      out += rule.var_names[a.vars[i]];
    }
    return out + ')';
  };

  std::string out = atom( rule.head ) + " <- ";
  for ( std::size_t i = 0; i < rule.body.size(); ++i )
  {
    out += i ? ", " : "";
    out += atom( rule.body[i] );
  }
  return out;
}

namespace
{

class rule_line_parser
{
public:
  rule_line_parser( std::string_view line, std::size_t line_no )
      : line_( line ), line_no_( line_no )
  {
  }

  subsumption_rule parse()
  {
    subsumption_rule rule;
    rule.head = atom( rule );
    expect( "<-" );
    rule.body.push_back( atom( rule ) );
    while ( peek() == ',' )
    {
      ++pos_;
      rule.body.push_back( atom( rule ) );
    }
    if ( peek() != '\0' )
    {
      fail( "unexpected trailing input" );
    }
    if ( rule.body.size() > 2 )
    {
      fail( "a rule body has at most two atoms" );
    }
    if ( rule.num_vars() > 3 )
    {
      fail( "a rule uses at most three variables" );
    }
    return rule;
  }

private:
  [[noreturn]] void fail( std::string const& what ) const
  {
    throw parse_error( "rule: " + what, line_no_, pos_ + 1 );
  }

  char peek()
  {
    while ( pos_ < line_.size() && std::isspace( static_cast<unsigned char>( line_[pos_] ) ) )
    {
      ++pos_;
    }
    return pos_ < line_.size() ? line_[pos_] : '\0';
  }

  void expect( std::string_view token )
  {
    peek();
    if ( line_.substr( pos_, token.size() ) != token )
    {
      fail( "expected '" + std::string( token ) + "'" );
    }
    pos_ += token.size();
  }

  std::string identifier()
  {
    peek();
    auto const start = pos_;
    while ( pos_ < line_.size() && ( std::isalnum( static_cast<unsigned char>( line_[pos_] ) ) || line_[pos_] == '_' ) )
    {
      ++pos_;
    }
    if ( start == pos_ )
    {
      fail( "expected an identifier" );
    }
    return std::string( line_.substr( start, pos_ - start ) );
  }

  rule_atom atom( subsumption_rule& rule )
  {
    auto const column = pos_;
    rule_atom a;
    try
    {
      a.kind = template_from_name( identifier() );
    }
    catch ( catalog_error const& e )
    {
      throw parse_error( e.what(), line_no_, column + 1 );
    }
    expect( "(" );
    while ( true )
    {
      auto const name = identifier();
      if ( !std::isupper( static_cast<unsigned char>( name.front() ) ) )
      {
        fail( "variables must start with an uppercase letter" );
      }
      auto it = std::find( rule.var_names.begin(), rule.var_names.end(), name );
      if ( it == rule.var_names.end() )
      {
        rule.var_names.push_back( name );
        it = rule.var_names.end() - 1;
      }
      a.vars.push_back( static_cast<std::uint8_t>( it - rule.var_names.begin() ) );
      if ( peek() == ',' )
      {
        ++pos_;
        continue;
      }
      break;
    }
    expect( ")" );
    if ( a.vars.size() != info( a.kind ).arity )
    {
      fail( std::string( info( a.kind ).name ) + " expects " + std::to_string( info( a.kind ).arity ) + " arguments" );
    }
    if ( a.vars.size() == 2 && a.vars[0] == a.vars[1] )
    {
      fail( "repeated variable in a binary atom" );
    }
    return a;
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

/* every injective assignment of `num_vars` variables into [0, n) */
template<typename Fn>
void for_each_assignment( std::size_t num_vars, std::size_t n, Fn&& fn )
{
  std::vector<activity_id> values( num_vars );
  auto rec = [&]( auto&& self, std::size_t depth ) -> void {
    if ( depth == num_vars )
    {
      fn( values );
      return;
    }
    for ( activity_id v = 0; v < n; ++v )
    {
      if ( std::find( values.begin(), values.begin() + static_cast<std::ptrdiff_t>( depth ), v ) != values.begin() + static_cast<std::ptrdiff_t>( depth ) )
      {
        continue;
      }
      values[depth] = v;
      self( self, depth + 1 );
    }
  };
  rec( rec, 0 );
}

ground_constraint instantiate( rule_atom const& a, std::vector<activity_id> const& values )
{
  return { a.kind, values[a.vars[0]], a.vars.size() == 2 ? values[a.vars[1]] : no_activity };
}

} // namespace

rule_set parse_rules( std::istream& in )
{
  std::vector<subsumption_rule> rules;
  std::string line;
  std::size_t line_no = 0;
  while ( std::getline( in, line ) )
  {
    ++line_no;
    if ( auto hash = line.find( '#' ); hash != std::string::npos )
    {
      line.erase( hash );
    }
    if ( std::all_of( line.begin(), line.end(), []( unsigned char c ) { return std::isspace( c ); } ) )
    {
      continue;
    }
    rules.push_back( rule_line_parser( line, line_no ).parse() );
  }
  return rule_set( std::move( rules ) );
}

rule_set parse_rules( std::string const& text )
{
  std::istringstream in( text );
  return parse_rules( in );
}

rule_set load_rules( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw error( "cannot open rule file '" + path + "'" );
  }
  return parse_rules( in );
}

rule_set rule_set::defaults()
{
  return parse_rules( default_rules_text() );
}

constraint_universe::constraint_universe( std::size_t alphabet_size, grounding_options const& options )
    : alphabet_size_( alphabet_size ),
      reflexive_( options.allow_reflexive ),
      pairs_( options.allow_reflexive ? alphabet_size * alphabet_size : alphabet_size * ( alphabet_size ? alphabet_size - 1 : 0 ) )
{
  std::size_t offset = 0;
  for ( std::size_t k = 0; k < num_templates; ++k )
  {
    offsets_[k] = offset;
    offset += all_templates()[k].arity == 1 ? alphabet_size_ : pairs_;
  }
  offsets_[num_templates] = offset;
  size_ = offset;
}

bool constraint_universe::contains( ground_constraint const& c ) const noexcept
{
  if ( c.first >= alphabet_size_ )
  {
    return false;
  }
  if ( c.arity() == 1 )
  {
    return c.second == no_activity;
  }
  return c.second < alphabet_size_ && ( reflexive_ || c.first != c.second );
}

std::size_t constraint_universe::index( ground_constraint const& c ) const
{
  if ( !contains( c ) )
  {
    throw error( "constraint outside the grounding universe" );
  }
  auto const base = offsets_[static_cast<std::size_t>( c.kind )];
  if ( c.arity() == 1 )
  {
    return base + c.first;
  }
  if ( reflexive_ )
  {
    return base + c.first * alphabet_size_ + c.second;
  }
  return base + c.first * ( alphabet_size_ - 1 ) + ( c.second < c.first ? c.second : c.second - 1 );
}

ground_constraint constraint_universe::at( std::size_t index ) const
{
  auto const k = static_cast<std::size_t>( std::upper_bound( offsets_.begin(), offsets_.end(), index ) - offsets_.begin() ) - 1;
  auto const kind = static_cast<template_kind>( k );
  auto const local = index - offsets_[k];
  if ( all_templates()[k].arity == 1 )
  {
    return { kind, static_cast<activity_id>( local ), no_activity };
  }
  if ( reflexive_ )
  {
    return { kind, static_cast<activity_id>( local / alphabet_size_ ), static_cast<activity_id>( local % alphabet_size_ ) };
  }
  auto const first = static_cast<activity_id>( local / ( alphabet_size_ - 1 ) );
  auto second = static_cast<activity_id>( local % ( alphabet_size_ - 1 ) );
  if ( second >= first )
  {
    ++second;
  }
  return { kind, first, second };
}

constraint_bits constraint_universe::to_bits( model const& m ) const
{
  constraint_bits bits( size_ );
  for ( auto const& c : m )
  {
    bits.set( index( c ) );
  }
  return bits;
}

model constraint_universe::to_model( constraint_bits const& bits ) const
{
  std::vector<ground_constraint> constraints;
  for ( auto i = bits.find_first(); i != constraint_bits::npos; i = bits.find_next( i ) )
  {
    constraints.push_back( at( i ) );
  }
  return model( std::move( constraints ) );
}

std::string_view to_string( generality g )
{
  switch ( g )
  {
  case generality::strictly_more_general: return "strictly-more-general";
  case generality::equal: return "equal";
  case generality::strictly_less_general: return "strictly-less-general";
  case generality::incomparable: return "incomparable";
  }
  return "?";
}

closure_engine::closure_engine( rule_set const& rules, std::size_t alphabet_size, grounding_options const& options )
    : universe_( alphabet_size, options ),
      triggers_( universe_.size() )
{
  for ( auto const& rule : rules.rules() )
  {
    for_each_assignment( rule.num_vars(), alphabet_size, [&]( std::vector<activity_id> const& values ) {
      grounded_rule g{};
      g.head = static_cast<std::uint32_t>( universe_.index( instantiate( rule.head, values ) ) );
      g.body_size = static_cast<std::uint8_t>( rule.body.size() );
      for ( std::size_t i = 0; i < rule.body.size(); ++i )
      {
        g.body[i] = static_cast<std::uint32_t>( universe_.index( instantiate( rule.body[i], values ) ) );
      }
      auto const id = static_cast<std::uint32_t>( grounded_.size() );
      grounded_.push_back( g );
      for ( std::size_t i = 0; i < g.body_size; ++i )
      {
        auto& t = triggers_[g.body[i]];
        if ( t.empty() || t.back() != id )
        {
          t.push_back( id );
        }
      }
    } );
  }
}

void closure_engine::close_in_place( constraint_bits& bits ) const
{
  std::vector<std::uint32_t> work;
  for ( auto i = bits.find_first(); i != constraint_bits::npos; i = bits.find_next( i ) )
  {
    work.push_back( static_cast<std::uint32_t>( i ) );
  }
  while ( !work.empty() )
  {
    auto const fact = work.back();
    work.pop_back();
    for ( auto id : triggers_[fact] )
    {
      auto const& g = grounded_[id];
      if ( bits.test( g.head ) )
      {
        continue;
      }
      bool fires = true;
      for ( std::size_t i = 0; i < g.body_size; ++i )
      {
        fires = fires && bits.test( g.body[i] );
      }
      if ( fires )
      {
        bits.set( g.head );
        work.push_back( g.head );
      }
    }
  }
}

constraint_bits closure_engine::close_bits( constraint_bits bits ) const
{
  close_in_place( bits );
  return bits;
}

model closure_engine::close( model const& m ) const
{
  {
    std::shared_lock lock( memo_mutex_ );
    if ( auto it = memo_.find( m ); it != memo_.end() )
    {
      return it->second;
    }
  }
  auto closed = universe_.to_model( close_bits( universe_.to_bits( m ) ) );
  std::unique_lock lock( memo_mutex_ );
  return memo_.emplace( m, std::move( closed ) ).first->second;
}

generality closure_engine::more_general( model const& lhs, model const& rhs, model const& p ) const
{
  auto const l = close_bits( universe_.to_bits( model_union( lhs, p ) ) );
  auto const r = close_bits( universe_.to_bits( model_union( rhs, p ) ) );
  if ( l == r )
  {
    return generality::equal;
  }
  if ( l.is_subset_of( r ) )
  {
    return generality::strictly_more_general;
  }
  if ( r.is_subset_of( l ) )
  {
    return generality::strictly_less_general;
  }
  return generality::incomparable;
}

rule_report verify_rules( rule_set const& rules, std::size_t alphabet_size, std::size_t max_len )
{
  if ( alphabet_size == 0 || alphabet_size > 26 )
  {
    throw error( "verify_rules: alphabet size must be in [1, 26]" );
  }

  std::vector<std::string> names;
  for ( std::size_t i = 0; i < alphabet_size; ++i )
  {
    names.emplace_back( 1, static_cast<char>( 'a' + i ) );
  }
  alphabet const alpha( names );

  rule_report report;
  report.rules_checked = rules.size();

  for ( std::size_t r = 0; r < rules.size(); ++r )
  {
    auto const& rule = rules.rules()[r];
    for_each_assignment( rule.num_vars(), alphabet_size, [&]( std::vector<activity_id> const& values ) {
      ++report.groundings_checked;
      auto const head = compile( instantiate( rule.head, values ) );
      std::vector<constraint_automaton> body;
      for ( auto const& a : rule.body )
      {
        body.push_back( compile( instantiate( a, values ) ) );
      }

      for ( std::size_t len = 0; len <= max_len; ++len )
      {
        trace word( len, 0 );
        while ( true )
        {
          ++report.words_checked;
          bool const premise = std::all_of( body.begin(), body.end(), [&]( auto const& b ) { return b.accepts( word ); } );
          if ( premise && !head.accepts( word ) )
          {
            std::string grounding = to_string( instantiate( rule.head, values ), alpha ) + " <- ";
            for ( std::size_t i = 0; i < rule.body.size(); ++i )
            {
              grounding += i ? ", " : "";
              grounding += to_string( instantiate( rule.body[i], values ), alpha );
            }
            auto const witness = "<" + format_trace( word, alpha, ',' ) + ">";
            report.violations.push_back( { r, to_string( rule ), std::move( grounding ), witness } );
            return;
          }

          std::size_t pos = len;
          while ( pos > 0 && word[pos - 1] + 1 == alphabet_size )
          {
            word[--pos] = 0;
          }
          if ( pos == 0 )
          {
            break;
          }
          ++word[pos - 1];
        }
      }
    } );
  }
  return report;
}

} // namespace declsep
