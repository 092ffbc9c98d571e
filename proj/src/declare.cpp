#include <declsep/declare.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <thread>

namespace declsep
{

namespace
{

constexpr std::array<template_info, num_templates> catalog_table{ {
    { template_kind::existence, "Existence", 1, ".* a .*" },
    { template_kind::absence, "Absence", 1, "[^a]*" },
    { template_kind::absence2, "Absence2", 1, "[^a]* (a [^a]*)?" },
    { template_kind::exactly1, "Exactly1", 1, "[^a]* a [^a]*" },
    { template_kind::init, "Init", 1, "a .*" },
    { template_kind::end, "End", 1, ".* a" },
    { template_kind::responded_existence, "RespondedExistence", 2, "[^a]* | .* b .*" },
    { template_kind::response, "Response", 2, "[^a]* (a .* b)* [^a]*" },
    { template_kind::alternate_response, "AlternateResponse", 2, "[^a]* (a [^a]* b [^a]*)* [^a]*" },
    { template_kind::chain_response, "ChainResponse", 2, "[^a]* (a b [^a]*)* [^a]*" },
    { template_kind::precedence, "Precedence", 2, "[^b]* (a .* b)* [^b]*" },
    { template_kind::alternate_precedence, "AlternatePrecedence", 2, "[^b]* (a [^b]* b [^b]*)* [^b]*" },
    { template_kind::chain_precedence, "ChainPrecedence", 2, "[^b]* (a b [^b]*)* [^b]*" },
    { template_kind::succession, "Succession", 2, "[^ab]* (a .* b)* [^ab]*" },
    { template_kind::alternate_succession, "AlternateSuccession", 2, "[^ab]* (a [^ab]* b [^ab]*)* [^ab]*" },
    { template_kind::chain_succession, "ChainSuccession", 2, "[^ab]* (a b [^ab]*)* [^ab]*" },
    { template_kind::co_existence, "CoExistence", 2, "[^ab]* | .* a .* b .* | .* b .* a .*" },
    { template_kind::not_co_existence, "NotCoExistence", 2, "[^a]* | [^b]*" },
    { template_kind::not_succession, "NotSuccession", 2, "[^a]* (a [^b]*)?" },
    { template_kind::not_chain_succession, "NotChainSuccession", 2, "[^a]* (a+ [^ab] [^a]*)* a*" },
    { template_kind::exclusive_choice, "ExclusiveChoice", 2, "[^ab]* (a [^b]* | b [^a]*)" },
} };

std::string normalize_name( std::string_view name )
{
  std::string out;
  for ( char c : name )
  {
    if ( c != '_' && c != '-' && c != ' ' )
    {
      out += static_cast<char>( std::tolower( static_cast<unsigned char>( c ) ) );
    }
  }
  return out;
}

} // namespace

template_info const& info( template_kind kind )
{
  return catalog_table[static_cast<std::size_t>( kind )];
}

std::span<template_info const> all_templates()
{
  return catalog_table;
}

template_kind template_from_name( std::string_view name )
{
  auto const wanted = normalize_name( name );
  for ( auto const& t : catalog_table )
  {
    if ( normalize_name( t.name ) == wanted )
    {
      return t.kind;
    }
  }
  std::string valid;
  for ( auto const& t : catalog_table )
  {
    valid += valid.empty() ? "" : ", ";
    valid += t.name;
  }
  throw catalog_error( "unknown template '" + std::string( name ) + "'; valid templates: " + valid );
}

template_catalog::template_catalog( std::vector<template_kind> kinds )
    : kinds_( std::move( kinds ) )
{
  std::sort( kinds_.begin(), kinds_.end() );
  kinds_.erase( std::unique( kinds_.begin(), kinds_.end() ), kinds_.end() );
}

template_catalog template_catalog::full()
{
  std::vector<template_kind> kinds;
  for ( auto const& t : catalog_table )
  {
    kinds.push_back( t.kind );
  }
  return template_catalog( std::move( kinds ) );
}

template_catalog template_catalog::from_names( std::vector<std::string> const& names )
{
  std::vector<template_kind> kinds;
  for ( auto const& n : names )
  {
    kinds.push_back( template_from_name( n ) );
  }
  return template_catalog( std::move( kinds ) );
}

bool template_catalog::contains( template_kind kind ) const
{
  return std::binary_search( kinds_.begin(), kinds_.end(), kind );
}

ground_constraint make_constraint( template_kind kind, activity_id first, activity_id second )
{
  auto const arity = info( kind ).arity;
  if ( arity == 1 && second != no_activity )
  {
    throw catalog_error( std::string( info( kind ).name ) + " takes one activity" );
  }
  if ( arity == 2 && second == no_activity )
  {
    throw catalog_error( std::string( info( kind ).name ) + " takes two activities" );
  }
  return { kind, first, second };
}

std::string to_string( ground_constraint const& c, alphabet const& alpha )
{
  std::string out( info( c.kind ).name );
  out += '[';
  out += alpha.name( c.first );
  if ( c.second != no_activity )
  {
    out += ", ";
    out += alpha.name( c.second );
  }
  out += ']';
  return out;
}

named_constraint parse_named_constraint( std::string_view text )
{
  auto trim = []( std::string_view s ) {
    while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.front() ) ) )
    {
      s.remove_prefix( 1 );
    }
    while ( !s.empty() && std::isspace( static_cast<unsigned char>( s.back() ) ) )
    {
      s.remove_suffix( 1 );
    }
    return s;
  };

  auto const s = trim( text );
  auto const open = s.find_first_of( "[(" );
  auto const close = s.find_last_of( "])" );
  if ( open == std::string_view::npos || close == std::string_view::npos || close < open || close + 1 != s.size() )
  {
    throw error( "malformed constraint '" + std::string( text ) + "'" );
  }

  auto const kind = template_from_name( trim( s.substr( 0, open ) ) );
  auto const args = s.substr( open + 1, close - open - 1 );
  std::vector<std::string_view> names;
  std::size_t start = 0;
  while ( true )
  {
    auto const comma = args.find( ',', start );
    names.push_back( trim( args.substr( start, comma == std::string_view::npos ? std::string_view::npos : comma - start ) ) );
    if ( comma == std::string_view::npos )
    {
      break;
    }
    start = comma + 1;
  }

  if ( names.size() != info( kind ).arity || std::any_of( names.begin(), names.end(), []( auto n ) { return n.empty(); } ) )
  {
    throw error( "constraint '" + std::string( text ) + "' needs " + std::to_string( info( kind ).arity ) + " activities" );
  }
  return { kind, std::vector<std::string>( names.begin(), names.end() ) };
}

ground_constraint bind( named_constraint const& c, alphabet const& alpha )
{
  auto lookup = [&]( std::string const& name ) {
    auto const id = alpha.find( name );
    if ( !id )
    {
      throw error( "unknown activity '" + name + "' in " + std::string( info( c.kind ).name ) );
    }
    return *id;
  };
  return make_constraint( c.kind, lookup( c.args.at( 0 ) ), c.args.size() == 2 ? lookup( c.args[1] ) : no_activity );
}

ground_constraint parse_constraint( std::string_view text, alphabet const& alpha )
{
  return bind( parse_named_constraint( text ), alpha );
}

std::vector<ground_constraint> ground( template_catalog const& catalog, std::size_t alphabet_size, grounding_options const& options )
{
  std::vector<ground_constraint> result;
  auto const n = static_cast<activity_id>( alphabet_size );
  for ( auto kind : catalog.kinds() )
  {
    if ( info( kind ).arity == 1 )
    {
      for ( activity_id a = 0; a < n; ++a )
      {
        result.push_back( { kind, a, no_activity } );
      }
      continue;
    }
    for ( activity_id a = 0; a < n; ++a )
    {
      for ( activity_id b = 0; b < n; ++b )
      {
        if ( a != b || options.allow_reflexive )
        {
          result.push_back( { kind, a, b } );
        }
      }
    }
  }
  return result;
}

std::vector<ground_constraint> ground( template_catalog const& catalog, alphabet const& alpha, grounding_options const& options )
{
  return ground( catalog, alpha.size(), options );
}

model::model( std::initializer_list<ground_constraint> constraints )
    : model( std::vector<ground_constraint>( constraints ) )
{
}

model::model( std::vector<ground_constraint> constraints )
    : constraints_( std::move( constraints ) )
{
  std::sort( constraints_.begin(), constraints_.end() );
  constraints_.erase( std::unique( constraints_.begin(), constraints_.end() ), constraints_.end() );
}

void model::insert( ground_constraint const& c )
{
  auto it = std::lower_bound( constraints_.begin(), constraints_.end(), c );
  if ( it == constraints_.end() || *it != c )
  {
    constraints_.insert( it, c );
  }
}

bool model::contains( ground_constraint const& c ) const
{
  return std::binary_search( constraints_.begin(), constraints_.end(), c );
}

bool model::includes( model const& other ) const
{
  return std::includes( constraints_.begin(), constraints_.end(), other.begin(), other.end() );
}

model model_union( model const& lhs, model const& rhs )
{
  std::vector<ground_constraint> merged;
  std::set_union( lhs.begin(), lhs.end(), rhs.begin(), rhs.end(), std::back_inserter( merged ) );
  return model( std::move( merged ) );
}

constraint_automaton::constraint_automaton( symbolic_dfa const& dfa, activity_id first, activity_id second )
    : dfa_( &dfa ), first_( first ), second_( second )
{
}

constraint_automaton::run_result constraint_automaton::run( trace const& t ) const noexcept
{
  state s = initial();
  std::size_t steps = 0;
  for ( auto a : t )
  {
    s = step( s, a );
    ++steps;
  }
  return { s, steps };
}

symbolic_dfa const& template_dfa( template_kind kind )
{
  static std::array<symbolic_dfa, num_templates> const compiled = [] {
    std::array<symbolic_dfa, num_templates> dfas;
    for ( std::size_t i = 0; i < num_templates; ++i )
    {
      dfas[i] = compile_symbolic_regex( catalog_table[i].regex );
    }
    return dfas;
  }();
  return compiled[static_cast<std::size_t>( kind )];
}

constraint_automaton compile( ground_constraint const& c )
{
  return constraint_automaton( template_dfa( c.kind ), c.first, c.second );
}

constraint_automaton compile( ground_constraint const& c, alphabet const& alpha )
{
  if ( c.first >= alpha.size() || ( c.arity() == 2 && c.second >= alpha.size() ) )
  {
    throw catalog_error( "constraint argument outside the alphabet" );
  }
  return compile( c );
}

bool compliant( trace const& t, ground_constraint const& c )
{
  return compile( c ).accepts( t );
}

bool model_accepts( model const& m, trace const& t )
{
  return std::all_of( m.begin(), m.end(), [&]( auto const& c ) { return compliant( t, c ); } );
}

std::vector<ground_constraint> violated_constraints( model const& m, trace const& t )
{
  std::vector<ground_constraint> out;
  std::copy_if( m.begin(), m.end(), std::back_inserter( out ), [&]( auto const& c ) { return !compliant( t, c ); } );
  return out;
}

compliance_matrix::compliance_matrix( std::size_t rows, std::size_t cols )
    : rows_( rows ), cols_( cols ), cells_( rows * cols, 0 )
{
}

bool compliance_matrix::row_all( std::size_t row ) const
{
  auto const first = cells_.begin() + static_cast<std::ptrdiff_t>( row * cols_ );
  return std::all_of( first, first + static_cast<std::ptrdiff_t>( cols_ ), []( auto v ) { return v != 0; } );
}

compliance_matrix make_compliance_matrix( std::span<ground_constraint const> constraints,
                                          std::span<trace const> traces,
                                          unsigned threads )
{
  compliance_matrix matrix( constraints.size(), traces.size() );
  auto fill = [&]( std::size_t begin, std::size_t stride ) {
    for ( auto row = begin; row < constraints.size(); row += stride )
    {
      auto const automaton = compile( constraints[row] );
      for ( std::size_t col = 0; col < traces.size(); ++col )
      {
        matrix.set( row, col, automaton.accepts( traces[col] ) );
      }
    }
  };

  threads = std::max( 1u, std::min<unsigned>( threads, static_cast<unsigned>( constraints.size() ) ) );
  if ( threads <= 1 )
  {
    fill( 0, 1 );
    return matrix;
  }
  {
    std::vector<std::jthread> workers;
    for ( unsigned w = 0; w < threads; ++w )
    {
      workers.emplace_back( fill, w, threads );
    }
  }
  return matrix;
}

} // namespace declsep
