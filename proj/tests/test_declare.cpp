#include "oracle.hpp"

#include <declsep/declare.hpp>

#include <doctest.h>

#include <random>

using namespace declsep;

TEST_SUITE( "declare" )
{
  TEST_CASE( "template names" )
  {
    CHECK( all_templates().size() == num_templates );
    CHECK( template_from_name( "Response" ) == template_kind::response );
    CHECK( template_from_name( "exclusive_choice" ) == template_kind::exclusive_choice );
    CHECK( template_from_name( "not-chain-succession" ) == template_kind::not_chain_succession );
    CHECK( template_from_name( "ABSENCE2" ) == template_kind::absence2 );
    CHECK_THROWS_WITH_AS( template_from_name( "Responze" ), doctest::Contains( "ChainSuccession" ), catalog_error );
  }

  TEST_CASE( "grounding sizes" )
  {
    std::size_t unary = 0;
    for ( auto const& t : all_templates() )
    {
      unary += t.arity == 1 ? 1 : 0;
    }
    auto const binary = num_templates - unary;
    CHECK( ground( template_catalog::full(), 3 ).size() == 3 * unary + 6 * binary );
    CHECK( ground( template_catalog::full(), 3, { true } ).size() == 3 * unary + 9 * binary );

    auto const small = ground( template_catalog::from_names( { "Existence", "Response" } ), alphabet( { "a", "b" } ) );
    REQUIRE( small.size() == 4 );
    CHECK( std::is_sorted( small.begin(), small.end() ) );
  }

  TEST_CASE( "textual constraints" )
  {
    alphabet const alpha( { "a", "b" } );
    auto const c = make_constraint( template_kind::response, 0, 1 );
    CHECK( to_string( c, alpha ) == "Response[a, b]" );
    CHECK( parse_constraint( "Response[a, b]", alpha ) == c );
    CHECK( parse_constraint( " response(a,b) ", alpha ) == c );
    CHECK( parse_constraint( "Existence[b]", alpha ) == make_constraint( template_kind::existence, 1 ) );
    CHECK_THROWS_AS( parse_constraint( "Response[a]", alpha ), error );
    CHECK_THROWS_AS( parse_constraint( "Response[a, z]", alpha ), error );
    CHECK_THROWS_AS( parse_constraint( "Response a b", alpha ), error );
  }

  TEST_CASE( "automata agree with the direct semantics" )
  {
    auto const words = oracle::all_words( 3, 6 );
    for ( auto const& c : ground( template_catalog::full(), 3 ) )
    {
      auto const automaton = compile( c );
      std::size_t mismatches = 0;
      for ( auto const& w : words )
      {
        mismatches += automaton.accepts( w ) != oracle::holds( c, w ) ? 1 : 0;
      }
      INFO( info( c.kind ).name, " ", c.first, " ", c.second );
      CHECK( mismatches == 0 );
    }
  }

  TEST_CASE( "compliance is one transition per event" )
  {
    std::mt19937_64 rng( 11 );
    for ( int i = 0; i < 200; ++i )
    {
      trace t( rng() % 40 );
      for ( auto& a : t )
      {
        a = static_cast<activity_id>( rng() % 5 );
      }
      auto const c = make_constraint( template_kind::alternate_succession, 1, 3 );
      CHECK( compile( c ).run( t ).steps == t.size() );
    }
  }

  TEST_CASE( "activities outside the parameters share one symbol class" )
  {
    auto const c = make_constraint( template_kind::chain_response, 0, 1 );
    auto const automaton = compile( c );
    CHECK( automaton.accepts( { 7, 0, 1, 9 } ) );
    CHECK_FALSE( automaton.accepts( { 7, 0, 9, 1 } ) );
    CHECK_THROWS_AS( compile( c, alphabet( { "a" } ) ), catalog_error );
  }

  TEST_CASE( "reflexive groundings compile" )
  {
    auto const c = make_constraint( template_kind::response, 0, 0 );
    auto const automaton = compile( c );
    CHECK( automaton.accepts( {} ) );
    CHECK( automaton.accepts( { 0, 0 } ) );
  }

  TEST_CASE( "worked example verdicts" )
  {
    alphabet const alpha( { "a", "b", "c" } );
    auto const init_b = parse_constraint( "Init[b]", alpha );
    CHECK_FALSE( compliant( { 0, 1 }, init_b ) );
    CHECK( compliant( { 1, 0, 2 }, init_b ) );
    CHECK( violated_constraints( model{ init_b, parse_constraint( "Existence[a]", alpha ) }, { 0, 1 } ) == std::vector{ init_b } );
  }

  TEST_CASE( "models are sorted conjunctions" )
  {
    auto const x = make_constraint( template_kind::existence, 1 );
    auto const y = make_constraint( template_kind::init, 0 );
    model const m{ y, x, y };
    CHECK( m.size() == 2 );
    CHECK( *m.begin() == x );
    CHECK( m.includes( model{ y } ) );
    CHECK_FALSE( model{ y }.includes( m ) );
    CHECK( model_union( model{ x }, model{ y } ) == m );
    CHECK( model_accepts( model{}, { 3, 3 } ) );
    CHECK_FALSE( model_accepts( m, { 1 } ) );
  }

  TEST_CASE( "parallel compliance matrix" )
  {
    auto const constraints = ground( template_catalog::full(), 3 );
    auto const words = oracle::all_words( 3, 4 );
    auto const serial = make_compliance_matrix( constraints, words, 1 );
    auto const parallel = make_compliance_matrix( constraints, words, 4 );
    for ( std::size_t r = 0; r < constraints.size(); ++r )
    {
      for ( std::size_t col = 0; col < words.size(); ++col )
      {
        REQUIRE( serial( r, col ) == parallel( r, col ) );
        REQUIRE( serial( r, col ) == oracle::holds( constraints[r], words[col] ) );
      }
    }
  }
}
