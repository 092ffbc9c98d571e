#include <declsep/log.hpp>

#include <doctest.h>

#include <filesystem>
#include <sstream>

using namespace declsep;

namespace
{

log_half text_log( std::string const& text, text_options const& options = {} )
{
  std::istringstream in( text );
  return parse_text( in, options );
}

trace names_to_trace( alphabet const& alpha, std::vector<std::string> const& names )
{
  trace t;
  for ( auto const& n : names )
  {
    t.push_back( alpha.id( n ) );
  }
  return t;
}

} // namespace

TEST_SUITE( "log" )
{
  TEST_CASE( "alphabet ids follow lexicographic order" )
  {
    alphabet const alpha( { "c", "a", "b", "a" } );
    CHECK( alpha.size() == 3 );
    CHECK( alpha.id( "a" ) == 0 );
    CHECK( alpha.id( "c" ) == 2 );
    CHECK( alpha.name( 1 ) == "b" );
    CHECK_FALSE( alpha.find( "d" ) );
    CHECK_THROWS_AS( alpha.id( "d" ), error );
    CHECK_THROWS_AS( alphabet( { "" } ), error );
  }

  TEST_CASE( "text logs are sets of traces" )
  {
    auto const log = text_log( "a b\n  b   a \n\na b\nb\n" );
    CHECK( log.alphabet.names() == std::vector<std::string>{ "a", "b" } );
    CHECK( log.traces.size() == 3 );
    CHECK( log.traces.count( { 0, 1 } ) == 1 );
    CHECK( log.traces.count( { 1, 0 } ) == 1 );
    CHECK( log.traces.count( { 1 } ) == 1 );
    CHECK( log.traces.count( {} ) == 0 );
  }

  TEST_CASE( "blank lines are the empty trace only on request" )
  {
    auto const log = text_log( "a\n\n", { ' ', true } );
    CHECK( log.traces.count( {} ) == 1 );
    CHECK( log.traces.size() == 2 );
  }

  TEST_CASE( "custom separator" )
  {
    auto const log = text_log( "send pack,notify\n", { ',', false } );
    CHECK( log.alphabet.names() == std::vector<std::string>{ "notify", "send pack" } );
    CHECK( log.traces.count( { 1, 0 } ) == 1 );
  }

  TEST_CASE( "text round trip" )
  {
    auto const log = text_log( "x y z\nz\ny y\n" );
    auto const again = text_log( serialize_text( log ) );
    CHECK( again.alphabet == log.alphabet );
    CHECK( again.traces == log.traces );
  }

  TEST_CASE( "input order does not matter" )
  {
    auto const one = text_log( "a b\nb c\nc\n" );
    auto const two = text_log( "c\nb c\na b\nc\n" );
    CHECK( one.traces == two.traces );
  }

  TEST_CASE( "labelled halves share the merged alphabet" )
  {
    auto const pos = text_log( "b c\n" );
    auto const neg = text_log( "a\n" );
    auto const log = make_labeled_log( pos, neg );
    CHECK( log.alphabet.names() == std::vector<std::string>{ "a", "b", "c" } );
    CHECK( log.positives.count( { 1, 2 } ) == 1 );
    CHECK( log.negatives.count( { 0 } ) == 1 );
  }

  TEST_CASE( "reindex rejects activities missing from the target" )
  {
    auto const log = text_log( "a b\n" );
    CHECK_THROWS_AS( reindex( log.traces, log.alphabet, alphabet( { "a" } ) ), error );
  }

  TEST_CASE( "XES reading" )
  {
    std::istringstream in( R"(<?xml version="1.0" encoding="UTF-8"?>
<log xes.version="1.0">
  <extension name="Concept" prefix="concept" uri="http://www.xes-standard.org/concept.xesext"/>
  <string key="concept:name" value="the log"/>
  <trace>
    <string key="concept:name" value="case 1"/>
    <event><string key="concept:name" value="register"/><date key="time:timestamp" value="2020-01-01T00:00:00"/></event>
    <event><string key="org:resource" value="ann"/><string key="concept:name" value="decide"/></event>
  </trace>
  <trace>
    <event><string key="concept:name" value="register"/></event>
  </trace>
  <trace/>
</log>
)" );
    auto const log = parse_xes( in );
    CHECK( log.alphabet.names() == std::vector<std::string>{ "decide", "register" } );
    CHECK( log.traces.size() == 3 );
    CHECK( log.traces.count( names_to_trace( log.alphabet, { "register", "decide" } ) ) == 1 );
    CHECK( log.traces.count( {} ) == 1 );
  }

  TEST_CASE( "XES round trip" )
  {
    auto const log = text_log( "a&b c<d\nc<d\n" );
    std::ostringstream out;
    write_xes( out, log.traces, log.alphabet );
    std::istringstream in( out.str() );
    auto const again = parse_xes( in );
    CHECK( again.alphabet == log.alphabet );
    CHECK( again.traces == log.traces );
  }

  TEST_CASE( "XES errors" )
  {
    std::istringstream missing( "<log><trace><event><string key=\"org:resource\" value=\"x\"/></event></trace></log>" );
    CHECK_THROWS_WITH_AS( parse_xes( missing ), doctest::Contains( "concept:name" ), error );

    std::istringstream malformed( "<log>\n<trace>\n</log>" );
    try
    {
      parse_xes( malformed );
      FAIL( "malformed XML accepted" );
    }
    catch ( parse_error const& e )
    {
      CHECK( e.line() == 3 );
    }
  }

  TEST_CASE( "file helpers" )
  {
    auto const dir = std::filesystem::temp_directory_path() / "declsep_log_test";
    std::filesystem::create_directories( dir );
    auto const path = ( dir / "log.XES" ).string();
    auto const log = text_log( "a b\n" );
    std::ostringstream out;
    write_xes( out, log.traces, log.alphabet );
    write_file_atomic( path, out.str() );
    CHECK_FALSE( std::filesystem::exists( path + ".tmp" ) );
    CHECK( load_log( path ).traces == log.traces );
    CHECK( read_file( path ) == out.str() );
    CHECK_THROWS_WITH_AS( load_log( ( dir / "absent.txt" ).string() ), doctest::Contains( "absent.txt" ), error );
    std::filesystem::remove_all( dir );
  }
}
