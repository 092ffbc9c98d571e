#include <declsep/log.hpp>

#include <expat.h>

#include <cstring>
#include <fstream>
#include <istream>
#include <memory>
#include <ostream>

namespace declsep
{

namespace
{

/* SAX state for the log/trace/event subset of XES */
struct xes_reader
{
  enum class frame
  {
    other,
    log,
    trace,
    event
  };

  std::vector<frame> stack;
  std::vector<std::vector<std::string>> traces;
  std::vector<std::string> current;
  std::optional<std::string> event_name;
  std::size_t trace_index = 0;
  std::string failure;
  XML_Parser parser = nullptr;

  bool in( frame f ) const { return !stack.empty() && stack.back() == f; }

  void start( char const* name, char const** attrs )
  {
    if ( std::strcmp( name, "log" ) == 0 && stack.empty() )
    {
      stack.push_back( frame::log );
    }
    else if ( std::strcmp( name, "trace" ) == 0 && in( frame::log ) )
    {
      current.clear();
      stack.push_back( frame::trace );
    }
    else if ( std::strcmp( name, "event" ) == 0 && in( frame::trace ) )
    {
      event_name.reset();
      stack.push_back( frame::event );
    }
    else
    {
      if ( in( frame::event ) && std::strcmp( name, "string" ) == 0 )
      {
        char const* key = nullptr;
        char const* value = nullptr;
        for ( auto a = attrs; *a; a += 2 )
        {
          if ( std::strcmp( a[0], "key" ) == 0 )
          {
            key = a[1];
          }
          else if ( std::strcmp( a[0], "value" ) == 0 )
          {
            value = a[1];
          }
        }
        if ( key && value && std::strcmp( key, "concept:name" ) == 0 )
        {
          event_name = value;
        }
      }
      stack.push_back( frame::other );
    }
  }

  bool end()
  {
    auto const f = stack.back();
    stack.pop_back();
    if ( f == frame::event )
    {
      if ( !event_name || event_name->empty() )
      {
        failure = "event without concept:name in trace index " + std::to_string( trace_index );
        return false;
      }
      current.push_back( *event_name );
    }
    else if ( f == frame::trace )
    {
      traces.push_back( std::move( current ) );
      current.clear();
      ++trace_index;
    }
    return true;
  }
};

struct parser_deleter
{
  void operator()( XML_Parser p ) const { XML_ParserFree( p ); }
};

} // namespace

log_half parse_xes( std::istream& in )
{
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, parser_deleter> parser( XML_ParserCreate( "UTF-8" ) );
  if ( !parser )
  {
    throw error( "cannot create XML parser" );
  }

  xes_reader reader;
  reader.parser = parser.get();
  XML_SetUserData( parser.get(), &reader );
  XML_SetElementHandler(
      parser.get(),
      []( void* data, XML_Char const* name, XML_Char const** attrs ) {
        static_cast<xes_reader*>( data )->start( name, attrs );
      },
      []( void* data, XML_Char const* ) {
        auto* r = static_cast<xes_reader*>( data );
        if ( !r->end() )
        {
          XML_StopParser( r->parser, XML_FALSE );
        }
      } );

  auto fail = [&]( std::string const& message ) {
    throw parse_error( message,
                       XML_GetCurrentLineNumber( parser.get() ),
                       XML_GetCurrentColumnNumber( parser.get() ) + 1 );
  };

  char buffer[1 << 16];
  while ( true )
  {
    in.read( buffer, sizeof( buffer ) );
    auto const got = static_cast<int>( in.gcount() );
    bool const last = !in;
    if ( XML_Parse( parser.get(), buffer, got, last ) == XML_STATUS_ERROR )
    {
      if ( !reader.failure.empty() )
      {
        throw error( "invalid XES: " + reader.failure );
      }
      fail( std::string( "malformed XES: " ) + XML_ErrorString( XML_GetErrorCode( parser.get() ) ) );
    }
    if ( last )
    {
      break;
    }
  }

  return make_log_half( reader.traces );
}

log_half parse_xes_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw error( "cannot open log file '" + path + "'" );
  }
  return parse_xes( in );
}

namespace
{

std::string escape_xml( std::string_view s )
{
  std::string out;
  for ( char c : s )
  {
    switch ( c )
    {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    case '\'': out += "&apos;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

void write_xes( std::ostream& out, trace_set const& traces, alphabet const& alpha )
{
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<log xes.version=\"1.0\" xmlns=\"http://www.xes-standard.org/\">\n";
  out << "  <extension name=\"Concept\" prefix=\"concept\" uri=\"http://www.xes-standard.org/concept.xesext\"/>\n";
  std::size_t index = 0;
  for ( auto const& t : traces )
  {
    out << "  <trace>\n";
    out << "    <string key=\"concept:name\" value=\"case_" << index++ << "\"/>\n";
    for ( auto a : t )
    {
      out << "    <event><string key=\"concept:name\" value=\"" << escape_xml( alpha.name( a ) ) << "\"/></event>\n";
    }
    out << "  </trace>\n";
  }
  out << "</log>\n";
}

} // namespace declsep
