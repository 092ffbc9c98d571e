#include <declsep/model_io.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace declsep
{

std::vector<named_constraint> parse_model_text( std::string_view text )
{
  std::vector<named_constraint> result;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while ( start <= text.size() )
  {
    auto const end = std::min( text.find( '\n', start ), text.size() );
    auto line = text.substr( start, end - start );
    start = end + 1;
    ++line_no;

    if ( auto const hash = line.find( '#' ); hash != std::string_view::npos )
    {
      line = line.substr( 0, hash );
    }
    auto const first = std::find_if_not( line.begin(), line.end(), []( unsigned char c ) { return std::isspace( c ); } );
    if ( first == line.end() )
    {
      continue;
    }
    try
    {
      result.push_back( parse_named_constraint( line ) );
    }
    catch ( error const& e )
    {
      throw parse_error( e.what(), line_no, static_cast<std::size_t>( first - line.begin() ) + 1 );
    }
  }
  return result;
}

std::vector<named_constraint> parse_model_json( std::string_view text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::parse_error const& e )
  {
    throw error( std::string( "invalid model JSON: " ) + e.what() );
  }
  if ( !doc.is_array() )
  {
    throw error( "model JSON must be an array of {template, args} objects" );
  }

  std::vector<named_constraint> result;
  for ( auto const& item : doc )
  {
    if ( !item.is_object() || !item.contains( "template" ) || !item.contains( "args" ) || !item["template"].is_string() || !item["args"].is_array() )
    {
      throw error( "model JSON entry must look like {\"template\": ..., \"args\": [...]}" );
    }
    named_constraint c{ template_from_name( item["template"].get<std::string>() ), {} };
    for ( auto const& arg : item["args"] )
    {
      if ( !arg.is_string() || arg.get<std::string>().empty() )
      {
        throw error( "model JSON arguments must be non-empty strings" );
      }
      c.args.push_back( arg.get<std::string>() );
    }
    if ( c.args.size() != info( c.kind ).arity )
    {
      throw error( std::string( info( c.kind ).name ) + " needs " + std::to_string( info( c.kind ).arity ) + " activities" );
    }
    result.push_back( std::move( c ) );
  }
  return result;
}

std::vector<named_constraint> load_model( std::string const& path )
{
  auto const content = read_file( path );
  bool json = path.size() >= 5 && path.compare( path.size() - 5, 5, ".json" ) == 0;
  if ( !json )
  {
    auto const first = content.find_first_not_of( " \t\r\n" );
    json = first != std::string::npos && content[first] == '[';
  }
  return json ? parse_model_json( content ) : parse_model_text( content );
}

std::vector<std::string> activity_names( std::vector<named_constraint> const& constraints )
{
  std::set<std::string> names;
  for ( auto const& c : constraints )
  {
    names.insert( c.args.begin(), c.args.end() );
  }
  return { names.begin(), names.end() };
}

model bind_model( std::vector<named_constraint> const& constraints, alphabet const& alpha )
{
  std::vector<ground_constraint> bound;
  for ( auto const& c : constraints )
  {
    bound.push_back( bind( c, alpha ) );
  }
  return model( std::move( bound ) );
}

std::string serialize_model_text( model const& m, alphabet const& alpha )
{
  std::string out;
  for ( auto const& c : m )
  {
    out += to_string( c, alpha );
    out += '\n';
  }
  return out;
}

std::string serialize_model_json( model const& m, alphabet const& alpha )
{
  auto doc = nlohmann::ordered_json::array();
  for ( auto const& c : m )
  {
    nlohmann::ordered_json item;
    item["template"] = info( c.kind ).name;
    item["args"] = nlohmann::ordered_json::array( { alpha.name( c.first ) } );
    if ( c.second != no_activity )
    {
      item["args"].push_back( alpha.name( c.second ) );
    }
    doc.push_back( std::move( item ) );
  }
  return doc.dump( 2 ) + "\n";
}

} // namespace declsep
