#include <declsep/log.hpp>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>

namespace declsep
{

parse_error::parse_error( std::string const& message, std::size_t line, std::size_t column )
    : error( message + " (line " + std::to_string( line ) + ", column " + std::to_string( column ) + ")" ),
      line_( line ),
      column_( column )
{
}

alphabet::alphabet( std::vector<std::string> names )
    : names_( std::move( names ) )
{
  std::sort( names_.begin(), names_.end() );
  names_.erase( std::unique( names_.begin(), names_.end() ), names_.end() );
  for ( activity_id i = 0; i < names_.size(); ++i )
  {
    if ( names_[i].empty() )
    {
      throw error( "activity names must be non-empty" );
    }
    index_.emplace( names_[i], i );
  }
}

std::optional<activity_id> alphabet::find( std::string_view name ) const
{
  if ( auto it = index_.find( name ); it != index_.end() )
  {
    return it->second;
  }
  return std::nullopt;
}

activity_id alphabet::id( std::string_view name ) const
{
  if ( auto found = find( name ) )
  {
    return *found;
  }
  throw error( "unknown activity '" + std::string( name ) + "'" );
}

alphabet merge_alphabets( alphabet const& lhs, alphabet const& rhs )
{
  std::vector<std::string> names = lhs.names();
  names.insert( names.end(), rhs.names().begin(), rhs.names().end() );
  return alphabet( std::move( names ) );
}

trace_set reindex( trace_set const& traces, alphabet const& from, alphabet const& to )
{
  std::vector<activity_id> map( from.size() );
  std::vector<bool> mapped( from.size(), false );
  for ( activity_id i = 0; i < from.size(); ++i )
  {
    if ( auto target = to.find( from.name( i ) ) )
    {
      map[i] = *target;
      mapped[i] = true;
    }
  }

  trace_set result;
  for ( auto const& t : traces )
  {
    trace out;
    out.reserve( t.size() );
    for ( auto a : t )
    {
      if ( a >= from.size() || !mapped[a] )
      {
        throw error( "cannot reindex activity id " + std::to_string( a ) );
      }
      out.push_back( map[a] );
    }
    result.insert( std::move( out ) );
  }
  return result;
}

labeled_log make_labeled_log( log_half const& positives, log_half const& negatives )
{
  labeled_log log;
  log.alphabet = merge_alphabets( positives.alphabet, negatives.alphabet );
  log.positives = reindex( positives.traces, positives.alphabet, log.alphabet );
  log.negatives = reindex( negatives.traces, negatives.alphabet, log.alphabet );
  return log;
}

log_half make_log_half( std::vector<std::vector<std::string>> const& raw )
{
  std::vector<std::string> names;
  for ( auto const& t : raw )
  {
    names.insert( names.end(), t.begin(), t.end() );
  }

  log_half half;
  half.alphabet = alphabet( std::move( names ) );
  for ( auto const& t : raw )
  {
    trace ids;
    ids.reserve( t.size() );
    for ( auto const& name : t )
    {
      ids.push_back( half.alphabet.id( name ) );
    }
    half.traces.insert( std::move( ids ) );
  }
  return half;
}

namespace
{

std::string_view trim( std::string_view s )
{
  constexpr std::string_view blanks = " \t\r\n\v\f";
  auto const first = s.find_first_not_of( blanks );
  if ( first == std::string_view::npos )
  {
    return {};
  }
  auto const last = s.find_last_not_of( blanks );
  return s.substr( first, last - first + 1 );
}

} // namespace

log_half parse_text( std::istream& in, text_options const& options )
{
  std::vector<std::vector<std::string>> raw;
  std::string line;
  while ( std::getline( in, line ) )
  {
    if ( !line.empty() && line.back() == '\r' )
    {
      line.pop_back();
    }

    std::vector<std::string> names;
    std::string_view rest = line;
    while ( true )
    {
      auto const cut = rest.find( options.separator );
      auto const token = trim( rest.substr( 0, cut ) );
      if ( !token.empty() )
      {
        names.emplace_back( token );
      }
      if ( cut == std::string_view::npos )
      {
        break;
      }
      rest.remove_prefix( cut + 1 );
    }

    if ( names.empty() && !options.allow_empty )
    {
      continue;
    }
    raw.push_back( std::move( names ) );
  }
  return make_log_half( raw );
}

log_half parse_text_file( std::string const& path, text_options const& options )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw error( "cannot open log file '" + path + "'" );
  }
  return parse_text( in, options );
}

std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw error( "cannot open '" + path + "'" );
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_file_atomic( std::string const& path, std::string const& content )
{
  namespace fs = std::filesystem;
  fs::path const target( path );
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out( tmp, std::ios::binary | std::ios::trunc );
    if ( !out )
    {
      throw error( "cannot write '" + tmp.string() + "'" );
    }
    out << content;
    out.flush();
    if ( !out )
    {
      std::error_code ignored;
      fs::remove( tmp, ignored );
      throw error( "cannot write '" + tmp.string() + "'" );
    }
  }
  std::error_code ec;
  fs::rename( tmp, target, ec );
  if ( ec )
  {
    fs::remove( tmp, ec );
    throw error( "cannot replace '" + path + "'" );
  }
}

std::string format_trace( trace const& t, alphabet const& alpha, char separator )
{
  std::string out;
  for ( std::size_t i = 0; i < t.size(); ++i )
  {
    if ( i > 0 )
    {
      out += separator;
    }
    out += alpha.name( t[i] );
  }
  return out;
}

void write_text( std::ostream& out, trace_set const& traces, alphabet const& alpha, char separator )
{
  for ( auto const& t : traces )
  {
    out << format_trace( t, alpha, separator ) << '\n';
  }
}

std::string serialize_text( log_half const& log, char separator )
{
  std::ostringstream out;
  write_text( out, log.traces, log.alphabet, separator );
  return out.str();
}

log_half load_log( std::string const& path, text_options const& options )
{
  auto const dot = path.rfind( '.' );
  if ( dot != std::string::npos )
  {
    std::string ext = path.substr( dot );
    std::transform( ext.begin(), ext.end(), ext.begin(), []( unsigned char c ) { return static_cast<char>( std::tolower( c ) ); } );
    if ( ext == ".xes" )
    {
      return parse_xes_file( path );
    }
  }
  return parse_text_file( path, options );
}

} // namespace declsep
