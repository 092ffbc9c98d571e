#include <declsep/report.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace declsep
{

namespace
{

nlohmann::ordered_json traces_json( trace_set const& traces, alphabet const& alpha )
{
  auto out = nlohmann::ordered_json::array();
  for ( auto const& t : traces )
  {
    auto names = nlohmann::ordered_json::array();
    for ( auto a : t )
    {
      names.push_back( alpha.name( a ) );
    }
    out.push_back( std::move( names ) );
  }
  return out;
}

std::string percent( std::size_t num, std::size_t den )
{
  char buffer[32];
  std::snprintf( buffer, sizeof buffer, "%.2f%%", den == 0 ? 100.0 : 100.0 * static_cast<double>( num ) / static_cast<double>( den ) );
  return buffer;
}

} // namespace

std::string report_to_json( discovery_report const& report, report_options const& options )
{
  nlohmann::ordered_json doc;
  doc["alphabet"] = report.alphabet.names();

  auto solutions = nlohmann::ordered_json::array();
  for ( auto const& s : report.solutions.models )
  {
    nlohmann::ordered_json item;
    auto constraints = nlohmann::ordered_json::array();
    for ( auto const& c : s.constraints )
    {
      constraints.push_back( to_string( c, report.alphabet ) );
    }
    item["constraints"] = std::move( constraints );
    item["closure_size"] = s.closure_size;
    item["cardinality"] = s.cardinality;
    item["violated_negative_count"] = s.violated_negatives;
    solutions.push_back( std::move( item ) );
  }
  doc["solutions"] = std::move( solutions );
  doc["truncated"] = report.solutions.truncated;

  doc["unrejectable"]["empty_sheriffs"] = traces_json( report.empty_sheriffs, report.alphabet );
  doc["unrejectable"]["rejected_by_initial"] = traces_json( report.rejected_by_initial, report.alphabet );

  doc["positives_used"] = report.positives_used;
  doc["positives_filtered"] = report.positives_filtered;
  doc["negatives_total"] = report.negatives_total;
  doc["warnings"] = report.warnings;

  auto const& t = report.timings;
  doc["timings"]["compatibles_ms"] = options.timings ? t.compatibles_ms : 0.0;
  doc["timings"]["sheriffs_ms"] = options.timings ? t.sheriffs_ms : 0.0;
  doc["timings"]["optimisation_ms"] = options.timings ? t.optimisation_ms : 0.0;
  doc["timings"]["total_ms"] = options.timings ? t.total_ms : 0.0;
  return doc.dump( 2 ) + "\n";
}

std::string report_to_text( discovery_report const& report )
{
  std::string out;
  std::size_t index = 0;
  for ( auto const& s : report.solutions.models )
  {
    out += "# solution " + std::to_string( ++index ) + ": closure " + std::to_string( s.closure_size ) + ", cardinality " +
           std::to_string( s.cardinality ) + ", rejects " + std::to_string( s.violated_negatives ) + "/" +
           std::to_string( report.negatives_total ) + " negatives\n";
    for ( auto const& c : s.constraints )
    {
      out += to_string( c, report.alphabet ) + "\n";
    }
  }
  if ( report.solutions.truncated )
  {
    out += "# truncated\n";
  }
  return out;
}

std::string report_summary( discovery_report const& report )
{
  auto const& models = report.solutions.models;
  std::string out = std::to_string( models.size() ) + " solution(s)";
  if ( !models.empty() )
  {
    auto const smallest = std::min_element( models.begin(), models.end(), []( auto const& x, auto const& y ) { return x.cardinality < y.cardinality; } );
    out += ", min model size " + std::to_string( smallest->cardinality );
    out += ", first model rejects " + percent( models.front().violated_negatives, report.negatives_total ) + " of negatives";
  }
  if ( report.solutions.truncated )
  {
    out += " (truncated)";
  }
  if ( !report.empty_sheriffs.empty() )
  {
    out += ", " + std::to_string( report.empty_sheriffs.size() ) + " negative(s) unrejectable";
  }
  return out;
}

} // namespace declsep
