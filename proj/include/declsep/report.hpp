#pragma once

#include <declsep/discovery.hpp>

#include <string>

namespace declsep
{

struct report_options
{
  /* zeroed timings keep reruns byte-identical */
  bool timings = true;
};

std::string report_to_json( discovery_report const& report, report_options const& options = {} );

/*! Every solution as a textual model, separated by `# solution` headers. */
std::string report_to_text( discovery_report const& report );

/*! One line for humans: solution count, smallest model, violated negatives. */
std::string report_summary( discovery_report const& report );

} // namespace declsep
