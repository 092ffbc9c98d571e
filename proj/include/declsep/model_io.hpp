#pragma once

#include <declsep/declare.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace declsep
{

/*! One `Template[a, b]` per line; blank lines and `#` comments are skipped. */
std::vector<named_constraint> parse_model_text( std::string_view text );

/* [{"template": "Response", "args": ["a", "b"]}, ...] */
std::vector<named_constraint> parse_model_json( std::string_view text );

/*! JSON when the path ends in `.json` or the content starts with `[`. */
std::vector<named_constraint> load_model( std::string const& path );

/* sorted, duplicate-free */
std::vector<std::string> activity_names( std::vector<named_constraint> const& constraints );

model bind_model( std::vector<named_constraint> const& constraints, alphabet const& alpha );

std::string serialize_model_text( model const& m, alphabet const& alpha );
std::string serialize_model_json( model const& m, alphabet const& alpha );

} // namespace declsep
