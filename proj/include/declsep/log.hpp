#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace declsep
{

using activity_id = std::uint32_t;

/* a finite word over the alphabet; the empty word is a legal trace */
using trace = std::vector<activity_id>;

/* de-duplicated traces, ordered lexicographically by activity id */
using trace_set = std::set<trace>;

class error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class parse_error : public error
{
public:
  parse_error( std::string const& message, std::size_t line, std::size_t column );

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

/*! \brief Sorted, duplicate-free set of activity names.
 *
 * The id of an activity is its position in lexicographic order, so two
 * alphabets with the same names always assign the same ids.
 */
class alphabet
{
public:
  alphabet() = default;
  explicit alphabet( std::vector<std::string> names );

  std::size_t size() const noexcept { return names_.size(); }
  bool empty() const noexcept { return names_.empty(); }

  std::string const& name( activity_id id ) const { return names_.at( id ); }
  std::optional<activity_id> find( std::string_view name ) const;
  activity_id id( std::string_view name ) const;

  std::vector<std::string> const& names() const noexcept { return names_; }

  bool operator==( alphabet const& other ) const = default;

private:
  std::vector<std::string> names_;
  std::map<std::string, activity_id, std::less<>> index_;
};

alphabet merge_alphabets( alphabet const& lhs, alphabet const& rhs );

/* one labelled half of a log: its own alphabet plus the trace set */
struct log_half
{
  declsep::alphabet alphabet;
  trace_set traces;
};

struct labeled_log
{
  declsep::alphabet alphabet;
  trace_set positives;
  trace_set negatives;
};

/*! Re-express `traces` (over `from`) against `to`. Throws if an activity of
 *  `from` that occurs in some trace is missing from `to`. */
trace_set reindex( trace_set const& traces, alphabet const& from, alphabet const& to );

/*! Merge both halves against the sorted union of their alphabets. */
labeled_log make_labeled_log( log_half const& positives, log_half const& negatives );

/*! Build a half from raw name sequences (alphabet = names that occur). */
log_half make_log_half( std::vector<std::vector<std::string>> const& raw );

struct text_options
{
  char separator = ' ';
  bool allow_empty = false;
};

log_half parse_text( std::istream& in, text_options const& options = {} );
log_half parse_text_file( std::string const& path, text_options const& options = {} );

void write_text( std::ostream& out, trace_set const& traces, alphabet const& alpha, char separator = ' ' );
std::string serialize_text( log_half const& log, char separator = ' ' );

log_half parse_xes( std::istream& in );
log_half parse_xes_file( std::string const& path );
void write_xes( std::ostream& out, trace_set const& traces, alphabet const& alpha );

/*! Dispatch on extension: `.xes` is XES, anything else plain text. */
log_half load_log( std::string const& path, text_options const& options = {} );

/*! Whole file as a string; throws `error` naming the path. */
std::string read_file( std::string const& path );

/*! Write to a sibling temporary and rename over `path`, so readers never see a partial file. */
void write_file_atomic( std::string const& path, std::string const& content );

std::string format_trace( trace const& t, alphabet const& alpha, char separator = ' ' );

} // namespace declsep
