#include <declsep/closure.hpp>
#include <declsep/discovery.hpp>
#include <declsep/evalkit.hpp>
#include <declsep/loggen.hpp>
#include <declsep/model_io.hpp>
#include <declsep/report.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>
#include <thread>

using namespace declsep;

namespace
{

struct log_flags
{
  std::string positive;
  std::string negative;
  bool allow_empty = false;
  char separator = ' ';
};

struct discovery_flags
{
  std::vector<std::string> templates;
  std::string criterion_name = "subset";
  std::string initial_model;
  std::string rules;
  std::size_t max_models = 20;
  std::size_t node_budget = 1'000'000;
  unsigned threads = 0;
  bool strict_initial_model = false;
  bool allow_reflexive = false;
};

void add_log_flags( CLI::App& cmd, log_flags& f, bool required )
{
  cmd.add_option( "--positive", f.positive, "Positive log (.xes or one trace per line)" )->required( required );
  cmd.add_option( "--negative", f.negative, "Negative log (.xes or one trace per line)" )->required( required );
  cmd.add_flag( "--allow-empty", f.allow_empty, "Read blank lines of text logs as the empty trace" );
  cmd.add_option( "--separator", f.separator, "Activity separator of text logs (default: space)" );
}

void add_discovery_flags( CLI::App& cmd, discovery_flags& f )
{
  cmd.add_option( "--templates", f.templates, "Comma-separated template names (default: all)" )->delimiter( ',' );
  cmd.add_option( "--criterion", f.criterion_name, "subset, specific or cardinality" )
      ->check( CLI::IsMember( { "subset", "specific", "cardinality" } ) );
  cmd.add_option( "--initial-model", f.initial_model, "Constraints known to hold (text or JSON model)" );
  cmd.add_option( "--rules", f.rules, "Subsumption rule file (default: built-in rules)" );
  cmd.add_option( "--max-models", f.max_models, "Maximum number of reported models" )->check( CLI::PositiveNumber );
  cmd.add_option( "--node-budget", f.node_budget, "Search node budget of the optimisation" )->check( CLI::PositiveNumber );
  cmd.add_option( "--threads", f.threads, "Worker threads (0: hardware concurrency)" );
  cmd.add_flag( "--strict-initial-model", f.strict_initial_model, "Fail instead of dropping positives that violate the initial model" );
  cmd.add_flag( "--allow-reflexive", f.allow_reflexive, "Also ground binary templates on a single activity" );
}

text_options text_opts( log_flags const& f )
{
  return { f.separator, f.allow_empty };
}

/* re-express the log over its alphabet extended with `names` */
labeled_log extend_alphabet( labeled_log log, std::vector<std::string> const& names )
{
  auto merged = merge_alphabets( log.alphabet, alphabet( names ) );
  if ( merged == log.alphabet )
  {
    return log;
  }
  return { merged, reindex( log.positives, log.alphabet, merged ), reindex( log.negatives, log.alphabet, merged ) };
}

labeled_log load_labeled_log( log_flags const& f )
{
  return make_labeled_log( load_log( f.positive, text_opts( f ) ), load_log( f.negative, text_opts( f ) ) );
}

rule_set load_rule_set( std::string const& path )
{
  return path.empty() ? rule_set::defaults() : load_rules( path );
}

discovery_options make_discovery_options( discovery_flags const& f )
{
  discovery_options o;
  o.mode = criterion_from_name( f.criterion_name );
  o.max_models = f.max_models;
  o.node_budget = f.node_budget;
  o.strict_initial_model = f.strict_initial_model;
  o.allow_reflexive = f.allow_reflexive;
  o.threads = f.threads == 0 ? std::max( 1u, std::thread::hardware_concurrency() ) : f.threads;
  return o;
}

template_catalog make_catalog( discovery_flags const& f )
{
  return f.templates.empty() ? template_catalog::full() : template_catalog::from_names( f.templates );
}

void emit( std::string const& path, std::string const& content )
{
  if ( path.empty() || path == "-" )
  {
    std::cout << content << std::flush;
  }
  else
  {
    write_file_atomic( path, content );
  }
}

std::string serialize_log( trace_set const& traces, alphabet const& alpha, std::string const& format )
{
  std::ostringstream out;
  if ( format == "xes" )
  {
    write_xes( out, traces, alpha );
  }
  else
  {
    write_text( out, traces, alpha );
  }
  return out.str();
}

int run_discover( log_flags const& lf, discovery_flags const& df, std::string const& output, std::string const& format, bool no_timings )
{
  auto log = load_labeled_log( lf );
  auto const catalog = make_catalog( df );
  auto const rules = load_rule_set( df.rules );

  model initial;
  if ( !df.initial_model.empty() )
  {
    auto const named = load_model( df.initial_model );
    log = extend_alphabet( std::move( log ), activity_names( named ) );
    initial = bind_model( named, log.alphabet );
  }

  auto const report = discover( log, catalog, initial, rules, make_discovery_options( df ) );
  emit( output, format == "text" ? report_to_text( report ) : report_to_json( report, { !no_timings } ) );
  for ( auto const& w : report.warnings )
  {
    std::cerr << "warning: " << w << "\n";
  }
  std::cerr << report_summary( report ) << "\n";
  return 0;
}

int run_check( std::string const& model_path, std::string const& log_path, log_flags const& lf, std::string const& output, std::string const& format )
{
  auto const named = load_model( model_path );
  auto const half = load_log( log_path, text_opts( lf ) );
  auto alpha = merge_alphabets( half.alphabet, alphabet( activity_names( named ) ) );
  if ( alpha.size() != half.alphabet.size() )
  {
    std::cerr << "warning: the model mentions " << alpha.size() - half.alphabet.size() << " activity(ies) absent from the log\n";
  }
  auto const traces = reindex( half.traces, half.alphabet, alpha );
  auto const m = bind_model( named, alpha );

  std::size_t accepted = 0;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  std::string text;
  for ( auto const& t : traces )
  {
    auto const violated = violated_constraints( m, t );
    accepted += violated.empty() ? 1 : 0;
    nlohmann::ordered_json row;
    auto names = nlohmann::ordered_json::array();
    for ( auto a : t )
    {
      names.push_back( alpha.name( a ) );
    }
    row["trace"] = std::move( names );
    row["accepted"] = violated.empty();
    auto v = nlohmann::ordered_json::array();
    std::string listed;
    for ( auto const& c : violated )
    {
      v.push_back( to_string( c, alpha ) );
      listed += ( listed.empty() ? "" : "; " ) + to_string( c, alpha );
    }
    row["violated"] = std::move( v );
    rows.push_back( std::move( row ) );
    text += ( violated.empty() ? "accept\t" : "reject\t" ) + format_trace( t, alpha ) + ( violated.empty() ? "" : "\t" + listed ) + "\n";
  }

  if ( format == "text" )
  {
    emit( output, text );
  }
  else
  {
    nlohmann::ordered_json doc;
    doc["traces"] = std::move( rows );
    doc["accepted"] = accepted;
    doc["rejected"] = traces.size() - accepted;
    emit( output, doc.dump( 2 ) + "\n" );
  }
  std::cerr << accepted << " of " << traces.size() << " trace(s) accepted\n";
  return 0;
}

struct generate_flags
{
  std::string spec;
  std::string fixture;
  std::string positive_out;
  std::string negative_out;
  std::string spec_out;
  std::string format = "text";
  std::string mode;
  std::string negatives;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> count_pos;
  std::optional<std::size_t> count_neg;
  std::optional<std::size_t> min_len;
  std::optional<std::size_t> max_len;
};

int run_generate( generate_flags const& g )
{
  generation_spec spec;
  if ( !g.spec.empty() )
  {
    spec = load_generation_spec( g.spec );
  }
  else
  {
    auto const fx = loan_fixture();
    spec = g.fixture == "loan-b" ? fx.scenario_b : fx.scenario_a;
  }
  if ( g.seed )
  {
    spec.seed = *g.seed;
  }
  if ( g.count_pos )
  {
    spec.count_pos = *g.count_pos;
  }
  if ( g.count_neg )
  {
    spec.count_neg = *g.count_neg;
  }
  if ( g.min_len )
  {
    spec.min_len = *g.min_len;
  }
  if ( g.max_len )
  {
    spec.max_len = *g.max_len;
  }
  if ( !g.mode.empty() )
  {
    spec.mode = g.mode == "exhaustive" ? generation_mode::exhaustive : generation_mode::sampled;
  }
  if ( !g.negatives.empty() )
  {
    spec.negatives = g.negatives == "any" ? violation_mode::any_target : violation_mode::all_targets;
  }
  if ( spec.min_len > spec.max_len )
  {
    throw error( "--min-len exceeds --max-len" );
  }

  /* generate everything before writing anything */
  std::optional<trace_set> positives;
  std::optional<trace_set> negatives;
  if ( !g.positive_out.empty() )
  {
    positives = generate_positives( spec );
  }
  if ( !g.negative_out.empty() )
  {
    negatives = generate_negatives( spec );
  }
  if ( !g.spec_out.empty() )
  {
    emit( g.spec_out, serialize_generation_spec( spec ) );
  }
  if ( positives )
  {
    emit( g.positive_out, serialize_log( *positives, spec.alphabet, g.format ) );
    std::cerr << positives->size() << " positive trace(s)";
    if ( positives->size() < spec.count_pos )
    {
      std::cerr << " (the language in the length band has no more)";
    }
    std::cerr << "\n";
  }
  if ( negatives )
  {
    emit( g.negative_out, serialize_log( *negatives, spec.alphabet, g.format ) );
    std::cerr << negatives->size() << " negative trace(s)";
    if ( negatives->size() < spec.count_neg )
    {
      std::cerr << " (the language in the length band has no more)";
    }
    std::cerr << "\n";
  }
  return 0;
}

int run_evaluate( log_flags const& lf, discovery_flags const& df, std::string const& model_path, std::size_t folds, std::uint64_t seed,
                  std::string const& output, std::string const& format )
{
  auto log = load_labeled_log( lf );

  if ( folds == 0 )
  {
    if ( model_path.empty() )
    {
      throw error( "evaluate needs --model, or --folds for cross-validation" );
    }
    auto const named = load_model( model_path );
    log = extend_alphabet( std::move( log ), activity_names( named ) );
    auto const result = evaluate( bind_model( named, log.alphabet ), log );
    emit( output, format == "csv" ? to_csv( result ) : to_json( result ) );
    std::cerr << "accuracy " << format_percent( result.accuracy ) << "%, violated negatives " << format_percent( result.violated_neg_pct )
              << "%, satisfied positives " << format_percent( result.satisfied_pos_pct ) << "%\n";
    return 0;
  }

  cv_config config;
  config.catalog = make_catalog( df );
  config.discovery = make_discovery_options( df );
  if ( !df.initial_model.empty() )
  {
    auto const named = load_model( df.initial_model );
    log = extend_alphabet( std::move( log ), activity_names( named ) );
    config.initial = bind_model( named, log.alphabet );
  }
  auto const plan = make_fold_plan( log, folds, seed );
  auto const result = cross_validate( log, plan, load_rule_set( df.rules ), config );
  emit( output, format == "csv" ? to_csv( result ) : to_json( result, log.alphabet ) );
  std::cerr << "mean accuracy " << format_percent( result.mean_accuracy ) << "% +- " << format_percent( result.stddev_accuracy ) << " over "
            << result.succeeded << " of " << result.folds.size() << " fold(s)\n";
  return 0;
}

int run_verify_rules( std::string const& rules_path, std::size_t alphabet_size, std::size_t max_len, std::string const& output, std::string const& format )
{
  auto const report = verify_rules( load_rule_set( rules_path ), alphabet_size, max_len );
  if ( format == "text" )
  {
    std::string text;
    for ( auto const& v : report.violations )
    {
      text += "rule " + std::to_string( v.rule_index + 1 ) + " (" + v.rule + ") fails on " + v.grounding + ", witness " + v.witness + "\n";
    }
    emit( output, text );
  }
  else
  {
    nlohmann::ordered_json doc;
    doc["rules_checked"] = report.rules_checked;
    doc["groundings_checked"] = report.groundings_checked;
    doc["words_checked"] = report.words_checked;
    auto violations = nlohmann::ordered_json::array();
    for ( auto const& v : report.violations )
    {
      nlohmann::ordered_json item;
      item["rule_index"] = v.rule_index;
      item["rule"] = v.rule;
      item["grounding"] = v.grounding;
      item["witness"] = v.witness;
      violations.push_back( std::move( item ) );
    }
    doc["violations"] = std::move( violations );
    emit( output, doc.dump( 2 ) + "\n" );
  }
  std::cerr << report.rules_checked << " rule(s), " << report.violations.size() << " violation(s)\n";
  return report.ok() ? 0 : 2;
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Declare constraint discovery from positive and negative traces" };
  app.require_subcommand( 1 );
  app.set_version_flag( "--version", "declsep 1.0.0" );

  std::string output;
  std::string format = "json";

  auto* discover_cmd = app.add_subcommand( "discover", "Find Declare models accepting the positives and rejecting the negatives" );
  log_flags discover_logs;
  discovery_flags discover_flags;
  bool no_timings = false;
  add_log_flags( *discover_cmd, discover_logs, true );
  add_discovery_flags( *discover_cmd, discover_flags );
  discover_cmd->add_option( "--output", output, "Report path (default: stdout)" );
  discover_cmd->add_option( "--format", format, "json or text" )->check( CLI::IsMember( { "json", "text" } ) );
  discover_cmd->add_flag( "--no-timings", no_timings, "Write zero timings so reruns are byte-identical" );
  // discovery is deterministic; the seed is accepted so scripts can pass one flag set to every subcommand
  std::uint64_t discover_seed = 1;
  discover_cmd->add_option( "--seed", discover_seed, "Accepted for uniformity; discovery draws no random numbers" );

  auto* check_cmd = app.add_subcommand( "check", "Check every trace of a log against a model" );
  std::string check_model;
  std::string check_log;
  log_flags check_logs;
  check_cmd->add_option( "--model", check_model, "Model file (text or JSON)" )->required();
  check_cmd->add_option( "--log", check_log, "Log file (.xes or one trace per line)" )->required();
  check_cmd->add_flag( "--allow-empty", check_logs.allow_empty, "Read blank lines of text logs as the empty trace" );
  check_cmd->add_option( "--separator", check_logs.separator, "Activity separator of text logs (default: space)" );
  check_cmd->add_option( "--output", output, "Verdict path (default: stdout)" );
  check_cmd->add_option( "--format", format, "json or text" )->check( CLI::IsMember( { "json", "text" } ) );

  auto* generate_cmd = app.add_subcommand( "generate", "Generate a labelled synthetic log from a reference model" );
  generate_flags gen;
  auto* spec_opt = generate_cmd->add_option( "--spec", gen.spec, "Generation spec (JSON)" );
  generate_cmd->add_option( "--fixture", gen.fixture, "Bundled scenario: loan-a or loan-b" )
      ->check( CLI::IsMember( { "loan-a", "loan-b" } ) )
      ->excludes( spec_opt );
  generate_cmd->add_option( "--positive", gen.positive_out, "Where to write the positive traces" );
  generate_cmd->add_option( "--negative", gen.negative_out, "Where to write the negative traces" );
  generate_cmd->add_option( "--write-spec", gen.spec_out, "Where to write the effective spec (JSON)" );
  generate_cmd->add_option( "--format", gen.format, "Log format: text or xes" )->check( CLI::IsMember( { "text", "xes" } ) );
  generate_cmd->add_option( "--seed", gen.seed, "Random seed (overrides the --spec value)" );
  generate_cmd->add_option( "--count-pos", gen.count_pos, "Number of positive traces" );
  generate_cmd->add_option( "--count-neg", gen.count_neg, "Number of negative traces" );
  generate_cmd->add_option( "--min-len", gen.min_len, "Shortest trace length" );
  generate_cmd->add_option( "--max-len", gen.max_len, "Longest trace length" );
  generate_cmd->add_option( "--mode", gen.mode, "sampled or exhaustive" )->check( CLI::IsMember( { "sampled", "exhaustive" } ) );
  generate_cmd->add_option( "--violate", gen.negatives, "Negatives violate all targets or any target" )->check( CLI::IsMember( { "all", "any" } ) );

  auto* evaluate_cmd = app.add_subcommand( "evaluate", "Score a model, or cross-validate discovery, on a labelled log" );
  log_flags eval_logs;
  discovery_flags eval_discovery;
  std::string eval_model;
  std::size_t folds = 0;
  std::uint64_t seed = 1;
  add_log_flags( *evaluate_cmd, eval_logs, true );
  add_discovery_flags( *evaluate_cmd, eval_discovery );
  evaluate_cmd->add_option( "--model", eval_model, "Model to score (text or JSON)" );
  evaluate_cmd->add_option( "--folds", folds, "Cross-validate with this many stratified folds" )->check( CLI::Range( 2, 1000 ) );
  evaluate_cmd->add_option( "--seed", seed, "Fold assignment seed" );
  evaluate_cmd->add_option( "--output", output, "Result path (default: stdout)" );
  evaluate_cmd->add_option( "--format", format, "json or csv" )->check( CLI::IsMember( { "json", "csv" } ) );

  auto* verify_cmd = app.add_subcommand( "verify-rules", "Check subsumption rules against the template semantics" );
  std::string verify_rules_path;
  std::size_t alphabet_size = 3;
  std::size_t max_len = 5;
  verify_cmd->add_option( "--rules", verify_rules_path, "Rule file (default: built-in rules)" );
  verify_cmd->add_option( "--alphabet-size", alphabet_size, "Number of activities" )->check( CLI::Range( 1, 26 ) );
  verify_cmd->add_option( "--max-len", max_len, "Longest word checked" );
  verify_cmd->add_option( "--output", output, "Report path (default: stdout)" );
  verify_cmd->add_option( "--format", format, "json or text" )->check( CLI::IsMember( { "json", "text" } ) );

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::ParseError const& e )
  {
    return app.exit( e ) == 0 ? 0 : 1;
  }

  try
  {
    if ( discover_cmd->parsed() )
    {
      return run_discover( discover_logs, discover_flags, output, format, no_timings );
    }
    if ( check_cmd->parsed() )
    {
      return run_check( check_model, check_log, check_logs, output, format );
    }
    if ( generate_cmd->parsed() )
    {
      if ( gen.spec.empty() && gen.fixture.empty() )
      {
        throw error( "generate needs --spec or --fixture" );
      }
      return run_generate( gen );
    }
    if ( evaluate_cmd->parsed() )
    {
      return run_evaluate( eval_logs, eval_discovery, eval_model, folds, seed, output, format );
    }
    if ( verify_cmd->parsed() )
    {
      return run_verify_rules( verify_rules_path, alphabet_size, max_len, output, format );
    }
  }
  catch ( contract_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch ( infeasible_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  catch ( parse_error const& e )
  {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ", column " << e.column() << ")\n";
    return 1;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
