// Acceptance runner: one PASS/FAIL line per criterion.
// Usage: declsep_acceptance [N...]   (no argument runs all eight)
#include "oracle.hpp"

#include <declsep/closure.hpp>
#include <declsep/discovery.hpp>
#include <declsep/evalkit.hpp>
#include <declsep/hitting_sets.hpp>
#include <declsep/loggen.hpp>
#include <declsep/report.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <sys/wait.h>
#include <unistd.h>

using namespace declsep;
namespace fs = std::filesystem;

namespace
{

struct verdict
{
  bool pass = true;
  std::string detail;

  void require( bool ok, std::string const& what )
  {
    if ( !ok )
    {
      pass = false;
      detail += ( detail.empty() ? "" : "; " ) + what;
    }
  }
};

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point start )
{
  return std::chrono::duration<double>( clock_type::now() - start ).count();
}

labeled_log make_log( std::vector<std::vector<std::string>> const& pos, std::vector<std::vector<std::string>> const& neg )
{
  return make_labeled_log( make_log_half( pos ), make_log_half( neg ) );
}

model parse_model( std::vector<std::string> const& texts, alphabet const& alpha )
{
  std::vector<ground_constraint> cs;
  for ( auto const& t : texts )
  {
    cs.push_back( parse_constraint( t, alpha ) );
  }
  return model( std::move( cs ) );
}

std::set<model> models_of( solution_set const& s )
{
  std::set<model> out;
  for ( auto const& m : s.models )
  {
    out.insert( m.constraints );
  }
  return out;
}

/* compatibles and sheriffs from the loop semantics, not the automata */
model oracle_compatibles( template_catalog const& catalog, labeled_log const& log )
{
  model out;
  for ( auto const& c : ground( catalog, log.alphabet ) )
  {
    if ( std::all_of( log.positives.begin(), log.positives.end(), [&]( auto const& t ) { return oracle::holds( c, t ); } ) )
    {
      out.insert( c );
    }
  }
  return out;
}

bool sheriffs_agree( model const& compat, labeled_log const& log )
{
  auto const smap = sheriffs( compat.constraints(), log.negatives );
  for ( auto const& t : log.negatives )
  {
    model expected;
    for ( auto const& c : compat )
    {
      if ( !oracle::holds( c, t ) )
      {
        expected.insert( c );
      }
    }
    auto const it = smap.find( t );
    if ( it == smap.end() ? !expected.empty() : model( it->second ) != expected )
    {
      return false;
    }
  }
  return true;
}

verdict criterion_1()
{
  verdict v;
  auto const start = clock_type::now();
  auto const log = make_log( { { "a", "b" } }, { { "a" }, { "b" }, { "b", "a" } } );
  auto const catalog = template_catalog::from_names( { "Existence", "Response" } );
  auto const compat = model( compatibles( ground( catalog, log.alphabet ), log.positives ) );
  v.require( compat == oracle_compatibles( catalog, log ), "compatibles differ from the trace semantics" );
  v.require( compat == parse_model( { "Existence[a]", "Existence[b]", "Response[a, b]" }, log.alphabet ), "unexpected compatibles" );
  v.require( sheriffs_agree( compat, log ), "sheriffs differ from the trace semantics" );
  auto const report = discover( log, catalog, {}, rule_set::defaults() );
  v.require( models_of( report.solutions ) == std::set<model>{ parse_model( { "Existence[a]", "Response[a, b]" }, log.alphabet ) },
             "subset solution is not {Existence[a], Response[a, b]}" );
  auto const elapsed = seconds_since( start );
  v.require( elapsed < 1.0, "took " + std::to_string( elapsed ) + " s" );
  if ( v.pass )
  {
    v.detail = "solution {Existence[a], Response[a, b]}, closure " + std::to_string( report.solutions.models.front().closure_size ) + ", " +
               std::to_string( elapsed * 1000.0 ) + " ms";
  }
  return v;
}

verdict criterion_2()
{
  verdict v;
  auto const start = clock_type::now();
  auto const log = make_log( { { "b", "a", "c" } }, { { "a", "b" } } );
  auto const& A = log.alphabet;
  auto const catalog = template_catalog::from_names( { "Existence", "Init" } );
  auto const compat = model( compatibles( ground( catalog, A ), log.positives ) );
  v.require( compat == oracle_compatibles( catalog, log ), "compatibles differ from the trace semantics" );
  v.require( sheriffs_agree( compat, log ), "sheriffs differ from the trace semantics" );

  discovery_options o;
  auto solve_with = [&]( criterion mode ) {
    o.mode = mode;
    return models_of( discover( log, catalog, {}, rule_set::defaults(), o ).solutions );
  };
  v.require( solve_with( criterion::subset ) == std::set<model>{ parse_model( { "Existence[c]" }, A ), parse_model( { "Init[b]" }, A ) },
             "subset solutions are not {Existence[c]}, {Init[b]}" );
  v.require( solve_with( criterion::cardinality ) == std::set<model>{ parse_model( { "Existence[c]" }, A ) }, "cardinality solution is not {Existence[c]}" );
  v.require( solve_with( criterion::specific ) == std::set<model>{ parse_model( { "Existence[a]", "Existence[c]", "Init[b]" }, A ) },
             "specific solution is not {Existence[a], Existence[c], Init[b]}" );
  auto const elapsed = seconds_since( start );
  v.require( elapsed < 1.0, "took " + std::to_string( elapsed ) + " s" );
  if ( v.pass )
  {
    v.detail = "subset {Ex[c]} {Init[b]}, cardinality {Ex[c]}, specific {Ex[a], Ex[c], Init[b]}, " + std::to_string( elapsed * 1000.0 ) + " ms";
  }
  return v;
}

verdict criterion_3()
{
  verdict v;
  auto const start = clock_type::now();
  auto const fx = loan_fixture();

  struct scenario
  {
    char const* name;
    generation_spec const* spec;
    std::size_t want_pos;
    std::size_t want_neg;
  };
  std::string counts;
  for ( auto const& s : { scenario{ "a", &fx.scenario_a, 2000, 800 }, scenario{ "b", &fx.scenario_b, 2000, 400 } } )
  {
    labeled_log const log{ fx.alphabet, generate_positives( *s.spec ), generate_negatives( *s.spec ) };

    // the whole language in the band, to report why a count falls short
    auto whole = *s.spec;
    whole.mode = generation_mode::exhaustive;
    whole.count_pos = whole.count_neg = 1'000'000'000;
    auto const lang_pos = generate_positives( whole ).size();
    auto const lang_neg = generate_negatives( whole ).size();

    counts += std::string( counts.empty() ? "" : ", " ) + "(" + s.name + ") " + std::to_string( log.positives.size() ) + "/" +
              std::to_string( log.negatives.size() ) + " distinct traces";
    v.require( log.positives.size() >= s.want_pos,
               std::string( "(" ) + s.name + ") " + std::to_string( log.positives.size() ) + " distinct positives < " + std::to_string( s.want_pos ) +
                   ": only " + std::to_string( lang_pos ) + " traces of length 1..9 satisfy the reference model" );
    v.require( log.negatives.size() >= s.want_neg,
               std::string( "(" ) + s.name + ") " + std::to_string( log.negatives.size() ) + " distinct negatives < " + std::to_string( s.want_neg ) +
                   ": the scenario language has " + std::to_string( lang_neg ) + " traces" );

    auto const report = discover( log, template_catalog::full(), {}, rule_set::defaults() );
    if ( report.solutions.models.empty() )
    {
      v.require( false, std::string( "(" ) + s.name + ") no solution" );
      continue;
    }
    bool separated = true;
    for ( auto const& m : report.solutions.models )
    {
      auto const r = evaluate( m.constraints, log );
      separated = separated && r.satisfied_pos_pct == 1.0 && r.violated_neg_pct == 1.0;
    }
    v.require( separated, std::string( "(" ) + s.name + ") a solution is not a perfect separator" );
    bool const target_found = std::any_of( report.solutions.models.begin(), report.solutions.models.end(),
                                           [&]( auto const& m ) { return m.constraints.includes( s.spec->violated ); } );
    v.require( target_found, std::string( "(" ) + s.name + ") the violated constraint is not among the subset solutions" );
    counts += ", separation 100/100, target recovered";
  }
  auto const elapsed = seconds_since( start );
  v.require( elapsed < 300.0, "took " + std::to_string( elapsed ) + " s" );
  if ( v.pass )
  {
    v.detail = counts;
  }
  else
  {
    v.detail += " [other checks: " + counts + "]";
  }
  return v;
}

labeled_log random_log( std::mt19937_64& rng )
{
  auto const n = 2 + rng() % 3;
  std::vector<std::string> names;
  for ( std::size_t i = 0; i < n; ++i )
  {
    names.push_back( std::string( 1, static_cast<char>( 'a' + i ) ) );
  }
  auto traces = [&]( std::size_t max_count ) {
    trace_set out;
    for ( std::size_t i = 0, count = 1 + rng() % max_count; i < count; ++i )
    {
      trace t( rng() % 6 );
      for ( auto& a : t )
      {
        a = static_cast<activity_id>( rng() % n );
      }
      out.insert( t );
    }
    return out;
  };
  return { alphabet( names ), traces( 10 ), traces( 8 ) };
}

verdict criterion_4()
{
  verdict v;
  std::mt19937_64 rng( 2024 );
  std::size_t instances = 0;
  std::size_t bad = 0;
  discovery_options o;
  o.max_models = 1'000'000;
  for ( ; instances < 200; ++instances )
  {
    auto const log = random_log( rng );
    o.mode = criterion::subset;
    auto const subset = discover( log, template_catalog::full(), {}, rule_set::defaults(), o );
    o.mode = criterion::cardinality;
    auto const card = discover( log, template_catalog::full(), {}, rule_set::defaults(), o );
    auto const subset_models = models_of( subset.solutions );
    for ( auto const& m : card.solutions.models )
    {
      bad += subset_models.count( m.constraints ) ? 0 : 1;
    }
  }
  v.require( bad == 0, std::to_string( bad ) + " cardinality solutions outside the subset solutions" );
  v.detail = v.pass ? std::to_string( instances ) + " random instances, cardinality optima within subset optima" : v.detail;
  return v;
}

verdict criterion_5()
{
  verdict v;
  std::mt19937_64 rng( 77 );
  std::size_t const n = 3;
  closure_engine const engine( rule_set::defaults(), n );
  auto const pool = ground( template_catalog::full(), n );
  auto const words = oracle::all_words( n, 5 );
  auto random_model = [&]( std::size_t max_size ) {
    std::vector<ground_constraint> picked;
    for ( std::size_t i = 0, size = rng() % ( max_size + 1 ); i < size; ++i )
    {
      picked.push_back( pool[rng() % pool.size()] );
    }
    return model( std::move( picked ) );
  };
  std::size_t extensive = 0, idempotent = 0, monotone = 0, semantic = 0;
  std::size_t const models = 500;
  for ( std::size_t i = 0; i < models; ++i )
  {
    auto const m = random_model( 6 );
    auto const bigger = model_union( m, random_model( 3 ) );
    auto const cl = engine.close( m );
    extensive += cl.includes( m ) ? 0 : 1;
    idempotent += engine.close( cl ) == cl ? 0 : 1;
    monotone += engine.close( bigger ).includes( cl ) ? 0 : 1;
    if ( i < 100 )
    {
      semantic += std::all_of( words.begin(), words.end(), [&]( auto const& w ) { return oracle::holds( m, w ) == oracle::holds( cl, w ); } ) ? 0 : 1;
    }
  }
  v.require( extensive == 0, std::to_string( extensive ) + " non-extensive closures" );
  v.require( idempotent == 0, std::to_string( idempotent ) + " non-idempotent closures" );
  v.require( monotone == 0, std::to_string( monotone ) + " non-monotone closures" );
  v.require( semantic == 0, std::to_string( semantic ) + " closures change the accepted traces" );
  auto const report = verify_rules( rule_set::defaults(), 3, 5 );
  v.require( report.ok(), std::to_string( report.violations.size() ) + " unsound rule groundings" );
  if ( v.pass )
  {
    v.detail = std::to_string( models ) + " models satisfy the closure axioms; " + std::to_string( report.rules_checked ) + " rules, " +
               std::to_string( report.groundings_checked ) + " groundings sound up to length 5";
  }
  return v;
}

verdict criterion_6()
{
  verdict v;
  std::mt19937_64 rng( 606 );
  std::size_t mismatches = 0;
  std::size_t const instances = 120;
  for ( std::size_t i = 0; i < instances; ++i )
  {
    auto const n = 1 + rng() % 12;
    set_family family;
    for ( std::size_t j = 0, members = 1 + rng() % 8; j < members; ++j )
    {
      std::vector<std::uint32_t> member;
      for ( std::uint32_t e = 0; e < n; ++e )
      {
        if ( rng() % 3 == 0 )
        {
          member.push_back( e );
        }
      }
      if ( member.empty() )
      {
        member.push_back( static_cast<std::uint32_t>( rng() % n ) );
      }
      family.push_back( member );
    }
    auto hits = [&]( std::uint32_t mask ) {
      return std::all_of( family.begin(), family.end(),
                          [&]( auto const& m ) { return std::any_of( m.begin(), m.end(), [&]( auto e ) { return ( mask >> e ) & 1u; } ); } );
    };
    std::vector<std::vector<std::uint32_t>> expected;
    for ( std::uint32_t mask = 0; mask < ( 1u << n ); ++mask )
    {
      if ( !hits( mask ) )
      {
        continue;
      }
      bool minimal = true;
      for ( std::uint32_t e = 0; e < n && minimal; ++e )
      {
        minimal = !( ( ( mask >> e ) & 1u ) && hits( mask & ~( 1u << e ) ) );
      }
      if ( minimal )
      {
        std::vector<std::uint32_t> set;
        for ( std::uint32_t e = 0; e < n; ++e )
        {
          if ( ( mask >> e ) & 1u )
          {
            set.push_back( e );
          }
        }
        expected.push_back( set );
      }
    }
    std::sort( expected.begin(), expected.end() );
    mismatches += minimal_hitting_sets( family, n ).sets == expected ? 0 : 1;
  }
  v.require( mismatches == 0, std::to_string( mismatches ) + " families disagree with subset enumeration" );
  v.detail = v.pass ? std::to_string( instances ) + " random families with up to 12 elements match subset enumeration" : v.detail;
  return v;
}

verdict criterion_7()
{
  verdict v;
  auto const fx = loan_fixture();
  labeled_log const log{ fx.alphabet, generate_positives( fx.scenario_a ), generate_negatives( fx.scenario_a ) };
  auto const cv = cross_validate( log, make_fold_plan( log, 5, 1 ), rule_set::defaults(), {} );
  v.require( cv.succeeded == 5, std::to_string( 5 - cv.succeeded ) + " folds failed" );
  v.require( format_percent( cv.mean_accuracy ) == "100.00" && format_percent( cv.stddev_accuracy ) == "0.00",
             "accuracy " + format_percent( cv.mean_accuracy ) + " +- " + format_percent( cv.stddev_accuracy ) );
  v.detail = v.pass ? "5-fold accuracy 100.00 +- 0.00" : v.detail;
  return v;
}

std::string slurp( fs::path const& p )
{
  std::ifstream in( p, std::ios::binary );
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

verdict criterion_8()
{
  verdict v;
  char const* cli = std::getenv( "DECLSEP_CLI" );
  if ( cli == nullptr )
  {
    v.require( false, "DECLSEP_CLI is not set" );
    return v;
  }
  auto const dir = fs::temp_directory_path() / ( "declsep_acceptance_" + std::to_string( ::getpid() ) );
  fs::remove_all( dir );
  fs::create_directories( dir );
  auto put = [&]( std::string const& name, std::string const& content ) {
    std::ofstream( dir / name ) << content;
    return ( dir / name ).string();
  };
  auto const pos = put( "pos.txt", "b a c\nb c a c\n" );
  auto const neg = put( "neg.txt", "a b\nc\nb b\n" );
  auto const ref = put( "ref.model", "Init[b]\nExistence[c]\n" );
  auto const logs = " --positive " + pos + " --negative " + neg;

  // each command writes its artefacts into `out`; stdout goes there too
  std::vector<std::pair<std::string, std::vector<std::string>>> const commands{
      { "discover" + logs + " --no-timings --threads 4 --output @/r.json", { "r.json" } },
      { "discover" + logs + " --criterion specific --format text --output @/r.txt", { "r.txt" } },
      { "check --model " + ref + " --log " + pos + " --output @/c.json", { "c.json" } },
      { "generate --fixture loan-a --positive @/p.txt --negative @/n.txt --write-spec @/s.json", { "p.txt", "n.txt", "s.json" } },
      { "generate --fixture loan-b --format xes --seed 5 --positive @/p.xes --negative @/n.xes", { "p.xes", "n.xes" } },
      { "evaluate" + logs + " --model " + ref + " --output @/e.json", { "e.json" } },
      { "evaluate" + logs + " --folds 2 --seed 9 --format csv --output @/cv.csv", { "cv.csv" } },
      { "verify-rules --alphabet-size 2 --max-len 4 --output @/v.json", { "v.json" } },
  };
  std::size_t compared = 0;
  for ( auto const& [args, files] : commands )
  {
    std::vector<std::string> runs[2];
    for ( int r = 0; r < 2; ++r )
    {
      auto const out = dir / ( "run" + std::to_string( r ) );
      fs::create_directories( out );
      auto command = args;
      for ( std::size_t at; ( at = command.find( '@' ) ) != std::string::npos; )
      {
        command.replace( at, 1, out.string() );
      }
      auto const status = std::system( ( std::string( cli ) + " " + command + " > " + ( out / "stdout" ).string() + " 2> /dev/null" ).c_str() );
      if ( !WIFEXITED( status ) || WEXITSTATUS( status ) != 0 )
      {
        v.require( false, "'" + args + "' failed" );
      }
      runs[r].push_back( slurp( out / "stdout" ) );
      for ( auto const& f : files )
      {
        runs[r].push_back( slurp( out / f ) );
      }
    }
    v.require( runs[0] == runs[1], "'" + args + "' is not byte-identical across runs" );
    compared += files.size();
  }
  fs::remove_all( dir );
  v.detail = v.pass ? std::to_string( commands.size() ) + " commands, " + std::to_string( compared ) + " output files byte-identical across runs" : v.detail;
  return v;
}

} // namespace

int main( int argc, char** argv )
{
  std::vector<std::function<verdict()>> const criteria{ criterion_1, criterion_2, criterion_3, criterion_4,
                                                        criterion_5, criterion_6, criterion_7, criterion_8 };
  std::vector<std::size_t> selected;
  for ( int i = 1; i < argc; ++i )
  {
    auto const n = std::strtoul( argv[i], nullptr, 10 );
    if ( n < 1 || n > criteria.size() )
    {
      std::cerr << "unknown criterion '" << argv[i] << "'\n";
      return 2;
    }
    selected.push_back( n );
  }
  if ( selected.empty() )
  {
    for ( std::size_t n = 1; n <= criteria.size(); ++n )
    {
      selected.push_back( n );
    }
  }

  bool all = true;
  for ( auto n : selected )
  {
    verdict v;
    try
    {
      v = criteria[n - 1]();
    }
    catch ( std::exception const& e )
    {
      v.pass = false;
      v.detail = std::string( "exception: " ) + e.what();
    }
    all = all && v.pass;
    std::cout << "criterion " << n << ": " << ( v.pass ? "PASS" : "FAIL" ) << " - " << v.detail << std::endl;
  }
  return all ? 0 : 1;
}
