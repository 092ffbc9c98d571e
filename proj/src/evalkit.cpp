#include <declsep/evalkit.hpp>

#include "rng.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <numeric>

namespace declsep
{

eval_result evaluate( model const& m, trace_set const& positives, trace_set const& negatives )
{
  eval_result r;
  r.model_size = m.size();
  r.positives = positives.size();
  r.negatives = negatives.size();
  for ( auto const& t : positives )
  {
    r.accepted_positives += model_accepts( m, t ) ? 1 : 0;
  }
  for ( auto const& t : negatives )
  {
    r.rejected_negatives += model_accepts( m, t ) ? 0 : 1;
  }
  auto ratio = []( std::size_t num, std::size_t den ) { return den == 0 ? 1.0 : static_cast<double>( num ) / static_cast<double>( den ); };
  r.satisfied_pos_pct = ratio( r.accepted_positives, r.positives );
  r.violated_neg_pct = ratio( r.rejected_negatives, r.negatives );
  r.accuracy = ratio( r.accepted_positives + r.rejected_negatives, r.positives + r.negatives );
  return r;
}

eval_result evaluate( model const& m, labeled_log const& log )
{
  return evaluate( m, log.positives, log.negatives );
}

fold_plan make_fold_plan( labeled_log const& log, std::size_t k, std::uint64_t seed )
{
  if ( k < 2 )
  {
    throw error( "cross-validation needs at least 2 folds" );
  }
  fold_plan plan;
  plan.k = k;
  plan.seed = seed;

  std::mt19937_64 rng( seed );
  auto assign = [&]( std::size_t n ) {
    std::vector<std::size_t> order( n );
    std::iota( order.begin(), order.end(), std::size_t{ 0 } );
    detail::shuffle( order, rng );
    std::vector<std::size_t> folds( n );
    for ( std::size_t i = 0; i < n; ++i )
    {
      folds[order[i]] = i % k;
    }
    return folds;
  };
  plan.positive_folds = assign( log.positives.size() );
  plan.negative_folds = assign( log.negatives.size() );
  return plan;
}

cv_result cross_validate( labeled_log const& log, fold_plan const& plan, rule_set const& rules, cv_config const& config )
{
  if ( plan.positive_folds.size() != log.positives.size() || plan.negative_folds.size() != log.negatives.size() )
  {
    throw error( "fold plan does not match the log" );
  }

  cv_result result;
  for ( std::size_t f = 0; f < plan.k; ++f )
  {
    labeled_log train{ log.alphabet, {}, {} };
    trace_set test_pos;
    trace_set test_neg;
    auto split = [&]( trace_set const& traces, std::vector<std::size_t> const& folds, trace_set& training, trace_set& held_out ) {
      std::size_t i = 0;
      for ( auto const& t : traces )
      {
        ( folds[i++] == f ? held_out : training ).insert( t );
      }
    };
    split( log.positives, plan.positive_folds, train.positives, test_pos );
    split( log.negatives, plan.negative_folds, train.negatives, test_neg );

    fold_outcome outcome;
    outcome.fold = f;
    if ( test_pos.empty() && test_neg.empty() )
    {
      outcome.failed = true;
      outcome.failure = "empty fold";
    }
    else
    {
      try
      {
        auto const report = discover( train, config.catalog, config.initial, rules, config.discovery );
        if ( report.solutions.models.empty() )
        {
          outcome.failed = true;
          outcome.failure = "no solution";
        }
        else
        {
          outcome.selected = model_union( report.solutions.models.front().constraints, config.initial );
          outcome.held_out = evaluate( outcome.selected, test_pos, test_neg );
        }
      }
      catch ( error const& e )
      {
        outcome.failed = true;
        outcome.failure = e.what();
      }
    }
    result.folds.push_back( std::move( outcome ) );
  }

  double sum = 0.0;
  for ( auto const& f : result.folds )
  {
    if ( !f.failed )
    {
      ++result.succeeded;
      sum += f.held_out.accuracy;
    }
  }
  if ( result.succeeded > 0 )
  {
    result.mean_accuracy = sum / static_cast<double>( result.succeeded );
    double sq = 0.0;
    for ( auto const& f : result.folds )
    {
      if ( !f.failed )
      {
        sq += ( f.held_out.accuracy - result.mean_accuracy ) * ( f.held_out.accuracy - result.mean_accuracy );
      }
    }
    result.stddev_accuracy = std::sqrt( sq / static_cast<double>( result.succeeded ) );
  }
  return result;
}

std::vector<phase_row> time_phases( discovery_report const& report )
{
  auto const& t = report.timings;
  return { { "compatibles", t.compatibles_ms }, { "sheriffs", t.sheriffs_ms }, { "optimisation", t.optimisation_ms }, { "total", t.total_ms } };
}

std::string format_percent( double fraction )
{
  char buffer[32];
  std::snprintf( buffer, sizeof buffer, "%.2f", 100.0 * fraction );
  return buffer;
}

std::string to_csv( eval_result const& r )
{
  return "model_size,positives,negatives,satisfied_pos_pct,violated_neg_pct,accuracy\n" + std::to_string( r.model_size ) + "," +
         std::to_string( r.positives ) + "," + std::to_string( r.negatives ) + "," + format_percent( r.satisfied_pos_pct ) + "," +
         format_percent( r.violated_neg_pct ) + "," + format_percent( r.accuracy ) + "\n";
}

namespace
{

nlohmann::ordered_json eval_json( eval_result const& r )
{
  nlohmann::ordered_json doc;
  doc["model_size"] = r.model_size;
  doc["positives"] = r.positives;
  doc["negatives"] = r.negatives;
  doc["accepted_positives"] = r.accepted_positives;
  doc["rejected_negatives"] = r.rejected_negatives;
  doc["satisfied_pos_pct"] = format_percent( r.satisfied_pos_pct );
  doc["violated_neg_pct"] = format_percent( r.violated_neg_pct );
  doc["accuracy"] = format_percent( r.accuracy );
  return doc;
}

} // namespace

std::string to_json( eval_result const& r )
{
  return eval_json( r ).dump( 2 ) + "\n";
}

std::string to_csv( cv_result const& r )
{
  std::string out = "fold,status,model_size,satisfied_pos_pct,violated_neg_pct,accuracy\n";
  for ( auto const& f : r.folds )
  {
    out += std::to_string( f.fold ) + ",";
    if ( f.failed )
    {
      out += "failed,,,,\n";
      continue;
    }
    out += "ok," + std::to_string( f.held_out.model_size ) + "," + format_percent( f.held_out.satisfied_pos_pct ) + "," +
           format_percent( f.held_out.violated_neg_pct ) + "," + format_percent( f.held_out.accuracy ) + "\n";
  }
  out += "mean,,,,," + format_percent( r.mean_accuracy ) + "\n";
  out += "stddev,,,,," + format_percent( r.stddev_accuracy ) + "\n";
  return out;
}

std::string to_json( cv_result const& r, alphabet const& alpha )
{
  nlohmann::ordered_json doc;
  auto folds = nlohmann::ordered_json::array();
  for ( auto const& f : r.folds )
  {
    nlohmann::ordered_json item;
    item["fold"] = f.fold;
    item["failed"] = f.failed;
    if ( f.failed )
    {
      item["failure"] = f.failure;
    }
    else
    {
      auto constraints = nlohmann::ordered_json::array();
      for ( auto const& c : f.selected )
      {
        constraints.push_back( to_string( c, alpha ) );
      }
      item["model"] = std::move( constraints );
      item["held_out"] = eval_json( f.held_out );
    }
    folds.push_back( std::move( item ) );
  }
  doc["folds"] = std::move( folds );
  doc["succeeded"] = r.succeeded;
  doc["mean_accuracy"] = format_percent( r.mean_accuracy );
  doc["stddev_accuracy"] = format_percent( r.stddev_accuracy );
  return doc.dump( 2 ) + "\n";
}

} // namespace declsep
