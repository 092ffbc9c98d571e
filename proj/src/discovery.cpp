#include <declsep/discovery.hpp>

#include <declsep/hitting_sets.hpp>

#include <algorithm>
#include <chrono>
#include <thread>

namespace declsep
{

namespace
{

/* run fn(i) for i in [0, n) over `threads` strided workers */
template<typename Fn>
void parallel_for( std::size_t n, unsigned threads, Fn&& fn )
{
  threads = std::max( 1u, std::min<unsigned>( threads, static_cast<unsigned>( std::max<std::size_t>( n, 1 ) ) ) );
  if ( threads == 1 )
  {
    for ( std::size_t i = 0; i < n; ++i )
    {
      fn( i );
    }
    return;
  }
  std::vector<std::jthread> workers;
  for ( unsigned w = 0; w < threads; ++w )
  {
    workers.emplace_back( [&, w] {
      for ( std::size_t i = w; i < n; i += threads )
      {
        fn( i );
      }
    } );
  }
}

double elapsed_ms( std::chrono::steady_clock::time_point since )
{
  return std::chrono::duration<double, std::milli>( std::chrono::steady_clock::now() - since ).count();
}

} // namespace

std::vector<ground_constraint> compatibles( std::vector<ground_constraint> const& constraints,
                                            trace_set const& positives,
                                            unsigned threads )
{
  std::vector<trace> traces( positives.begin(), positives.end() );
  std::vector<std::uint8_t> keep( constraints.size(), 0 );
  parallel_for( constraints.size(), threads, [&]( std::size_t i ) {
    auto const automaton = compile( constraints[i] );
    keep[i] = std::all_of( traces.begin(), traces.end(), [&]( auto const& t ) { return automaton.accepts( t ); } ) ? 1 : 0;
  } );

  std::vector<ground_constraint> result;
  for ( std::size_t i = 0; i < constraints.size(); ++i )
  {
    if ( keep[i] )
    {
      result.push_back( constraints[i] );
    }
  }
  return result;
}

sheriffs_map sheriffs( std::vector<ground_constraint> const& compatible, trace_set const& negatives, unsigned threads )
{
  std::vector<trace> traces( negatives.begin(), negatives.end() );
  std::vector<constraint_automaton> automata;
  automata.reserve( compatible.size() );
  for ( auto const& c : compatible )
  {
    automata.push_back( compile( c ) );
  }

  std::vector<std::vector<ground_constraint>> entries( traces.size() );
  parallel_for( traces.size(), threads, [&]( std::size_t i ) {
    for ( std::size_t k = 0; k < automata.size(); ++k )
    {
      if ( !automata[k].accepts( traces[i] ) )
      {
        entries[i].push_back( compatible[k] );
      }
    }
  } );

  sheriffs_map smap;
  for ( std::size_t i = 0; i < traces.size(); ++i )
  {
    smap.emplace( std::move( traces[i] ), std::move( entries[i] ) );
  }
  return smap;
}

negative_split effective_negatives( sheriffs_map const& smap, model const& initial, trace_set const& negatives )
{
  negative_split split;
  for ( auto const& t : negatives )
  {
    auto const it = smap.find( t );
    if ( it == smap.end() || it->second.empty() )
    {
      split.empty_sheriffs.insert( t );
    }
    else if ( !model_accepts( initial, t ) )
    {
      split.rejected_by_initial.insert( t );
    }
    else
    {
      split.effective.insert( t );
    }
  }
  return split;
}

candidate_pool make_candidate_pool( sheriffs_map const& smap, trace_set const& effective, std::vector<ground_constraint> const& compatible )
{
  candidate_pool pool;
  pool.compatible = compatible;
  for ( auto const& t : effective )
  {
    auto const it = smap.find( t );
    if ( it == smap.end() )
    {
      continue;
    }
    for ( auto const& c : it->second )
    {
      pool.coverage[c].push_back( t );
    }
  }
  for ( auto const& [c, traces] : pool.coverage )
  {
    pool.constraints.push_back( c );
  }
  return pool;
}

std::string_view to_string( criterion c )
{
  switch ( c )
  {
  case criterion::subset: return "subset";
  case criterion::specific: return "specific";
  case criterion::cardinality: return "cardinality";
  }
  return "?";
}

criterion criterion_from_name( std::string_view name )
{
  if ( name == "subset" || name == "generality" )
  {
    return criterion::subset;
  }
  if ( name == "specific" || name == "specificity" )
  {
    return criterion::specific;
  }
  if ( name == "cardinality" || name == "simplicity" )
  {
    return criterion::cardinality;
  }
  throw error( "unknown criterion '" + std::string( name ) + "' (expected subset, specific or cardinality)" );
}

bool is_better( criterion mode, model const& lhs, model const& rhs, model const& initial, closure_engine const& engine )
{
  auto const& u = engine.universe();
  auto const l = engine.close_bits( u.to_bits( model_union( lhs, initial ) ) );
  auto const r = engine.close_bits( u.to_bits( model_union( rhs, initial ) ) );
  bool const proper_subset = lhs.size() < rhs.size() && rhs.includes( lhs );

  switch ( mode )
  {
  case criterion::subset:
    return l.is_proper_subset_of( r ) || ( l == r && proper_subset );
  case criterion::specific:
    return r.is_proper_subset_of( l ) || ( l == r && proper_subset );
  case criterion::cardinality:
  {
    auto const lc = l.count();
    auto const rc = r.count();
    return lc < rc || ( lc == rc && lhs.size() < rhs.size() );
  }
  }
  return false;
}

namespace
{

struct candidate
{
  model constraints;
  constraint_bits closure;
};

/* the specific criterion: every inclusion-minimal S ⊆ compatible \ P with cl(S ∪ P) = cl(compatible ∪ P) */
class minimal_basis_search
{
public:
  minimal_basis_search( std::vector<ground_constraint> const& base, model const& initial, closure_engine const& engine,
                        std::size_t max_found, std::size_t budget )
      : engine_( engine ), max_found_( max_found ), budget_( budget )
  {
    auto const& u = engine.universe();
    initial_bits_ = u.to_bits( initial );
    std::vector<std::pair<std::size_t, std::size_t>> ranked;
    for ( auto const& c : base )
    {
      if ( !initial.contains( c ) )
      {
        auto bits = initial_bits_;
        bits.set( u.index( c ) );
        engine.close_in_place( bits );
        ranked.emplace_back( bits.count(), u.index( c ) );
      }
    }
    // strongest first: early picks then rarely turn redundant later
    std::stable_sort( ranked.begin(), ranked.end(), []( auto const& x, auto const& y ) { return x.first > y.first; } );
    for ( auto const& [strength, index] : ranked )
    {
      base_.push_back( index );
    }
  }

  void run()
  {
    auto const n = base_.size();
    std::vector<bool> all( n, true );
    std::vector<state> decisions( n, state::open );

    /* essential elements cannot be derived from the rest */
    for ( std::size_t i = 0; i < n; ++i )
    {
      auto without = all;
      without[i] = false;
      if ( !derives( without, base_[i] ) )
      {
        decisions[i] = state::in;
      }
    }
    search( decisions );
  }

  std::vector<std::vector<std::size_t>> const& found() const noexcept { return found_; }
  bool truncated() const noexcept { return truncated_; }

private:
  enum class state : std::uint8_t
  {
    open,
    in,
    out
  };

  constraint_bits closure_of( std::vector<bool> const& selected ) const
  {
    auto bits = initial_bits_;
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      if ( selected[i] )
      {
        bits.set( base_[i] );
      }
    }
    engine_.close_in_place( bits );
    return bits;
  }

  bool derives( std::vector<bool> const& selected, std::size_t target ) const { return closure_of( selected ).test( target ); }

  bool irredundant( std::vector<bool>& selected ) const
  {
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      if ( selected[i] )
      {
        selected[i] = false;
        bool const redundant = derives( selected, base_[i] );
        selected[i] = true;
        if ( redundant )
        {
          return false;
        }
      }
    }
    return true;
  }

  void search( std::vector<state>& decisions )
  {
    if ( stop_ )
    {
      return;
    }
    if ( ++nodes_ > budget_ )
    {
      truncated_ = stop_ = true;
      return;
    }

    std::vector<bool> chosen( base_.size() );
    std::vector<bool> available( base_.size() );
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      chosen[i] = decisions[i] == state::in;
      available[i] = decisions[i] != state::out;
    }
    // everything must stay derivable without the excluded elements
    auto const reachable = closure_of( available );
    for ( auto b : base_ )
    {
      if ( !reachable.test( b ) )
      {
        return;
      }
    }
    // a redundant member stays redundant in every superset
    if ( !irredundant( chosen ) )
    {
      return;
    }
    auto const cover = closure_of( chosen );

    std::size_t next = base_.size();
    bool blocked = false;
    for ( std::size_t i = 0; i < base_.size(); ++i )
    {
      if ( cover.test( base_[i] ) )
      {
        continue;
      }
      if ( decisions[i] == state::open )
      {
        next = i;
        break;
      }
      blocked = true;
    }

    if ( next == base_.size() )
    {
      if ( blocked )
      {
        return;
      }
      std::vector<std::size_t> picked;
      for ( std::size_t i = 0; i < base_.size(); ++i )
      {
        if ( chosen[i] )
        {
          picked.push_back( base_[i] );
        }
      }
      found_.push_back( std::move( picked ) );
      if ( found_.size() > max_found_ )
      {
        truncated_ = stop_ = true;
      }
      return;
    }

    decisions[next] = state::in;
    search( decisions );

    decisions[next] = state::out;
    available[next] = false;
    if ( derives( available, base_[next] ) )
    {
      search( decisions );
    }
    decisions[next] = state::open;
  }

  closure_engine const& engine_;
  std::size_t max_found_;
  std::size_t budget_;
  constraint_bits initial_bits_;
  std::vector<std::size_t> base_;
  std::vector<std::vector<std::size_t>> found_;
  std::size_t nodes_ = 0;
  bool truncated_ = false;
  bool stop_ = false;
};

bool solution_order( solution const& x, solution const& y )
{
  if ( x.closure_size != y.closure_size )
  {
    return x.closure_size < y.closure_size;
  }
  if ( x.cardinality != y.cardinality )
  {
    return x.cardinality < y.cardinality;
  }
  return x.constraints < y.constraints;
}

} // namespace

solution_set solve( candidate_pool const& pool,
                    trace_set const& effective,
                    model const& initial,
                    criterion mode,
                    closure_engine const& engine,
                    solve_options const& options )
{
  auto const& u = engine.universe();
  auto closed = [&]( model const& s ) { return engine.close_bits( u.to_bits( model_union( s, initial ) ) ); };

  solution_set result;
  if ( effective.empty() )
  {
    result.models.push_back( { model{}, closed( model{} ).count(), 0, 0 } );
    return result;
  }

  /* member of the family per effective negative: pool indices rejecting it */
  std::map<trace, std::vector<std::uint32_t>> rejecting;
  for ( std::uint32_t i = 0; i < pool.constraints.size(); ++i )
  {
    auto const it = pool.coverage.find( pool.constraints[i] );
    if ( it == pool.coverage.end() )
    {
      continue;
    }
    for ( auto const& t : it->second )
    {
      rejecting[t].push_back( i );
    }
  }
  set_family family;
  for ( auto const& t : effective )
  {
    auto it = rejecting.find( t );
    if ( it == rejecting.end() || it->second.empty() )
    {
      throw contract_error( "effective negative trace without a rejecting pool constraint" );
    }
    family.push_back( it->second );
  }
  family = minimize_family( std::move( family ) );

  auto to_model = [&]( std::vector<std::uint32_t> const& picked ) {
    std::vector<ground_constraint> cs;
    for ( auto i : picked )
    {
      cs.push_back( pool.constraints[i] );
    }
    return model( std::move( cs ) );
  };

  std::vector<candidate> kept;
  if ( mode == criterion::specific )
  {
    minimal_basis_search search( pool.compatible, initial, engine, options.max_models, options.node_budget );
    search.run();
    result.truncated = search.truncated();

    std::map<ground_constraint, std::uint32_t> pool_index;
    for ( std::uint32_t i = 0; i < pool.constraints.size(); ++i )
    {
      pool_index.emplace( pool.constraints[i], i );
    }
    for ( auto const& picked : search.found() )
    {
      std::vector<ground_constraint> cs;
      std::vector<std::uint32_t> in_pool;
      for ( auto idx : picked )
      {
        cs.push_back( u.at( idx ) );
        if ( auto it = pool_index.find( cs.back() ); it != pool_index.end() )
        {
          in_pool.push_back( it->second );
        }
      }
      std::sort( in_pool.begin(), in_pool.end() );
      bool const hits = std::all_of( family.begin(), family.end(), [&]( auto const& member ) {
        return std::any_of( member.begin(), member.end(), [&]( auto e ) { return std::binary_search( in_pool.begin(), in_pool.end(), e ); } );
      } );
      if ( hits )
      {
        model s( std::move( cs ) );
        auto bits = closed( s );
        kept.push_back( { std::move( s ), std::move( bits ) } );
      }
    }
  }
  else
  {
    std::vector<candidate> candidates;
    bool exhausted = false;
    enumerate_minimal_hitting_sets(
        family, pool.constraints.size(), options.node_budget,
        [&]( auto const& picked ) {
          auto s = to_model( picked );
          auto bits = closed( s );
          candidates.push_back( { std::move( s ), std::move( bits ) } );
          return true;
        },
        &exhausted );
    result.truncated = exhausted;

    if ( mode == criterion::cardinality )
    {
      auto key = []( candidate const& c ) { return std::make_pair( c.closure.count(), c.constraints.size() ); };
      if ( !candidates.empty() )
      {
        auto const best = key( *std::min_element( candidates.begin(), candidates.end(), [&]( auto const& x, auto const& y ) { return key( x ) < key( y ); } ) );
        for ( auto& c : candidates )
        {
          if ( key( c ) == best )
          {
            kept.push_back( std::move( c ) );
          }
        }
      }
    }
    else
    {
      /* compare distinct closures only; a closure survives when no other one is a proper subset of it */
      std::map<constraint_bits, std::vector<std::size_t>> by_closure;
      for ( std::size_t i = 0; i < candidates.size(); ++i )
      {
        by_closure[candidates[i].closure].push_back( i );
      }
      std::vector<std::pair<std::size_t, constraint_bits const*>> closures;
      for ( auto const& [bits, members] : by_closure )
      {
        closures.emplace_back( bits.count(), &bits );
      }
      std::sort( closures.begin(), closures.end(), []( auto const& x, auto const& y ) { return x.first < y.first; } );

      std::vector<constraint_bits const*> minimal;
      for ( auto const& [count, bits] : closures )
      {
        bool const dominated = std::any_of( minimal.begin(), minimal.end(), [&]( auto const* m ) {
          return m->count() < count && m->is_subset_of( *bits );
        } );
        if ( !dominated )
        {
          minimal.push_back( bits );
          for ( auto i : by_closure[*bits] )
          {
            kept.push_back( std::move( candidates[i] ) );
          }
        }
      }
    }
  }

  for ( auto& c : kept )
  {
    solution s;
    s.closure_size = c.closure.count();
    s.cardinality = c.constraints.size();
    s.violated_negatives = static_cast<std::size_t>( std::count_if( effective.begin(), effective.end(), [&]( auto const& t ) {
      return !model_accepts( c.constraints, t ) || !model_accepts( initial, t );
    } ) );
    s.constraints = std::move( c.constraints );
    result.models.push_back( std::move( s ) );
  }
  std::sort( result.models.begin(), result.models.end(), solution_order );
  if ( result.models.size() > options.max_models )
  {
    result.models.resize( options.max_models );
    result.truncated = true;
  }
  return result;
}

discovery_report discover( labeled_log const& log,
                           template_catalog const& catalog,
                           model const& initial,
                           rule_set const& rules,
                           discovery_options const& options )
{
  if ( log.alphabet.empty() )
  {
    throw error( "cannot discover over an empty alphabet" );
  }
  grounding_options const grounding{ options.allow_reflexive };
  constraint_universe const universe( log.alphabet.size(), grounding );
  for ( auto const& c : initial )
  {
    if ( !universe.contains( c ) )
    {
      throw error( "initial model constraint outside the catalog groundings" );
    }
  }

  auto const start = std::chrono::steady_clock::now();
  discovery_report report;
  report.alphabet = log.alphabet;
  report.negatives_total = log.negatives.size();

  trace_set positives;
  for ( auto const& t : log.positives )
  {
    if ( model_accepts( initial, t ) )
    {
      positives.insert( t );
    }
  }
  report.positives_used = positives.size();
  report.positives_filtered = log.positives.size() - positives.size();
  if ( report.positives_filtered > 0 )
  {
    if ( options.strict_initial_model )
    {
      throw contract_error( std::to_string( report.positives_filtered ) + " positive trace(s) violate the initial model" );
    }
    report.warnings.push_back( "dropped " + std::to_string( report.positives_filtered ) + " positive trace(s) rejected by the initial model" );
  }

  auto phase = std::chrono::steady_clock::now();
  auto const grounded = ground( catalog, log.alphabet, grounding );
  auto const compatible = compatibles( grounded, positives, options.threads );
  report.timings.compatibles_ms = elapsed_ms( phase );

  phase = std::chrono::steady_clock::now();
  auto const smap = sheriffs( compatible, log.negatives, options.threads );
  auto const split = effective_negatives( smap, initial, log.negatives );
  report.empty_sheriffs = split.empty_sheriffs;
  report.rejected_by_initial = split.rejected_by_initial;
  report.timings.sheriffs_ms = elapsed_ms( phase );

  phase = std::chrono::steady_clock::now();
  closure_engine const engine( rules, log.alphabet.size(), grounding );
  auto const pool = make_candidate_pool( smap, split.effective, compatible );
  report.solutions = solve( pool, split.effective, initial, options.mode, engine, { options.max_models, options.node_budget } );
  for ( auto& s : report.solutions.models )
  {
    auto const full = model_union( s.constraints, initial );
    s.violated_negatives = static_cast<std::size_t>( std::count_if( log.negatives.begin(), log.negatives.end(), [&]( auto const& t ) {
      return !model_accepts( full, t );
    } ) );
  }
  report.timings.optimisation_ms = elapsed_ms( phase );
  report.timings.total_ms = elapsed_ms( start );

  if ( !report.empty_sheriffs.empty() )
  {
    report.warnings.push_back( std::to_string( report.empty_sheriffs.size() ) + " negative trace(s) cannot be rejected by any compatible constraint" );
  }
  return report;
}

} // namespace declsep
