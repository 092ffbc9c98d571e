#include <declsep/hitting_sets.hpp>

#include <algorithm>
#include <stdexcept>

namespace declsep
{

set_family minimize_family( set_family family )
{
  for ( auto& member : family )
  {
    std::sort( member.begin(), member.end() );
    member.erase( std::unique( member.begin(), member.end() ), member.end() );
  }
  std::sort( family.begin(), family.end(), []( auto const& x, auto const& y ) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  } );
  family.erase( std::unique( family.begin(), family.end() ), family.end() );

  set_family kept;
  for ( auto& member : family )
  {
    bool const dominated = std::any_of( kept.begin(), kept.end(), [&]( auto const& smaller ) {
      return std::includes( member.begin(), member.end(), smaller.begin(), smaller.end() );
    } );
    if ( !dominated )
    {
      kept.push_back( std::move( member ) );
    }
  }
  return kept;
}

namespace
{

class mmcs
{
public:
  mmcs( set_family const& family, std::size_t num_elements, std::size_t budget,
        std::function<bool( std::vector<std::uint32_t> const& )> const& emit )
      : family_( family ),
        occurrences_( num_elements ),
        candidate_( num_elements, true ),
        critical_( num_elements, 0 ),
        hits_( family.size(), 0 ),
        uncovered_( family.size() ),
        budget_( budget ),
        emit_( emit )
  {
    for ( std::uint32_t j = 0; j < family_.size(); ++j )
    {
      for ( auto e : family_[j] )
      {
        if ( e >= num_elements )
        {
          throw std::out_of_range( "set family element outside [0, num_elements)" );
        }
        occurrences_[e].push_back( j );
      }
    }
  }

  void run() { search(); }

  std::size_t nodes() const noexcept { return nodes_; }
  bool exhausted() const noexcept { return exhausted_; }

private:
  /* returns false when the search must stop */
  bool search()
  {
    if ( ++nodes_ > budget_ )
    {
      exhausted_ = true;
      return false;
    }
    if ( uncovered_ == 0 )
    {
      auto sorted = chosen_;
      std::sort( sorted.begin(), sorted.end() );
      return emit_( sorted );
    }

    std::size_t best = family_.size();
    std::size_t best_count = SIZE_MAX;
    for ( std::size_t j = 0; j < family_.size(); ++j )
    {
      if ( hits_[j] != 0 )
      {
        continue;
      }
      auto const count = static_cast<std::size_t>( std::count_if( family_[j].begin(), family_[j].end(), [&]( auto e ) { return candidate_[e]; } ) );
      if ( count < best_count )
      {
        best = j;
        best_count = count;
      }
    }

    std::vector<std::uint32_t> branch;
    for ( auto e : family_[best] )
    {
      if ( candidate_[e] )
      {
        branch.push_back( e );
        candidate_[e] = false;
      }
    }

    bool keep_going = true;
    for ( auto e : branch )
    {
      if ( keep_going )
      {
        add( e );
        bool const minimal = std::all_of( chosen_.begin(), chosen_.end(), [&]( auto f ) { return critical_[f] > 0; } );
        if ( minimal )
        {
          chosen_.push_back( e );
          keep_going = search();
          chosen_.pop_back();
        }
        remove( e );
      }
      candidate_[e] = true;
    }
    return keep_going;
  }

  std::uint32_t sole_hitter( std::uint32_t member ) const
  {
    auto const& f = family_[member];
    for ( auto s : chosen_ )
    {
      if ( std::binary_search( f.begin(), f.end(), s ) )
      {
        return s;
      }
    }
    throw std::logic_error( "hitting set bookkeeping out of sync" );
  }

  void add( std::uint32_t e )
  {
    for ( auto j : occurrences_[e] )
    {
      if ( hits_[j] == 0 )
      {
        ++critical_[e];
        --uncovered_;
      }
      else if ( hits_[j] == 1 )
      {
        --critical_[sole_hitter( j )];
      }
      ++hits_[j];
    }
  }

  void remove( std::uint32_t e )
  {
    for ( auto j : occurrences_[e] )
    {
      --hits_[j];
      if ( hits_[j] == 0 )
      {
        --critical_[e];
        ++uncovered_;
      }
      else if ( hits_[j] == 1 )
      {
        ++critical_[sole_hitter( j )];
      }
    }
  }

  set_family const& family_;
  std::vector<std::vector<std::uint32_t>> occurrences_;
  std::vector<bool> candidate_;
  std::vector<std::size_t> critical_;
  std::vector<std::size_t> hits_;
  std::size_t uncovered_;
  std::vector<std::uint32_t> chosen_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
  bool exhausted_ = false;
  std::function<bool( std::vector<std::uint32_t> const& )> const& emit_;
};

} // namespace

std::size_t enumerate_minimal_hitting_sets( set_family const& family,
                                            std::size_t num_elements,
                                            std::size_t node_budget,
                                            std::function<bool( std::vector<std::uint32_t> const& )> const& emit,
                                            bool* exhausted_budget )
{
  if ( exhausted_budget )
  {
    *exhausted_budget = false;
  }
  if ( std::any_of( family.begin(), family.end(), []( auto const& m ) { return m.empty(); } ) )
  {
    return 0;
  }

  mmcs search( family, num_elements, node_budget, emit );
  search.run();
  if ( exhausted_budget )
  {
    *exhausted_budget = search.exhausted();
  }
  return search.nodes();
}

hitting_set_result minimal_hitting_sets( set_family const& family, std::size_t num_elements, std::size_t node_budget )
{
  hitting_set_result result;
  result.nodes = enumerate_minimal_hitting_sets(
      family, num_elements, node_budget,
      [&]( auto const& s ) {
        result.sets.push_back( s );
        return true;
      },
      &result.exhausted_budget );
  std::sort( result.sets.begin(), result.sets.end() );
  return result;
}

} // namespace declsep
