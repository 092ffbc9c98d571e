#include <declsep/hitting_sets.hpp>

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace declsep;

namespace
{

/* inclusion-minimal hitting sets by scanning every subset */
std::vector<std::vector<std::uint32_t>> brute_force( set_family const& family, std::size_t n )
{
  auto hits = [&]( std::uint32_t mask ) {
    return std::all_of( family.begin(), family.end(), [&]( auto const& m ) {
      return std::any_of( m.begin(), m.end(), [&]( auto e ) { return ( mask >> e ) & 1u; } );
    } );
  };
  std::vector<std::vector<std::uint32_t>> result;
  for ( std::uint32_t mask = 0; mask < ( 1u << n ); ++mask )
  {
    if ( !hits( mask ) )
    {
      continue;
    }
    bool minimal = true;
    for ( std::uint32_t e = 0; e < n && minimal; ++e )
    {
      if ( ( ( mask >> e ) & 1u ) && hits( mask & ~( 1u << e ) ) )
      {
        minimal = false;
      }
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
      result.push_back( set );
    }
  }
  std::sort( result.begin(), result.end() );
  return result;
}

set_family random_family( std::mt19937_64& rng, std::size_t n, std::size_t members )
{
  set_family family;
  for ( std::size_t j = 0; j < members; ++j )
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
  return family;
}

} // namespace

TEST_SUITE( "hitting_sets" )
{
  TEST_CASE( "small worked family" )
  {
    auto const r = minimal_hitting_sets( { { 0, 1 }, { 2 }, { 1 } }, 3 );
    CHECK( r.sets == std::vector<std::vector<std::uint32_t>>{ { 1, 2 } } );
    CHECK_FALSE( r.exhausted_budget );
  }

  TEST_CASE( "degenerate families" )
  {
    CHECK( minimal_hitting_sets( {}, 4 ).sets == std::vector<std::vector<std::uint32_t>>{ {} } );
    CHECK( minimal_hitting_sets( { { 1 }, {} }, 4 ).sets.empty() );
    CHECK_THROWS( minimal_hitting_sets( { { 5 } }, 4 ) );
  }

  TEST_CASE( "family minimisation keeps the hitting sets" )
  {
    set_family const family{ { 2, 1 }, { 1, 2 }, { 1, 2, 3 }, { 0 } };
    auto const reduced = minimize_family( family );
    CHECK( reduced == set_family{ { 0 }, { 1, 2 } } );
    CHECK( minimal_hitting_sets( reduced, 4 ).sets == brute_force( family, 4 ) );
  }

  TEST_CASE( "agrees with brute force on random families" )
  {
    std::mt19937_64 rng( 17 );
    for ( int i = 0; i < 150; ++i )
    {
      auto const n = 1 + rng() % 12;
      auto const family = random_family( rng, n, 1 + rng() % 8 );
      auto const r = minimal_hitting_sets( family, n );
      CHECK_FALSE( r.exhausted_budget );
      CHECK( r.sets == brute_force( family, n ) );
    }
  }

  TEST_CASE( "budget and early stop" )
  {
    set_family family;
    for ( std::uint32_t j = 0; j < 10; ++j )
    {
      family.push_back( { 2 * j, 2 * j + 1 } );
    }
    auto const capped = minimal_hitting_sets( family, 20, 50 );
    CHECK( capped.exhausted_budget );
    CHECK( capped.sets.size() < 1024 );
    CHECK( minimal_hitting_sets( family, 20 ).sets.size() == 1024 );

    std::size_t seen = 0;
    bool exhausted = true;
    enumerate_minimal_hitting_sets(
        family, 20, 1'000'000,
        [&]( auto const& ) {
          ++seen;
          return seen < 3;
        },
        &exhausted );
    CHECK( seen == 3 );
    CHECK_FALSE( exhausted );
  }
}
