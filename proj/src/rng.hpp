#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace declsep::detail
{

/* the standard distributions are implementation-defined, so draws are mapped by hand */
inline std::uint64_t uniform_below( std::mt19937_64& rng, std::uint64_t n )
{
  auto const limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do
  {
    x = rng();
  } while ( x >= limit );
  return x % n;
}

inline double uniform_unit( std::mt19937_64& rng )
{
  return static_cast<double>( rng() >> 11 ) * 0x1.0p-53;
}

template<typename T>
void shuffle( std::vector<T>& items, std::mt19937_64& rng )
{
  for ( std::size_t i = items.size(); i > 1; --i )
  {
    std::swap( items[i - 1], items[uniform_below( rng, i )] );
  }
}

} // namespace declsep::detail
