#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace declsep
{

/* a set family over elements [0, n); each member sorted and duplicate-free */
using set_family = std::vector<std::vector<std::uint32_t>>;

/*! Remove duplicate members and members that strictly contain another one.
 *  The minimal hitting sets of the result equal those of the input. */
set_family minimize_family( set_family family );

struct hitting_set_result
{
  std::vector<std::vector<std::uint32_t>> sets;
  std::size_t nodes = 0;
  bool exhausted_budget = false;
};

/*! \brief Enumerate every inclusion-minimal hitting set.
 *
 * Depth-first search in the style of MMCS: branch on the elements of an
 * uncovered member with the fewest candidates and keep only extensions in
 * which every chosen element still has a critical member. Each minimal
 * hitting set is produced exactly once, sorted ascending. `node_budget`
 * bounds the number of search nodes; an empty family yields the empty set.
 * A family with an empty member has no hitting set.
 */
hitting_set_result minimal_hitting_sets( set_family const& family, std::size_t num_elements, std::size_t node_budget = 1'000'000 );

/*! Streaming variant; return false from `emit` to stop early. */
std::size_t enumerate_minimal_hitting_sets( set_family const& family,
                                            std::size_t num_elements,
                                            std::size_t node_budget,
                                            std::function<bool( std::vector<std::uint32_t> const& )> const& emit,
                                            bool* exhausted_budget = nullptr );

} // namespace declsep
