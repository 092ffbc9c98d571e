#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace declsep
{

/*! \brief Symbol classes seen by a template automaton.
 *
 * An event is classified relative to the grounded parameters: it matches the
 * first parameter, the second, both (only for reflexive groundings) or none.
 */
enum class symbol_class : std::uint8_t
{
  other = 0,
  first = 1,
  second = 2,
  both = 3
};

inline constexpr std::size_t num_symbol_classes = 4;

/*! \brief Minimal complete DFA over the four symbol classes. State 0 is initial. */
struct symbolic_dfa
{
  std::vector<std::array<std::uint8_t, num_symbol_classes>> next;
  std::vector<bool> accepting;

  std::size_t num_states() const noexcept { return next.size(); }
  symbolic_dfa complement() const;
};

/*! \brief Compile a template regular expression.
 *
 * Syntax: `a` and `b` name the first and second parameter, `.` any event,
 * `[ab]` / `[^ab]` classes, `(...)`, `|`, `*`, `+`, `?`. Blanks are ignored.
 * The result is minimized with states numbered in breadth-first order.
 */
symbolic_dfa compile_symbolic_regex( std::string_view pattern );

} // namespace declsep
