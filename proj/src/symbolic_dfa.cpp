#include <declsep/symbolic_dfa.hpp>

#include <declsep/log.hpp>

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace declsep
{

namespace
{

using class_mask = std::uint8_t;

constexpr class_mask mask_of( symbol_class c ) { return class_mask( 1u << static_cast<unsigned>( c ) ); }
constexpr class_mask all_classes = 0b1111;
constexpr class_mask first_mask = mask_of( symbol_class::first ) | mask_of( symbol_class::both );
constexpr class_mask second_mask = mask_of( symbol_class::second ) | mask_of( symbol_class::both );

/* Thompson NFA; every fragment has one entry and one exit state */
struct nfa
{
  struct state
  {
    std::vector<std::size_t> epsilon;
    class_mask label = 0;
    std::size_t target = 0;
  };
  std::vector<state> states;

  std::size_t add()
  {
    states.emplace_back();
    return states.size() - 1;
  }
};

struct fragment
{
  std::size_t entry;
  std::size_t exit;
};

class regex_parser
{
public:
  regex_parser( std::string_view pattern, nfa& automaton )
      : pattern_( pattern ), nfa_( automaton )
  {
  }

  fragment parse()
  {
    auto f = alternation();
    skip_blanks();
    if ( pos_ != pattern_.size() )
    {
      fail( "unexpected character" );
    }
    return f;
  }

private:
  [[noreturn]] void fail( std::string const& what ) const
  {
    throw parse_error( "template regex '" + std::string( pattern_ ) + "': " + what, 1, pos_ + 1 );
  }

  void skip_blanks()
  {
    while ( pos_ < pattern_.size() && pattern_[pos_] == ' ' )
    {
      ++pos_;
    }
  }

  char peek()
  {
    skip_blanks();
    return pos_ < pattern_.size() ? pattern_[pos_] : '\0';
  }

  fragment epsilon()
  {
    auto const s = nfa_.add();
    return { s, s };
  }

  fragment alternation()
  {
    auto lhs = concatenation();
    while ( peek() == '|' )
    {
      ++pos_;
      auto rhs = concatenation();
      auto const entry = nfa_.add();
      auto const exit = nfa_.add();
      nfa_.states[entry].epsilon = { lhs.entry, rhs.entry };
      nfa_.states[lhs.exit].epsilon.push_back( exit );
      nfa_.states[rhs.exit].epsilon.push_back( exit );
      lhs = { entry, exit };
    }
    return lhs;
  }

  fragment concatenation()
  {
    auto result = epsilon();
    while ( true )
    {
      auto const c = peek();
      if ( c == '\0' || c == '|' || c == ')' )
      {
        return result;
      }
      auto next = repetition();
      nfa_.states[result.exit].epsilon.push_back( next.entry );
      result.exit = next.exit;
    }
  }

  fragment repetition()
  {
    auto f = atom();
    while ( true )
    {
      auto const c = peek();
      if ( c != '*' && c != '+' && c != '?' )
      {
        return f;
      }
      ++pos_;
      auto const entry = nfa_.add();
      auto const exit = nfa_.add();
      nfa_.states[entry].epsilon.push_back( f.entry );
      nfa_.states[f.exit].epsilon.push_back( exit );
      if ( c != '+' )
      {
        nfa_.states[entry].epsilon.push_back( exit );
      }
      if ( c != '?' )
      {
        nfa_.states[f.exit].epsilon.push_back( f.entry );
      }
      f = { entry, exit };
    }
  }

  fragment symbol( class_mask label )
  {
    auto const from = nfa_.add();
    auto const to = nfa_.add();
    nfa_.states[from].label = label;
    nfa_.states[from].target = to;
    return { from, to };
  }

  class_mask parameter_mask( char c )
  {
    switch ( c )
    {
    case 'a': return first_mask;
    case 'b': return second_mask;
    default: fail( std::string( "unknown symbol '" ) + c + "'" );
    }
  }

  fragment atom()
  {
    auto const c = peek();
    if ( c == '(' )
    {
      ++pos_;
      auto f = alternation();
      if ( peek() != ')' )
      {
        fail( "missing ')'" );
      }
      ++pos_;
      return f;
    }
    if ( c == '.' )
    {
      ++pos_;
      return symbol( all_classes );
    }
    if ( c == '[' )
    {
      ++pos_;
      bool negated = false;
      if ( peek() == '^' )
      {
        negated = true;
        ++pos_;
      }
      class_mask m = 0;
      while ( peek() != ']' )
      {
        if ( pos_ >= pattern_.size() )
        {
          fail( "missing ']'" );
        }
        m |= parameter_mask( pattern_[pos_++] );
      }
      ++pos_;
      return symbol( negated ? class_mask( all_classes & ~m ) : m );
    }
    if ( c == 'a' || c == 'b' )
    {
      ++pos_;
      return symbol( parameter_mask( c ) );
    }
    fail( c == '\0' ? "unexpected end of pattern" : std::string( "unexpected '" ) + c + "'" );
  }

  std::string_view pattern_;
  nfa& nfa_;
  std::size_t pos_ = 0;
};

using state_set = std::vector<std::size_t>;

state_set epsilon_closure( nfa const& automaton, state_set seed )
{
  std::vector<bool> seen( automaton.states.size(), false );
  std::vector<std::size_t> stack;
  for ( auto s : seed )
  {
    if ( !seen[s] )
    {
      seen[s] = true;
      stack.push_back( s );
    }
  }
  while ( !stack.empty() )
  {
    auto const s = stack.back();
    stack.pop_back();
    for ( auto t : automaton.states[s].epsilon )
    {
      if ( !seen[t] )
      {
        seen[t] = true;
        stack.push_back( t );
      }
    }
  }
  state_set result;
  for ( std::size_t s = 0; s < seen.size(); ++s )
  {
    if ( seen[s] )
    {
      result.push_back( s );
    }
  }
  return result;
}

/* subset construction; includes the empty (dead) set so the result is complete */
symbolic_dfa determinize( nfa const& automaton, fragment f )
{
  std::map<state_set, std::size_t> ids;
  std::vector<state_set> sets;
  symbolic_dfa dfa;

  auto intern = [&]( state_set s ) {
    auto [it, fresh] = ids.emplace( s, sets.size() );
    if ( fresh )
    {
      sets.push_back( std::move( s ) );
      dfa.next.emplace_back();
      dfa.accepting.push_back( false );
    }
    return it->second;
  };

  intern( epsilon_closure( automaton, { f.entry } ) );
  for ( std::size_t i = 0; i < sets.size(); ++i )
  {
    dfa.accepting[i] = std::binary_search( sets[i].begin(), sets[i].end(), f.exit );
    for ( std::size_t c = 0; c < num_symbol_classes; ++c )
    {
      state_set moved;
      for ( auto s : sets[i] )
      {
        auto const& st = automaton.states[s];
        if ( st.label & ( 1u << c ) )
        {
          moved.push_back( st.target );
        }
      }
      auto const target = intern( epsilon_closure( automaton, std::move( moved ) ) );
      if ( target > 255 )
      {
        throw error( "template automaton too large" );
      }
      dfa.next[i][c] = static_cast<std::uint8_t>( target );
    }
  }
  return dfa;
}

/* Moore partition refinement, then renumber in BFS order from the initial state */
symbolic_dfa minimize( symbolic_dfa const& dfa )
{
  auto const n = dfa.num_states();
  std::vector<std::size_t> block( n );
  for ( std::size_t s = 0; s < n; ++s )
  {
    block[s] = dfa.accepting[s] ? 1 : 0;
  }

  std::size_t num_blocks = 0;
  while ( true )
  {
    std::map<std::vector<std::size_t>, std::size_t> signature_ids;
    std::vector<std::size_t> refined( n );
    for ( std::size_t s = 0; s < n; ++s )
    {
      std::vector<std::size_t> signature{ block[s] };
      for ( auto t : dfa.next[s] )
      {
        signature.push_back( block[t] );
      }
      refined[s] = signature_ids.emplace( std::move( signature ), signature_ids.size() ).first->second;
    }
    auto const count = signature_ids.size();
    block = std::move( refined );
    if ( count == num_blocks )
    {
      break;
    }
    num_blocks = count;
  }

  std::vector<std::size_t> order( num_blocks, SIZE_MAX );
  std::vector<std::size_t> representative( num_blocks, SIZE_MAX );
  for ( std::size_t s = 0; s < n; ++s )
  {
    if ( representative[block[s]] == SIZE_MAX )
    {
      representative[block[s]] = s;
    }
  }

  symbolic_dfa result;
  std::queue<std::size_t> queue;
  order[block[0]] = 0;
  queue.push( block[0] );
  std::vector<std::size_t> visit{ block[0] };
  while ( !queue.empty() )
  {
    auto const b = queue.front();
    queue.pop();
    for ( auto t : dfa.next[representative[b]] )
    {
      if ( order[block[t]] == SIZE_MAX )
      {
        order[block[t]] = visit.size();
        visit.push_back( block[t] );
        queue.push( block[t] );
      }
    }
  }

  result.next.resize( visit.size() );
  result.accepting.resize( visit.size() );
  for ( std::size_t i = 0; i < visit.size(); ++i )
  {
    auto const rep = representative[visit[i]];
    result.accepting[i] = dfa.accepting[rep];
    for ( std::size_t c = 0; c < num_symbol_classes; ++c )
    {
      result.next[i][c] = static_cast<std::uint8_t>( order[block[dfa.next[rep][c]]] );
    }
  }
  return result;
}

} // namespace

symbolic_dfa symbolic_dfa::complement() const
{
  symbolic_dfa result = *this;
  result.accepting.flip();
  return result;
}

symbolic_dfa compile_symbolic_regex( std::string_view pattern )
{
  nfa automaton;
  regex_parser parser( pattern, automaton );
  auto const f = parser.parse();
  return minimize( determinize( automaton, f ) );
}

} // namespace declsep
