/*!
  \file pe_simulator.hpp
  \brief Phase-synchronous simulation of parallel enumeration sort on a 1D crosspoint array

  The simulated machine runs seven synchronous phases:

    0 clear           every class zeroes its row of T
    1 load            A[i] is broadcast to every replicate of class i
    2 left_exchange   on each crosspoint whose smaller-class PE is on the right, the
                      left PE sends its key to that comparer
    3 left_reply      comparers decide, write T if they win and signal their partner
    4 right_exchange  same for crosspoints whose smaller-class PE is on the left
    5 right_reply
    6 rank            R[i] = sum_k T[i][k]

  Every sub-phase reads pre-phase state and commits its writes at the end.
  A reply signal is latched together with the write it triggers, so the
  receiving PE's T update lands in the same reply sub-phase.
*/

#pragma once

#include "array_builder.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace xbar
{

template<std::integral K>
std::size_t key_bit_width( K v )
{
  using U = std::make_unsigned_t<K>;
  U const u = v < 0 ? static_cast<U>( U( 0 ) - static_cast<U>( v ) ) : static_cast<U>( v );
  return static_cast<std::size_t>( std::bit_width( u ) );
}

inline std::size_t key_bit_width( boost::multiprecision::cpp_int const& v )
{
  if ( v == 0 )
  {
    return 0;
  }
  return static_cast<std::size_t>( boost::multiprecision::msb( boost::multiprecision::abs( v ) ) ) + 1;
}

template<class Key>
concept sort_key = std::totally_ordered<Key> && std::copyable<Key>;

/*! \brief n x n 0/1 matrix written by the compare phase. */
class comparison_matrix
{
public:
  comparison_matrix() = default;
  explicit comparison_matrix( std::size_t n )
      : n_( n ), bits_( n * n, 0 ) {}

  static comparison_matrix from_rows( std::vector<std::vector<int>> const& rows )
  {
    comparison_matrix t( rows.size() );
    for ( std::size_t i = 0; i < rows.size(); ++i )
    {
      if ( rows[i].size() != rows.size() )
      {
        throw std::invalid_argument( "comparison_matrix: row " + std::to_string( i ) + " has wrong length" );
      }
      for ( std::size_t k = 0; k < rows.size(); ++k )
      {
        t.set( i, k, rows[i][k] != 0 );
      }
    }
    return t;
  }

  std::size_t size() const noexcept { return n_; }
  bool at( std::size_t row, std::size_t col ) const { return bits_[row * n_ + col] != 0; }
  void set( std::size_t row, std::size_t col, bool v ) { bits_[row * n_ + col] = v ? 1 : 0; }
  std::span<const std::uint8_t> row( std::size_t i ) const { return { bits_.data() + i * n_, n_ }; }

  std::size_t row_sum( std::size_t i ) const
  {
    auto const r = row( i );
    return static_cast<std::size_t>( std::count( r.begin(), r.end(), std::uint8_t{ 1 } ) );
  }

  std::vector<std::vector<int>> rows() const
  {
    std::vector<std::vector<int>> out( n_, std::vector<int>( n_ ) );
    for ( std::size_t i = 0; i < n_; ++i )
    {
      for ( std::size_t k = 0; k < n_; ++k )
      {
        out[i][k] = at( i, k ) ? 1 : 0;
      }
    }
    return out;
  }

  bool operator==( comparison_matrix const& ) const = default;

private:
  std::size_t n_{ 0 };
  std::vector<std::uint8_t> bits_;
};

using rank_vector = std::vector<std::size_t>;

enum class pe_action
{
  clear_row,
  load_value,
  send_value,
  receive_value,
  compare,
  send_signal,
  receive_signal,
  write_t,
  store_rank
};

inline char const* to_string( pe_action a )
{
  switch ( a )
  {
  case pe_action::clear_row: return "clear_row";
  case pe_action::load_value: return "load_value";
  case pe_action::send_value: return "send_value";
  case pe_action::receive_value: return "receive_value";
  case pe_action::compare: return "compare";
  case pe_action::send_signal: return "send_signal";
  case pe_action::receive_signal: return "receive_signal";
  case pe_action::write_t: return "write_t";
  case pe_action::store_rank: return "store_rank";
  }
  return "?";
}

enum class port
{
  none,
  left,
  right
};

inline char const* to_string( port p )
{
  switch ( p )
  {
  case port::none: return "";
  case port::left: return "left";
  case port::right: return "right";
  }
  return "?";
}

/*! \brief One PE action.  Unused payload fields stay empty.
 *
 * bit carries the signal for send/receive_signal, the comparer's verdict
 * (1 = it holds the larger key) for compare, and the written value for write_t.
 */
template<class Key>
struct trace_event
{
  std::size_t slot{ 0 };
  pe_action action{ pe_action::clear_row };
  port dir{ port::none };
  std::optional<std::size_t> peer;
  std::optional<Key> value;
  std::optional<int> bit;
  std::optional<std::size_t> row;
  std::optional<std::size_t> col;
  std::optional<std::size_t> rank;
};

template<class Key>
struct trace_phase
{
  std::string name;
  std::vector<trace_event<Key>> events;
};

template<class Key>
struct sort_trace
{
  std::vector<trace_phase<Key>> phases;
  /*! widest key in bits; every comparison is still charged one phase */
  std::size_t key_bits{ 0 };
};

template<class Key>
struct simulator_state
{
  layout array;
  std::vector<Key> slot_values;
  comparison_matrix t;
  sort_trace<Key> trace;
};

namespace detail
{

inline std::vector<std::size_t> first_replicates( layout const& l )
{
  std::vector<std::size_t> first( l.n, l.slots.size() );
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    if ( l.slots[k] < l.n && first[l.slots[k]] == l.slots.size() )
    {
      first[l.slots[k]] = k;
    }
  }
  return first;
}

} // namespace detail

/*! \brief Clears T and broadcasts A[i] to every replicate of class i. */
template<sort_key Key>
simulator_state<Key> load_phase( layout const& l, std::span<const Key> a )
{
  if ( a.size() != l.n )
  {
    throw std::invalid_argument( "load_phase: input has " + std::to_string( a.size() ) + " values, layout has " + std::to_string( l.n ) + " classes" );
  }
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    if ( l.slots[k] >= l.n )
    {
      throw std::invalid_argument( "load_phase: slot " + std::to_string( k ) + " holds an out-of-range class" );
    }
  }

  simulator_state<Key> s;
  s.array = l;
  s.t = comparison_matrix( l.n );

  auto const first = detail::first_replicates( l );
  trace_phase<Key> clear{ "clear", {} };
  for ( std::size_t i = 0; i < l.n; ++i )
  {
    if ( first[i] < l.slots.size() )
    {
      trace_event<Key> e;
      e.slot = first[i];
      e.action = pe_action::clear_row;
      e.row = i;
      clear.events.push_back( std::move( e ) );
    }
  }

  trace_phase<Key> load{ "load", {} };
  s.slot_values.reserve( l.slots.size() );
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    s.slot_values.push_back( a[l.slots[k]] );
    trace_event<Key> e;
    e.slot = k;
    e.action = pe_action::load_value;
    e.value = a[l.slots[k]];
    load.events.push_back( std::move( e ) );
  }
  for ( auto const& v : a )
  {
    if constexpr ( requires { key_bit_width( v ); } )
    {
      s.trace.key_bits = std::max( s.trace.key_bits, key_bit_width( v ) );
    }
    else
    {
      s.trace.key_bits = sizeof( Key ) * 8;
    }
  }

  s.trace.phases.push_back( std::move( clear ) );
  s.trace.phases.push_back( std::move( load ) );
  return s;
}

/*! \brief Runs the four compare sub-phases and returns the final T with the extended trace.
 *
 * Each crosspoint is handled exactly once: the PE with the larger class id
 * sends its key to the smaller-class PE, which compares, writes
 * T[i][neighbor] = 1 and replies 0 if it holds the larger key (ties go to the
 * larger class id), and otherwise replies 1 so the neighbor writes
 * T[neighbor][i] = 1.
 */
template<sort_key Key>
std::pair<comparison_matrix, sort_trace<Key>> compare_phase( simulator_state<Key> const& state )
{
  auto const& slots = state.array.slots;
  auto t = state.t;
  auto trace = state.trace;

  struct pending
  {
    std::size_t comparer;
    std::size_t sender;
  };

  for ( auto const side : { port::left, port::right } )
  {
    auto const side_name = std::string( side == port::left ? "left" : "right" );
    auto const away = side == port::left ? port::right : port::left;

    trace_phase<Key> exchange{ side_name + "_exchange", {} };
    std::vector<pending> work;
    for ( std::size_t k = 0; k + 1 < slots.size(); ++k )
    {
      auto const a = slots[k];
      auto const b = slots[k + 1];
      if ( a == b )
      {
        continue;
      }
      // comparer looks towards `side` for its partner
      if ( side == port::left && b < a )
      {
        work.push_back( { k + 1, k } );
      }
      else if ( side == port::right && a < b )
      {
        work.push_back( { k, k + 1 } );
      }
    }
    for ( auto const& w : work )
    {
      trace_event<Key> send;
      send.slot = w.sender;
      send.action = pe_action::send_value;
      send.dir = away;
      send.peer = w.comparer;
      send.value = state.slot_values[w.sender];
      exchange.events.push_back( std::move( send ) );

      trace_event<Key> recv;
      recv.slot = w.comparer;
      recv.action = pe_action::receive_value;
      recv.dir = side;
      recv.peer = w.sender;
      recv.value = state.slot_values[w.sender];
      exchange.events.push_back( std::move( recv ) );
    }

    trace_phase<Key> reply{ side_name + "_reply", {} };
    std::vector<std::pair<std::size_t, std::size_t>> staged_writes;
    std::map<std::size_t, int> signals_received;
    for ( auto const& w : work )
    {
      auto const i = static_cast<std::size_t>( slots[w.comparer] );
      auto const nb = static_cast<std::size_t>( slots[w.sender] );
      auto const& mine = state.slot_values[w.comparer];
      auto const& theirs = state.slot_values[w.sender];
      bool const wins = ( theirs < mine ) || ( theirs == mine && nb < i );

      trace_event<Key> cmp;
      cmp.slot = w.comparer;
      cmp.action = pe_action::compare;
      cmp.dir = side;
      cmp.peer = w.sender;
      cmp.bit = wins ? 1 : 0;
      reply.events.push_back( std::move( cmp ) );

      if ( wins )
      {
        trace_event<Key> wr;
        wr.slot = w.comparer;
        wr.action = pe_action::write_t;
        wr.row = i;
        wr.col = nb;
        wr.bit = 1;
        reply.events.push_back( std::move( wr ) );
        staged_writes.emplace_back( i, nb );
      }

      trace_event<Key> sig;
      sig.slot = w.comparer;
      sig.action = pe_action::send_signal;
      sig.dir = side;
      sig.peer = w.sender;
      sig.bit = wins ? 0 : 1;
      reply.events.push_back( std::move( sig ) );

      if ( ++signals_received[w.sender] > 1 )
      {
        throw std::logic_error( "compare_phase: slot " + std::to_string( w.sender ) + " received two replies in one sub-phase" );
      }
      trace_event<Key> got;
      got.slot = w.sender;
      got.action = pe_action::receive_signal;
      got.dir = away;
      got.peer = w.comparer;
      got.bit = wins ? 0 : 1;
      reply.events.push_back( std::move( got ) );

      if ( !wins )
      {
        trace_event<Key> wr;
        wr.slot = w.sender;
        wr.action = pe_action::write_t;
        wr.row = nb;
        wr.col = i;
        wr.bit = 1;
        reply.events.push_back( std::move( wr ) );
        staged_writes.emplace_back( nb, i );
      }
    }
    for ( auto const& [row, col] : staged_writes )
    {
      t.set( row, col, true );
    }

    trace.phases.push_back( std::move( exchange ) );
    trace.phases.push_back( std::move( reply ) );
  }
  return { std::move( t ), std::move( trace ) };
}

/*! \brief R[i] = number of ones in row i of T. */
inline rank_vector rank_phase( comparison_matrix const& t )
{
  rank_vector r( t.size() );
  for ( std::size_t i = 0; i < t.size(); ++i )
  {
    r[i] = t.row_sum( i );
  }
  return r;
}

template<class Key>
struct sort_result
{
  comparison_matrix t;
  rank_vector ranks;
  sort_trace<Key> trace;
};

/*! \brief Full run: load, compare and rank.
 *
 * The layout must bring every pair of classes together at least once,
 * otherwise some comparisons never happen and the ranks are meaningless.
 */
template<sort_key Key>
sort_result<Key> sort( layout const& l, std::span<const Key> a )
{
  if ( !covers_all_pairs( l ) )
  {
    throw std::invalid_argument( "sort: layout does not make every pair of classes adjacent" );
  }
  auto state = load_phase( l, a );
  auto [t, trace] = compare_phase( state );
  auto ranks = rank_phase( t );

  auto const first = detail::first_replicates( l );
  trace_phase<Key> store{ "rank", {} };
  for ( std::size_t i = 0; i < l.n; ++i )
  {
    trace_event<Key> e;
    e.slot = first[i];
    e.action = pe_action::store_rank;
    e.row = i;
    e.rank = ranks[i];
    store.events.push_back( std::move( e ) );
  }
  trace.phases.push_back( std::move( store ) );
  return { std::move( t ), std::move( ranks ), std::move( trace ) };
}

template<sort_key Key>
sort_result<Key> sort( layout const& l, std::vector<Key> const& a )
{
  return sort( l, std::span<const Key>( a ) );
}

/*! \brief A T cell written more than once during the compare stage. */
struct write_conflict
{
  std::size_t row{ 0 };
  std::size_t col{ 0 };
  /*! slot of each write, in trace order; one slot may appear twice when it
      faces the same class on both sides */
  std::vector<std::size_t> writers;
  std::vector<std::string> phases;
  bool benign{ true }; ///< all writes carry the same value

  bool operator==( write_conflict const& ) const = default;
};

/*! \brief Every T cell that the compare stage writes more than once.
 *
 * The whole compare parFor is one concurrent step of the modelled machine, so
 * writes from different sub-phases still count as simultaneous.
 */
template<class Key>
std::vector<write_conflict> detect_write_conflicts( sort_trace<Key> const& trace )
{
  struct cell_writes
  {
    std::vector<std::size_t> slots;
    std::vector<std::string> phases;
    std::vector<int> values;
  };
  std::map<std::pair<std::size_t, std::size_t>, cell_writes> by_cell;
  for ( auto const& ph : trace.phases )
  {
    for ( auto const& e : ph.events )
    {
      if ( e.action != pe_action::write_t )
      {
        continue;
      }
      auto& w = by_cell[{ *e.row, *e.col }];
      w.slots.push_back( e.slot );
      w.phases.push_back( ph.name );
      w.values.push_back( e.bit.value_or( 1 ) );
    }
  }
  std::vector<write_conflict> out;
  for ( auto const& [cell, w] : by_cell )
  {
    if ( w.slots.size() < 2 )
    {
      continue;
    }
    write_conflict c;
    c.row = cell.first;
    c.col = cell.second;
    c.writers = w.slots;
    c.phases = w.phases;
    c.benign = std::all_of( w.values.begin(), w.values.end(), [&]( int v ) { return v == w.values.front(); } );
    out.push_back( std::move( c ) );
  }
  return out;
}

template<class Key>
std::size_t phase_count( sort_trace<Key> const& trace )
{
  return trace.phases.size();
}

template<class Key>
std::size_t comparison_count( sort_trace<Key> const& trace )
{
  std::size_t count = 0;
  for ( auto const& ph : trace.phases )
  {
    count += static_cast<std::size_t>( std::count_if( ph.events.begin(), ph.events.end(), []( auto const& e ) { return e.action == pe_action::compare; } ) );
  }
  return count;
}

} // namespace xbar
