/*!
  \file array_builder.hpp
  \brief Construction and validation of minimal 1D crosspoint array layouts

  A layout is the left-to-right sequence of PE class ids.  A crosspoint sits
  between every two physically adjacent slots, so a layout with s slots has
  s - 1 crosspoints and needs no separate crosspoint list.
*/

#pragma once

#include "cyclic_perm.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace xbar
{

/*! \brief Where a slot's class id came from during construction. */
struct slot_origin
{
  enum class kind_t
  {
    cycle,    ///< element of a Q-set cycle
    odd_fill, ///< class n-1 placed in a skipped space between Q-blocks
    odd_tail, ///< one of the two trailing PEs (class n-1, then class 0)
    pair,     ///< the trivial two-class array
    user      ///< supplied from outside the builders
  };

  kind_t kind{ kind_t::user };
  std::size_t q_set{ 0 };
  std::size_t cycle_index{ 0 };
  std::size_t element_index{ 0 };
  /*! first slot of Q_i, i >= 1; for even n its left crosspoint is a redundant adjacency */
  bool block_start{ false };

  bool operator==( slot_origin const& ) const = default;
};

struct layout
{
  std::size_t n{ 0 };
  std::vector<class_id> slots;
  std::vector<slot_origin> provenance;

  std::size_t pe_count() const noexcept { return slots.size(); }
  std::size_t crosspoint_count() const noexcept { return slots.empty() ? 0 : slots.size() - 1; }

  /*! \brief Layout from a raw slot list, e.g. one read from a file. */
  static layout from_slots( std::size_t n, std::vector<class_id> slots )
  {
    layout l;
    l.n = n;
    l.provenance.assign( slots.size(), slot_origin{} );
    l.slots = std::move( slots );
    return l;
  }
};

/*! \brief Fewest PEs any fully pairwise-adjacent 1D array on n classes can use. */
inline std::size_t min_pe_count( std::size_t n )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( "min_pe_count: n must be at least 2, got " + std::to_string( n ) );
  }
  return n % 2 == 1 ? n * ( n - 1 ) / 2 + 1 : n * n / 2;
}

enum class end_position
{
  interior,
  same_class_both_ends,
  distinct_class_at_end
};

/*! \brief Per-class PE lower bound, depending on whether the class sits at an array end. */
inline std::size_t replicate_lower_bound( std::size_t n, end_position at_end )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( "replicate_lower_bound: n must be at least 2" );
  }
  switch ( at_end )
  {
  case end_position::interior:
    return n / 2; // ceil((n-1)/2)
  case end_position::same_class_both_ends:
    return ( n + 2 ) / 2; // ceil((n+1)/2)
  case end_position::distinct_class_at_end:
    return ( n + 1 ) / 2; // ceil(n/2)
  }
  return 0;
}

namespace detail
{

/*! Lays out every Q-block of partition_q(m); gap != nullopt inserts that class between blocks. */
inline layout place_q_blocks( std::size_t m, std::optional<class_id> gap )
{
  auto const q = partition_q( m );
  layout l;
  for ( std::size_t i = 0; i < q.sets.size(); ++i )
  {
    if ( i > 0 && gap )
    {
      l.slots.push_back( *gap );
      l.provenance.push_back( { slot_origin::kind_t::odd_fill, i, 0, 0, false } );
    }
    auto const& set = q.sets[i];
    for ( std::size_t c = 0; c < set.size(); ++c )
    {
      for ( std::size_t e = 0; e < set[c].size(); ++e )
      {
        l.slots.push_back( set[c].elements[e] );
        l.provenance.push_back( { slot_origin::kind_t::cycle, i, c, e, i > 0 && c == 0 && e == 0 } );
      }
    }
  }
  return l;
}

} // namespace detail

/*! \brief Optimal layout for even n >= 4 (n^2/2 PEs).
 *
 * Q_0, Q_1, ... are placed back to back; inside each Q_i every cycle is laid
 * element by element and the 2-cycle of p^{n/2} comes last.
 */
inline layout build_even( std::size_t n )
{
  if ( n < 4 || n % 2 != 0 )
  {
    throw std::invalid_argument( "build_even: n must be even and at least 4, got " + std::to_string( n ) );
  }
  auto l = detail::place_q_blocks( n, std::nullopt );
  l.n = n;
  return l;
}

/*! \brief Optimal layout for odd n >= 3 (n(n-1)/2 + 1 PEs).
 *
 * Uses the even construction for n - 1, puts class n - 1 into a skipped space
 * between consecutive Q-blocks and appends class n - 1 followed by class 0.
 */
inline layout build_odd( std::size_t n )
{
  if ( n < 3 || n % 2 != 1 )
  {
    throw std::invalid_argument( "build_odd: n must be odd and at least 3, got " + std::to_string( n ) );
  }
  auto const last = static_cast<class_id>( n - 1 );
  auto l = detail::place_q_blocks( n - 1, last );
  l.n = n;
  l.slots.push_back( last );
  l.provenance.push_back( { slot_origin::kind_t::odd_tail, 0, 0, 0, false } );
  l.slots.push_back( 0 );
  l.provenance.push_back( { slot_origin::kind_t::odd_tail, 0, 0, 1, false } );
  return l;
}

/*! \brief Optimal layout for any n >= 2; n = 2 is the trivial pair 0-1. */
inline layout build_layout( std::size_t n )
{
  if ( n == 2 )
  {
    layout l;
    l.n = 2;
    l.slots = { 0, 1 };
    l.provenance = { { slot_origin::kind_t::pair, 0, 0, 0, false }, { slot_origin::kind_t::pair, 0, 0, 1, false } };
    return l;
  }
  if ( n < 2 )
  {
    throw std::invalid_argument( "build_layout: n must be at least 2, got " + std::to_string( n ) );
  }
  return n % 2 == 1 ? build_odd( n ) : build_even( n );
}

using class_pair = std::pair<class_id, class_id>;

inline class_pair make_pair_key( class_id a, class_id b )
{
  return a < b ? class_pair{ a, b } : class_pair{ b, a };
}

struct validation_report
{
  std::size_t n{ 0 };
  std::size_t pe_count{ 0 };
  std::size_t min_pe_count{ 0 };
  /*! occurrence count of every unordered pair {a, b}, a < b, including zeros */
  std::map<class_pair, std::size_t> pair_coverage;
  std::vector<class_pair> redundant_pairs;
  std::vector<std::size_t> replicate_counts;
  std::pair<class_id, class_id> end_classes{ 0, 0 };
  std::vector<std::string> violations;

  bool ok() const noexcept { return violations.empty(); }

  std::size_t uncovered_pairs() const
  {
    return static_cast<std::size_t>( std::count_if( pair_coverage.begin(), pair_coverage.end(), []( auto const& kv ) { return kv.second == 0; } ) );
  }
};

/*! \brief Checks every structural property of an optimal layout.
 *
 * Never throws on a bad layout; each failed property is reported as a
 * human-readable violation.
 */
inline validation_report validate( layout const& l )
{
  validation_report r;
  r.n = l.n;
  r.pe_count = l.slots.size();
  auto const n = l.n;

  if ( n < 2 )
  {
    r.violations.push_back( "class count must be at least 2, got " + std::to_string( n ) );
    return r;
  }
  r.min_pe_count = min_pe_count( n );
  r.replicate_counts.assign( n, 0 );
  for ( class_id a = 0; a < n; ++a )
  {
    for ( class_id b = a + 1; b < n; ++b )
    {
      r.pair_coverage[{ a, b }] = 0;
    }
  }

  if ( l.slots.empty() )
  {
    r.violations.push_back( "layout has no slots" );
    return r;
  }
  r.end_classes = { l.slots.front(), l.slots.back() };

  bool ids_ok = true;
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    if ( l.slots[k] >= n )
    {
      r.violations.push_back( "slot " + std::to_string( k ) + " holds class " + std::to_string( l.slots[k] ) + " outside 0.." + std::to_string( n - 1 ) );
      ids_ok = false;
    }
    else
    {
      ++r.replicate_counts[l.slots[k]];
    }
  }
  if ( !ids_ok )
  {
    return r;
  }

  for ( std::size_t k = 0; k + 1 < l.slots.size(); ++k )
  {
    auto const a = l.slots[k];
    auto const b = l.slots[k + 1];
    if ( a == b )
    {
      r.violations.push_back( "adjacent same-class slots " + std::to_string( k ) + "," + std::to_string( k + 1 ) + " (class " + std::to_string( a ) + ")" );
      continue;
    }
    ++r.pair_coverage[make_pair_key( a, b )];
  }

  if ( r.pe_count != r.min_pe_count )
  {
    r.violations.push_back( "PE count " + std::to_string( r.pe_count ) + " differs from the minimum " + std::to_string( r.min_pe_count ) );
  }

  for ( auto const& [pair, count] : r.pair_coverage )
  {
    auto const label = "{" + std::to_string( pair.first ) + "," + std::to_string( pair.second ) + "}";
    if ( count == 0 )
    {
      r.violations.push_back( "pair " + label + " is never adjacent" );
    }
    else if ( count >= 2 )
    {
      r.redundant_pairs.push_back( pair );
      if ( n % 2 == 1 )
      {
        r.violations.push_back( "pair " + label + " adjacent " + std::to_string( count ) + " times, expected exactly once" );
      }
      else if ( count > 2 )
      {
        r.violations.push_back( "pair " + label + " adjacent " + std::to_string( count ) + " times, expected at most twice" );
      }
    }
  }
  if ( n % 2 == 0 && r.redundant_pairs.size() != n / 2 - 1 )
  {
    r.violations.push_back( "expected " + std::to_string( n / 2 - 1 ) + " redundant pairs, found " + std::to_string( r.redundant_pairs.size() ) );
  }

  auto const same_ends = r.end_classes.first == r.end_classes.second;
  for ( class_id c = 0; c < n; ++c )
  {
    auto where = end_position::interior;
    if ( c == r.end_classes.first || c == r.end_classes.second )
    {
      where = same_ends ? end_position::same_class_both_ends : end_position::distinct_class_at_end;
    }
    auto const bound = replicate_lower_bound( n, where );
    if ( r.replicate_counts[c] < bound )
    {
      r.violations.push_back( "class " + std::to_string( c ) + " has " + std::to_string( r.replicate_counts[c] ) + " PEs, below the bound " + std::to_string( bound ) );
    }
  }
  return r;
}

/*! \brief True when every pair of distinct classes shares at least one crosspoint. */
inline bool covers_all_pairs( layout const& l )
{
  if ( l.n < 2 )
  {
    return false;
  }
  std::vector<bool> seen( l.n * l.n, false );
  std::size_t covered = 0;
  for ( std::size_t k = 0; k + 1 < l.slots.size(); ++k )
  {
    auto const a = l.slots[k];
    auto const b = l.slots[k + 1];
    if ( a >= l.n || b >= l.n )
    {
      return false;
    }
    if ( a == b )
    {
      continue;
    }
    auto const [lo, hi] = make_pair_key( a, b );
    if ( !seen[lo * l.n + hi] )
    {
      seen[lo * l.n + hi] = true;
      ++covered;
    }
  }
  return covered == l.n * ( l.n - 1 ) / 2;
}

/*! \brief Class ids of the physically adjacent slots (none at the array ends). */
inline std::pair<std::optional<class_id>, std::optional<class_id>> neighbors( layout const& l, std::size_t slot_index )
{
  if ( slot_index >= l.slots.size() )
  {
    throw std::out_of_range( "neighbors: slot " + std::to_string( slot_index ) + " out of range (" + std::to_string( l.slots.size() ) + " slots)" );
  }
  std::optional<class_id> left, right;
  if ( slot_index > 0 )
  {
    left = l.slots[slot_index - 1];
  }
  if ( slot_index + 1 < l.slots.size() )
  {
    right = l.slots[slot_index + 1];
  }
  return { left, right };
}

/*! \brief One-line rendering such as 0-1-2-0. */
inline std::string to_text( layout const& l )
{
  std::ostringstream os;
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    if ( k )
    {
      os << '-';
    }
    os << l.slots[k];
  }
  return os.str();
}

} // namespace xbar
