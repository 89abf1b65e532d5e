/*!
  \file cyclic_perm.hpp
  \brief Powers of the cyclic generator p = (0 1 ... n-1) and their cycle structure

  A power p^j is kept as the pair (n, j); the mapping i -> (i + j) mod n is
  computed on demand so that very large n stays cheap.
*/

#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbar
{

using class_id = std::uint32_t;

/*! \brief The permutation p^j on n class ids. */
class permutation
{
public:
  permutation( std::size_t n, std::size_t j )
      : n_( n ), j_( j )
  {
    if ( n < 2 )
    {
      throw std::invalid_argument( "permutation: n must be at least 2, got " + std::to_string( n ) );
    }
    if ( j < 1 || j > n )
    {
      throw std::invalid_argument( "permutation: exponent must be in 1.." + std::to_string( n ) + ", got " + std::to_string( j ) );
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t exponent() const noexcept { return j_; }

  class_id operator()( class_id i ) const noexcept
  {
    return static_cast<class_id>( ( static_cast<std::size_t>( i ) + j_ ) % n_ );
  }

  bool is_identity() const noexcept { return j_ % n_ == 0; }

  /*! \brief Number of disjoint cycles, gcd(n, j). */
  std::size_t cycle_count() const noexcept { return std::gcd( n_, j_ ); }

  bool operator==( permutation const& ) const = default;

private:
  std::size_t n_;
  std::size_t j_;
};

/*! \brief One cycle, rotated so that its smallest element comes first. */
struct cycle
{
  std::vector<class_id> elements;

  std::size_t size() const noexcept { return elements.size(); }
  class_id first() const { return elements.front(); }

  bool operator==( cycle const& ) const = default;
};

/*! \brief p^j for the generator on n classes. */
inline permutation power( std::size_t n, std::size_t j )
{
  return permutation( n, j );
}

/*! \brief Disjoint-cycle decomposition of a power of p.
 *
 * The residues 0 .. gcd(n, j) - 1 are the cycle leaders: every cycle stays in
 * one residue class mod gcd(n, j), so starting from the residue itself yields
 * the smallest-first rotation directly.  Cycles are ordered by leader.
 */
inline std::vector<cycle> cycle_decomposition( permutation const& perm )
{
  auto const n = perm.size();
  auto const g = perm.cycle_count();
  auto const len = n / g;

  std::vector<cycle> result( g );
  for ( std::size_t r = 0; r < g; ++r )
  {
    auto& elems = result[r].elements;
    elems.reserve( len );
    auto v = static_cast<class_id>( r );
    for ( std::size_t k = 0; k < len; ++k )
    {
      elems.push_back( v );
      v = perm( v );
    }
  }
  return result;
}

/*! \brief Cycles of p, p^2, ..., p^{n/2} grouped by their first element. */
struct q_partition
{
  std::size_t n{ 0 };
  /*! sets[i] holds the cycles whose first element is i, in increasing exponent order. */
  std::vector<std::vector<cycle>> sets;
};

/*! \brief Builds the Q_0 .. Q_{n/2-1} partition for even n.
 *
 * Within each set the cycles appear in increasing exponent order; the 2-cycle
 * contributed by p^{n/2} is therefore always last.
 */
inline q_partition partition_q( std::size_t n )
{
  if ( n < 2 || n % 2 != 0 )
  {
    throw std::invalid_argument( "partition_q: n must be even and at least 2, got " + std::to_string( n ) );
  }
  q_partition q;
  q.n = n;
  q.sets.resize( n / 2 );
  for ( std::size_t j = 1; j <= n / 2; ++j )
  {
    for ( auto& c : cycle_decomposition( power( n, j ) ) )
    {
      auto const lead = c.first();
      q.sets[lead].push_back( std::move( c ) );
    }
  }
  return q;
}

} // namespace xbar
