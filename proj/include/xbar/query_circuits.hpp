/*!
  \file query_circuits.hpp
  \brief Gate-level query circuits over the comparison matrix T

  All builders return a netlist whose primary inputs are named bits of T
  (t<i>_<k>) and whose binary outputs are listed most significant bit first.
*/

#pragma once

#include "netlist.hpp"
#include "pe_simulator.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace xbar
{

using rational = boost::multiprecision::cpp_rational;

/*! \brief Result of an index query. */
struct rank_query_result
{
  std::optional<std::size_t> index;
  bool exact{ true };

  bool operator==( rank_query_result const& ) const = default;
};

inline std::size_t ceil_log2( std::size_t n )
{
  std::size_t b = 0;
  while ( ( std::size_t{ 1 } << b ) < n )
  {
    ++b;
  }
  return b;
}

/*! \brief Reads output bits listed most significant first as an unsigned value. */
inline std::size_t decode_msb_first( std::span<const std::uint8_t> bits )
{
  std::size_t v = 0;
  for ( auto b : bits )
  {
    v = ( v << 1 ) | ( b ? 1u : 0u );
  }
  return v;
}

struct encoder_wires
{
  std::vector<wire> bits; ///< least significant first
  std::optional<wire> valid;
};

/*! \brief n-input, ceil(lg n)-output OR encoder.
 *
 * Bit b is the OR of every input whose index has bit b set, so the output is
 * only meaningful for one-hot inputs.  The optional valid wire is the OR of
 * all inputs.
 */
inline encoder_wires add_encoder( netlist& nl, std::span<const wire> onehot, bool with_valid )
{
  encoder_wires enc;
  auto const width = ceil_log2( onehot.size() );
  for ( std::size_t b = 0; b < width; ++b )
  {
    std::vector<wire> terms;
    for ( std::size_t i = 0; i < onehot.size(); ++i )
    {
      if ( ( i >> b ) & 1u )
      {
        terms.push_back( onehot[i] );
      }
    }
    enc.bits.push_back( nl.add_gate( gate_kind::or_, std::move( terms ) ) );
  }
  if ( with_valid )
  {
    enc.valid = nl.add_gate( gate_kind::or_, std::vector<wire>( onehot.begin(), onehot.end() ) );
  }
  return enc;
}

inline void add_index_outputs( netlist& nl, encoder_wires const& enc, std::string const& prefix )
{
  for ( auto b = enc.bits.size(); b-- > 0; )
  {
    nl.add_output( enc.bits[b], prefix + "[" + std::to_string( b ) + "]" );
  }
  if ( enc.valid )
  {
    nl.add_output( *enc.valid, "valid" );
  }
}

/*! \brief Standalone encoder: inputs in[0..n-1], outputs index bits then valid. */
inline netlist build_encoder( std::size_t n )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( "build_encoder: n must be at least 2" );
  }
  netlist nl;
  std::vector<wire> in;
  for ( std::size_t i = 0; i < n; ++i )
  {
    in.push_back( nl.add_input( "in[" + std::to_string( i ) + "]" ) );
  }
  add_index_outputs( nl, add_encoder( nl, in, true ), "index" );
  return nl;
}

namespace detail
{

/*! Adds t<i>_<k> inputs for k != i, row-major; returns rows[i] = wires of row i. */
inline std::vector<std::vector<wire>> add_off_diagonal_inputs( netlist& nl, std::size_t n )
{
  std::vector<std::vector<wire>> rows( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( std::size_t k = 0; k < n; ++k )
    {
      if ( k != i )
      {
        rows[i].push_back( nl.add_input( "t" + std::to_string( i ) + "_" + std::to_string( k ) ) );
      }
    }
  }
  return rows;
}

inline std::vector<std::vector<wire>> add_full_row_inputs( netlist& nl, std::size_t n )
{
  std::vector<std::vector<wire>> rows( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( std::size_t k = 0; k < n; ++k )
    {
      rows[i].push_back( nl.add_input( "t" + std::to_string( i ) + "_" + std::to_string( k ) ) );
    }
  }
  return rows;
}

inline void require_n( std::size_t n, char const* who )
{
  if ( n < 2 )
  {
    throw std::invalid_argument( std::string( who ) + ": n must be at least 2, got " + std::to_string( n ) );
  }
}

} // namespace detail

/*! \brief Off-diagonal bits of T in row-major order (the input vector of the min/max/threshold circuits). */
inline std::vector<std::uint8_t> off_diagonal_bits( comparison_matrix const& t )
{
  std::vector<std::uint8_t> v;
  v.reserve( t.size() * ( t.size() - 1 ) );
  for ( std::size_t i = 0; i < t.size(); ++i )
  {
    for ( std::size_t k = 0; k < t.size(); ++k )
    {
      if ( k != i )
      {
        v.push_back( t.at( i, k ) ? 1 : 0 );
      }
    }
  }
  return v;
}

inline std::vector<std::uint8_t> all_bits( comparison_matrix const& t )
{
  std::vector<std::uint8_t> v;
  v.reserve( t.size() * t.size() );
  for ( std::size_t i = 0; i < t.size(); ++i )
  {
    for ( std::size_t k = 0; k < t.size(); ++k )
    {
      v.push_back( t.at( i, k ) ? 1 : 0 );
    }
  }
  return v;
}

/*! \brief Index of the minimum: a NOR per row (only the all-zero row fires) into an encoder. */
inline netlist build_min_circuit( std::size_t n )
{
  detail::require_n( n, "build_min_circuit" );
  netlist nl;
  auto const rows = detail::add_off_diagonal_inputs( nl, n );
  std::vector<wire> hot;
  for ( auto const& r : rows )
  {
    hot.push_back( nl.add_gate( gate_kind::nor_, r ) );
  }
  add_index_outputs( nl, add_encoder( nl, hot, false ), "index" );
  return nl;
}

/*! \brief Index of the maximum: an AND over each row's off-diagonal bits into an encoder.
 *
 * The complemented diagonal is a constant 1 and drops out of the AND.
 */
inline netlist build_max_circuit( std::size_t n )
{
  detail::require_n( n, "build_max_circuit" );
  netlist nl;
  auto const rows = detail::add_off_diagonal_inputs( nl, n );
  std::vector<wire> hot;
  for ( auto const& r : rows )
  {
    hot.push_back( nl.add_gate( gate_kind::and_, r ) );
  }
  add_index_outputs( nl, add_encoder( nl, hot, false ), "index" );
  return nl;
}

/*! \brief Evaluates an index circuit built over the off-diagonal bits of T. */
inline std::size_t evaluate_index( netlist const& nl, comparison_matrix const& t )
{
  return decode_msb_first( nl.evaluate( off_diagonal_bits( t ) ) );
}

inline rank_query_result query_min( comparison_matrix const& t )
{
  return { evaluate_index( build_min_circuit( t.size() ), t ), true };
}

inline rank_query_result query_max( comparison_matrix const& t )
{
  return { evaluate_index( build_max_circuit( t.size() ), t ), true };
}

/// \name Threshold-logic 1's counter
/// \{

/*! \brief e_m = AND( NOT(THRESHOLD[m+1]), THRESHOLD[m] ) for m = 0 .. |bits|.
 *
 * Each Delta(m) cell owns its pair of threshold gates.  Exactly one e_m is hot.
 */
inline std::vector<wire> add_ones_counter( netlist& nl, std::span<const wire> bits )
{
  std::vector<wire> in( bits.begin(), bits.end() );
  std::vector<wire> e;
  for ( std::size_t m = 0; m <= bits.size(); ++m )
  {
    auto const upper = nl.add_gate( gate_kind::threshold, in, static_cast<std::uint32_t>( m + 1 ) );
    auto const lower = nl.add_gate( gate_kind::threshold, in, static_cast<std::uint32_t>( m ) );
    auto const fewer = nl.add_gate( gate_kind::not_, { upper } );
    e.push_back( nl.add_gate( gate_kind::and_, { fewer, lower } ) );
  }
  return e;
}

/*! \brief Counter alone: inputs b[0..width-1], outputs e0..e<width>. */
inline netlist build_ones_counter( std::size_t width )
{
  netlist nl;
  std::vector<wire> in;
  for ( std::size_t i = 0; i < width; ++i )
  {
    in.push_back( nl.add_input( "b[" + std::to_string( i ) + "]" ) );
  }
  auto const e = add_ones_counter( nl, in );
  for ( std::size_t m = 0; m < e.size(); ++m )
  {
    nl.add_output( e[m], "e" + std::to_string( m ) );
  }
  return nl;
}

/*! \brief Rank of a single row: counter over the row's n-1 off-diagonal bits plus an n-input encoder. */
inline netlist build_row_rank_threshold( std::size_t n )
{
  detail::require_n( n, "build_row_rank_threshold" );
  netlist nl;
  std::vector<wire> in;
  for ( std::size_t i = 0; i + 1 < n; ++i )
  {
    in.push_back( nl.add_input( "b[" + std::to_string( i ) + "]" ) );
  }
  add_index_outputs( nl, add_encoder( nl, add_ones_counter( nl, in ), false ), "rank" );
  return nl;
}

/*! \brief All n ranks in constant depth: one counter and one encoder per row of T. */
inline netlist build_rank_circuit_threshold( std::size_t n )
{
  detail::require_n( n, "build_rank_circuit_threshold" );
  netlist nl;
  auto const rows = detail::add_off_diagonal_inputs( nl, n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    add_index_outputs( nl, add_encoder( nl, add_ones_counter( nl, rows[i] ), false ), "rank" + std::to_string( i ) );
  }
  return nl;
}

/*! \brief Decodes the outputs of build_rank_circuit_threshold into a rank vector. */
inline rank_vector ranks_via_threshold( comparison_matrix const& t )
{
  auto const n = t.size();
  auto const out = build_rank_circuit_threshold( n ).evaluate( off_diagonal_bits( t ) );
  auto const width = ceil_log2( n );
  rank_vector r( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    r[i] = decode_msb_first( std::span<const std::uint8_t>( out ).subspan( i * width, width ) );
  }
  return r;
}

/// \}

/// \name Brent-Kung adders
/// \{

/*! \brief Levels charged to one Brent-Kung adder beyond its 2 ceil(lg ceil(lg n)) prefix
 *         levels, in the per-tree-level depth bound of rank_via_adder_tree.
 *
 * Fixed at 2 after measuring the built row-sum trees for n = 2 .. 256
 * (e.g. depth 21 at n = 64 against a bound of 48). The tightest value that
 * still holds there is 1, forced by n = 2.
 */
inline constexpr std::size_t brent_kung_cell_constant = 2;

/*! \brief a + b (+ carry_in) with a Brent-Kung parallel-prefix carry network of 2-input gates.
 *
 * Operands are least significant bit first and of equal width w; the result
 * has w + 1 bits, the last one being the carry out.
 */
inline std::vector<wire> add_brent_kung( netlist& nl, std::span<const wire> a, std::span<const wire> b, std::optional<wire> carry_in = std::nullopt )
{
  if ( a.size() != b.size() || a.empty() )
  {
    throw std::invalid_argument( "add_brent_kung: operands must have the same non-zero width" );
  }
  auto const w = a.size();

  struct gp
  {
    wire g;
    std::optional<wire> p; ///< empty = constant 0
  };
  auto combine = [&]( gp const& hi, gp const& lo ) {
    gp out;
    if ( hi.p )
    {
      auto const t = nl.add_gate( gate_kind::and_, { *hi.p, lo.g } );
      out.g = nl.add_gate( gate_kind::or_, { hi.g, t } );
    }
    else
    {
      out.g = hi.g;
    }
    if ( hi.p && lo.p )
    {
      out.p = nl.add_gate( gate_kind::and_, { *hi.p, *lo.p } );
    }
    return out;
  };

  std::vector<wire> prop( w );
  std::vector<gp> pos;
  if ( carry_in )
  {
    pos.push_back( { *carry_in, std::nullopt } );
  }
  for ( std::size_t i = 0; i < w; ++i )
  {
    auto const g = nl.add_gate( gate_kind::and_, { a[i], b[i] } );
    prop[i] = nl.add_gate( gate_kind::xor_, { a[i], b[i] } );
    pos.push_back( { g, prop[i] } );
  }

  auto const count = pos.size();
  std::size_t top = 1;
  while ( top < count )
  {
    top <<= 1;
  }
  for ( std::size_t d = 1; d < count; d <<= 1 )
  {
    for ( auto i = 2 * d - 1; i < count; i += 2 * d )
    {
      pos[i] = combine( pos[i], pos[i - d] );
    }
  }
  for ( auto d = top / 2; d >= 1; d >>= 1 )
  {
    for ( auto i = 3 * d - 1; i < count; i += 2 * d )
    {
      pos[i] = combine( pos[i], pos[i - d] );
    }
  }

  auto const offset = carry_in ? std::size_t{ 1 } : std::size_t{ 0 };
  std::vector<wire> sum;
  for ( std::size_t m = 0; m < w; ++m )
  {
    if ( m + offset == 0 )
    {
      sum.push_back( prop[m] );
    }
    else
    {
      sum.push_back( nl.add_gate( gate_kind::xor_, { prop[m], pos[m + offset - 1].g } ) );
    }
  }
  sum.push_back( pos.back().g );
  return sum;
}

/*! \brief Binary tree of Brent-Kung adders summing single bits.
 *
 * The bits are padded with constant zeros to a power of two; level l adds
 * l-bit operands.  Returns the sum, least significant bit first, with
 * ceil(lg |bits|) + 1 bits.
 */
inline std::vector<wire> add_popcount_tree( netlist& nl, std::span<const wire> bits )
{
  if ( bits.empty() )
  {
    throw std::invalid_argument( "add_popcount_tree: no bits" );
  }
  std::size_t padded = 1;
  while ( padded < bits.size() )
  {
    padded <<= 1;
  }
  std::vector<std::vector<wire>> operands;
  for ( std::size_t i = 0; i < padded; ++i )
  {
    operands.push_back( { i < bits.size() ? bits[i] : nl.constant( false ) } );
  }
  while ( operands.size() > 1 )
  {
    std::vector<std::vector<wire>> next;
    for ( std::size_t i = 0; i < operands.size(); i += 2 )
    {
      next.push_back( add_brent_kung( nl, operands[i], operands[i + 1] ) );
    }
    operands = std::move( next );
  }
  return operands.front();
}

/*! \brief Row-sum circuit: n row bits in, ceil(lg n) + 1 sum bits out (most significant first). */
inline netlist build_row_sum_adder_tree( std::size_t n )
{
  detail::require_n( n, "build_row_sum_adder_tree" );
  netlist nl;
  std::vector<wire> in;
  for ( std::size_t k = 0; k < n; ++k )
  {
    in.push_back( nl.add_input( "b[" + std::to_string( k ) + "]" ) );
  }
  auto const sum = add_popcount_tree( nl, in );
  for ( auto b = sum.size(); b-- > 0; )
  {
    nl.add_output( sum[b], "sum[" + std::to_string( b ) + "]" );
  }
  return nl;
}

/*! \brief Ranks as row sums computed by the Brent-Kung adder tree, with its fan-in-2 depth. */
inline std::pair<rank_vector, depth_report> rank_via_adder_tree( comparison_matrix const& t )
{
  auto const n = t.size();
  detail::require_n( n, "rank_via_adder_tree" );
  auto const nl = build_row_sum_adder_tree( n );
  rank_vector r( n );
  std::vector<std::uint8_t> row( n );
  for ( std::size_t i = 0; i < n; ++i )
  {
    for ( std::size_t k = 0; k < n; ++k )
    {
      row[k] = t.at( i, k ) ? 1 : 0;
    }
    r[i] = decode_msb_first( nl.evaluate( row ) );
  }
  return { std::move( r ), depth( nl, 2 ) };
}

/*! \brief Upper bound ceil(lg n) * (2 ceil(lg ceil(lg n)) + c) on the adder-tree depth. */
inline std::size_t adder_tree_depth_bound( std::size_t n )
{
  auto const levels = ceil_log2( n );
  return levels * ( 2 * ceil_log2( levels ) + brent_kung_cell_constant );
}

/// \}

/*! \brief Selects the row whose sum equals r.
 *
 * Inputs: all n*n bits of T (t<i>_<k>) followed by r[W-1..0], W = ceil(lg n) + 1.
 * Each row sum goes through the adder tree, r is subtracted as
 * sum + NOT(r) + 1 on a Brent-Kung adder, a NOR detects a zero difference and
 * the flags feed an encoder with a valid wire.
 */
inline netlist build_select_rank_circuit( std::size_t n )
{
  detail::require_n( n, "build_select_rank_circuit" );
  netlist nl;
  auto const rows = detail::add_full_row_inputs( nl, n );
  auto const width = ceil_log2( n ) + 1;
  std::vector<wire> r( width );
  for ( auto b = width; b-- > 0; )
  {
    r[b] = nl.add_input( "r[" + std::to_string( b ) + "]" );
  }
  std::vector<wire> not_r;
  for ( auto w : r )
  {
    not_r.push_back( nl.add_gate( gate_kind::not_, { w } ) );
  }
  auto const one = nl.constant( true );

  std::vector<wire> hits;
  for ( auto const& row : rows )
  {
    auto sum = add_popcount_tree( nl, row );
    sum.resize( width, nl.constant( false ) );
    auto diff = add_brent_kung( nl, sum, not_r, one );
    diff.resize( width ); // drop the carry out: arithmetic mod 2^W
    hits.push_back( nl.add_gate( gate_kind::nor_, diff ) );
  }
  add_index_outputs( nl, add_encoder( nl, hits, true ), "index" );
  return nl;
}

/*! \brief Index of the element with exactly r smaller elements (r-th smallest, 0-based). */
inline rank_query_result select_rank( comparison_matrix const& t, std::size_t r )
{
  auto const n = t.size();
  if ( r >= n )
  {
    throw std::invalid_argument( "select_rank: rank " + std::to_string( r ) + " outside 0.." + std::to_string( n - 1 ) );
  }
  auto const nl = build_select_rank_circuit( n );
  auto in = all_bits( t );
  auto const width = ceil_log2( n ) + 1;
  for ( auto b = width; b-- > 0; )
  {
    in.push_back( ( r >> b ) & 1u );
  }
  auto const out = nl.evaluate( in );
  if ( !out.back() )
  {
    return { std::nullopt, true };
  }
  return { decode_msb_first( std::span<const std::uint8_t>( out ).first( out.size() - 1 ) ), true };
}

/// \name Probabilistic rank test
/// \{

/*! \brief OR over chunks of k bits, each chunk testing "at least j ones".
 *
 * Inputs b[0..length-1]; length must be a multiple of k.  A chunk uses an AND
 * when j = k, an OR when j = 1 and a THRESHOLD[j] gate otherwise.
 */
inline netlist build_rank_at_least_circuit( std::size_t length, std::size_t j, std::size_t k )
{
  if ( k < 1 || j < 1 || j > k || length == 0 || length % k != 0 )
  {
    throw std::invalid_argument( "build_rank_at_least_circuit: need 1 <= j <= k and k dividing the length" );
  }
  netlist nl;
  std::vector<wire> in;
  for ( std::size_t i = 0; i < length; ++i )
  {
    in.push_back( nl.add_input( "b[" + std::to_string( i ) + "]" ) );
  }
  std::vector<wire> chunks;
  for ( std::size_t c = 0; c < length; c += k )
  {
    std::vector<wire> part( in.begin() + c, in.begin() + c + k );
    if ( j == k )
    {
      chunks.push_back( nl.add_gate( gate_kind::and_, std::move( part ) ) );
    }
    else if ( j == 1 )
    {
      chunks.push_back( nl.add_gate( gate_kind::or_, std::move( part ) ) );
    }
    else
    {
      chunks.push_back( nl.add_gate( gate_kind::threshold, std::move( part ), static_cast<std::uint32_t>( j ) ) );
    }
  }
  nl.add_output( nl.add_gate( gate_kind::or_, std::move( chunks ) ), "at_least" );
  return nl;
}

inline rational binomial( std::size_t n, std::size_t r )
{
  boost::multiprecision::cpp_int c = 1;
  for ( std::size_t i = 0; i < r; ++i )
  {
    c = c * ( n - i ) / ( i + 1 );
  }
  return rational( c );
}

/*! \brief Probability that a uniform random row of length n (zero-padded to a
 *         multiple of k) has no k-chunk with j or more ones:
 *         (sum_{i<j} C(k,i))^{n/k} / 2^n.
 */
inline rational miss_probability( std::size_t n, std::size_t j, std::size_t k )
{
  if ( k < 1 || j < 1 || j > k )
  {
    throw std::invalid_argument( "miss_probability: need 1 <= j <= k" );
  }
  auto const padded = ( n + k - 1 ) / k * k;
  boost::multiprecision::cpp_int below = 0;
  for ( std::size_t i = 0; i < j; ++i )
  {
    below += boost::multiprecision::numerator( binomial( k, i ) );
  }
  auto const chunks = static_cast<unsigned>( padded / k );
  boost::multiprecision::cpp_int num = boost::multiprecision::pow( below, chunks );
  boost::multiprecision::cpp_int den = boost::multiprecision::pow( boost::multiprecision::cpp_int( 2 ), static_cast<unsigned>( padded ) );
  return rational( num, den );
}

struct probabilistic_rank_result
{
  bool verdict{ false };
  rational miss_probability;
  std::size_t padded_length{ 0 };
};

/*! \brief One-sided test for "row has j or more ones": true only when a single
 *         k-bit chunk already holds j ones.  Never a false positive.
 */
inline probabilistic_rank_result rank_at_least_probabilistic( std::span<const std::uint8_t> row, std::size_t j, std::size_t k )
{
  if ( j > k )
  {
    throw std::invalid_argument( "rank_at_least_probabilistic: j > k can never be detected by a k-bit chunk" );
  }
  if ( j < 1 || k < 1 || row.empty() )
  {
    throw std::invalid_argument( "rank_at_least_probabilistic: need a non-empty row and 1 <= j <= k" );
  }
  auto const padded = ( row.size() + k - 1 ) / k * k;
  std::vector<std::uint8_t> in( row.begin(), row.end() );
  in.resize( padded, 0 );
  auto const out = build_rank_at_least_circuit( padded, j, k ).evaluate( in );
  return { out.front() != 0, miss_probability( row.size(), j, k ), padded };
}

/// \}

/// \name Search
/// \{

/*! \brief Equality flags computed by the first replicate C_{i,0} of every class.
 *
 * This is the cut-down compare step: one PE per class tests its key against
 * the searched value and there is no reply exchange.
 */
template<sort_key Key>
std::vector<std::uint8_t> search_match_vector( layout const& l, std::span<const Key> a, Key const& key )
{
  if ( a.size() != l.n )
  {
    throw std::invalid_argument( "search: input has " + std::to_string( a.size() ) + " values, layout has " + std::to_string( l.n ) + " classes" );
  }
  auto const first = detail::first_replicates( l );
  std::vector<std::uint8_t> match( l.n, 0 );
  for ( std::size_t i = 0; i < l.n; ++i )
  {
    if ( first[i] == l.slots.size() )
    {
      throw std::invalid_argument( "search: class " + std::to_string( i ) + " has no PE in the layout" );
    }
    match[i] = a[l.slots[first[i]]] == key ? 1 : 0;
  }
  return match;
}

/*! \brief Priority stage (smallest index wins) followed by an encoder with a valid wire. */
inline netlist build_search_encoder( std::size_t n )
{
  detail::require_n( n, "build_search_encoder" );
  netlist nl;
  std::vector<wire> m;
  for ( std::size_t i = 0; i < n; ++i )
  {
    m.push_back( nl.add_input( "match[" + std::to_string( i ) + "]" ) );
  }
  std::vector<wire> first_hot{ m[0] };
  for ( std::size_t i = 1; i < n; ++i )
  {
    auto const none_before = nl.add_gate( gate_kind::nor_, std::vector<wire>( m.begin(), m.begin() + i ) );
    first_hot.push_back( nl.add_gate( gate_kind::and_, { m[i], none_before } ) );
  }
  auto enc = add_encoder( nl, first_hot, false );
  enc.valid = nl.add_gate( gate_kind::or_, m );
  add_index_outputs( nl, enc, "index" );
  return nl;
}

/*! \brief Smallest class id holding `key`, or none. */
template<sort_key Key>
rank_query_result search( layout const& l, std::span<const Key> a, Key const& key )
{
  auto const match = search_match_vector( l, a, key );
  auto const out = build_search_encoder( l.n ).evaluate( match );
  if ( !out.back() )
  {
    return { std::nullopt, true };
  }
  return { decode_msb_first( std::span<const std::uint8_t>( out ).first( out.size() - 1 ) ), true };
}

template<sort_key Key>
rank_query_result search( layout const& l, std::vector<Key> const& a, Key const& key )
{
  return search( l, std::span<const Key>( a ), key );
}

/// \}

} // namespace xbar
