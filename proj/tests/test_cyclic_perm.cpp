#include <catch2/catch_amalgamated.hpp>

#include <xbar/cyclic_perm.hpp>

#include "oracles.hpp"

#include <numeric>
#include <set>

using namespace xbar;

namespace
{
std::vector<std::vector<class_id>> as_lists( std::vector<cycle> const& cs )
{
  std::vector<std::vector<class_id>> out;
  for ( auto const& c : cs )
  {
    out.push_back( c.elements );
  }
  return out;
}
} // namespace

TEST_CASE( "p^j maps i to i+j mod n", "[cyclic_perm]" )
{
  auto const p = power( 6, 4 );
  CHECK( p( 0 ) == 4 );
  CHECK( p( 3 ) == 1 );
  CHECK( p( 5 ) == 3 );
  CHECK_FALSE( p.is_identity() );
  CHECK( power( 6, 6 ).is_identity() );
}

TEST_CASE( "cycle decompositions for n = 6", "[cyclic_perm]" )
{
  using L = std::vector<std::vector<class_id>>;
  CHECK( as_lists( cycle_decomposition( power( 6, 1 ) ) ) == L{ { 0, 1, 2, 3, 4, 5 } } );
  CHECK( as_lists( cycle_decomposition( power( 6, 2 ) ) ) == L{ { 0, 2, 4 }, { 1, 3, 5 } } );
  CHECK( as_lists( cycle_decomposition( power( 6, 3 ) ) ) == L{ { 0, 3 }, { 1, 4 }, { 2, 5 } } );
  CHECK( as_lists( cycle_decomposition( power( 6, 4 ) ) ) == L{ { 0, 4, 2 }, { 1, 5, 3 } } );
  CHECK( as_lists( cycle_decomposition( power( 6, 5 ) ) ) == L{ { 0, 5, 4, 3, 2, 1 } } );
}

TEST_CASE( "n = 12, j = 8 has four 3-cycles", "[cyclic_perm]" )
{
  auto const cs = cycle_decomposition( power( 12, 8 ) );
  REQUIRE( cs.size() == 4 );
  CHECK( cs[0].elements == std::vector<class_id>{ 0, 8, 4 } );
  CHECK( cs[3].elements == std::vector<class_id>{ 3, 11, 7 } );
}

TEST_CASE( "decomposition matches the brute-force orbit walk", "[cyclic_perm]" )
{
  for ( std::size_t n = 2; n <= 40; ++n )
  {
    for ( std::size_t j = 1; j < n; ++j )
    {
      auto const got = cycle_decomposition( power( n, j ) );
      auto const want = oracle::cycles( n, j );
      REQUIRE( got.size() == want.size() );
      for ( std::size_t c = 0; c < got.size(); ++c )
      {
        REQUIRE( std::vector<std::size_t>( got[c].elements.begin(), got[c].elements.end() ) == want[c] );
      }
      CHECK( power( n, j ).cycle_count() == std::gcd( n, j ) );
    }
  }
}

TEST_CASE( "cycles are disjoint, cover 0..n-1 and have equal length", "[cyclic_perm]" )
{
  for ( std::size_t n = 2; n <= 30; ++n )
  {
    for ( std::size_t j = 1; j < n; ++j )
    {
      std::set<class_id> all;
      auto const cs = cycle_decomposition( power( n, j ) );
      for ( auto const& c : cs )
      {
        CHECK( c.size() == n / std::gcd( n, j ) );
        CHECK( c.first() == *std::min_element( c.elements.begin(), c.elements.end() ) );
        all.insert( c.elements.begin(), c.elements.end() );
      }
      CHECK( all.size() == n );
    }
  }
}

TEST_CASE( "Q partition for n = 6 and n = 4", "[cyclic_perm]" )
{
  auto const q = partition_q( 6 );
  REQUIRE( q.sets.size() == 3 );
  CHECK( as_lists( q.sets[0] ) == std::vector<std::vector<class_id>>{ { 0, 1, 2, 3, 4, 5 }, { 0, 2, 4 }, { 0, 3 } } );
  CHECK( as_lists( q.sets[1] ) == std::vector<std::vector<class_id>>{ { 1, 3, 5 }, { 1, 4 } } );
  CHECK( as_lists( q.sets[2] ) == std::vector<std::vector<class_id>>{ { 2, 5 } } );

  auto const q4 = partition_q( 4 );
  REQUIRE( q4.sets.size() == 2 );
  CHECK( as_lists( q4.sets[0] ) == std::vector<std::vector<class_id>>{ { 0, 1, 2, 3 }, { 0, 2 } } );
  CHECK( as_lists( q4.sets[1] ) == std::vector<std::vector<class_id>>{ { 1, 3 } } );
}

TEST_CASE( "Q partition groups every cycle of p..p^{n/2} by first element", "[cyclic_perm]" )
{
  for ( std::size_t n = 2; n <= 40; n += 2 )
  {
    auto const q = partition_q( n );
    REQUIRE( q.sets.size() == n / 2 );
    std::size_t total = 0, expected = 0;
    for ( std::size_t j = 1; j <= n / 2; ++j )
    {
      expected += std::gcd( n, j );
    }
    for ( std::size_t i = 0; i < q.sets.size(); ++i )
    {
      for ( auto const& c : q.sets[i] )
      {
        CHECK( c.first() == i );
        ++total;
      }
    }
    CHECK( total == expected );
    // the 2-cycle of p^{n/2} closes every set
    for ( auto const& s : q.sets )
    {
      CHECK( s.back().size() == 2 );
    }
  }
}

TEST_CASE( "invalid arguments", "[cyclic_perm]" )
{
  CHECK_THROWS_AS( power( 1, 1 ), std::invalid_argument );
  CHECK_THROWS_AS( power( 5, 0 ), std::invalid_argument );
  CHECK_THROWS_AS( power( 5, 6 ), std::invalid_argument );
  CHECK_THROWS_AS( partition_q( 7 ), std::invalid_argument );
  CHECK_THROWS_AS( partition_q( 0 ), std::invalid_argument );
}
