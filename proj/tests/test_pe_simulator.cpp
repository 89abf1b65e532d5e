#include <catch2/catch_amalgamated.hpp>

#include <xbar/array_builder.hpp>
#include <xbar/pe_simulator.hpp>

#include "oracles.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <set>
#include <string>

using namespace xbar;

TEST_CASE( "four-element golden run", "[pe_simulator]" )
{
  std::vector<int> const a{ 6, 7, 8, 5 };
  auto const res = sort( build_layout( 4 ), a );
  CHECK( res.t.rows() == std::vector<std::vector<int>>{ { 0, 0, 0, 1 }, { 1, 0, 0, 1 }, { 1, 1, 0, 1 }, { 0, 0, 0, 0 } } );
  CHECK( res.ranks == rank_vector{ 1, 2, 3, 0 } );
}

TEST_CASE( "five-element golden run", "[pe_simulator]" )
{
  std::vector<int> const a{ 8, 6, 9, 5, 7 };
  auto const res = sort( build_layout( 5 ), a );
  CHECK( res.t.rows() == std::vector<std::vector<int>>{ { 0, 1, 0, 1, 1 }, { 0, 0, 0, 1, 0 }, { 1, 1, 0, 1, 1 }, { 0, 0, 0, 0, 0 }, { 0, 1, 0, 1, 0 } } );
  CHECK( res.ranks == rank_vector{ 3, 1, 4, 0, 2 } );
  CHECK( detect_write_conflicts( res.trace ).empty() );
}

TEST_CASE( "ties break towards the smaller index", "[pe_simulator]" )
{
  std::vector<int> const a{ 3, 3, 3 };
  auto const res = sort( build_layout( 3 ), a );
  CHECK( res.ranks == rank_vector{ 0, 1, 2 } );
  CHECK( res.t.at( 1, 0 ) );
  CHECK_FALSE( res.t.at( 0, 1 ) );
}

TEST_CASE( "n = 2 and negative keys", "[pe_simulator]" )
{
  std::vector<long> const a{ -4, -9 };
  auto const res = sort( build_layout( 2 ), a );
  CHECK( res.ranks == rank_vector{ 1, 0 } );
}

TEST_CASE( "random arrays agree with the counting oracle", "[pe_simulator]" )
{
  std::mt19937_64 gen( 20261016 );
  for ( int trial = 0; trial < 300; ++trial )
  {
    auto const n = 2 + gen() % 30;
    auto const a = oracle::random_array( gen, n, trial % 2 ? 5 : 1000 );
    auto const res = sort( build_layout( n ), a );
    INFO( "n = " << n << " trial " << trial );
    REQUIRE( res.ranks == oracle::ranks( a ) );
    REQUIRE( res.t.rows() == oracle::t_matrix( a ) );
    // ranks form a permutation of 0..n-1
    std::set<std::size_t> seen( res.ranks.begin(), res.ranks.end() );
    CHECK( seen.size() == n );
  }
}

TEST_CASE( "arbitrary-precision keys", "[pe_simulator]" )
{
  using boost::multiprecision::cpp_int;
  std::vector<cpp_int> const a{ cpp_int( "123456789012345678901234567890" ), cpp_int( -1 ), cpp_int( "123456789012345678901234567889" ) };
  auto const res = sort( build_layout( 3 ), a );
  CHECK( res.ranks == rank_vector{ 2, 0, 1 } );
  CHECK( res.trace.key_bits >= 96 );
}

TEST_CASE( "phase structure is fixed", "[pe_simulator]" )
{
  std::vector<std::string> const names{ "clear", "load", "left_exchange", "left_reply", "right_exchange", "right_reply", "rank" };
  for ( std::size_t n = 2; n <= 24; ++n )
  {
    std::vector<int> a( n );
    std::iota( a.begin(), a.end(), 0 );
    auto const res = sort( build_layout( n ), a );
    REQUIRE( phase_count( res.trace ) == names.size() );
    for ( std::size_t p = 0; p < names.size(); ++p )
    {
      CHECK( res.trace.phases[p].name == names[p] );
    }
    auto const crosspoints = build_layout( n ).crosspoint_count();
    CHECK( comparison_count( res.trace ) == crosspoints );
  }
}

TEST_CASE( "write conflicts: none for odd n, n/2-1 benign for even n", "[pe_simulator]" )
{
  std::mt19937_64 gen( 7 );
  for ( std::size_t n = 3; n <= 30; ++n )
  {
    auto const a = oracle::random_array( gen, n, 10 );
    auto const res = sort( build_layout( n ), a );
    auto const c = detect_write_conflicts( res.trace );
    INFO( "n = " << n );
    CHECK( c.size() == ( n % 2 ? 0 : n / 2 - 1 ) );
    for ( auto const& w : c )
    {
      CHECK( w.benign );
      CHECK( w.writers.size() == 2 );
    }
  }
}

TEST_CASE( "load phase places A[i] on every replicate", "[pe_simulator]" )
{
  auto const l = build_layout( 5 );
  std::vector<int> const a{ 10, 11, 12, 13, 14 };
  auto const st = load_phase( l, std::span<const int>( a ) );
  for ( std::size_t k = 0; k < l.slots.size(); ++k )
  {
    CHECK( st.slot_values[k] == a[l.slots[k]] );
  }
  CHECK( st.trace.phases.size() == 2 );
}

TEST_CASE( "rank_phase sums rows", "[pe_simulator]" )
{
  auto const t = comparison_matrix::from_rows( { { 0, 1, 1 }, { 0, 0, 0 }, { 0, 1, 0 } } );
  CHECK( rank_phase( t ) == rank_vector{ 2, 0, 1 } );
  CHECK_THROWS_AS( comparison_matrix::from_rows( { { 0, 1 }, { 0 } } ), std::invalid_argument );
}

TEST_CASE( "simulator argument checks", "[pe_simulator]" )
{
  std::vector<int> const three{ 1, 2, 3 };
  CHECK_THROWS_AS( sort( build_layout( 4 ), three ), std::invalid_argument );
  CHECK_THROWS_AS( sort( layout::from_slots( 3, { 0, 1, 2 } ), three ), std::invalid_argument );
}
