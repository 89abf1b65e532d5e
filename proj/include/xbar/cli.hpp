/*!
  \file cli.hpp
  \brief Command-line front end: parsing, dispatch and formatting only

  Exit status: 0 on success, 1 when validation finds violations, 2 on usage
  or input-data errors.
*/

#pragma once

#include "xbar.hpp"

#include <CLI11.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

namespace xbar::cli
{

using big_key = boost::multiprecision::cpp_int;

enum class output_format
{
  text,
  json,
  csv
};

struct run_config
{
  std::string command;
  std::size_t n{ 0 };
  std::string input;
  std::string layout_path;
  std::string slots;
  std::string fanin{ "unbounded" };
  std::string format{ "text" };
  std::string trace_path;
  std::string circuit{ "min" };
  std::string emit_path;
  std::string key;
  std::string method{ "threshold" };
  std::optional<std::size_t> rank;
  std::optional<std::size_t> j;
  std::optional<std::uint64_t> seed;
};

/*! \brief Error carrying the exit status it maps to. */
struct cli_error : std::runtime_error
{
  cli_error( std::string const& msg, int code = 2 )
      : std::runtime_error( msg ), status( code ) {}
  int status;
};

namespace detail
{

inline bool is_decimal( std::string const& s )
{
  static std::regex const re( R"(\s*-?[0-9]+\s*)" );
  return std::regex_match( s, re );
}

inline big_key parse_key( std::string const& s, std::string const& where )
{
  if ( !is_decimal( s ) )
  {
    throw cli_error( where + ": '" + s + "' is not a decimal integer" );
  }
  auto const b = s.find_first_not_of( " \t\r" );
  auto const e = s.find_last_not_of( " \t\r" );
  return big_key( s.substr( b, e - b + 1 ) );
}

/*! Inline comma-separated list, or the path of a one-value-per-line file. */
inline std::vector<big_key> read_values( std::string const& source )
{
  std::vector<big_key> values;
  if ( std::filesystem::is_regular_file( source ) )
  {
    std::ifstream in( source );
    std::string line;
    std::size_t line_no = 0;
    while ( std::getline( in, line ) )
    {
      ++line_no;
      if ( line.find_first_not_of( " \t\r" ) == std::string::npos )
      {
        continue;
      }
      values.push_back( parse_key( line, source + ":" + std::to_string( line_no ) ) );
    }
    return values;
  }
  std::stringstream ss( source );
  std::string tok;
  std::size_t pos = 0;
  while ( std::getline( ss, tok, ',' ) )
  {
    ++pos;
    values.push_back( parse_key( tok, "--input item " + std::to_string( pos ) ) );
  }
  return values;
}

inline std::uint64_t resolve_seed( run_config const& cfg )
{
  if ( cfg.seed )
  {
    return *cfg.seed;
  }
  if ( auto const* env = std::getenv( "XBAR_SEED" ) )
  {
    try
    {
      return std::stoull( env );
    }
    catch ( std::exception const& )
    {
      throw cli_error( "XBAR_SEED: '" + std::string( env ) + "' is not an unsigned integer" );
    }
  }
  return 1;
}

/*! Keys in 0 .. 4n-1 from the raw mt19937_64 stream (portable across standard libraries). */
inline std::vector<big_key> random_values( std::size_t n, std::uint64_t seed )
{
  std::mt19937_64 gen( seed );
  std::vector<big_key> v;
  for ( std::size_t i = 0; i < n; ++i )
  {
    v.emplace_back( gen() % ( 4 * n ) );
  }
  return v;
}

inline std::vector<big_key> input_values( run_config const& cfg )
{
  auto v = cfg.input.empty() ? random_values( cfg.n, resolve_seed( cfg ) ) : read_values( cfg.input );
  if ( v.size() != cfg.n )
  {
    throw cli_error( "--input: expected " + std::to_string( cfg.n ) + " values, got " + std::to_string( v.size() ) );
  }
  return v;
}

inline output_format parse_format( std::string const& f )
{
  if ( f == "text" )
  {
    return output_format::text;
  }
  if ( f == "json" )
  {
    return output_format::json;
  }
  if ( f == "csv" )
  {
    return output_format::csv;
  }
  throw cli_error( "--format: expected json, csv or text, got '" + f + "'" );
}

inline std::optional<std::size_t> parse_fanin( std::string const& f )
{
  if ( f == "unbounded" )
  {
    return std::nullopt;
  }
  try
  {
    std::size_t used = 0;
    auto const b = std::stoul( f, &used );
    if ( used == f.size() && b >= 2 )
    {
      return b;
    }
  }
  catch ( std::exception const& )
  {
  }
  throw cli_error( "--fanin: expected 'unbounded' or an integer >= 2, got '" + f + "'" );
}

inline void require_n( run_config const& cfg )
{
  if ( cfg.n < 2 )
  {
    throw cli_error( "--n: must be at least 2, got " + std::to_string( cfg.n ) );
  }
}

inline std::string join( auto const& range, char const* sep )
{
  std::ostringstream os;
  bool first = true;
  for ( auto const& v : range )
  {
    if ( !first )
    {
      os << sep;
    }
    os << v;
    first = false;
  }
  return os.str();
}

inline json values_json( std::vector<big_key> const& a )
{
  json j = json::array();
  for ( auto const& v : a )
  {
    j.push_back( key_to_json( v ) );
  }
  return j;
}

inline std::string cycle_text( cycle const& c )
{
  return "(" + join( c.elements, "," ) + ")";
}

inline int cmd_build( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  auto const l = build_layout( cfg.n );
  if ( fmt == output_format::json )
  {
    auto j = to_json( l );
    j["pe_count"] = l.pe_count();
    out << j.dump() << '\n';
  }
  else
  {
    out << to_text( l ) << '\n' << "pe_count: " << l.pe_count() << '\n';
  }
  return 0;
}

inline int cmd_validate( run_config const& cfg, std::ostream& out, output_format fmt )
{
  layout l;
  if ( !cfg.layout_path.empty() )
  {
    std::ifstream in( cfg.layout_path );
    if ( !in )
    {
      throw cli_error( "--layout: cannot open '" + cfg.layout_path + "'" );
    }
    try
    {
      l = layout_from_json( json::parse( in ) );
    }
    catch ( std::exception const& e )
    {
      throw cli_error( cfg.layout_path + ": " + e.what() );
    }
  }
  else if ( !cfg.slots.empty() )
  {
    require_n( cfg );
    std::vector<class_id> s;
    std::size_t pos = 0;
    for ( auto const& v : read_values( cfg.slots ) )
    {
      ++pos;
      if ( v < 0 || v > std::numeric_limits<class_id>::max() )
      {
        throw cli_error( "--slots item " + std::to_string( pos ) + ": class id out of range" );
      }
      s.push_back( static_cast<class_id>( v ) );
    }
    l = layout::from_slots( cfg.n, std::move( s ) );
  }
  else
  {
    require_n( cfg );
    l = build_layout( cfg.n );
  }

  auto const r = validate( l );
  if ( fmt == output_format::json )
  {
    out << to_json( r ).dump() << '\n';
  }
  else
  {
    out << "n: " << r.n << '\n'
        << "pe_count: " << r.pe_count << " (minimum " << r.min_pe_count << ")\n"
        << "pairs: " << r.pair_coverage.size() << ", uncovered " << r.uncovered_pairs() << ", redundant " << r.redundant_pairs.size() << '\n'
        << "replicates: " << join( r.replicate_counts, " " ) << '\n';
    for ( auto const& v : r.violations )
    {
      out << "violation: " << v << '\n';
    }
    out << ( r.ok() ? "ok" : "FAILED" ) << '\n';
  }
  return r.ok() ? 0 : 1;
}

inline int cmd_sort( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  auto const a = input_values( cfg );
  auto const l = build_layout( cfg.n );
  auto const res = sort( l, a );
  auto const conflicts = detect_write_conflicts( res.trace );

  if ( !cfg.trace_path.empty() )
  {
    std::ofstream tf( cfg.trace_path );
    if ( !tf )
    {
      throw cli_error( "--trace: cannot write '" + cfg.trace_path + "'" );
    }
    write_trace_jsonl( tf, res.trace );
  }

  if ( fmt == output_format::csv )
  {
    write_trace_csv( out, res.trace );
    return 0;
  }
  if ( fmt == output_format::json )
  {
    json cj = json::array();
    for ( auto const& c : conflicts )
    {
      cj.push_back( to_json( c ) );
    }
    json j{ { "n", cfg.n },
            { "input", values_json( a ) },
            { "layout", to_text( l ) },
            { "T", res.t.rows() },
            { "ranks", res.ranks },
            { "phases", phase_count( res.trace ) },
            { "comparisons", comparison_count( res.trace ) },
            { "key_bits", res.trace.key_bits },
            { "conflicts", std::move( cj ) } };
    out << j.dump() << '\n';
    return 0;
  }
  out << "input: " << join( a, "," ) << '\n'
      << "layout: " << to_text( l ) << '\n'
      << "T:\n"
      << to_grid( res.t ) << "R: " << join( res.ranks, " " ) << '\n'
      << "phases: " << phase_count( res.trace ) << '\n'
      << "comparisons: " << comparison_count( res.trace ) << '\n';
  if ( conflicts.empty() )
  {
    out << "conflicts: none\n";
  }
  for ( auto const& c : conflicts )
  {
    out << "conflict: T[" << c.row << "][" << c.col << "] written by slots " << join( c.writers, "," ) << ( c.benign ? " (benign)" : "" ) << '\n';
  }
  return 0;
}

inline void print_index( std::ostream& out, output_format fmt, char const* what, rank_query_result const& r, std::vector<big_key> const& a )
{
  if ( fmt == output_format::json )
  {
    json j{ { "query", what }, { "index", r.index ? json( *r.index ) : json( nullptr ) }, { "exact", r.exact } };
    if ( r.index )
    {
      j["value"] = key_to_json( a[*r.index] );
    }
    out << j.dump() << '\n';
    return;
  }
  if ( r.index )
  {
    out << "index: " << *r.index << '\n' << "value: " << a[*r.index] << '\n';
  }
  else
  {
    out << "index: none\n";
  }
}

inline int cmd_extreme( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  auto const a = input_values( cfg );
  auto const res = sort( build_layout( cfg.n ), a );
  auto const r = cfg.command == "min" ? query_min( res.t ) : query_max( res.t );
  print_index( out, fmt, cfg.command.c_str(), r, a );
  return 0;
}

inline int cmd_rank( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  auto const a = input_values( cfg );
  auto const res = sort( build_layout( cfg.n ), a );
  if ( cfg.rank )
  {
    if ( *cfg.rank >= cfg.n )
    {
      throw cli_error( "--r: must be in 0.." + std::to_string( cfg.n - 1 ) );
    }
    print_index( out, fmt, "rank", select_rank( res.t, *cfg.rank ), a );
    return 0;
  }
  rank_vector ranks;
  std::optional<depth_report> rep;
  if ( cfg.method == "threshold" )
  {
    ranks = ranks_via_threshold( res.t );
    rep = depth( build_rank_circuit_threshold( cfg.n ) );
  }
  else if ( cfg.method == "adder" )
  {
    auto [r, d] = rank_via_adder_tree( res.t );
    ranks = std::move( r );
    rep = d;
  }
  else
  {
    throw cli_error( "--method: expected threshold or adder, got '" + cfg.method + "'" );
  }
  if ( fmt == output_format::json )
  {
    out << json{ { "method", cfg.method }, { "ranks", ranks }, { "depth", to_json( *rep ) } }.dump() << '\n';
  }
  else
  {
    out << "ranks: " << join( ranks, " " ) << '\n' << "depth: " << rep->depth << " (fanin " << ( rep->fanin_limit ? std::to_string( *rep->fanin_limit ) : "unbounded" ) << ")\n";
  }
  return 0;
}

inline int cmd_search( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  if ( cfg.key.empty() )
  {
    throw cli_error( "--key: required for search" );
  }
  auto const a = input_values( cfg );
  auto const key = parse_key( cfg.key, "--key" );
  print_index( out, fmt, "search", search( build_layout( cfg.n ), a, key ), a );
  return 0;
}

inline netlist circuit_by_name( std::string const& name, std::size_t n )
{
  if ( name == "min" ) return build_min_circuit( n );
  if ( name == "max" ) return build_max_circuit( n );
  if ( name == "threshold-rank" ) return build_rank_circuit_threshold( n );
  if ( name == "row-rank" ) return build_row_rank_threshold( n );
  if ( name == "adder-tree" ) return build_row_sum_adder_tree( n );
  if ( name == "select-rank" ) return build_select_rank_circuit( n );
  if ( name == "search" ) return build_search_encoder( n );
  if ( name == "encoder" ) return build_encoder( n );
  throw cli_error( "--circuit: unknown circuit '" + name + "' (min, max, threshold-rank, row-rank, adder-tree, select-rank, search, encoder)" );
}

inline int cmd_depth( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  auto const fanin = parse_fanin( cfg.fanin );
  auto const nl = circuit_by_name( cfg.circuit, cfg.n );
  if ( !cfg.emit_path.empty() )
  {
    std::ofstream ef( cfg.emit_path );
    if ( !ef )
    {
      throw cli_error( "--emit: cannot write '" + cfg.emit_path + "'" );
    }
    write_netlist( ef, fanin ? legalize( nl, *fanin ) : nl );
  }
  auto const rep = depth( nl, fanin );
  if ( fmt == output_format::json )
  {
    auto j = json{ { "circuit", cfg.circuit }, { "n", cfg.n } };
    j.update( to_json( rep ) );
    out << j.dump() << '\n';
  }
  else
  {
    out << "circuit: " << cfg.circuit << '\n'
        << "n: " << cfg.n << '\n'
        << "fanin: " << ( fanin ? std::to_string( *fanin ) : "unbounded" ) << '\n'
        << "depth: " << rep.depth << '\n'
        << "gates: " << rep.gate_count << '\n'
        << "threshold_gates: " << rep.threshold_gates << " (max fan-in " << rep.max_threshold_fanin << ")\n";
  }
  return 0;
}

inline int cmd_perm( run_config const& cfg, std::ostream& out, output_format fmt )
{
  require_n( cfg );
  std::vector<std::size_t> exps;
  if ( cfg.j )
  {
    if ( *cfg.j < 1 || *cfg.j > cfg.n )
    {
      throw cli_error( "--j: must be in 1.." + std::to_string( cfg.n ) );
    }
    exps.push_back( *cfg.j );
  }
  else
  {
    for ( std::size_t j = 1; j < cfg.n; ++j )
    {
      exps.push_back( j );
    }
  }
  std::optional<q_partition> q;
  if ( cfg.n % 2 == 0 && !cfg.j )
  {
    q = partition_q( cfg.n );
  }

  if ( fmt == output_format::json )
  {
    json powers = json::array();
    for ( auto j : exps )
    {
      json cycles = json::array();
      for ( auto const& c : cycle_decomposition( power( cfg.n, j ) ) )
      {
        cycles.push_back( c.elements );
      }
      powers.push_back( { { "j", j }, { "cycles", std::move( cycles ) } } );
    }
    json doc{ { "n", cfg.n }, { "powers", std::move( powers ) } };
    if ( q )
    {
      json sets = json::array();
      for ( auto const& s : q->sets )
      {
        json cs = json::array();
        for ( auto const& c : s )
        {
          cs.push_back( c.elements );
        }
        sets.push_back( std::move( cs ) );
      }
      doc["q_partition"] = std::move( sets );
    }
    out << doc.dump() << '\n';
    return 0;
  }
  for ( auto j : exps )
  {
    out << "p^" << j << " =";
    for ( auto const& c : cycle_decomposition( power( cfg.n, j ) ) )
    {
      out << ' ' << cycle_text( c );
    }
    out << '\n';
  }
  if ( q )
  {
    for ( std::size_t i = 0; i < q->sets.size(); ++i )
    {
      std::vector<std::string> parts;
      for ( auto const& c : q->sets[i] )
      {
        parts.push_back( cycle_text( c ) );
      }
      out << "Q_" << i << " = {" << join( parts, ", " ) << "}\n";
    }
  }
  return 0;
}

} // namespace detail

/*! \brief Dispatches one parsed command; throws cli_error for usage and data problems. */
inline int run( run_config const& cfg, std::ostream& out )
{
  auto const fmt = detail::parse_format( cfg.format );
  if ( cfg.command == "build" ) return detail::cmd_build( cfg, out, fmt );
  if ( cfg.command == "validate" ) return detail::cmd_validate( cfg, out, fmt );
  if ( cfg.command == "sort" ) return detail::cmd_sort( cfg, out, fmt );
  if ( cfg.command == "min" || cfg.command == "max" ) return detail::cmd_extreme( cfg, out, fmt );
  if ( cfg.command == "rank" ) return detail::cmd_rank( cfg, out, fmt );
  if ( cfg.command == "search" ) return detail::cmd_search( cfg, out, fmt );
  if ( cfg.command == "depth" ) return detail::cmd_depth( cfg, out, fmt );
  if ( cfg.command == "perm" ) return detail::cmd_perm( cfg, out, fmt );
  throw cli_error( "unknown command '" + cfg.command + "'" );
}

/*! \brief Parses argv-style arguments (without the program name) and runs them. */
inline int run_cli( std::vector<std::string> args, std::ostream& out, std::ostream& err )
{
  run_config cfg;
  CLI::App app{ "1D crosspoint array construction, enumeration-sort simulation and query circuits", "xbar" };
  app.require_subcommand( 1 );

  auto add_n = [&]( CLI::App* sub, bool required ) {
    auto* o = sub->add_option( "--n", cfg.n, "number of classes" );
    if ( required )
    {
      o->required();
    }
  };
  auto add_format = [&]( CLI::App* sub ) { sub->add_option( "--format", cfg.format, "json, csv or text" ); };
  auto add_input = [&]( CLI::App* sub ) {
    sub->add_option( "--input", cfg.input, "comma-separated integers or a file with one integer per line (random when omitted)" );
    sub->add_option( "--seed", cfg.seed, "seed for random input (falls back to XBAR_SEED)" );
  };

  auto* build = app.add_subcommand( "build", "print the optimal layout for n classes" );
  add_n( build, true );
  add_format( build );

  auto* val = app.add_subcommand( "validate", "check coverage and bounds of a layout" );
  add_n( val, false );
  val->add_option( "--layout", cfg.layout_path, "layout JSON file" );
  val->add_option( "--slots", cfg.slots, "inline slot list, e.g. 0,1,2,0" );
  add_format( val );

  auto* srt = app.add_subcommand( "sort", "simulate the enumeration sort" );
  add_n( srt, true );
  add_input( srt );
  add_format( srt );
  srt->add_option( "--trace", cfg.trace_path, "write the JSON-lines trace here" );

  for ( auto const* name : { "min", "max" } )
  {
    auto* sub = app.add_subcommand( name, std::string( "index of the " ) + ( name[1] == 'i' ? "minimum" : "maximum" ) + " via its gate circuit" );
    add_n( sub, true );
    add_input( sub );
    add_format( sub );
  }

  auto* rnk = app.add_subcommand( "rank", "ranks via the threshold or adder-tree circuit, or select rank --r" );
  add_n( rnk, true );
  add_input( rnk );
  add_format( rnk );
  rnk->add_option( "--r", cfg.rank, "select the element with this many smaller elements" );
  rnk->add_option( "--method", cfg.method, "threshold or adder" );

  auto* srch = app.add_subcommand( "search", "smallest index holding --key" );
  add_n( srch, true );
  add_input( srch );
  add_format( srch );
  srch->add_option( "--key", cfg.key, "value to look for" )->required();

  auto* dep = app.add_subcommand( "depth", "gate depth of a query circuit" );
  add_n( dep, true );
  add_format( dep );
  dep->add_option( "--circuit", cfg.circuit, "min, max, threshold-rank, row-rank, adder-tree, select-rank, search, encoder" );
  dep->add_option( "--fanin", cfg.fanin, "unbounded or an integer b >= 2" );
  dep->add_option( "--emit", cfg.emit_path, "write the (legalized) netlist here" );

  auto* prm = app.add_subcommand( "perm", "cycle decompositions of p^j and the Q partition" );
  add_n( prm, true );
  add_format( prm );
  prm->add_option( "--j", cfg.j, "single exponent" );

  std::reverse( args.begin(), args.end() );
  try
  {
    app.parse( args );
  }
  catch ( CLI::CallForHelp const& )
  {
    out << app.help();
    return 0;
  }
  catch ( CLI::CallForAllHelp const& )
  {
    out << app.help( "", CLI::AppFormatMode::All );
    return 0;
  }
  catch ( CLI::ParseError const& e )
  {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  try
  {
    return run( cfg, out );
  }
  catch ( cli_error const& e )
  {
    err << "error: " << e.what() << '\n';
    return e.status;
  }
  catch ( std::invalid_argument const& e )
  {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

} // namespace xbar::cli
