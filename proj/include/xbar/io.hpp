/*!
  \file io.hpp
  \brief JSON, JSON-lines, CSV and text-grid forms of layouts, reports, traces and matrices
*/

#pragma once

#include "array_builder.hpp"
#include "netlist.hpp"
#include "pe_simulator.hpp"

#include <json.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <concepts>
#include <cstdint>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

namespace xbar
{

using json = nlohmann::ordered_json;

/*! \brief Keys print as JSON numbers when they fit in 64 bits, otherwise as decimal strings. */
template<std::integral K>
json key_to_json( K v )
{
  return v;
}

inline json key_to_json( boost::multiprecision::cpp_int const& v )
{
  if ( v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max() )
  {
    return static_cast<std::int64_t>( v );
  }
  return v.str();
}

template<class K>
std::string key_to_string( K const& v )
{
  std::ostringstream os;
  os << v;
  return os.str();
}

inline char const* to_string( slot_origin::kind_t k )
{
  switch ( k )
  {
  case slot_origin::kind_t::cycle: return "cycle";
  case slot_origin::kind_t::odd_fill: return "odd_fill";
  case slot_origin::kind_t::odd_tail: return "odd_tail";
  case slot_origin::kind_t::pair: return "pair";
  case slot_origin::kind_t::user: return "user";
  }
  return "?";
}

inline json to_json( layout const& l )
{
  json prov = json::array();
  for ( auto const& p : l.provenance )
  {
    json e{ { "kind", to_string( p.kind ) } };
    if ( p.kind == slot_origin::kind_t::cycle )
    {
      e["q"] = p.q_set;
      e["cycle"] = p.cycle_index;
      e["element"] = p.element_index;
      if ( p.block_start )
      {
        e["block_start"] = true;
      }
    }
    else if ( p.kind == slot_origin::kind_t::odd_fill )
    {
      e["before_q"] = p.q_set;
    }
    prov.push_back( std::move( e ) );
  }
  return json{ { "n", l.n }, { "slots", l.slots }, { "provenance", std::move( prov ) } };
}

/*! \brief Reads {"n": .., "slots": [..]}; provenance, if present, is ignored. */
inline layout layout_from_json( json const& j )
{
  if ( !j.is_object() || !j.contains( "n" ) || !j.contains( "slots" ) )
  {
    throw std::invalid_argument( "layout JSON needs \"n\" and \"slots\"" );
  }
  return layout::from_slots( j.at( "n" ).get<std::size_t>(), j.at( "slots" ).get<std::vector<class_id>>() );
}

inline json to_json( validation_report const& r )
{
  json coverage = json::array();
  for ( auto const& [pair, count] : r.pair_coverage )
  {
    coverage.push_back( { pair.first, pair.second, count } );
  }
  json redundant = json::array();
  for ( auto const& p : r.redundant_pairs )
  {
    redundant.push_back( { p.first, p.second } );
  }
  return json{
      { "n", r.n },
      { "pe_count", r.pe_count },
      { "min_pe_count", r.min_pe_count },
      { "pair_coverage", std::move( coverage ) },
      { "redundant_pairs", std::move( redundant ) },
      { "replicate_counts", r.replicate_counts },
      { "end_classes", { r.end_classes.first, r.end_classes.second } },
      { "violations", r.violations },
      { "ok", r.ok() } };
}

inline json to_json( depth_report const& r )
{
  json j{ { "fanin", r.fanin_limit ? json( *r.fanin_limit ) : json( "unbounded" ) },
          { "depth", r.depth },
          { "gate_count", r.gate_count },
          { "max_fanin", r.max_fanin },
          { "threshold_gates", r.threshold_gates },
          { "max_threshold_fanin", r.max_threshold_fanin } };
  return j;
}

inline json to_json( write_conflict const& c )
{
  return json{ { "row", c.row }, { "col", c.col }, { "writers", c.writers }, { "phases", c.phases }, { "benign", c.benign } };
}

/*! \brief Row-per-line 0/1 grid, e.g. "0001\n1001\n". */
inline std::string to_grid( comparison_matrix const& t )
{
  std::string s;
  for ( std::size_t i = 0; i < t.size(); ++i )
  {
    for ( std::size_t k = 0; k < t.size(); ++k )
    {
      s += t.at( i, k ) ? '1' : '0';
    }
    s += '\n';
  }
  return s;
}

template<class Key>
json to_json( trace_event<Key> const& e, std::size_t phase_index, std::string const& phase_name )
{
  json j{ { "phase", phase_index }, { "phase_name", phase_name }, { "slot", e.slot }, { "action", to_string( e.action ) } };
  if ( e.dir != port::none )
  {
    j["dir"] = to_string( e.dir );
  }
  if ( e.peer )
  {
    j["peer"] = *e.peer;
  }
  if ( e.value )
  {
    j["value"] = key_to_json( *e.value );
  }
  if ( e.bit )
  {
    j["bit"] = *e.bit;
  }
  if ( e.row )
  {
    j["row"] = *e.row;
  }
  if ( e.col )
  {
    j["col"] = *e.col;
  }
  if ( e.rank )
  {
    j["rank"] = *e.rank;
  }
  return j;
}

/*! \brief One JSON object per line, one line per event. */
template<class Key>
void write_trace_jsonl( std::ostream& os, sort_trace<Key> const& trace )
{
  for ( std::size_t p = 0; p < trace.phases.size(); ++p )
  {
    for ( auto const& e : trace.phases[p].events )
    {
      os << to_json( e, p, trace.phases[p].name ).dump() << '\n';
    }
  }
}

/*! \brief Compact CSV with a fixed column set; empty fields for absent payload. */
template<class Key>
void write_trace_csv( std::ostream& os, sort_trace<Key> const& trace )
{
  os << "phase,phase_name,slot,action,dir,peer,value,bit,row,col,rank\n";
  auto opt = []( auto const& o ) { return o ? std::to_string( *o ) : std::string(); };
  for ( std::size_t p = 0; p < trace.phases.size(); ++p )
  {
    for ( auto const& e : trace.phases[p].events )
    {
      os << p << ',' << trace.phases[p].name << ',' << e.slot << ',' << to_string( e.action ) << ',' << to_string( e.dir ) << ','
         << opt( e.peer ) << ',' << ( e.value ? key_to_string( *e.value ) : std::string() ) << ',' << opt( e.bit ) << ','
         << opt( e.row ) << ',' << opt( e.col ) << ',' << opt( e.rank ) << '\n';
    }
  }
}

} // namespace xbar
