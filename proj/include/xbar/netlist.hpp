/*!
  \file netlist.hpp
  \brief Combinational gate netlists with evaluation and fan-in aware depth analysis
*/

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace xbar
{

using wire = std::uint32_t;

enum class gate_kind
{
  input,
  const0,
  const1,
  not_,
  and_,
  or_,
  nor_,
  xor_,
  threshold ///< 1 iff at least `param` inputs are 1
};

inline char const* to_string( gate_kind k )
{
  switch ( k )
  {
  case gate_kind::input: return "INPUT";
  case gate_kind::const0: return "CONST0";
  case gate_kind::const1: return "CONST1";
  case gate_kind::not_: return "NOT";
  case gate_kind::and_: return "AND";
  case gate_kind::or_: return "OR";
  case gate_kind::nor_: return "NOR";
  case gate_kind::xor_: return "XOR";
  case gate_kind::threshold: return "THRESHOLD";
  }
  return "?";
}

inline std::optional<gate_kind> gate_kind_from_string( std::string const& s )
{
  for ( auto k : { gate_kind::const0, gate_kind::const1, gate_kind::not_, gate_kind::and_, gate_kind::or_, gate_kind::nor_, gate_kind::xor_, gate_kind::threshold } )
  {
    if ( s == to_string( k ) )
    {
      return k;
    }
  }
  return std::nullopt;
}

struct node
{
  gate_kind kind{ gate_kind::input };
  std::uint32_t param{ 0 };
  std::vector<wire> fanin;
};

/*! \brief Directed acyclic network of gates.
 *
 * Every node drives exactly one wire whose id is the node index.  Gates may
 * only read wires created before them, so node order is a topological order
 * and cycles cannot be built.
 */
class netlist
{
public:
  wire add_input( std::string name )
  {
    auto const w = static_cast<wire>( nodes_.size() );
    nodes_.push_back( { gate_kind::input, 0, {} } );
    inputs_.push_back( w );
    input_names_.push_back( std::move( name ) );
    return w;
  }

  wire add_gate( gate_kind kind, std::vector<wire> fanin, std::uint32_t param = 0 )
  {
    if ( kind == gate_kind::input )
    {
      throw std::invalid_argument( "netlist: use add_input for primary inputs" );
    }
    auto const w = static_cast<wire>( nodes_.size() );
    for ( auto f : fanin )
    {
      if ( f >= w )
      {
        throw std::invalid_argument( "netlist: gate input " + std::to_string( f ) + " is not an earlier wire" );
      }
    }
    switch ( kind )
    {
    case gate_kind::const0:
    case gate_kind::const1:
      if ( !fanin.empty() )
      {
        throw std::invalid_argument( "netlist: constants take no inputs" );
      }
      break;
    case gate_kind::not_:
      if ( fanin.size() != 1 )
      {
        throw std::invalid_argument( "netlist: NOT takes exactly one input" );
      }
      break;
    case gate_kind::threshold:
      break;
    default:
      if ( fanin.empty() )
      {
        throw std::invalid_argument( std::string( "netlist: " ) + to_string( kind ) + " needs at least one input" );
      }
    }
    nodes_.push_back( { kind, param, std::move( fanin ) } );
    return w;
  }

  wire constant( bool value )
  {
    auto& cached = value ? const1_ : const0_;
    if ( !cached )
    {
      cached = add_gate( value ? gate_kind::const1 : gate_kind::const0, {} );
    }
    return *cached;
  }

  void add_output( wire w, std::string name )
  {
    if ( w >= nodes_.size() )
    {
      throw std::invalid_argument( "netlist: output wire does not exist" );
    }
    outputs_.push_back( w );
    output_names_.push_back( std::move( name ) );
  }

  std::size_t size() const noexcept { return nodes_.size(); }
  node const& at( wire w ) const { return nodes_.at( w ); }
  std::span<const node> nodes() const noexcept { return nodes_; }
  std::span<const wire> inputs() const noexcept { return inputs_; }
  std::span<const wire> outputs() const noexcept { return outputs_; }
  std::string const& input_name( std::size_t i ) const { return input_names_.at( i ); }
  std::string const& output_name( std::size_t i ) const { return output_names_.at( i ); }
  std::size_t num_inputs() const noexcept { return inputs_.size(); }
  std::size_t num_outputs() const noexcept { return outputs_.size(); }

  std::size_t gate_count() const
  {
    return static_cast<std::size_t>( std::count_if( nodes_.begin(), nodes_.end(), []( node const& n ) {
      return n.kind != gate_kind::input && n.kind != gate_kind::const0 && n.kind != gate_kind::const1;
    } ) );
  }

  /*! \brief Values of every wire for one assignment of the primary inputs. */
  std::vector<std::uint8_t> simulate( std::span<const std::uint8_t> input_values ) const
  {
    if ( input_values.size() != inputs_.size() )
    {
      throw std::invalid_argument( "netlist: expected " + std::to_string( inputs_.size() ) + " input values, got " + std::to_string( input_values.size() ) );
    }
    std::vector<std::uint8_t> v( nodes_.size(), 0 );
    std::size_t next_input = 0;
    for ( std::size_t w = 0; w < nodes_.size(); ++w )
    {
      auto const& nd = nodes_[w];
      auto ones = [&] {
        std::size_t c = 0;
        for ( auto f : nd.fanin )
        {
          c += v[f];
        }
        return c;
      };
      switch ( nd.kind )
      {
      case gate_kind::input: v[w] = input_values[next_input++] ? 1 : 0; break;
      case gate_kind::const0: v[w] = 0; break;
      case gate_kind::const1: v[w] = 1; break;
      case gate_kind::not_: v[w] = v[nd.fanin[0]] ? 0 : 1; break;
      case gate_kind::and_: v[w] = ones() == nd.fanin.size() ? 1 : 0; break;
      case gate_kind::or_: v[w] = ones() > 0 ? 1 : 0; break;
      case gate_kind::nor_: v[w] = ones() == 0 ? 1 : 0; break;
      case gate_kind::xor_: v[w] = static_cast<std::uint8_t>( ones() & 1u ); break;
      case gate_kind::threshold: v[w] = ones() >= nd.param ? 1 : 0; break;
      }
    }
    return v;
  }

  /*! \brief Primary output values, in output order. */
  std::vector<std::uint8_t> evaluate( std::span<const std::uint8_t> input_values ) const
  {
    auto const v = simulate( input_values );
    std::vector<std::uint8_t> out;
    out.reserve( outputs_.size() );
    for ( auto w : outputs_ )
    {
      out.push_back( v[w] );
    }
    return out;
  }

  std::vector<std::uint8_t> evaluate( std::vector<std::uint8_t> const& input_values ) const
  {
    return evaluate( std::span<const std::uint8_t>( input_values ) );
  }

private:
  std::vector<node> nodes_;
  std::vector<wire> inputs_;
  std::vector<std::string> input_names_;
  std::vector<wire> outputs_;
  std::vector<std::string> output_names_;
  std::optional<wire> const0_;
  std::optional<wire> const1_;
};

/*! \brief Replaces every gate wider than `max_fanin` by a balanced tree of
 *         `max_fanin`-input gates computing the same function.
 *
 * AND, OR and XOR trees use the same kind throughout; a wide NOR becomes an
 * OR tree under a NOR root.  THRESHOLD gates are copied unchanged.
 */
inline netlist legalize( netlist const& src, std::size_t max_fanin )
{
  if ( max_fanin < 2 )
  {
    throw std::invalid_argument( "legalize: fan-in limit must be at least 2" );
  }
  netlist dst;
  std::vector<wire> map( src.size() );
  std::size_t next_input = 0;

  auto reduce = [&]( gate_kind inner, gate_kind root, std::vector<wire> level ) {
    while ( level.size() > max_fanin )
    {
      std::vector<wire> next;
      for ( std::size_t k = 0; k < level.size(); k += max_fanin )
      {
        auto const end = std::min( level.size(), k + max_fanin );
        if ( end - k == 1 )
        {
          next.push_back( level[k] );
        }
        else
        {
          next.push_back( dst.add_gate( inner, std::vector<wire>( level.begin() + k, level.begin() + end ) ) );
        }
      }
      level = std::move( next );
    }
    return dst.add_gate( root, std::move( level ) );
  };

  for ( std::size_t w = 0; w < src.size(); ++w )
  {
    auto const& nd = src.at( static_cast<wire>( w ) );
    if ( nd.kind == gate_kind::input )
    {
      map[w] = dst.add_input( src.input_name( next_input++ ) );
      continue;
    }
    std::vector<wire> fanin;
    fanin.reserve( nd.fanin.size() );
    for ( auto f : nd.fanin )
    {
      fanin.push_back( map[f] );
    }
    if ( fanin.size() <= max_fanin || nd.kind == gate_kind::threshold )
    {
      map[w] = dst.add_gate( nd.kind, std::move( fanin ), nd.param );
      continue;
    }
    auto const inner = nd.kind == gate_kind::nor_ ? gate_kind::or_ : nd.kind;
    map[w] = reduce( inner, nd.kind, std::move( fanin ) );
  }
  for ( std::size_t o = 0; o < src.num_outputs(); ++o )
  {
    dst.add_output( map[src.outputs()[o]], src.output_name( o ) );
  }
  return dst;
}

/*! \brief Result of a depth measurement. */
struct depth_report
{
  std::optional<std::size_t> fanin_limit; ///< empty = unbounded
  std::size_t depth{ 0 };
  std::size_t gate_count{ 0 };
  /*! threshold gates are never legalized; their widest fan-in shows how optimistic unit delay is */
  std::size_t threshold_gates{ 0 };
  std::size_t max_threshold_fanin{ 0 };
  std::size_t max_fanin{ 0 };
};

/*! \brief Longest input-to-output path in gate levels after fan-in legalization.
 *
 * Inputs and constants sit at level 0; every other gate adds one level.
 */
inline depth_report depth( netlist const& nl, std::optional<std::size_t> fanin_limit = std::nullopt )
{
  auto const legal = fanin_limit ? legalize( nl, *fanin_limit ) : nl;
  depth_report r;
  r.fanin_limit = fanin_limit;
  r.gate_count = legal.gate_count();

  std::vector<std::size_t> level( legal.size(), 0 );
  for ( std::size_t w = 0; w < legal.size(); ++w )
  {
    auto const& nd = legal.at( static_cast<wire>( w ) );
    if ( nd.kind == gate_kind::input || nd.kind == gate_kind::const0 || nd.kind == gate_kind::const1 )
    {
      continue;
    }
    std::size_t l = 0;
    for ( auto f : nd.fanin )
    {
      l = std::max( l, level[f] );
    }
    level[w] = l + 1;
    r.max_fanin = std::max( r.max_fanin, nd.fanin.size() );
    if ( nd.kind == gate_kind::threshold )
    {
      ++r.threshold_gates;
      r.max_threshold_fanin = std::max( r.max_threshold_fanin, nd.fanin.size() );
    }
  }
  for ( auto o : legal.outputs() )
  {
    r.depth = std::max( r.depth, level[o] );
  }
  return r;
}

/*! \brief Structural text form, one line per item:
 *
 *     input w0 t0_1
 *     w5 NOR <- w0,w1,w2
 *     w9 THRESHOLD[3] <- w0,w1,w2,w3
 *     output w9 rank0[0]
 */
inline void write_netlist( std::ostream& os, netlist const& nl )
{
  std::size_t next_input = 0;
  for ( std::size_t w = 0; w < nl.size(); ++w )
  {
    auto const& nd = nl.at( static_cast<wire>( w ) );
    if ( nd.kind == gate_kind::input )
    {
      os << "input w" << w << ' ' << nl.input_name( next_input++ ) << '\n';
      continue;
    }
    os << 'w' << w << ' ' << to_string( nd.kind );
    if ( nd.kind == gate_kind::threshold )
    {
      os << '[' << nd.param << ']';
    }
    os << " <-";
    for ( std::size_t k = 0; k < nd.fanin.size(); ++k )
    {
      os << ( k ? "," : " " ) << 'w' << nd.fanin[k];
    }
    os << '\n';
  }
  for ( std::size_t o = 0; o < nl.num_outputs(); ++o )
  {
    os << "output w" << nl.outputs()[o] << ' ' << nl.output_name( o ) << '\n';
  }
}

inline std::string to_text( netlist const& nl )
{
  std::ostringstream os;
  write_netlist( os, nl );
  return os.str();
}

/*! \brief Parses the structural text form; errors name the offending line. */
inline netlist read_netlist( std::istream& is )
{
  netlist nl;
  std::unordered_map<std::string, wire> ids;
  std::string line;
  std::size_t line_no = 0;

  auto fail = [&]( std::string const& msg ) {
    throw std::runtime_error( "netlist line " + std::to_string( line_no ) + ": " + msg );
  };
  auto lookup = [&]( std::string const& name ) {
    auto it = ids.find( name );
    if ( it == ids.end() )
    {
      fail( "unknown wire '" + name + "'" );
    }
    return it->second;
  };

  while ( std::getline( is, line ) )
  {
    ++line_no;
    if ( line.empty() || line[0] == '#' )
    {
      continue;
    }
    std::istringstream ls( line );
    std::string first;
    ls >> first;
    if ( first == "input" || first == "output" )
    {
      std::string id, name;
      if ( !( ls >> id >> name ) )
      {
        fail( "expected '" + first + " <wire> <name>'" );
      }
      if ( first == "input" )
      {
        if ( ids.contains( id ) )
        {
          fail( "wire '" + id + "' defined twice" );
        }
        ids[id] = nl.add_input( name );
      }
      else
      {
        nl.add_output( lookup( id ), name );
      }
      continue;
    }

    std::string kind_text, arrow, fanin_text;
    if ( !( ls >> kind_text >> arrow ) || arrow != "<-" )
    {
      fail( "expected '<wire> KIND <- inputs'" );
    }
    ls >> fanin_text;
    std::uint32_t param = 0;
    if ( auto const lb = kind_text.find( '[' ); lb != std::string::npos )
    {
      if ( kind_text.back() != ']' )
      {
        fail( "malformed gate parameter" );
      }
      try
      {
        param = static_cast<std::uint32_t>( std::stoul( kind_text.substr( lb + 1, kind_text.size() - lb - 2 ) ) );
      }
      catch ( std::exception const& )
      {
        fail( "malformed gate parameter" );
      }
      kind_text = kind_text.substr( 0, lb );
    }
    auto const kind = gate_kind_from_string( kind_text );
    if ( !kind )
    {
      fail( "unknown gate kind '" + kind_text + "'" );
    }
    std::vector<wire> fanin;
    std::istringstream fs( fanin_text );
    for ( std::string tok; std::getline( fs, tok, ',' ); )
    {
      if ( !tok.empty() )
      {
        fanin.push_back( lookup( tok ) );
      }
    }
    if ( ids.contains( first ) )
    {
      fail( "wire '" + first + "' defined twice" );
    }
    try
    {
      ids[first] = nl.add_gate( *kind, std::move( fanin ), param );
    }
    catch ( std::invalid_argument const& e )
    {
      fail( e.what() );
    }
  }
  return nl;
}

} // namespace xbar
