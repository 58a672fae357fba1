#pragma once

#include "flowequiv/expr.hpp"
#include "flowequiv/value.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace fe
{

enum class parity : std::uint8_t
{
    even,
    odd,
};

using latch_id = std::uint32_t;

// Latch identity is (parity, name). Names are unique across both parities.
struct latch
{
    parity par;
    std::string name;

    [[nodiscard]] bool is_even() const { return par == parity::even; }
    [[nodiscard]] bool is_odd() const { return par == parity::odd; }

    friend bool operator==( const latch&, const latch& ) = default;
};

// (left, right): data flows from the left latch to the right latch.
struct neighbor_pair
{
    latch_id left;
    latch_id right;

    friend bool operator==( const neighbor_pair&, const neighbor_pair& ) = default;
};

// Total mapping latch -> value, indexed by latch_id of a fixed circuit.
using latch_state = std::vector< value >;

class unknown_latch : public std::out_of_range
{
public:
    explicit unknown_latch( const std::string& name )
            : std::out_of_range{ "unknown latch '" + name + "'" }
    {}
};

// A closed latch-based circuit. Latch ids are dense: evens first, then odds,
// each in declaration order. Instances are immutable once built; use
// build_circuit (netlist.hpp) to construct and validate one.
class circuit
{
    std::vector< latch > _latches;
    std::vector< latch_id > _evens;
    std::vector< latch_id > _odds;
    std::vector< neighbor_pair > _even_odd;
    std::vector< neighbor_pair > _odd_even;
    std::vector< expr > _next_state;
    std::vector< std::vector< latch_id > > _left;
    std::vector< std::vector< latch_id > > _right;
    std::unordered_map< std::string, latch_id > _by_name;

public:
    // Assembles a circuit from already-validated parts. Expression references
    // must already be resolved to latch ids.
    circuit( std::vector< latch > latches, std::vector< neighbor_pair > even_odd,
             std::vector< neighbor_pair > odd_even, std::vector< expr > next_state );

    [[nodiscard]] std::size_t size() const { return _latches.size(); }
    [[nodiscard]] const latch& at( latch_id id ) const { return _latches.at( id ); }
    [[nodiscard]] const std::string& name( latch_id id ) const { return _latches.at( id ).name; }
    [[nodiscard]] bool is_even( latch_id id ) const { return _latches.at( id ).is_even(); }
    [[nodiscard]] bool is_odd( latch_id id ) const { return _latches.at( id ).is_odd(); }

    [[nodiscard]] std::optional< latch_id > find( std::string_view name ) const;

    // Throws unknown_latch.
    [[nodiscard]] latch_id id_of( std::string_view name ) const;

    [[nodiscard]] std::span< const latch > latches() const { return _latches; }
    [[nodiscard]] std::span< const latch_id > evens() const { return _evens; }
    [[nodiscard]] std::span< const latch_id > odds() const { return _odds; }
    [[nodiscard]] std::span< const neighbor_pair > even_odd_neighbors() const { return _even_odd; }
    [[nodiscard]] std::span< const neighbor_pair > odd_even_neighbors() const { return _odd_even; }

    // Both lists together, even-odd pairs first; this is the order protocol
    // places are generated in.
    [[nodiscard]] std::vector< neighbor_pair > all_neighbor_pairs() const;

    // Latches l' with (l', l) a neighbor pair, in declaration order.
    [[nodiscard]] std::span< const latch_id > left_neighbors( latch_id l ) const { return _left.at( l ); }
    // Latches l' with (l, l') a neighbor pair, in declaration order.
    [[nodiscard]] std::span< const latch_id > right_neighbors( latch_id l ) const { return _right.at( l ); }

    [[nodiscard]] const expr& next_state( latch_id l ) const { return _next_state.at( l ); }
};

// Name-based conveniences; throw unknown_latch.
std::vector< std::string > left_neighbors( const circuit& c, std::string_view latch_name );
std::vector< std::string > right_neighbors( const circuit& c, std::string_view latch_name );

// Applies l's next-state function to a state that supplies at least l's left
// neighbors.
value next_state_value( const circuit& c, latch_id l, const latch_state& st );

} // namespace fe
