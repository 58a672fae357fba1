#pragma once

#include "flowequiv/trace.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fe
{

using place_id = std::uint32_t;
using marking = std::vector< std::uint32_t >;

struct marking_hash
{
    std::size_t operator()( const marking& m ) const noexcept;
};

// Role of a place in a protocol graph. `other` is for hand-built graphs.
enum class place_kind : std::uint8_t
{
    self_fall, // l+ -> l-
    self_rise, // l- -> l+
    forward,   // pair place; direction depends on the protocol
    backward,  // l'- -> l+ for neighbor pair (l, l')
    other,
};

struct place
{
    place_id id = 0;
    event src;
    event dst;
    place_kind kind = place_kind::other;
    // The latch for self places; the neighbor pair (left, right) for pair places.
    latch_id first = 0;
    latch_id second = 0;
};

class graph_error : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

// Result of folding fire over a trace from the initial marking.
struct admission
{
    bool accepted = true;
    marking final_marking; // valid when accepted
    std::size_t rejected_index = 0;
    std::optional< event > rejected_event;

    static admission final( marking m ) { return { true, std::move( m ), 0, std::nullopt }; }
    static admission rejected_at( std::size_t i, event e ) { return { false, {}, i, e }; }
};

enum class explore_action
{
    descend,
    prune,
    stop,
};

// A marked graph over events: every place has exactly one input and one
// output transition. Immutable after construction.
class marked_graph
{
    std::vector< event > _transitions;
    std::vector< std::uint8_t > _has_transition; // by event::index()
    std::vector< place > _places;
    marking _init;
    std::vector< std::vector< place_id > > _inputs;  // by event::index()
    std::vector< std::vector< place_id > > _outputs; // by event::index()

    void require_transition( const event& e ) const;

public:
    // Place ids must be 0..places.size()-1 in order; every endpoint must be a
    // listed transition. Throws graph_error.
    marked_graph( std::vector< event > transitions, std::vector< place > places, marking init );

    [[nodiscard]] std::span< const event > transitions() const { return _transitions; }
    [[nodiscard]] bool has_transition( const event& e ) const;
    [[nodiscard]] std::span< const place > places() const { return _places; }
    [[nodiscard]] const place& at( place_id p ) const { return _places.at( p ); }
    [[nodiscard]] const marking& initial_marking() const { return _init; }
    [[nodiscard]] std::span< const place_id > inputs( const event& e ) const;
    [[nodiscard]] std::span< const place_id > outputs( const event& e ) const;

    [[nodiscard]] std::optional< place_id > find_place( const event& src, const event& dst ) const;
    [[nodiscard]] std::optional< place_id > find_place( place_kind k, latch_id first, latch_id second ) const;

    // Same places, different initial marking.
    [[nodiscard]] marked_graph with_initial_marking( marking m ) const;

    // Throws graph_error for an unknown transition.
    [[nodiscard]] bool is_enabled( const marking& m, const event& e ) const;
    // Throws graph_error when e is disabled.
    [[nodiscard]] marking fire( const marking& m, const event& e ) const;
    // In-place form without the enabledness check.
    void fire_unchecked( marking& m, const event& e ) const;

    [[nodiscard]] std::vector< event > enabled( const marking& m ) const;

    [[nodiscard]] admission admits( std::span< const event > t ) const;
};

// Depth-first over all admitted traces of length <= depth, transitions tried
// in declaration order. The visitor sees every node, the empty trace first.
using trace_visitor = std::function< explore_action( const trace&, const marking& ) >;
void for_each_trace( const marked_graph& g, std::size_t depth, const trace_visitor& visit );

struct trace_and_marking
{
    trace events;
    marking final_marking;
};

std::vector< trace_and_marking > enumerate_traces( const marked_graph& g, std::size_t depth );

struct safety_violation
{
    trace witness;
    place_id place;
    std::uint32_t tokens;
};

struct reachability
{
    std::vector< marking > markings; // BFS discovery order
    std::optional< safety_violation > violation;

    [[nodiscard]] bool safe() const { return !violation.has_value(); }
};

struct reached_marking
{
    marking tokens;
    trace witness; // a shortest trace reaching it
};

// Distinct markings reachable within `depth` firings, breadth-first.
std::vector< reached_marking > markings_within( const marked_graph& g, std::size_t depth );

// Breadth-first fixed point over firings. Stops at the first marking that
// puts more than one token on a place.
reachability reachable_markings( const marked_graph& g );

// A chain of places where each place's dst is the next place's src.
class path
{
    std::vector< place_id > _places;
    event _start;
    event _end;

public:
    // Throws graph_error if empty or ill-chained.
    path( const marked_graph& g, std::vector< place_id > places );

    [[nodiscard]] std::span< const place_id > places() const { return _places; }
    [[nodiscard]] const event& start() const { return _start; }
    [[nodiscard]] const event& end() const { return _end; }
    [[nodiscard]] bool is_cycle() const { return _start == _end; }
};

std::uint64_t path_sum( const marking& m, const path& p );

// Change of path_sum when e fires: +1 if the path starts at e, -1 if it ends
// at e, 0 if both or neither.
int firing_delta( const path& p, const event& e );

// Whether path_sum of the cycle is the same at every marking reachable within
// `depth` firings. Throws graph_error if p is not a cycle.
bool cycle_check( const marked_graph& g, const path& p, std::size_t depth );

// Every elementary cycle (no repeated transition), each reported once, rooted
// at its smallest transition index.
std::vector< path > elementary_cycles( const marked_graph& g );

// DOT text: transition nodes, place edges labelled with initial tokens.
std::string to_dot( const marked_graph& g, const circuit& c, const std::string& title = "protocol" );

} // namespace fe
