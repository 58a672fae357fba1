#pragma once

#include "flowequiv/circuit.hpp"
#include "flowequiv/trace.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace fe
{

struct eval_error
{
    enum class kind : std::uint8_t
    {
        // A ring of simultaneously transparent latches; no finite derivation.
        cyclic_transparency,
        // An opaque odd latch at the empty trace. Unreachable on well-formed
        // circuits because odd latches start transparent.
        undefined_base,
    };

    kind what;
    // For cyclic_transparency: the ring, rotated to start at its smallest id.
    // For undefined_base: the single offending latch.
    std::vector< latch_id > latches;

    [[nodiscard]] std::string describe( const circuit& c ) const;

    friend bool operator==( const eval_error&, const eval_error& ) = default;
};

using async_result = std::variant< value, eval_error >;

inline bool is_error( const async_result& r ) { return std::holds_alternative< eval_error >( r ); }

// Direct evaluation of the asynchronous execution relation by its four cases:
//   (1) l transparent at t          -> next_state over left neighbors at t
//   (2) l opaque, t empty           -> st0(l)
//   (3) l opaque, t = t'.e, e != l- -> value at t'
//   (4) t = t'.(l-)                 -> next_state over left neighbors at t'
// Results are memoized per (latch, prefix length) for one fixed trace.
class direct_evaluator
{
    const circuit* _circ;
    const latch_state* _initial;
    trace _trace;
    // _phase[k][l]: transparency of l after the first k events.
    std::vector< std::vector< transparency > > _phase;
    std::vector< std::vector< std::optional< async_result > > > _memo;
    std::vector< std::vector< std::uint8_t > > _visiting;
    std::vector< latch_id > _stack;

    async_result eval_left_and_apply( latch_id l, std::size_t k );

public:
    direct_evaluator( const circuit& c, const latch_state& st0, trace t );

    // Value of l after the first k events (k <= trace length).
    async_result eval( latch_id l, std::size_t k );
    async_result eval( latch_id l ) { return eval( l, _trace.size() ); }
};

async_result async_eval( const circuit& c, const latch_state& st0, std::span< const event > t, latch_id l );

// Incremental, event-stepped form of the same semantics. Stores the last
// latched value of every opaque latch; transparent latches are evaluated
// combinationally through their left neighbors on demand.
class async_state
{
    const circuit* _circ;
    std::vector< value > _stored;
    std::vector< transparency > _phase;
    std::vector< std::uint32_t > _counts; // indexed by event::index()

    async_result evaluate( latch_id l, std::vector< std::uint8_t >& visiting,
                           std::vector< latch_id >& stack ) const;

public:
    async_state( const circuit& c, const latch_state& st0 );

    // Rise: l becomes transparent. Fall: l latches next_state over the current
    // values of its left neighbors and becomes opaque. On error the state is
    // left unchanged.
    std::optional< eval_error > step( const event& e );

    // Value-returning form; throws std::runtime_error on an evaluation error.
    [[nodiscard]] async_state stepped( const event& e ) const;

    [[nodiscard]] async_result current_value( latch_id l ) const;

    [[nodiscard]] transparency phase( latch_id l ) const { return _phase.at( l ); }
    // Meaningful only while l is opaque.
    [[nodiscard]] const value& stored( latch_id l ) const { return _stored.at( l ); }
    [[nodiscard]] std::uint32_t count( const event& e ) const { return _counts.at( e.index() ); }
    [[nodiscard]] const circuit& circ() const { return *_circ; }
};

// Folds step over t from the initial state. Returns the first error.
std::variant< async_state, eval_error > run_trace( const circuit& c, const latch_state& st0,
                                                   std::span< const event > t );

} // namespace fe
