#include "flowequiv/async.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace fe
{

namespace
{

// The ring is the stack suffix starting at the revisited latch, rotated so
// the smallest id leads.
eval_error cycle_error( const std::vector< latch_id >& stack, latch_id revisited )
{
    auto start = std::find( stack.rbegin(), stack.rend(), revisited );
    assert( start != stack.rend() );
    std::vector< latch_id > ring( start.base() - 1, stack.end() );
    std::rotate( ring.begin(), std::min_element( ring.begin(), ring.end() ), ring.end() );
    return { eval_error::kind::cyclic_transparency, std::move( ring ) };
}

// Evaluates every left neighbor (all must have a value, even ones the
// next-state expression ignores), then applies the next-state expression.
template < typename EvalNeighbor >
async_result latch_through_neighbors( const circuit& c, latch_id l, EvalNeighbor&& eval_neighbor )
{
    latch_state env( c.size() );
    for ( auto n : c.left_neighbors( l ) )
    {
        async_result r = eval_neighbor( n );
        if ( is_error( r ) )
            return r;
        env[ n ] = std::get< value >( r );
    }
    return next_state_value( c, l, env );
}

} // namespace

std::string eval_error::describe( const circuit& c ) const
{
    std::string names;
    for ( auto l : latches )
    {
        if ( !names.empty() )
            names += " <- ";
        names += c.name( l );
    }
    switch ( what )
    {
    case kind::cyclic_transparency:
        return "cyclic transparency: " + names + " <- " + c.name( latches.front() );
    case kind::undefined_base:
        return "undefined base value for opaque odd latch " + names;
    }
    return {};
}

direct_evaluator::direct_evaluator( const circuit& c, const latch_state& st0, trace t )
        : _circ{ &c }, _initial{ &st0 }, _trace{ std::move( t ) }
{
    std::vector< transparency > phase( c.size() );
    for ( latch_id l = 0; l < c.size(); ++l )
        phase[ l ] = transparency_of( c, {}, l );
    _phase.reserve( _trace.size() + 1 );
    _phase.push_back( phase );
    for ( const auto& e : _trace )
    {
        phase.at( e.latch ) = e.is_rise() ? transparency::transparent : transparency::opaque;
        _phase.push_back( phase );
    }
    _memo.assign( _trace.size() + 1, std::vector< std::optional< async_result > >( c.size() ) );
    _visiting.assign( _trace.size() + 1, std::vector< std::uint8_t >( c.size(), 0 ) );
}

async_result direct_evaluator::eval_left_and_apply( latch_id l, std::size_t k )
{
    return latch_through_neighbors( *_circ, l, [ & ]( latch_id n ) { return eval( n, k ); } );
}

async_result direct_evaluator::eval( latch_id l, std::size_t k )
{
    if ( k > _trace.size() )
        throw std::out_of_range{ "prefix length exceeds trace length" };
    if ( auto& memo = _memo[ k ][ l ] )
        return *memo;

    async_result r;
    if ( _phase[ k ][ l ] == transparency::transparent )
    {
        // Case 1: combinational through the left neighbors at the same prefix.
        if ( _visiting[ k ][ l ] )
            return cycle_error( _stack, l );
        _visiting[ k ][ l ] = 1;
        _stack.push_back( l );
        r = eval_left_and_apply( l, k );
        _stack.pop_back();
        _visiting[ k ][ l ] = 0;
    }
    else if ( k == 0 )
    {
        // Case 2: only even latches are opaque at the empty trace.
        if ( _circ->is_even( l ) )
            r = _initial->at( l );
        else
            r = eval_error{ eval_error::kind::undefined_base, { l } };
    }
    else if ( _trace[ k - 1 ] == event::fall( l ) )
    {
        // Case 4: l latched its left neighbors' values just before the fall.
        r = eval_left_and_apply( l, k - 1 );
    }
    else
    {
        // Case 3: still opaque and untouched by the last event.
        r = eval( l, k - 1 );
    }

    _memo[ k ][ l ] = r;
    return r;
}

async_result async_eval( const circuit& c, const latch_state& st0, std::span< const event > t, latch_id l )
{
    direct_evaluator ev{ c, st0, trace( t.begin(), t.end() ) };
    return ev.eval( l );
}

async_state::async_state( const circuit& c, const latch_state& st0 )
        : _circ{ &c }, _stored( c.size(), value::x() ), _phase( c.size() ), _counts( 2 * c.size(), 0 )
{
    for ( latch_id l = 0; l < c.size(); ++l )
    {
        _phase[ l ] = c.is_odd( l ) ? transparency::transparent : transparency::opaque;
        if ( c.is_even( l ) )
            _stored[ l ] = st0.at( l );
    }
}

async_result async_state::evaluate( latch_id l, std::vector< std::uint8_t >& visiting,
                                    std::vector< latch_id >& stack ) const
{
    if ( _phase[ l ] == transparency::opaque )
        return _stored[ l ];
    if ( visiting[ l ] )
        return cycle_error( stack, l );

    visiting[ l ] = 1;
    stack.push_back( l );
    async_result r = latch_through_neighbors( *_circ, l, [ & ]( latch_id n ) { return evaluate( n, visiting, stack ); } );
    stack.pop_back();
    visiting[ l ] = 0;
    return r;
}

async_result async_state::current_value( latch_id l ) const
{
    std::vector< std::uint8_t > visiting( _circ->size(), 0 );
    std::vector< latch_id > stack;
    return evaluate( l, visiting, stack );
}

std::optional< eval_error > async_state::step( const event& e )
{
    const latch_id l = e.latch;
    if ( e.is_rise() )
    {
        _phase.at( l ) = transparency::transparent;
    }
    else
    {
        std::vector< std::uint8_t > visiting( _circ->size(), 0 );
        std::vector< latch_id > stack;
        async_result r = latch_through_neighbors( *_circ, l, [ & ]( latch_id n ) { return evaluate( n, visiting, stack ); } );
        if ( auto* err = std::get_if< eval_error >( &r ) )
            return *err;
        _stored.at( l ) = std::get< value >( r );
        _phase.at( l ) = transparency::opaque;
    }
    ++_counts.at( e.index() );
    return std::nullopt;
}

async_state async_state::stepped( const event& e ) const
{
    async_state next = *this;
    if ( auto err = next.step( e ) )
        throw std::runtime_error{ err->describe( *_circ ) };
    return next;
}

std::variant< async_state, eval_error > run_trace( const circuit& c, const latch_state& st0,
                                                   std::span< const event > t )
{
    async_state s{ c, st0 };
    for ( const auto& e : t )
    {
        if ( auto err = s.step( e ) )
            return *err;
    }
    return s;
}

} // namespace fe
