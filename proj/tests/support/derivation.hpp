#pragma once

// Brute-force derivation of protocol initial markings from three constraints:
//   (i)   every self cycle and every protocol pair cycle holds one token,
//   (ii)  odd latches start transparent (l+ -> l- marked exactly for odd l),
//   (iii) the initially enabled transitions are exactly the odd falls.

#include "oracles.hpp"

#include "flowequiv/protocols.hpp"

#include <functional>
#include <stdexcept>
#include <set>

namespace oracle
{

// The place cycles that must each carry exactly one token, written out from
// the handshake shapes: every latch's l+ -> l- -> l+, and per pair (l, l'):
//   desync: l+ -> l'- -> l+
//   rise:   l+ -> l- -> l'- -> l+
//   fall:   l+ -> l'+ -> l'- -> l+
inline std::vector< std::vector< fe::place_id > > unit_cycles( fe::protocol_kind k, const fe::circuit& c, const fe::marked_graph& g )
{
    auto pl = [ & ]( fe::event a, fe::event b ) {
        auto p = g.find_place( a, b );
        if ( !p )
            throw std::logic_error{ "protocol graph lacks a handshake place" };
        return *p;
    };
    std::vector< std::vector< fe::place_id > > out;
    for ( fe::latch_id l = 0; l < c.size(); ++l )
        out.push_back( { pl( fe::event::rise( l ), fe::event::fall( l ) ), pl( fe::event::fall( l ), fe::event::rise( l ) ) } );
    for ( const auto& [ l, r ] : c.all_neighbor_pairs() )
    {
        const auto lp = fe::event::rise( l ), lm = fe::event::fall( l ), rp = fe::event::rise( r ), rm = fe::event::fall( r );
        switch ( k )
        {
        case fe::protocol_kind::desynchronization:
            out.push_back( { pl( lp, rm ), pl( rm, lp ) } );
            break;
        case fe::protocol_kind::rise_decoupled:
            out.push_back( { pl( lp, lm ), pl( lm, rm ), pl( rm, lp ) } );
            break;
        case fe::protocol_kind::fall_decoupled:
            out.push_back( { pl( lp, rp ), pl( rp, rm ), pl( rm, lp ) } );
            break;
        }
    }
    return out;
}

inline std::set< std::uint32_t > enabled_set( const fe::marked_graph& g, const fe::marking& m )
{
    std::set< std::uint32_t > out;
    for ( const auto& e : g.transitions() )
        if ( enabled( g, m, e ) )
            out.insert( e.index() );
    return out;
}

inline std::set< std::uint32_t > odd_falls( const fe::circuit& c )
{
    std::set< std::uint32_t > out;
    for ( auto o : c.odds() )
        out.insert( fe::event::fall( o ).index() );
    return out;
}

// Constraint (i): unit cycles; (ii): odd latches start transparent;
// (iii): exactly the odd falls are enabled.
inline bool satisfies_constraints( fe::protocol_kind k, const fe::circuit& c, const fe::marked_graph& g, const fe::marking& m )
{
    for ( const auto& cyc : unit_cycles( k, c, g ) )
    {
        std::uint32_t s = 0;
        for ( auto p : cyc )
            s += m[ p ];
        if ( s != 1 )
            return false;
    }
    for ( fe::latch_id l = 0; l < c.size(); ++l )
    {
        const auto sf = m[ *g.find_place( fe::event::rise( l ), fe::event::fall( l ) ) ];
        if ( sf != ( c.is_odd( l ) ? 1u : 0u ) )
            return false;
    }
    return enabled_set( g, m ) == odd_falls( c );
}

// Every 0/1 marking satisfying the three constraints. Backtracking over
// places in id order, cutting a branch once a fully assigned unit cycle is
// off; the leaves are exactly the full enumeration's survivors.
inline std::vector< fe::marking > derive_markings( fe::protocol_kind k, const fe::circuit& c, const fe::marked_graph& g )
{
    const auto cycles = unit_cycles( k, c, g );
    const auto n = g.places().size();
    std::vector< fe::marking > out;
    fe::marking m( n, 0 );
    auto consistent = [ & ]( std::size_t assigned ) {
        for ( const auto& cyc : cycles )
        {
            std::uint32_t s = 0;
            bool complete = true;
            for ( auto p : cyc )
            {
                if ( p < assigned )
                    s += m[ p ];
                else
                    complete = false;
            }
            if ( s > 1 || ( complete && s != 1 ) )
                return false;
        }
        return true;
    };
    std::function< void( std::size_t ) > go = [ & ]( std::size_t i ) {
        if ( !consistent( i ) )
            return;
        if ( i == n )
        {
            if ( satisfies_constraints( k, c, g, m ) )
                out.push_back( m );
            return;
        }
        for ( std::uint32_t v : { 0u, 1u } )
        {
            m[ i ] = v;
            go( i + 1 );
        }
        m[ i ] = 0;
    };
    go( 0 );
    return out;
}

} // namespace oracle
