#include "flowequiv/sync.hpp"

namespace fe
{

sync_evaluator::sync_evaluator( const circuit& c, latch_state st0 ) : _circ{ &c }, _initial{ std::move( st0 ) }
{
    latch_state row0( c.size(), value::x() );
    for ( auto e : c.evens() )
        row0[ e ] = _initial.at( e );
    _rows.push_back( std::move( row0 ) );
}

void sync_evaluator::extend_to( cycle_index n )
{
    const circuit& c = *_circ;
    while ( _rows.size() <= n )
    {
        const latch_state& prev = _rows.back();
        latch_state row( c.size(), value::x() );
        // Odd latches read even left neighbors from the previous cycle ...
        for ( auto o : c.odds() )
            row[ o ] = next_state_value( c, o, prev );
        // ... and even latches read odd left neighbors from this one.
        for ( auto e : c.evens() )
            row[ e ] = next_state_value( c, e, row );
        _rows.push_back( std::move( row ) );
    }
}

value sync_evaluator::at( cycle_index n, latch_id l )
{
    return row( n ).at( l );
}

const latch_state& sync_evaluator::row( cycle_index n )
{
    extend_to( n );
    return _rows[ n ];
}

value sync_eval( const circuit& c, const latch_state& st0, cycle_index n, latch_id l )
{
    return sync_evaluator{ c, st0 }.at( n, l );
}

std::vector< latch_state > sync_table( const circuit& c, const latch_state& st0, cycle_index up_to )
{
    sync_evaluator ev{ c, st0 };
    std::vector< latch_state > out;
    out.reserve( up_to + 1 );
    for ( cycle_index n = 0; n <= up_to; ++n )
        out.push_back( ev.row( n ) );
    return out;
}

} // namespace fe
