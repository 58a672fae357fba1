#pragma once

#include "flowequiv/circuit.hpp"

#include <cstddef>
#include <vector>

namespace fe
{

using cycle_index = std::size_t;

// Synchronous execution, odd latches first each cycle:
//   n = 0: even -> st0, odd -> X
//   n > 0: odd reads its (even) left neighbors at n-1,
//          even reads its (odd) left neighbors at n.
// Rows are computed lazily and kept, so a query for cycle n costs
// O(n * |latches|) the first time and O(1) afterwards.
class sync_evaluator
{
    const circuit* _circ;
    latch_state _initial;
    std::vector< latch_state > _rows;

    void extend_to( cycle_index n );

public:
    sync_evaluator( const circuit& c, latch_state st0 );

    value at( cycle_index n, latch_id l );
    const latch_state& row( cycle_index n );
};

value sync_eval( const circuit& c, const latch_state& st0, cycle_index n, latch_id l );

// rows 0..up_to, each indexed by latch_id.
std::vector< latch_state > sync_table( const circuit& c, const latch_state& st0, cycle_index up_to );

} // namespace fe
