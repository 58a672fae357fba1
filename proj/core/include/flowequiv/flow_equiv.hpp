#pragma once

#include "flowequiv/async.hpp"
#include "flowequiv/circuit.hpp"
#include "flowequiv/marked_graph.hpp"
#include "flowequiv/protocols.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <variant>

namespace fe
{

// Latch `latch` is opaque after `events` and holds `got`, but the synchronous
// execution has `expected` at cycle `fall_count` (the number of latch- in
// `events`).
struct violation_report
{
    trace events;
    latch_id latch = 0;
    value got;
    value expected;
    std::size_t fall_count = 0;
};

// Evaluation reached a ring of transparent latches. Not a pass and not a
// flow-equivalence verdict.
struct cyclic_finding
{
    trace events;
    eval_error error;
};

struct check_pass
{
    std::size_t depth = 0;
    std::size_t traces = 0; // admitted traces examined, the empty one included
};

using check_result = std::variant< check_pass, violation_report, cyclic_finding >;

struct check_options
{
    std::size_t depth = 12;
    // Report a violation of minimal length instead of the first in DFS order.
    bool shortest = false;
    // 0 or 1: sequential. More splits the search below a shallow frontier.
    unsigned threads = 0;
};

// Bounded flow-equivalence check: every admitted trace of length <= depth,
// every opaque latch at every prefix. Deterministic for any thread count.
check_result check_flow_equivalence( const circuit& c, const latch_state& st0, const marked_graph& g,
                                     const check_options& opts );
check_result check_flow_equivalence( const circuit& c, const latch_state& st0, protocol_kind k,
                                     const check_options& opts );

// Re-derives a report from scratch: the trace is admitted, the direct
// evaluator yields `got`, the synchronous execution yields `expected`, they
// differ, and the latch is opaque.
bool replays( const circuit& c, const latch_state& st0, const marked_graph& g, const violation_report& r );

struct refinement_result
{
    bool included = true;
    // When not included: `witness` is admitted by both graphs, and
    // witness + next_event is admitted by the left graph only.
    trace witness;
    std::optional< event > next_event;
    std::size_t pairs_explored = 0;
};

class refinement_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// Exact trace-language inclusion of `left` in `right`: breadth-first over
// jointly reachable marking pairs. Witnesses are shortest. Throws
// refinement_error when the transition sets differ or a graph is not 1-safe.
refinement_result check_refinement( const marked_graph& left, const marked_graph& right );

struct transfer_verdict
{
    bool transferred = false;
    std::size_t depth = 0;
    std::string note;
};

// A left protocol included in a right protocol that passed its bounded check
// inherits the pass at the same depth. Refuses otherwise.
transfer_verdict transfer_flow_equivalence( const refinement_result& r, const check_result& base,
                                            const std::string& left_name = "left",
                                            const std::string& right_name = "right" );

// FE_THREADS, default 0.
unsigned threads_from_env();

} // namespace fe
