#pragma once

#include "flowequiv/async.hpp"
#include "flowequiv/circuit.hpp"
#include "flowequiv/trace.hpp"

#include <string>

namespace fe::cli
{

// ASCII timing diagram of a trace: one row per latch, one column per event
// (plus an initial column). '/' marks a rise, '\' a fall, '‾' a transparent
// stretch and '_' an opaque one. The value latched at each fall is printed
// under it; evaluation errors print '?' with a footnote.
std::string render_waveform( const circuit& c, const latch_state& st0, const trace& t );

} // namespace fe::cli
