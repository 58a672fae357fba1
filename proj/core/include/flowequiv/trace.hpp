#pragma once

#include "flowequiv/circuit.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fe
{

enum class edge : std::uint8_t
{
    rise,
    fall,
};

// The rise (l+) or fall (l-) of a latch's local clock.
struct event
{
    latch_id latch;
    edge kind;

    static event rise( latch_id l ) { return { l, edge::rise }; }
    static event fall( latch_id l ) { return { l, edge::fall }; }

    [[nodiscard]] bool is_rise() const { return kind == edge::rise; }
    [[nodiscard]] bool is_fall() const { return kind == edge::fall; }

    // Dense transition index: 2*latch for rises, 2*latch+1 for falls.
    [[nodiscard]] std::uint32_t index() const { return 2 * latch + ( kind == edge::fall ? 1 : 0 ); }
    static event from_index( std::uint32_t i ) { return { i / 2, ( i % 2 ) ? edge::fall : edge::rise }; }

    friend bool operator==( const event&, const event& ) = default;
};

// Oldest event first; appending at the end is the trace-extension operation.
using trace = std::vector< event >;

enum class transparency : std::uint8_t
{
    transparent,
    opaque,
};

// Empty trace: odd latches transparent, even latches opaque. Otherwise the
// last event of l decides.
transparency transparency_of( const circuit& c, std::span< const event > t, latch_id l );

std::size_t num_events( const event& e, std::span< const event > t );

class trace_parse_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// "C+" / "SNK-"
std::string format_event( const circuit& c, const event& e );
std::string format_trace( const circuit& c, std::span< const event > t );
std::vector< std::string > trace_tokens( const circuit& c, std::span< const event > t );

// Parses one token NAME'+' or NAME'-' (U+2212 accepted for the minus).
event parse_event( const circuit& c, std::string_view token );

// Whitespace-separated tokens, oldest first. Throws trace_parse_error.
trace parse_trace( const circuit& c, std::string_view text );

// Either a plain trace file or a JSON report with a "trace" token array.
trace parse_trace_file( const circuit& c, std::string_view contents );

} // namespace fe
