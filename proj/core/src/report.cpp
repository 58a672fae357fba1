#include "flowequiv/report.hpp"

#include "flowequiv/sync.hpp"

namespace fe
{

nlohmann::json value_to_json( const value& v )
{
    if ( v.is_x() )
        return "X";
    return v.as_num();
}

nlohmann::json trace_to_json( const circuit& c, const trace& t )
{
    return trace_tokens( c, t );
}

nlohmann::json sync_table_to_json( const circuit& c, const std::vector< latch_state >& rows )
{
    nlohmann::json out = nlohmann::json::array();
    for ( std::size_t n = 0; n < rows.size(); ++n )
    {
        nlohmann::json row = nlohmann::json::object();
        row[ "cycle" ] = n;
        for ( latch_id l = 0; l < c.size(); ++l )
            row[ c.name( l ) ] = value_to_json( rows[ n ][ l ] );
        out.push_back( std::move( row ) );
    }
    return out;
}

nlohmann::json check_to_json( const circuit& c, const latch_state& st0, const check_result& r,
                              std::string_view protocol, std::size_t depth )
{
    nlohmann::json out;
    out[ "protocol" ] = protocol;
    out[ "depth" ] = depth;

    if ( const auto* pass = std::get_if< check_pass >( &r ) )
    {
        out[ "verdict" ] = "pass";
        out[ "traces" ] = pass->traces;
    }
    else if ( const auto* v = std::get_if< violation_report >( &r ) )
    {
        out[ "verdict" ] = "violation";
        out[ "trace" ] = trace_to_json( c, v->events );
        out[ "latch" ] = c.name( v->latch );
        out[ "got" ] = value_to_json( v->got );
        out[ "expected" ] = value_to_json( v->expected );
        out[ "fall_count" ] = v->fall_count;
        out[ "sync_table" ] = sync_table_to_json( c, sync_table( c, st0, v->fall_count ) );
    }
    else
    {
        const auto& f = std::get< cyclic_finding >( r );
        out[ "verdict" ] = "cyclic_transparency";
        out[ "trace" ] = trace_to_json( c, f.events );
        nlohmann::json ring = nlohmann::json::array();
        for ( auto l : f.error.latches )
            ring.push_back( c.name( l ) );
        out[ "latches" ] = ring;
        out[ "message" ] = f.error.describe( c );
    }
    return out;
}

nlohmann::json refinement_to_json( const circuit& c, const refinement_result& r, std::string_view from,
                                   std::string_view to )
{
    nlohmann::json out;
    out[ "from" ] = from;
    out[ "to" ] = to;
    out[ "pairs_explored" ] = r.pairs_explored;
    if ( r.included )
    {
        out[ "verdict" ] = "included";
        return out;
    }
    out[ "verdict" ] = "witness";
    trace full = r.witness;
    full.push_back( *r.next_event );
    out[ "trace" ] = trace_to_json( c, full );
    out[ "event" ] = format_event( c, *r.next_event );
    return out;
}

nlohmann::json lemma_to_json( const circuit& c, const lemma_report& r )
{
    nlohmann::json out;
    out[ "lemma" ] = r.name;
    out[ "checked" ] = r.checked;
    out[ "verdict" ] = r.passed() ? "pass" : "violation";
    if ( r.violation )
    {
        out[ "violated" ] = r.violation->lemma;
        out[ "trace" ] = trace_to_json( c, r.violation->witness );
        if ( r.violation->latch )
            out[ "latch" ] = c.name( *r.violation->latch );
        out[ "detail" ] = r.violation->detail;
    }
    return out;
}

} // namespace fe
