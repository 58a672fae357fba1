#include "flowequiv/protocols.hpp"

#include <sstream>

namespace fe
{

std::string_view protocol_name( protocol_kind k )
{
    switch ( k )
    {
    case protocol_kind::desynchronization:
        return "desync";
    case protocol_kind::rise_decoupled:
        return "rise";
    case protocol_kind::fall_decoupled:
        return "fall";
    }
    return "?";
}

std::optional< protocol_kind > parse_protocol( std::string_view name )
{
    for ( auto k : { protocol_kind::desynchronization, protocol_kind::rise_decoupled, protocol_kind::fall_decoupled } )
        if ( protocol_name( k ) == name )
            return k;
    return std::nullopt;
}

std::vector< place > protocol_places( protocol_kind k, const circuit& c )
{
    std::vector< place > out;
    auto add = [ & ]( event src, event dst, place_kind kind, latch_id first, latch_id second ) {
        out.push_back( place{ static_cast< place_id >( out.size() ), src, dst, kind, first, second } );
    };

    for ( latch_id l = 0; l < c.size(); ++l )
    {
        add( event::rise( l ), event::fall( l ), place_kind::self_fall, l, l );
        add( event::fall( l ), event::rise( l ), place_kind::self_rise, l, l );
    }

    for ( const auto& [ left, right ] : c.all_neighbor_pairs() )
    {
        switch ( k )
        {
        case protocol_kind::desynchronization:
            add( event::rise( left ), event::fall( right ), place_kind::forward, left, right );
            break;
        case protocol_kind::rise_decoupled:
            add( event::fall( left ), event::fall( right ), place_kind::forward, left, right );
            break;
        case protocol_kind::fall_decoupled:
            add( event::rise( left ), event::rise( right ), place_kind::forward, left, right );
            break;
        }
        add( event::fall( right ), event::rise( left ), place_kind::backward, left, right );
    }
    return out;
}

marking protocol_marking( protocol_kind k, const circuit& c, const std::vector< place >& places )
{
    marking m( places.size(), 0 );
    for ( const auto& p : places )
    {
        switch ( p.kind )
        {
        case place_kind::self_fall:
            m[ p.id ] = c.is_odd( p.first ) ? 1 : 0;
            break;
        case place_kind::self_rise:
            m[ p.id ] = c.is_even( p.first ) ? 1 : 0;
            break;
        case place_kind::forward:
            switch ( k )
            {
            case protocol_kind::desynchronization:
                m[ p.id ] = 1;
                break;
            case protocol_kind::rise_decoupled:
                m[ p.id ] = c.is_even( p.first ) ? 1 : 0;
                break;
            case protocol_kind::fall_decoupled:
                m[ p.id ] = c.is_odd( p.first ) ? 1 : 0;
                break;
            }
            break;
        case place_kind::backward:
        case place_kind::other:
            m[ p.id ] = 0;
            break;
        }
    }
    return m;
}

namespace
{

std::vector< event > all_events( const circuit& c )
{
    std::vector< event > out;
    out.reserve( 2 * c.size() );
    for ( latch_id l = 0; l < c.size(); ++l )
    {
        out.push_back( event::rise( l ) );
        out.push_back( event::fall( l ) );
    }
    return out;
}

} // namespace

marked_graph build_protocol( protocol_kind k, const circuit& c )
{
    auto places = protocol_places( k, c );
    auto init = protocol_marking( k, c, places );
    return marked_graph{ all_events( c ), std::move( places ), std::move( init ) };
}

std::vector< path > protocol_local_cycles( protocol_kind k, const circuit& c, const marked_graph& g )
{
    std::vector< path > out;
    auto at = [ & ]( const event& src, const event& dst ) {
        auto p = g.find_place( src, dst );
        if ( !p )
            throw graph_error{ "protocol graph lacks place " + format_event( c, src ) + " -> " + format_event( c, dst ) };
        return *p;
    };

    for ( latch_id l = 0; l < c.size(); ++l )
        out.emplace_back( g, std::vector< place_id >{ at( event::rise( l ), event::fall( l ) ),
                                                      at( event::fall( l ), event::rise( l ) ) } );

    for ( const auto& [ l, r ] : c.all_neighbor_pairs() )
    {
        switch ( k )
        {
        case protocol_kind::desynchronization:
            out.emplace_back( g, std::vector< place_id >{ at( event::rise( l ), event::fall( r ) ),
                                                          at( event::fall( r ), event::rise( l ) ) } );
            break;
        case protocol_kind::rise_decoupled:
            out.emplace_back( g, std::vector< place_id >{ at( event::rise( l ), event::fall( l ) ),
                                                          at( event::fall( l ), event::fall( r ) ),
                                                          at( event::fall( r ), event::rise( l ) ) } );
            break;
        case protocol_kind::fall_decoupled:
            out.emplace_back( g, std::vector< place_id >{ at( event::rise( l ), event::rise( r ) ),
                                                          at( event::rise( r ), event::fall( r ) ),
                                                          at( event::fall( r ), event::rise( l ) ) } );
            break;
        }
    }
    return out;
}

std::vector< event > initially_enabled( const marked_graph& g )
{
    return g.enabled( g.initial_marking() );
}

namespace
{

// Event counts per depth along the current DFS path.
class count_stack
{
    std::vector< std::vector< std::uint32_t > > _levels;

public:
    explicit count_stack( std::size_t transitions ) : _levels{ std::vector< std::uint32_t >( transitions, 0 ) } {}

    // Brings level t.size() up to date from its parent. Valid in pre-order.
    const std::vector< std::uint32_t >& sync( const trace& t )
    {
        const std::size_t d = t.size();
        if ( d == 0 )
            return _levels[ 0 ];
        if ( _levels.size() <= d )
            _levels.resize( d + 1 );
        _levels[ d ] = _levels[ d - 1 ];
        ++_levels[ d ][ t.back().index() ];
        return _levels[ d ];
    }
};

std::string count_detail( const circuit& c, const event& a, std::uint32_t na, const event& b, std::uint32_t nb )
{
    std::ostringstream out;
    out << "#(" << format_event( c, a ) << ")=" << na << ", #(" << format_event( c, b ) << ")=" << nb;
    return out.str();
}

} // namespace

lemma_report check_rd_lemmas( const circuit& c, std::size_t depth )
{
    return check_rd_lemmas( c, build_protocol( protocol_kind::rise_decoupled, c ), depth );
}

lemma_report check_rd_lemmas( const circuit& c, const marked_graph& g, std::size_t depth )
{
    lemma_report report{ "rise-decoupled opacity and fall-count lemmas", 0, std::nullopt };
    count_stack counts{ 2 * c.size() };

    // Forward places l- -> l'- of the graph, keyed by the left latch.
    std::vector< std::vector< place_id > > forward_of( c.size() );
    for ( const auto& p : g.places() )
        if ( p.kind == place_kind::forward )
            forward_of[ p.first ].push_back( p.id );

    for_each_trace( g, depth, [ & ]( const trace& t, const marking& m ) {
        const auto& n = counts.sync( t );
        ++report.checked;

        for ( latch_id l = 0; l < c.size(); ++l )
        {
            for ( auto p : forward_of[ l ] )
            {
                if ( m[ p ] > 0 && transparency_of( c, t, l ) != transparency::opaque )
                {
                    report.violation = lemma_violation{ "rd-opacity", t, l,
                                                        "forward place " + format_event( c, g.at( p ).src ) + " -> " +
                                                            format_event( c, g.at( p ).dst ) + " is marked but " +
                                                            c.name( l ) + " is transparent" };
                    return explore_action::stop;
                }
            }

            if ( !g.is_enabled( m, event::fall( l ) ) )
                continue;
            const auto own = n[ event::fall( l ).index() ];
            const auto want = c.is_odd( l ) ? own : own + 1;
            for ( auto left : c.left_neighbors( l ) )
            {
                const auto theirs = n[ event::fall( left ).index() ];
                if ( theirs != want )
                {
                    report.violation = lemma_violation{ "rd-num-events", t, l,
                                                        c.name( l ) + "- is enabled but " +
                                                            count_detail( c, event::fall( left ), theirs, event::fall( l ), own ) };
                    return explore_action::stop;
                }
            }
        }
        return explore_action::descend;
    } );
    return report;
}

lemma_report check_fd_lemmas( const circuit& c, std::size_t depth )
{
    return check_fd_lemmas( c, build_protocol( protocol_kind::fall_decoupled, c ), depth );
}

lemma_report check_fd_lemmas( const circuit& c, const marked_graph& g, std::size_t depth )
{
    lemma_report report{ "fall-decoupled event-count lemma", 0, std::nullopt };
    count_stack counts{ 2 * c.size() };

    for_each_trace( g, depth, [ & ]( const trace& t, const marking& ) {
        const auto& n = counts.sync( t );
        ++report.checked;

        for ( latch_id l = 0; l < c.size(); ++l )
        {
            const auto rises = n[ event::rise( l ).index() ];
            const auto falls = n[ event::fall( l ).index() ];
            if ( transparency_of( c, t, l ) == transparency::opaque )
            {
                const auto want = c.is_odd( l ) ? rises + 1 : rises;
                if ( falls != want )
                {
                    report.violation = lemma_violation{ "fd-num-events (opaque)", t, l,
                                                        count_detail( c, event::fall( l ), falls, event::rise( l ), rises ) };
                    return explore_action::stop;
                }
                continue;
            }
            for ( auto left : c.left_neighbors( l ) )
            {
                const auto theirs = n[ event::rise( left ).index() ];
                const auto want = c.is_odd( l ) ? theirs : theirs + 1;
                if ( rises != want )
                {
                    report.violation = lemma_violation{ "fd-num-events (transparent)", t, l,
                                                        count_detail( c, event::rise( l ), rises, event::rise( left ), theirs ) };
                    return explore_action::stop;
                }
            }
        }
        return explore_action::descend;
    } );
    return report;
}

lemma_report check_cycle_conservation( const marked_graph& g, std::size_t depth )
{
    lemma_report report{ "cycle conservation", 0, std::nullopt };
    const auto cycles = elementary_cycles( g );
    std::vector< std::uint64_t > initial;
    initial.reserve( cycles.size() );
    for ( const auto& p : cycles )
        initial.push_back( path_sum( g.initial_marking(), p ) );

    for ( const auto& r : markings_within( g, depth ) )
    {
        ++report.checked;
        for ( std::size_t i = 0; i < cycles.size(); ++i )
        {
            const auto now = path_sum( r.tokens, cycles[ i ] );
            if ( now != initial[ i ] )
            {
                std::ostringstream detail;
                detail << "cycle #" << i << " sums to " << now << ", initially " << initial[ i ];
                report.violation = lemma_violation{ "cycle conservation", r.witness, std::nullopt, detail.str() };
                return report;
            }
        }
    }
    return report;
}

lemma_report check_firing_table( const marked_graph& g, std::size_t depth )
{
    lemma_report report{ "single-firing path algebra", 0, std::nullopt };

    std::vector< path > paths;
    for ( const auto& p : g.places() )
    {
        paths.emplace_back( g, std::vector< place_id >{ p.id } );
        for ( auto q : g.outputs( p.dst ) )
            paths.emplace_back( g, std::vector< place_id >{ p.id, q } );
    }
    for ( const auto& cyc : elementary_cycles( g ) )
    {
        const auto ids = cyc.places();
        for ( std::size_t len = 3; len <= ids.size(); ++len )
            paths.emplace_back( g, std::vector< place_id >( ids.begin(), ids.begin() + static_cast< std::ptrdiff_t >( len ) ) );
    }

    for ( const auto& r : markings_within( g, depth ) )
    {
        ++report.checked;
        for ( const auto& e : g.enabled( r.tokens ) )
        {
            const marking next = g.fire( r.tokens, e );
            for ( std::size_t i = 0; i < paths.size(); ++i )
            {
                const auto before = static_cast< std::int64_t >( path_sum( r.tokens, paths[ i ] ) );
                const auto after = static_cast< std::int64_t >( path_sum( next, paths[ i ] ) );
                if ( after - before != firing_delta( paths[ i ], e ) )
                {
                    trace w = r.witness;
                    w.push_back( e );
                    std::ostringstream detail;
                    detail << "path #" << i << " changed by " << ( after - before ) << ", expected "
                           << firing_delta( paths[ i ], e );
                    report.violation = lemma_violation{ "firing table", w, std::nullopt, detail.str() };
                    return report;
                }
            }
        }
    }
    return report;
}

} // namespace fe
