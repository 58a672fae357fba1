#include "flowequiv/flow_equiv.hpp"

#include "flowequiv/sync.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <unordered_map>

namespace fe
{

namespace
{

using finding = std::variant< violation_report, cyclic_finding >;

// Exhaustive DFS over admitted traces carrying the incremental async state.
class searcher
{
    const circuit& _c;
    const marked_graph& _g;
    std::vector< latch_state > _sync;
    std::size_t _limit;

public:
    std::size_t visited = 0;

    searcher( const circuit& c, const latch_state& st0, const marked_graph& g, std::size_t limit )
            : _c{ c }, _g{ g }, _sync{ sync_table( c, st0, limit + 1 ) }, _limit{ limit }
    {}

    // Flow-equivalence condition at one prefix: every opaque latch holds the
    // synchronous value for its fall count.
    std::optional< violation_report > check_node( const trace& t, const async_state& s ) const
    {
        for ( latch_id l = 0; l < _c.size(); ++l )
        {
            if ( s.phase( l ) != transparency::opaque )
                continue;
            const std::size_t falls = s.count( event::fall( l ) );
            const value& expected = _sync.at( falls ).at( l );
            if ( !( s.stored( l ) == expected ) )
                return violation_report{ t, l, s.stored( l ), expected, falls };
        }
        return std::nullopt;
    }

    struct frontier_node
    {
        trace events;
        marking tokens;
        async_state state;
    };

    // Pre-order: the node is checked before its children. If `frontier` is
    // given, nodes at depth `split` are collected instead of expanded.
    std::optional< finding > dfs( trace& t, marking& m, const async_state& s, std::size_t split = SIZE_MAX,
                                  std::vector< frontier_node >* frontier = nullptr,
                                  const std::atomic< std::size_t >* cancel_below = nullptr, std::size_t my_index = 0 )
    {
        if ( cancel_below && cancel_below->load( std::memory_order_relaxed ) < my_index )
            return std::nullopt;

        if ( frontier && t.size() == split )
        {
            frontier->push_back( { t, m, s } );
            return std::nullopt;
        }

        ++visited;
        if ( auto v = check_node( t, s ) )
            return finding{ std::move( *v ) };
        if ( t.size() >= _limit )
            return std::nullopt;

        for ( const auto& e : _g.transitions() )
        {
            if ( !_g.is_enabled( m, e ) )
                continue;
            async_state next = s;
            t.push_back( e );
            if ( auto err = next.step( e ) )
            {
                finding f = cyclic_finding{ t, *err };
                t.pop_back();
                return f;
            }
            _g.fire_unchecked( m, e );
            auto found = dfs( t, m, next, split, frontier, cancel_below, my_index );
            for ( auto p : _g.outputs( e ) )
                --m[ p ];
            for ( auto p : _g.inputs( e ) )
                ++m[ p ];
            t.pop_back();
            if ( found )
                return found;
        }
        return std::nullopt;
    }

    std::optional< finding > run_sequential( const latch_state& st0 )
    {
        trace t;
        marking m = _g.initial_marking();
        return dfs( t, m, async_state{ _c, st0 } );
    }

    std::optional< finding > run_parallel( const latch_state& st0, unsigned threads )
    {
        // Split at the shallowest depth whose frontier keeps every worker busy.
        std::vector< frontier_node > frontier;
        std::optional< finding > early;
        bool split_found = false;
        for ( std::size_t split = 1; split < _limit && !split_found; ++split )
        {
            frontier.clear();
            visited = 0;
            trace t;
            marking m = _g.initial_marking();
            early = dfs( t, m, async_state{ _c, st0 }, split, &frontier );
            split_found = early || frontier.size() >= 4 * static_cast< std::size_t >( threads );
        }
        if ( !split_found )
        {
            visited = 0;
            return run_sequential( st0 );
        }

        // `early` (if any) comes after every collected frontier node.
        std::atomic< std::size_t > best{ SIZE_MAX };
        std::atomic< std::size_t > next{ 0 };
        std::vector< std::optional< finding > > results( frontier.size() );
        std::vector< std::size_t > counts( frontier.size(), 0 );

        auto work = [ & ]() {
            searcher local{ *this };
            for ( std::size_t i = next++; i < frontier.size(); i = next++ )
            {
                if ( best.load() < i )
                    break;
                auto& node = frontier[ i ];
                local.visited = 0;
                results[ i ] = local.dfs( node.events, node.tokens, node.state, SIZE_MAX, nullptr, &best, i );
                counts[ i ] = local.visited;
                if ( results[ i ] )
                {
                    std::size_t cur = best.load();
                    while ( i < cur && !best.compare_exchange_weak( cur, i ) )
                    {
                    }
                }
            }
        };

        std::vector< std::thread > pool;
        for ( unsigned k = 0; k < threads; ++k )
            pool.emplace_back( work );
        for ( auto& th : pool )
            th.join();

        for ( std::size_t i = 0; i < frontier.size(); ++i )
        {
            visited += counts[ i ];
            if ( results[ i ] )
                return results[ i ];
        }
        return early;
    }
};

check_result to_result( std::optional< finding > f, std::size_t depth, std::size_t visited )
{
    if ( !f )
        return check_pass{ depth, visited };
    if ( auto* v = std::get_if< violation_report >( &*f ) )
        return std::move( *v );
    return std::get< cyclic_finding >( std::move( *f ) );
}

check_result check_at_depth( const circuit& c, const latch_state& st0, const marked_graph& g, std::size_t depth,
                             unsigned threads )
{
    searcher s{ c, st0, g, depth };
    auto f = threads > 1 ? s.run_parallel( st0, threads ) : s.run_sequential( st0 );
    return to_result( std::move( f ), depth, s.visited );
}

} // namespace

check_result check_flow_equivalence( const circuit& c, const latch_state& st0, const marked_graph& g,
                                     const check_options& opts )
{
    if ( !opts.shortest )
        return check_at_depth( c, st0, g, opts.depth, opts.threads );

    // Iterative deepening: a finding at bound d has length d, since every
    // shorter trace passed at bound d-1.
    check_result last = check_pass{ 0, 0 };
    for ( std::size_t d = 0; d <= opts.depth; ++d )
    {
        last = check_at_depth( c, st0, g, d, opts.threads );
        if ( !std::holds_alternative< check_pass >( last ) )
            return last;
    }
    return last;
}

check_result check_flow_equivalence( const circuit& c, const latch_state& st0, protocol_kind k,
                                     const check_options& opts )
{
    return check_flow_equivalence( c, st0, build_protocol( k, c ), opts );
}

bool replays( const circuit& c, const latch_state& st0, const marked_graph& g, const violation_report& r )
{
    if ( !g.admits( r.events ).accepted )
        return false;
    if ( transparency_of( c, r.events, r.latch ) != transparency::opaque )
        return false;
    if ( num_events( event::fall( r.latch ), r.events ) != r.fall_count )
        return false;
    const auto got = async_eval( c, st0, r.events, r.latch );
    if ( is_error( got ) || !( std::get< value >( got ) == r.got ) )
        return false;
    const auto expected = sync_eval( c, st0, r.fall_count, r.latch );
    return expected == r.expected && !( r.got == r.expected );
}

refinement_result check_refinement( const marked_graph& left, const marked_graph& right )
{
    if ( left.transitions().size() != right.transitions().size() ||
         !std::equal( left.transitions().begin(), left.transitions().end(), right.transitions().begin() ) )
        throw refinement_error{ "graphs have different transition sets" };

    if ( !reachable_markings( left ).safe() )
        throw refinement_error{ "left graph is not 1-safe" };
    if ( !reachable_markings( right ).safe() )
        throw refinement_error{ "right graph is not 1-safe" };

    struct joint_hash
    {
        std::size_t operator()( const std::pair< marking, marking >& p ) const noexcept
        {
            const marking_hash h;
            return h( p.first ) * 31 + h( p.second );
        }
    };

    std::vector< std::pair< marking, marking > > nodes;
    std::vector< std::pair< std::size_t, event > > parent;
    std::unordered_map< std::pair< marking, marking >, std::size_t, joint_hash > index;

    auto witness_of = [ & ]( std::size_t i ) {
        trace t;
        while ( i != 0 )
        {
            t.push_back( parent[ i ].second );
            i = parent[ i ].first;
        }
        std::reverse( t.begin(), t.end() );
        return t;
    };

    nodes.emplace_back( left.initial_marking(), right.initial_marking() );
    parent.emplace_back( 0, event{} );
    index.emplace( nodes[ 0 ], 0 );

    refinement_result out;
    for ( std::size_t i = 0; i < nodes.size(); ++i )
    {
        for ( const auto& e : left.transitions() )
        {
            if ( !left.is_enabled( nodes[ i ].first, e ) )
                continue;
            if ( !right.is_enabled( nodes[ i ].second, e ) )
            {
                out.included = false;
                out.witness = witness_of( i );
                out.next_event = e;
                out.pairs_explored = nodes.size();
                return out;
            }
            std::pair< marking, marking > next{ nodes[ i ].first, nodes[ i ].second };
            left.fire_unchecked( next.first, e );
            right.fire_unchecked( next.second, e );
            if ( index.contains( next ) )
                continue;
            index.emplace( next, nodes.size() );
            parent.emplace_back( i, e );
            nodes.push_back( std::move( next ) );
        }
    }
    out.pairs_explored = nodes.size();
    return out;
}

transfer_verdict transfer_flow_equivalence( const refinement_result& r, const check_result& base,
                                            const std::string& left_name, const std::string& right_name )
{
    if ( !r.included )
        return { false, 0, "refused: " + left_name + " admits a trace " + right_name + " rejects" };
    const auto* pass = std::get_if< check_pass >( &base );
    if ( !pass )
        return { false, 0, "refused: " + right_name + " did not pass its bounded check" };
    return { true, pass->depth,
             left_name + " inherits the bounded flow-equivalence pass of " + right_name + " at depth " +
                 std::to_string( pass->depth ) + ": every " + left_name + "-admitted trace is " + right_name +
                 "-admitted and was checked" };
}

unsigned threads_from_env()
{
    const char* raw = std::getenv( "FE_THREADS" );
    if ( !raw || !*raw )
        return 0;
    char* end = nullptr;
    const unsigned long n = std::strtoul( raw, &end, 10 );
    if ( *end != '\0' )
        return 0;
    return static_cast< unsigned >( std::min< unsigned long >( n, 256 ) );
}

} // namespace fe
