#include "flowequiv/marked_graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <tuple>
#include <unordered_map>

namespace fe
{

std::size_t marking_hash::operator()( const marking& m ) const noexcept
{
    std::size_t h = 0xcbf29ce484222325ULL;
    for ( auto tokens : m )
    {
        h ^= tokens + 0x9e3779b97f4a7c15ULL + ( h << 6 ) + ( h >> 2 );
    }
    return h;
}

marked_graph::marked_graph( std::vector< event > transitions, std::vector< place > places, marking init )
        : _transitions{ std::move( transitions ) }, _places{ std::move( places ) }, _init{ std::move( init ) }
{
    std::uint32_t max_index = 0;
    for ( const auto& t : _transitions )
        max_index = std::max( max_index, t.index() + 1 );
    _has_transition.assign( max_index, 0 );
    for ( const auto& t : _transitions )
    {
        if ( _has_transition[ t.index() ] )
            throw graph_error{ "transition listed twice" };
        _has_transition[ t.index() ] = 1;
    }
    std::sort( _transitions.begin(), _transitions.end(),
               []( const event& a, const event& b ) { return a.index() < b.index(); } );

    if ( _init.size() != _places.size() )
        throw graph_error{ "initial marking size differs from place count" };

    _inputs.assign( max_index, {} );
    _outputs.assign( max_index, {} );
    std::set< std::tuple< std::uint32_t, std::uint32_t, place_kind > > seen;
    for ( place_id id = 0; id < _places.size(); ++id )
    {
        const place& p = _places[ id ];
        if ( p.id != id )
            throw graph_error{ "place ids must be dense and in order" };
        if ( !has_transition( p.src ) || !has_transition( p.dst ) )
            throw graph_error{ "place endpoint is not a transition of the graph" };
        if ( !seen.emplace( p.src.index(), p.dst.index(), p.kind ).second )
            throw graph_error{ "duplicate place between the same transitions" };
        _outputs[ p.src.index() ].push_back( id );
        _inputs[ p.dst.index() ].push_back( id );
    }
}

bool marked_graph::has_transition( const event& e ) const
{
    return e.index() < _has_transition.size() && _has_transition[ e.index() ];
}

void marked_graph::require_transition( const event& e ) const
{
    if ( !has_transition( e ) )
        throw graph_error{ "unknown transition" };
}

std::span< const place_id > marked_graph::inputs( const event& e ) const
{
    require_transition( e );
    return _inputs[ e.index() ];
}

std::span< const place_id > marked_graph::outputs( const event& e ) const
{
    require_transition( e );
    return _outputs[ e.index() ];
}

std::optional< place_id > marked_graph::find_place( const event& src, const event& dst ) const
{
    if ( !has_transition( src ) )
        return std::nullopt;
    for ( auto p : _outputs[ src.index() ] )
        if ( _places[ p ].dst == dst )
            return p;
    return std::nullopt;
}

std::optional< place_id > marked_graph::find_place( place_kind k, latch_id first, latch_id second ) const
{
    for ( const auto& p : _places )
        if ( p.kind == k && p.first == first && p.second == second )
            return p.id;
    return std::nullopt;
}

marked_graph marked_graph::with_initial_marking( marking m ) const
{
    return marked_graph{ _transitions, _places, std::move( m ) };
}

bool marked_graph::is_enabled( const marking& m, const event& e ) const
{
    require_transition( e );
    return std::all_of( _inputs[ e.index() ].begin(), _inputs[ e.index() ].end(),
                        [ & ]( place_id p ) { return m[ p ] > 0; } );
}

void marked_graph::fire_unchecked( marking& m, const event& e ) const
{
    for ( auto p : _inputs[ e.index() ] )
        --m[ p ];
    for ( auto p : _outputs[ e.index() ] )
        ++m[ p ];
}

marking marked_graph::fire( const marking& m, const event& e ) const
{
    if ( !is_enabled( m, e ) )
        throw graph_error{ "fired a disabled transition" };
    marking next = m;
    fire_unchecked( next, e );
    return next;
}

std::vector< event > marked_graph::enabled( const marking& m ) const
{
    std::vector< event > out;
    for ( const auto& t : _transitions )
        if ( is_enabled( m, t ) )
            out.push_back( t );
    return out;
}

admission marked_graph::admits( std::span< const event > t ) const
{
    marking m = _init;
    for ( std::size_t i = 0; i < t.size(); ++i )
    {
        if ( !has_transition( t[ i ] ) || !is_enabled( m, t[ i ] ) )
            return admission::rejected_at( i, t[ i ] );
        fire_unchecked( m, t[ i ] );
    }
    return admission::final( std::move( m ) );
}

namespace
{

bool dfs( const marked_graph& g, std::size_t depth, trace& t, marking& m, const trace_visitor& visit )
{
    switch ( visit( t, m ) )
    {
    case explore_action::stop:
        return false;
    case explore_action::prune:
        return true;
    case explore_action::descend:
        break;
    }
    if ( t.size() >= depth )
        return true;

    for ( const auto& e : g.transitions() )
    {
        if ( !g.is_enabled( m, e ) )
            continue;
        g.fire_unchecked( m, e );
        t.push_back( e );
        const bool go_on = dfs( g, depth, t, m, visit );
        t.pop_back();
        // Undo: outputs lose, inputs regain.
        for ( auto p : g.outputs( e ) )
            --m[ p ];
        for ( auto p : g.inputs( e ) )
            ++m[ p ];
        if ( !go_on )
            return false;
    }
    return true;
}

} // namespace

void for_each_trace( const marked_graph& g, std::size_t depth, const trace_visitor& visit )
{
    trace t;
    marking m = g.initial_marking();
    dfs( g, depth, t, m, visit );
}

std::vector< trace_and_marking > enumerate_traces( const marked_graph& g, std::size_t depth )
{
    std::vector< trace_and_marking > out;
    for_each_trace( g, depth, [ & ]( const trace& t, const marking& m ) {
        out.push_back( { t, m } );
        return explore_action::descend;
    } );
    return out;
}

std::vector< reached_marking > markings_within( const marked_graph& g, std::size_t depth )
{
    std::vector< reached_marking > out;
    std::unordered_map< marking, std::size_t, marking_hash > index;
    out.push_back( { g.initial_marking(), {} } );
    index.emplace( g.initial_marking(), 0 );

    std::size_t level_begin = 0;
    for ( std::size_t d = 0; d < depth && level_begin < out.size(); ++d )
    {
        const std::size_t level_end = out.size();
        for ( std::size_t i = level_begin; i < level_end; ++i )
        {
            for ( const auto& e : g.transitions() )
            {
                if ( !g.is_enabled( out[ i ].tokens, e ) )
                    continue;
                marking next = out[ i ].tokens;
                g.fire_unchecked( next, e );
                if ( index.contains( next ) )
                    continue;
                trace w = out[ i ].witness;
                w.push_back( e );
                index.emplace( next, out.size() );
                out.push_back( { std::move( next ), std::move( w ) } );
            }
        }
        level_begin = level_end;
    }
    return out;
}

reachability reachable_markings( const marked_graph& g )
{
    reachability out;
    std::unordered_map< marking, std::size_t, marking_hash > index;
    std::vector< std::pair< std::size_t, event > > parent; // (index of predecessor, event)

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

    auto check_safe = [ & ]( const marking& m, std::size_t i ) {
        for ( place_id p = 0; p < m.size(); ++p )
        {
            if ( m[ p ] > 1 )
            {
                out.violation = safety_violation{ witness_of( i ), p, m[ p ] };
                return false;
            }
        }
        return true;
    };

    out.markings.push_back( g.initial_marking() );
    index.emplace( g.initial_marking(), 0 );
    parent.emplace_back( 0, event{} );
    if ( !check_safe( g.initial_marking(), 0 ) )
        return out;

    for ( std::size_t i = 0; i < out.markings.size(); ++i )
    {
        for ( const auto& e : g.transitions() )
        {
            if ( !g.is_enabled( out.markings[ i ], e ) )
                continue;
            marking next = out.markings[ i ];
            g.fire_unchecked( next, e );
            if ( index.contains( next ) )
                continue;
            const std::size_t id = out.markings.size();
            index.emplace( next, id );
            parent.emplace_back( i, e );
            out.markings.push_back( std::move( next ) );
            if ( !check_safe( out.markings.back(), id ) )
                return out;
        }
    }
    return out;
}

path::path( const marked_graph& g, std::vector< place_id > places ) : _places{ std::move( places ) }
{
    if ( _places.empty() )
        throw graph_error{ "empty path" };
    for ( std::size_t i = 0; i < _places.size(); ++i )
    {
        if ( _places[ i ] >= g.places().size() )
            throw graph_error{ "path names an unknown place" };
        if ( i > 0 && !( g.at( _places[ i - 1 ] ).dst == g.at( _places[ i ] ).src ) )
            throw graph_error{ "ill-chained path" };
    }
    _start = g.at( _places.front() ).src;
    _end = g.at( _places.back() ).dst;
}

std::uint64_t path_sum( const marking& m, const path& p )
{
    std::uint64_t sum = 0;
    for ( auto id : p.places() )
        sum += m.at( id );
    return sum;
}

int firing_delta( const path& p, const event& e )
{
    return ( p.start() == e ? 1 : 0 ) - ( p.end() == e ? 1 : 0 );
}

bool cycle_check( const marked_graph& g, const path& p, std::size_t depth )
{
    if ( !p.is_cycle() )
        throw graph_error{ "cycle_check needs a cyclic path" };
    const auto expected = path_sum( g.initial_marking(), p );
    for ( const auto& r : markings_within( g, depth ) )
        if ( path_sum( r.tokens, p ) != expected )
            return false;
    return true;
}

std::vector< path > elementary_cycles( const marked_graph& g )
{
    // Rooted DFS: a cycle is reported from its smallest transition index and
    // only visits larger transitions, so each one is found exactly once.
    std::vector< path > out;
    std::vector< place_id > stack;
    std::vector< std::uint8_t > on_path( 2 * g.transitions().size() + 2, 0 );
    auto mark = [ & ]( const event& e ) -> std::uint8_t& {
        if ( e.index() >= on_path.size() )
            on_path.resize( e.index() + 1, 0 );
        return on_path[ e.index() ];
    };

    for ( const auto& root : g.transitions() )
    {
        auto walk = [ & ]( auto&& self, const event& at ) -> void {
            for ( auto p : g.outputs( at ) )
            {
                const event& next = g.at( p ).dst;
                if ( next == root )
                {
                    stack.push_back( p );
                    out.emplace_back( g, stack );
                    stack.pop_back();
                    continue;
                }
                if ( next.index() < root.index() || mark( next ) )
                    continue;
                mark( next ) = 1;
                stack.push_back( p );
                self( self, next );
                stack.pop_back();
                mark( next ) = 0;
            }
        };
        mark( root ) = 1;
        walk( walk, root );
        mark( root ) = 0;
    }
    return out;
}

std::string to_dot( const marked_graph& g, const circuit& c, const std::string& title )
{
    std::ostringstream out;
    out << "digraph \"" << title << "\" {\n";
    out << "  rankdir=LR;\n";
    for ( const auto& t : g.transitions() )
        out << "  \"" << format_event( c, t ) << "\" [shape=box];\n";
    for ( const auto& p : g.places() )
    {
        const auto tokens = g.initial_marking()[ p.id ];
        out << "  \"" << format_event( c, p.src ) << "\" -> \"" << format_event( c, p.dst ) << "\" [label=\"p" << p.id;
        if ( tokens > 0 )
            out << " (" << tokens << ( tokens == 1 ? " token" : " tokens" ) << ")";
        out << "\"" << ( tokens > 0 ? ", style=bold" : "" ) << "];\n";
    }
    out << "}\n";
    return out.str();
}

} // namespace fe
