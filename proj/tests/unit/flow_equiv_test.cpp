#include "oracles.hpp"

#include "flowequiv/flow_equiv.hpp"
#include "flowequiv/protocols.hpp"
#include "flowequiv/report.hpp"
#include "flowequiv/sync.hpp"

#include <gtest/gtest.h>

#include <cstdlib>

using namespace fe;

namespace
{

const char* tc = "SNK- C+ B- C- SNK+ SNK- C+ B+ C-";

check_options at_depth( std::size_t d, bool shortest = false, unsigned threads = 0 )
{
    check_options o;
    o.depth = d;
    o.shortest = shortest;
    o.threads = threads;
    return o;
}

marked_graph flipped( const marked_graph& g, place_id p )
{
    std::vector< place > ps( g.places().begin(), g.places().end() );
    std::swap( ps[ p ].src, ps[ p ].dst );
    return { { g.transitions().begin(), g.transitions().end() }, ps, g.initial_marking() };
}

} // namespace

TEST( flow_equiv, desync_cex_violation )
{
    const auto lc = oracle::load_example( "cex" );
    const auto& c = lc.circ;
    const auto g = build_protocol( protocol_kind::desynchronization, c );
    const auto r = check_flow_equivalence( c, lc.initial, g, at_depth( 9 ) );
    ASSERT_TRUE( std::holds_alternative< violation_report >( r ) );
    const auto& v = std::get< violation_report >( r );
    EXPECT_EQ( v.latch, c.id_of( "C" ) );
    EXPECT_EQ( v.got, value::num( 1 ) );
    EXPECT_EQ( v.expected, value::num( 2 ) );
    EXPECT_EQ( v.fall_count, 2u );
    EXPECT_EQ( v.events.size(), 9u );
    EXPECT_TRUE( replays( c, lc.initial, g, v ) );
}

TEST( flow_equiv, literal_counterexample_trace )
{
    const auto lc = oracle::load_example( "cex" );
    const auto& c = lc.circ;
    const auto g = build_protocol( protocol_kind::desynchronization, c );
    violation_report v{ parse_trace( c, tc ), c.id_of( "C" ), value::num( 1 ), value::num( 2 ), 2 };
    EXPECT_TRUE( replays( c, lc.initial, g, v ) );
    v.got = value::num( 2 );
    EXPECT_FALSE( replays( c, lc.initial, g, v ) );
    v.got = value::num( 1 );
    EXPECT_FALSE( replays( c, lc.initial, build_protocol( protocol_kind::rise_decoupled, c ), v ) );
}

TEST( flow_equiv, shortest_is_no_longer_than_dfs )
{
    const auto lc = oracle::load_example( "cex" );
    const auto g = build_protocol( protocol_kind::desynchronization, lc.circ );
    const auto dfs = check_flow_equivalence( lc.circ, lc.initial, g, at_depth( 12 ) );
    const auto bfs = check_flow_equivalence( lc.circ, lc.initial, g, at_depth( 12, true ) );
    ASSERT_TRUE( std::holds_alternative< violation_report >( bfs ) );
    const auto& s = std::get< violation_report >( bfs );
    EXPECT_LE( s.events.size(), std::get< violation_report >( dfs ).events.size() );
    EXPECT_TRUE( replays( lc.circ, lc.initial, g, s ) );
    // Nothing shorter exists.
    if ( s.events.size() > 1 )
    {
        EXPECT_TRUE( std::holds_alternative< check_pass >(
            check_flow_equivalence( lc.circ, lc.initial, g, at_depth( s.events.size() - 1 ) ) ) );
    }
}

TEST( flow_equiv, decoupled_protocols_pass )
{
    for ( const auto& name : oracle::example_names() )
    {
        const auto lc = oracle::load_example( name );
        for ( auto k : { protocol_kind::rise_decoupled, protocol_kind::fall_decoupled } )
        {
            const auto r = check_flow_equivalence( lc.circ, lc.initial, k, at_depth( 10 ) );
            EXPECT_TRUE( std::holds_alternative< check_pass >( r ) ) << name << " " << protocol_name( k );
        }
    }
}

TEST( flow_equiv, monotone_in_depth )
{
    const auto lc = oracle::load_example( "ring2" );
    for ( std::size_t d = 0; d <= 12; ++d )
        EXPECT_TRUE( std::holds_alternative< check_pass >(
            check_flow_equivalence( lc.circ, lc.initial, protocol_kind::fall_decoupled, at_depth( d ) ) ) );
    const auto cex = oracle::load_example( "cex" );
    std::size_t prev = 0;
    for ( std::size_t d = 0; d <= 10; ++d )
    {
        const auto r = check_flow_equivalence( cex.circ, cex.initial, protocol_kind::rise_decoupled, at_depth( d ) );
        ASSERT_TRUE( std::holds_alternative< check_pass >( r ) );
        EXPECT_GT( std::get< check_pass >( r ).traces, prev );
        prev = std::get< check_pass >( r ).traces;
    }
}

TEST( flow_equiv, trace_counts_match_enumeration )
{
    const auto lc = oracle::load_example( "cex" );
    const auto g = build_protocol( protocol_kind::rise_decoupled, lc.circ );
    const auto r = check_flow_equivalence( lc.circ, lc.initial, g, at_depth( 8 ) );
    EXPECT_EQ( std::get< check_pass >( r ).traces, oracle::admitted_traces( g, 8 ).size() );
}

TEST( flow_equiv, every_reported_violation_is_checked_by_brute_force )
{
    // The first violation in depth-first order, recomputed with the oracles.
    const auto lc = oracle::load_example( "pipe3" );
    const auto& c = lc.circ;
    const auto g = build_protocol( protocol_kind::desynchronization, c );
    const auto r = check_flow_equivalence( c, lc.initial, g, at_depth( 12 ) );
    ASSERT_TRUE( std::holds_alternative< violation_report >( r ) );
    const auto& v = std::get< violation_report >( r );
    EXPECT_TRUE( oracle::play( g, v.events ).has_value() );
    EXPECT_EQ( transparency_of( c, v.events, v.latch ), transparency::opaque );
    EXPECT_EQ( *oracle::async_oracle( c, lc.initial, v.events ).run( v.latch ).v, v.got );
    EXPECT_EQ( oracle::sync( c, lc.initial, num_events( event::fall( v.latch ), v.events ), v.latch ), v.expected );
    EXPECT_NE( v.got, v.expected );
}

TEST( flow_equiv, completeness_under_fall_mutation )
{
    const auto lc = oracle::load_example( "cex" );
    const auto& c = lc.circ;
    const auto g = build_protocol( protocol_kind::fall_decoupled, c );
    for ( auto [ l, r ] : { std::pair{ "A", "B" }, std::pair{ "B", "C" } } )
    {
        const auto mutant = flipped( g, *g.find_place( place_kind::forward, c.id_of( l ), c.id_of( r ) ) );
        const auto res = check_flow_equivalence( c, lc.initial, mutant, at_depth( 10 ) );
        ASSERT_TRUE( std::holds_alternative< violation_report >( res ) ) << l << "," << r;
        EXPECT_TRUE( replays( c, lc.initial, mutant, std::get< violation_report >( res ) ) );
    }
}

TEST( flow_equiv, parallel_matches_sequential )
{
    for ( const auto& name : oracle::example_names() )
    {
        const auto lc = oracle::load_example( name );
        for ( auto k : { protocol_kind::desynchronization, protocol_kind::rise_decoupled } )
        {
            const auto seq = check_flow_equivalence( lc.circ, lc.initial, k, at_depth( 10 ) );
            for ( unsigned threads : { 2u, 4u, 8u } )
            {
                const auto par = check_flow_equivalence( lc.circ, lc.initial, k, at_depth( 10, false, threads ) );
                ASSERT_EQ( seq.index(), par.index() );
                if ( const auto* v = std::get_if< violation_report >( &seq ) )
                {
                    const auto& w = std::get< violation_report >( par );
                    EXPECT_EQ( v->events, w.events );
                    EXPECT_EQ( v->latch, w.latch );
                }
                else
                {
                    EXPECT_EQ( std::get< check_pass >( seq ).traces, std::get< check_pass >( par ).traces );
                }
            }
        }
    }
}

TEST( flow_equiv, cyclic_transparency_is_its_own_finding )
{
    // A graph that lets E rise while O is transparent.
    const auto lc = oracle::load_example( "ring2" );
    const auto& c = lc.circ;
    const marked_graph free_graph{ { event::rise( 0 ), event::fall( 0 ), event::rise( 1 ), event::fall( 1 ) }, {}, {} };
    const auto r = check_flow_equivalence( c, lc.initial, free_graph, at_depth( 3 ) );
    ASSERT_TRUE( std::holds_alternative< cyclic_finding >( r ) );
    EXPECT_EQ( std::get< cyclic_finding >( r ).error.latches.size(), 2u );
    const auto json = check_to_json( c, lc.initial, r, "free", 3 );
    EXPECT_EQ( json[ "verdict" ], "cyclic_transparency" );
}

TEST( flow_equiv, refinement_examples )
{
    for ( const auto& name : oracle::example_names() )
    {
        const auto c = oracle::load_example( name ).circ;
        const auto desync = build_protocol( protocol_kind::desynchronization, c );
        const auto rise = build_protocol( protocol_kind::rise_decoupled, c );
        const auto fall = build_protocol( protocol_kind::fall_decoupled, c );
        EXPECT_TRUE( check_refinement( rise, desync ).included ) << name;
        EXPECT_TRUE( check_refinement( fall, desync ).included ) << name;
        for ( const auto* g : { &desync, &rise, &fall } )
            EXPECT_TRUE( check_refinement( *g, *g ).included );
    }
}

TEST( flow_equiv, refinement_witness_replays )
{
    const auto c = oracle::load_example( "cex" ).circ;
    const auto desync = build_protocol( protocol_kind::desynchronization, c );
    const auto rise = build_protocol( protocol_kind::rise_decoupled, c );
    const auto r = check_refinement( desync, rise );
    ASSERT_FALSE( r.included );
    ASSERT_TRUE( r.next_event );
    EXPECT_TRUE( desync.admits( r.witness ).accepted );
    EXPECT_TRUE( rise.admits( r.witness ).accepted );
    auto full = r.witness;
    full.push_back( *r.next_event );
    EXPECT_TRUE( desync.admits( full ).accepted );
    const auto a = rise.admits( full );
    ASSERT_FALSE( a.accepted );
    EXPECT_EQ( a.rejected_index, r.witness.size() );
    EXPECT_EQ( *r.next_event, parse_event( c, "C-" ) );
    // Breadth-first: no shorter trace separates the two languages.
    for ( const auto& t : oracle::admitted_traces( desync, r.witness.size() ) )
        EXPECT_TRUE( rise.admits( t ).accepted ) << format_trace( c, t );
}

TEST( flow_equiv, included_agrees_with_bounded_enumeration )
{
    const auto c = oracle::load_example( "ring2" ).circ;
    const auto desync = build_protocol( protocol_kind::desynchronization, c );
    for ( auto k : { protocol_kind::rise_decoupled, protocol_kind::fall_decoupled } )
    {
        const auto g = build_protocol( k, c );
        ASSERT_TRUE( check_refinement( g, desync ).included );
        for ( const auto& t : oracle::admitted_traces( g, 10 ) )
            EXPECT_TRUE( oracle::play( desync, t ).has_value() );
    }
}

TEST( flow_equiv, refinement_errors )
{
    const auto a = oracle::load_example( "ring2" ).circ;
    const auto b = oracle::load_example( "cex" ).circ;
    EXPECT_THROW( (void)check_refinement( build_protocol( protocol_kind::desynchronization, a ),
                                          build_protocol( protocol_kind::desynchronization, b ) ),
                  refinement_error );
    const marked_graph pump{ { event::rise( 0 ), event::fall( 0 ), event::rise( 1 ), event::fall( 1 ) },
                             { place{ 0, event::rise( 0 ), event::fall( 0 ), place_kind::other, 0, 0 } },
                             { 0 } };
    EXPECT_THROW( (void)check_refinement( pump, build_protocol( protocol_kind::desynchronization, a ) ), refinement_error );
}

TEST( flow_equiv, transfer )
{
    const auto lc = oracle::load_example( "cex" );
    const auto& c = lc.circ;
    const auto desync = build_protocol( protocol_kind::desynchronization, c );
    const auto rise = build_protocol( protocol_kind::rise_decoupled, c );
    const auto included = check_refinement( rise, rise.with_initial_marking( rise.initial_marking() ) );
    const auto pass = check_flow_equivalence( c, lc.initial, rise, at_depth( 8 ) );
    const auto t = transfer_flow_equivalence( included, pass, "copy", "rise" );
    EXPECT_TRUE( t.transferred );
    EXPECT_EQ( t.depth, 8u );

    const auto witness = check_refinement( desync, rise );
    EXPECT_FALSE( transfer_flow_equivalence( witness, pass ).transferred );

    const auto fail = check_flow_equivalence( c, lc.initial, desync, at_depth( 9 ) );
    EXPECT_FALSE( transfer_flow_equivalence( check_refinement( rise, desync ), fail ).transferred );
}

TEST( flow_equiv, threads_from_env )
{
    ::unsetenv( "FE_THREADS" );
    EXPECT_EQ( threads_from_env(), 0u );
    ::setenv( "FE_THREADS", "3", 1 );
    EXPECT_EQ( threads_from_env(), 3u );
    ::setenv( "FE_THREADS", "junk", 1 );
    EXPECT_EQ( threads_from_env(), 0u );
    ::unsetenv( "FE_THREADS" );
}

TEST( flow_equiv, json_report )
{
    const auto lc = oracle::load_example( "cex" );
    const auto r = check_flow_equivalence( lc.circ, lc.initial, protocol_kind::desynchronization, at_depth( 9 ) );
    const auto j = check_to_json( lc.circ, lc.initial, r, "desync", 9 );
    EXPECT_EQ( j[ "verdict" ], "violation" );
    EXPECT_EQ( j[ "latch" ], "C" );
    EXPECT_EQ( j[ "got" ], 1 );
    EXPECT_EQ( j[ "expected" ], 2 );
    EXPECT_EQ( j[ "sync_table" ].size(), 3u );
    EXPECT_EQ( j[ "sync_table" ][ 0 ][ "A" ], "X" );
    EXPECT_EQ( parse_trace_file( lc.circ, j.dump() ), std::get< violation_report >( r ).events );
}
