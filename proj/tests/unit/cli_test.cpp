#include "oracles.hpp"

#include "cli.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace fe;

namespace
{

struct outcome
{
    int code;
    std::string out;
    std::string err;
};

outcome fe_run( std::vector< std::string > args )
{
    args.insert( args.begin(), "fe" );
    std::ostringstream out, err;
    const int code = cli::run( args, out, err );
    return { code, out.str(), err.str() };
}

std::string example( const std::string& file ) { return oracle::examples_dir() + "/" + file; }

std::string temp_file( const std::string& name, const std::string& contents )
{
    const auto path = std::filesystem::temp_directory_path() / ( "fe_cli_test_" + name );
    std::ofstream{ path } << contents;
    return path.string();
}

} // namespace

TEST( cli, check_desync_reports_violation )
{
    const auto r = fe_run( { "check", "--protocol", "desync", "--depth", "9", example( "cex.json" ) } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_NE( r.out.find( "latch:    C" ), std::string::npos );
    EXPECT_NE( r.out.find( "got:      1" ), std::string::npos );
    EXPECT_NE( r.out.find( "expected: 2" ), std::string::npos );
    EXPECT_NE( r.out.find( "synchronous execution" ), std::string::npos );
}

TEST( cli, check_rise_passes )
{
    const auto r = fe_run( { "check", "--protocol", "rise", "--depth", "12", example( "cex.json" ) } );
    EXPECT_EQ( r.code, 0 ) << r.out << r.err;
    EXPECT_NE( r.out.find( "PASS" ), std::string::npos );
}

TEST( cli, admits_rise_rejects_tc )
{
    const auto r = fe_run( { "admits", "--protocol", "rise", "--trace", example( "tc.trace" ), example( "cex.json" ) } );
    EXPECT_EQ( r.code, 1 );
    EXPECT_EQ( r.out, "rejected at index 8: C-\n" );
    EXPECT_EQ( fe_run( { "admits", "--protocol", "desync", "--trace", example( "tc.trace" ), example( "cex.json" ) } ).code, 0 );
}

TEST( cli, usage_errors_exit_2 )
{
    EXPECT_EQ( fe_run( {} ).code, 2 );
    EXPECT_EQ( fe_run( { "check", example( "cex.json" ) } ).code, 2 );
    EXPECT_EQ( fe_run( { "check", "--protocol", "semi", example( "cex.json" ) } ).code, 2 );
    EXPECT_EQ( fe_run( { "check", "--protocol", "rise", "--depth", "-3", example( "cex.json" ) } ).code, 2 );
    EXPECT_EQ( fe_run( { "validate", "/nonexistent.json" } ).code, 2 );
    const auto bad = temp_file( "bad.json", R"({"evens":["A"],"odds":[],"even_odd_neighbors":[["A","A"]],
        "odd_even_neighbors":[],"next_state":{"A":"0"}})" );
    const auto r = fe_run( { "validate", bad } );
    EXPECT_EQ( r.code, 2 );
    EXPECT_FALSE( r.err.empty() );
    const auto badtrace = temp_file( "bad.trace", "Q+" );
    EXPECT_EQ( fe_run( { "run", "--trace", badtrace, example( "cex.json" ) } ).code, 2 );
}

TEST( cli, help_exits_0 )
{
    const auto r = fe_run( { "--help" } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_NE( r.out.find( "check" ), std::string::npos );
    EXPECT_EQ( fe_run( { "check", "--help" } ).code, 0 );
}

TEST( cli, sync_and_validate )
{
    const auto s = fe_run( { "sync", "--cycles", "2", "--json", example( "cex.json" ) } );
    ASSERT_EQ( s.code, 0 );
    const auto j = nlohmann::json::parse( s.out );
    EXPECT_EQ( j.size(), 3u );
    EXPECT_EQ( j[ 2 ][ "C" ], 2 );
    const auto v = fe_run( { "validate", example( "ring2.json" ) } );
    EXPECT_EQ( v.code, 0 );
    EXPECT_NE( v.out.find( "1 even, 1 odd" ), std::string::npos );
}

TEST( cli, run_reports_values )
{
    const auto r = fe_run( { "run", "--trace", example( "tc.trace" ), "--latch", "C", "--json", example( "cex.json" ) } );
    ASSERT_EQ( r.code, 0 ) << r.err;
    const auto j = nlohmann::json::parse( r.out );
    EXPECT_EQ( j[ "latches" ][ "C" ][ "value" ], 1 );
    EXPECT_EQ( j[ "latches" ][ "C" ][ "falls" ], 2 );
    EXPECT_EQ( j[ "latches" ][ "C" ][ "transparency" ], "opaque" );
}

TEST( cli, refine )
{
    EXPECT_EQ( fe_run( { "refine", "--from", "rise", "--to", "desync", example( "cex.json" ) } ).code, 0 );
    const auto w = fe_run( { "refine", "--from", "desync", "--to", "rise", "--json", example( "cex.json" ) } );
    EXPECT_EQ( w.code, 1 );
    EXPECT_EQ( nlohmann::json::parse( w.out )[ "event" ], "C-" );
    const auto t = fe_run( { "refine", "--from", "fall", "--to", "fall", "--transfer", "6", example( "ring2.json" ) } );
    EXPECT_EQ( t.code, 0 );
    EXPECT_NE( t.out.find( "inherits" ), std::string::npos ) << t.out;
}

TEST( cli, lemmas )
{
    const auto r = fe_run( { "lemmas", "--protocol", "fall", "--depth", "8", "--json", example( "ring2.json" ) } );
    ASSERT_EQ( r.code, 0 ) << r.out;
    for ( const auto& l : nlohmann::json::parse( r.out )[ "lemmas" ] )
        EXPECT_EQ( l[ "verdict" ], "pass" );
}

TEST( cli, render_waveform )
{
    const auto r = fe_run( { "render", "--trace", example( "tc.trace" ), example( "cex.json" ) } );
    ASSERT_EQ( r.code, 0 );
    std::istringstream lines{ r.out };
    std::string line, c_row, c_values;
    while ( std::getline( lines, line ) )
        if ( line.rfind( "C ", 0 ) == 0 )
        {
            c_row = line;
            std::getline( lines, c_values );
        }
    EXPECT_NE( c_row.find( '/' ), std::string::npos );
    EXPECT_NE( c_row.find( '\\' ), std::string::npos );
    std::istringstream vals{ c_values };
    std::vector< std::string > shown{ std::istream_iterator< std::string >( vals ), {} };
    EXPECT_EQ( shown, ( std::vector< std::string >{ "1", "1" } ) );

    const auto o = temp_file( "o.trace", "O-" );
    const auto ring = fe_run( { "render", "--trace", o, example( "ring2.json" ) } );
    EXPECT_NE( ring.out.find( "\n" ), std::string::npos );
    std::istringstream rl{ ring.out };
    std::vector< std::string > all;
    while ( std::getline( rl, line ) )
        all.push_back( line );
    bool annotated = false;
    for ( std::size_t i = 0; i + 1 < all.size(); ++i )
        if ( all[ i ].rfind( "O ", 0 ) == 0 )
            annotated = all[ i + 1 ].find( '1' ) != std::string::npos;
    EXPECT_TRUE( annotated ) << ring.out;

    const auto empty = temp_file( "empty.trace", "" );
    const auto e = fe_run( { "render", "--trace", empty, example( "cex.json" ) } );
    EXPECT_EQ( e.code, 0 );
    EXPECT_EQ( e.out.find( '\\' ), std::string::npos );
}

TEST( cli, render_consumes_check_json )
{
    const auto r = fe_run( { "check", "--protocol", "desync", "--depth", "9", "--json", example( "cex.json" ) } );
    ASSERT_EQ( r.code, 1 );
    const auto report = temp_file( "report.json", r.out );
    const auto w = fe_run( { "render", "--trace", report, example( "cex.json" ) } );
    EXPECT_EQ( w.code, 0 ) << w.err;
    const auto a = fe_run( { "admits", "--protocol", "desync", "--trace", report, example( "cex.json" ) } );
    EXPECT_EQ( a.code, 0 );
}

TEST( cli, render_graph )
{
    const auto r = fe_run( { "render", "--graph", "--protocol", "fall", example( "ring2.json" ) } );
    EXPECT_EQ( r.code, 0 );
    EXPECT_NE( r.out.find( "digraph \"fall\"" ), std::string::npos );
}

TEST( cli, binary_exit_codes )
{
    const std::string bin = FE_BINARY;
    auto status = [ & ]( const std::string& args ) {
        const int s = std::system( ( bin + " " + args + " >/dev/null 2>&1" ).c_str() );
        return WEXITSTATUS( s );
    };
    EXPECT_EQ( status( "check --protocol desync --depth 9 " + example( "cex.json" ) ), 1 );
    EXPECT_EQ( status( "check --protocol rise --depth 12 " + example( "cex.json" ) ), 0 );
    EXPECT_EQ( status( "admits --protocol rise --trace " + example( "tc.trace" ) + " " + example( "cex.json" ) ), 1 );
    EXPECT_EQ( status( "frobnicate" ), 2 );
}
