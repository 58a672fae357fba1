#include "cli.hpp"

#include "waveform.hpp"

#include "flowequiv/async.hpp"
#include "flowequiv/flow_equiv.hpp"
#include "flowequiv/netlist.hpp"
#include "flowequiv/protocols.hpp"
#include "flowequiv/report.hpp"
#include "flowequiv/sync.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace fe::cli
{

namespace
{

class usage_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

std::string read_file( const std::string& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        throw usage_error{ "cannot open '" + path + "'" };
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

protocol_kind protocol_of( const std::string& name )
{
    if ( auto k = parse_protocol( name ) )
        return *k;
    throw usage_error{ "unknown protocol '" + name + "' (expected desync, rise or fall)" };
}

std::string sync_table_text( const circuit& c, const std::vector< latch_state >& rows )
{
    std::vector< std::size_t > width( c.size() );
    for ( latch_id l = 0; l < c.size(); ++l )
    {
        width[ l ] = c.name( l ).size();
        for ( const auto& row : rows )
            width[ l ] = std::max( width[ l ], row[ l ].to_string().size() );
    }

    std::ostringstream out;
    out << std::left << std::setw( 7 ) << "cycle";
    for ( latch_id l = 0; l < c.size(); ++l )
        out << std::setw( static_cast< int >( width[ l ] + 2 ) ) << c.name( l );
    out << '\n';
    for ( std::size_t n = 0; n < rows.size(); ++n )
    {
        out << std::setw( 7 ) << n;
        for ( latch_id l = 0; l < c.size(); ++l )
            out << std::setw( static_cast< int >( width[ l ] + 2 ) ) << rows[ n ][ l ].to_string();
        out << '\n';
    }
    return out.str();
}

struct options
{
    std::string circuit_path;
    std::string protocol = "rise";
    std::string from;
    std::string to;
    std::string trace_path;
    std::string latch_name;
    std::size_t depth = 12;
    std::size_t cycles = 4;
    std::size_t transfer_depth = 0;
    bool json = false;
    bool shortest = false;
    bool graph = false;
};

void print_warnings( const loaded_circuit& lc, std::ostream& err )
{
    for ( const auto& w : lc.warnings )
        err << "warning: " << w << '\n';
}

int cmd_validate( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto& c = lc.circ;
    if ( o.json )
    {
        nlohmann::json doc;
        doc[ "valid" ] = true;
        doc[ "evens" ] = c.evens().size();
        doc[ "odds" ] = c.odds().size();
        doc[ "neighbor_pairs" ] = c.even_odd_neighbors().size() + c.odd_even_neighbors().size();
        doc[ "warnings" ] = lc.warnings;
        out << doc.dump( 2 ) << '\n';
        return holds;
    }
    out << "valid circuit: " << c.evens().size() << " even, " << c.odds().size() << " odd latches, "
        << c.even_odd_neighbors().size() + c.odd_even_neighbors().size() << " neighbor pairs\n";
    for ( latch_id l = 0; l < c.size(); ++l )
    {
        out << "  " << ( c.is_even( l ) ? "even " : "odd  " ) << c.name( l ) << " := " << print_expr( c.next_state( l ) );
        if ( c.is_even( l ) )
            out << "  (initial " << lc.initial[ l ] << ")";
        out << '\n';
    }
    return holds;
}

int cmd_sync( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto rows = sync_table( lc.circ, lc.initial, o.cycles );
    if ( o.json )
        out << sync_table_to_json( lc.circ, rows ).dump( 2 ) << '\n';
    else
        out << sync_table_text( lc.circ, rows );
    return holds;
}

int cmd_run( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto& c = lc.circ;
    const trace t = parse_trace_file( c, read_file( o.trace_path ) );

    std::vector< latch_id > latches;
    if ( !o.latch_name.empty() )
    {
        auto id = c.find( o.latch_name );
        if ( !id )
            throw usage_error{ "unknown latch '" + o.latch_name + "'" };
        latches.push_back( *id );
    }
    else
    {
        for ( latch_id l = 0; l < c.size(); ++l )
            latches.push_back( l );
    }

    direct_evaluator eval{ c, lc.initial, t };
    bool failed = false;
    nlohmann::json doc;
    doc[ "trace" ] = trace_to_json( c, t );
    for ( auto l : latches )
    {
        const auto r = eval.eval( l );
        const bool opaque = transparency_of( c, t, l ) == transparency::opaque;
        const auto falls = num_events( event::fall( l ), t );
        nlohmann::json entry;
        entry[ "transparency" ] = opaque ? "opaque" : "transparent";
        entry[ "falls" ] = falls;
        std::string shown;
        if ( const auto* v = std::get_if< value >( &r ) )
        {
            entry[ "value" ] = value_to_json( *v );
            shown = v->to_string();
        }
        else
        {
            failed = true;
            entry[ "error" ] = std::get< eval_error >( r ).describe( c );
            shown = "? (" + std::get< eval_error >( r ).describe( c ) + ")";
        }
        doc[ "latches" ][ c.name( l ) ] = entry;
        if ( !o.json )
            out << std::left << std::setw( 8 ) << c.name( l ) << std::setw( 13 ) << ( opaque ? "opaque" : "transparent" )
                << "falls=" << std::setw( 4 ) << falls << "value=" << shown << '\n';
    }
    if ( o.json )
        out << doc.dump( 2 ) << '\n';
    return failed ? violation : holds;
}

int cmd_admits( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto& c = lc.circ;
    const auto g = build_protocol( protocol_of( o.protocol ), c );
    const trace t = parse_trace_file( c, read_file( o.trace_path ) );
    const auto a = g.admits( t );

    if ( o.json )
    {
        nlohmann::json doc;
        doc[ "protocol" ] = o.protocol;
        doc[ "trace" ] = trace_to_json( c, t );
        doc[ "admitted" ] = a.accepted;
        if ( a.accepted )
            doc[ "final_marking" ] = a.final_marking;
        else
        {
            doc[ "rejected_index" ] = a.rejected_index;
            doc[ "rejected_event" ] = format_event( c, *a.rejected_event );
        }
        out << doc.dump( 2 ) << '\n';
    }
    else if ( a.accepted )
    {
        out << "admitted by " << o.protocol << "; marked places:";
        for ( const auto& p : g.places() )
            if ( a.final_marking[ p.id ] > 0 )
                out << ' ' << format_event( c, p.src ) << " -> " << format_event( c, p.dst ) << ";";
        out << '\n';
    }
    else
    {
        out << "rejected at index " << a.rejected_index << ": " << format_event( c, *a.rejected_event ) << '\n';
    }
    return a.accepted ? holds : violation;
}

void print_check_text( const circuit& c, const latch_state& st0, const check_result& r, const options& o,
                       std::ostream& out )
{
    out << "protocol " << o.protocol << ", depth " << o.depth << ": ";
    if ( const auto* pass = std::get_if< check_pass >( &r ) )
    {
        out << "PASS (" << pass->traces << " admitted traces checked)\n";
        return;
    }
    if ( const auto* v = std::get_if< violation_report >( &r ) )
    {
        out << "VIOLATION\n"
            << "  trace:    " << format_trace( c, v->events ) << '\n'
            << "  latch:    " << c.name( v->latch ) << " (opaque, " << v->fall_count << " falls)\n"
            << "  got:      " << v->got << '\n'
            << "  expected: " << v->expected << " (synchronous value at cycle " << v->fall_count << ")\n\n"
            << "synchronous execution:\n"
            << sync_table_text( c, sync_table( c, st0, v->fall_count ) );
        return;
    }
    const auto& f = std::get< cyclic_finding >( r );
    out << "CYCLIC TRANSPARENCY\n"
        << "  trace:    " << format_trace( c, f.events ) << '\n'
        << "  " << f.error.describe( c ) << '\n';
}

int cmd_check( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    check_options opts;
    opts.depth = o.depth;
    opts.shortest = o.shortest;
    opts.threads = threads_from_env();
    const auto r = check_flow_equivalence( lc.circ, lc.initial, protocol_of( o.protocol ), opts );

    if ( o.json )
        out << check_to_json( lc.circ, lc.initial, r, o.protocol, o.depth ).dump( 2 ) << '\n';
    else
        print_check_text( lc.circ, lc.initial, r, o, out );
    return std::holds_alternative< check_pass >( r ) ? holds : violation;
}

int cmd_refine( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto& c = lc.circ;
    const auto r = check_refinement( build_protocol( protocol_of( o.from ), c ), build_protocol( protocol_of( o.to ), c ) );

    std::optional< transfer_verdict > transfer;
    if ( o.transfer_depth > 0 )
    {
        check_options opts;
        opts.depth = o.transfer_depth;
        opts.threads = threads_from_env();
        const auto base = check_flow_equivalence( c, lc.initial, protocol_of( o.to ), opts );
        transfer = transfer_flow_equivalence( r, base, o.from, o.to );
    }

    if ( o.json )
    {
        auto doc = refinement_to_json( c, r, o.from, o.to );
        if ( transfer )
        {
            doc[ "transfer" ][ "transferred" ] = transfer->transferred;
            doc[ "transfer" ][ "depth" ] = transfer->depth;
            doc[ "transfer" ][ "note" ] = transfer->note;
        }
        out << doc.dump( 2 ) << '\n';
    }
    else
    {
        if ( r.included )
            out << o.from << " refines " << o.to << ": every " << o.from << "-admitted trace is " << o.to
                << "-admitted (" << r.pairs_explored << " joint markings)\n";
        else
            out << o.from << " does not refine " << o.to << ": after [" << format_trace( c, r.witness ) << "] "
                << format_event( c, *r.next_event ) << " is enabled in " << o.from << " but not in " << o.to << '\n';
        if ( transfer )
            out << transfer->note << '\n';
    }
    return r.included ? holds : violation;
}

int cmd_lemmas( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    const auto& c = lc.circ;
    const auto kind = protocol_of( o.protocol );
    const auto g = build_protocol( kind, c );

    std::vector< lemma_report > reports;
    reports.push_back( check_cycle_conservation( g, o.depth ) );
    reports.push_back( check_firing_table( g, o.depth ) );

    lemma_report safety{ "1-safety", 0, std::nullopt };
    const auto reach = reachable_markings( g );
    safety.checked = reach.markings.size();
    if ( reach.violation )
        safety.violation = lemma_violation{ "1-safety", reach.violation->witness, std::nullopt,
                                            "place p" + std::to_string( reach.violation->place ) + " holds " +
                                                std::to_string( reach.violation->tokens ) + " tokens" };
    reports.push_back( safety );

    if ( kind == protocol_kind::rise_decoupled )
        reports.push_back( check_rd_lemmas( c, g, o.depth ) );
    if ( kind == protocol_kind::fall_decoupled )
        reports.push_back( check_fd_lemmas( c, g, o.depth ) );

    const bool all_pass = std::all_of( reports.begin(), reports.end(), []( const auto& r ) { return r.passed(); } );
    if ( o.json )
    {
        nlohmann::json doc;
        doc[ "protocol" ] = o.protocol;
        doc[ "depth" ] = o.depth;
        doc[ "lemmas" ] = nlohmann::json::array();
        for ( const auto& r : reports )
            doc[ "lemmas" ].push_back( lemma_to_json( c, r ) );
        out << doc.dump( 2 ) << '\n';
    }
    else
    {
        for ( const auto& r : reports )
        {
            out << ( r.passed() ? "PASS " : "FAIL " ) << r.name << " (" << r.checked << " checked)\n";
            if ( r.violation )
                out << "     " << r.violation->lemma << " after [" << format_trace( c, r.violation->witness )
                    << "]: " << r.violation->detail << '\n';
        }
    }
    return all_pass ? holds : violation;
}

int cmd_render( const options& o, std::ostream& out, std::ostream& err )
{
    const auto lc = load_circuit_file( o.circuit_path );
    print_warnings( lc, err );
    if ( o.graph )
    {
        const auto kind = protocol_of( o.protocol );
        out << to_dot( build_protocol( kind, lc.circ ), lc.circ, std::string{ protocol_name( kind ) } );
        return holds;
    }
    if ( o.trace_path.empty() )
        throw usage_error{ "render needs --trace FILE or --graph" };
    const trace t = parse_trace_file( lc.circ, read_file( o.trace_path ) );
    out << render_waveform( lc.circ, lc.initial, t );
    return holds;
}

} // namespace

int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err )
{
    CLI::App app{ "fe: bounded flow-equivalence checking for desynchronized latch circuits", "fe" };
    app.require_subcommand( 1 );
    app.set_help_all_flag( "--help-all", "Show help for every subcommand" );

    options o;
    const std::vector< std::string > protocols{ "desync", "rise", "fall" };

    auto circuit_arg = [ & ]( CLI::App* sub ) {
        sub->add_option( "circuit", o.circuit_path, "Circuit description (JSON)" )->required();
    };
    auto json_flag = [ & ]( CLI::App* sub ) { sub->add_flag( "--json", o.json, "Emit a JSON report" ); };

    auto* validate = app.add_subcommand( "validate", "Parse and validate a circuit file" );
    circuit_arg( validate );
    json_flag( validate );

    auto* sync = app.add_subcommand( "sync", "Print the synchronous execution table" );
    sync->add_option( "--cycles", o.cycles, "Last cycle to print" )->capture_default_str();
    circuit_arg( sync );
    json_flag( sync );

    auto* run_cmd = app.add_subcommand( "run", "Evaluate a trace asynchronously" );
    run_cmd->add_option( "--trace", o.trace_path, "Trace file" )->required();
    run_cmd->add_option( "--latch", o.latch_name, "Report only this latch" );
    circuit_arg( run_cmd );
    json_flag( run_cmd );

    auto* admits = app.add_subcommand( "admits", "Check whether a protocol admits a trace" );
    admits->add_option( "--protocol", o.protocol, "desync, rise or fall" )->required()->check( CLI::IsMember( protocols ) );
    admits->add_option( "--trace", o.trace_path, "Trace file" )->required();
    circuit_arg( admits );
    json_flag( admits );

    auto* check = app.add_subcommand( "check", "Bounded flow-equivalence check" );
    check->add_option( "--protocol", o.protocol, "desync, rise or fall" )->required()->check( CLI::IsMember( protocols ) );
    check->add_option( "--depth", o.depth, "Maximum trace length" )->capture_default_str();
    check->add_flag( "--shortest", o.shortest, "Report a shortest violation" );
    circuit_arg( check );
    json_flag( check );

    auto* refine = app.add_subcommand( "refine", "Exact trace-language inclusion between protocols" );
    refine->add_option( "--from", o.from, "Protocol whose traces must be included" )->required()->check( CLI::IsMember( protocols ) );
    refine->add_option( "--to", o.to, "Including protocol" )->required()->check( CLI::IsMember( protocols ) );
    refine->add_option( "--transfer", o.transfer_depth, "Also check --to at this depth and transfer the verdict" );
    circuit_arg( refine );
    json_flag( refine );

    auto* lemmas = app.add_subcommand( "lemmas", "Check marked-graph and protocol lemmas" );
    lemmas->add_option( "--protocol", o.protocol, "desync, rise or fall" )->required()->check( CLI::IsMember( protocols ) );
    lemmas->add_option( "--depth", o.depth, "Maximum trace length" )->capture_default_str();
    circuit_arg( lemmas );
    json_flag( lemmas );

    auto* render = app.add_subcommand( "render", "Render a trace waveform or a protocol graph (DOT)" );
    render->add_option( "--trace", o.trace_path, "Trace file or JSON report" );
    render->add_flag( "--graph", o.graph, "Emit the protocol marked graph as DOT" );
    render->add_option( "--protocol", o.protocol, "Protocol for --graph" )->check( CLI::IsMember( protocols ) );
    circuit_arg( render );

    std::vector< const char* > argv;
    for ( const auto& a : args )
        argv.push_back( a.c_str() );

    try
    {
        app.parse( static_cast< int >( argv.size() ), argv.data() );
    }
    catch ( const CLI::CallForHelp& )
    {
        out << app.help();
        return holds;
    }
    catch ( const CLI::CallForAllHelp& )
    {
        out << app.help( "", CLI::AppFormatMode::All );
        return holds;
    }
    catch ( const CLI::ParseError& e )
    {
        err << "fe: " << e.what() << '\n' << "Run with --help for usage.\n";
        return usage;
    }

    try
    {
        if ( validate->parsed() )
            return cmd_validate( o, out, err );
        if ( sync->parsed() )
            return cmd_sync( o, out, err );
        if ( run_cmd->parsed() )
            return cmd_run( o, out, err );
        if ( admits->parsed() )
            return cmd_admits( o, out, err );
        if ( check->parsed() )
            return cmd_check( o, out, err );
        if ( refine->parsed() )
            return cmd_refine( o, out, err );
        if ( lemmas->parsed() )
            return cmd_lemmas( o, out, err );
        if ( render->parsed() )
            return cmd_render( o, out, err );
    }
    catch ( const circuit_error& e )
    {
        err << "fe: invalid circuit: " << e.what() << '\n';
        return usage;
    }
    catch ( const trace_parse_error& e )
    {
        err << "fe: invalid trace: " << e.what() << '\n';
        return usage;
    }
    catch ( const usage_error& e )
    {
        err << "fe: " << e.what() << '\n';
        return usage;
    }
    err << "fe: no command\n";
    return usage;
}

} // namespace fe::cli
