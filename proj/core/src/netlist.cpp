#include "flowequiv/netlist.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace fe
{

namespace
{

using kind = circuit_error::kind;

[[noreturn]] void fail( kind k, const std::string& what )
{
    throw circuit_error{ k, what };
}

bool is_identifier( std::string_view s )
{
    if ( s.empty() || !( std::isalpha( static_cast< unsigned char >( s[ 0 ] ) ) || s[ 0 ] == '_' ) )
        return false;
    return std::all_of( s.begin(), s.end(),
                        []( char ch ) { return std::isalnum( static_cast< unsigned char >( ch ) ) || ch == '_'; } );
}

std::vector< neighbor_pair > resolve_pairs( const std::vector< std::pair< std::string, std::string > >& pairs,
                                            const std::map< std::string, latch, std::less<> >& declared,
                                            const std::map< std::string, latch_id, std::less<> >& ids,
                                            parity left_parity, const char* list_name )
{
    std::vector< neighbor_pair > out;
    std::set< std::pair< latch_id, latch_id > > seen;
    const parity right_parity = left_parity == parity::even ? parity::odd : parity::even;

    for ( const auto& [ left, right ] : pairs )
    {
        for ( const auto* name : { &left, &right } )
        {
            if ( !declared.contains( *name ) )
                fail( kind::undeclared_latch,
                      std::string{ list_name } + " pair [" + left + ", " + right + "] references undeclared latch '" + *name + "'" );
        }
        if ( declared.at( left ).par != left_parity || declared.at( right ).par != right_parity )
            fail( kind::parity_violation, std::string{ list_name } + " pair [" + left + ", " + right + "] must be " +
                                              ( left_parity == parity::even ? "[even, odd]" : "[odd, even]" ) );

        const neighbor_pair p{ ids.at( left ), ids.at( right ) };
        if ( !seen.emplace( p.left, p.right ).second )
            fail( kind::duplicate_pair, std::string{ list_name } + " pair [" + left + ", " + right + "] appears twice" );
        out.push_back( p );
    }
    return out;
}

std::vector< std::string > string_list( const nlohmann::json& doc, const char* key )
{
    const auto& node = doc.at( key );
    if ( !node.is_array() )
        fail( kind::malformed, std::string{ "\"" } + key + "\" must be an array of names" );
    std::vector< std::string > out;
    for ( const auto& item : node )
    {
        if ( !item.is_string() )
            fail( kind::malformed, std::string{ "\"" } + key + "\" must contain only strings" );
        out.push_back( item.get< std::string >() );
    }
    return out;
}

std::vector< std::pair< std::string, std::string > > pair_list( const nlohmann::json& doc, const char* key )
{
    const auto& node = doc.at( key );
    if ( !node.is_array() )
        fail( kind::malformed, std::string{ "\"" } + key + "\" must be an array of [left, right] pairs" );
    std::vector< std::pair< std::string, std::string > > out;
    for ( const auto& item : node )
    {
        if ( !item.is_array() || item.size() != 2 || !item[ 0 ].is_string() || !item[ 1 ].is_string() )
            fail( kind::malformed, std::string{ "\"" } + key + "\" entries must be two-element string arrays" );
        out.emplace_back( item[ 0 ].get< std::string >(), item[ 1 ].get< std::string >() );
    }
    return out;
}

} // namespace

value parse_value( std::string_view text )
{
    if ( text == "X" )
        return value::x();
    if ( text.empty() || !std::all_of( text.begin(), text.end(),
                                       []( char ch ) { return std::isdigit( static_cast< unsigned char >( ch ) ); } ) )
        fail( kind::bad_value, "invalid value '" + std::string{ text } + "' (expected X or a natural number)" );
    try
    {
        return value::num( std::stoull( std::string{ text } ) );
    }
    catch ( const std::out_of_range& )
    {
        fail( kind::bad_value, "value '" + std::string{ text } + "' is out of range" );
    }
}

loaded_circuit build_circuit( const circuit_description& desc )
{
    std::vector< latch > latches;
    std::map< std::string, latch, std::less<> > declared;
    std::map< std::string, latch_id, std::less<> > ids;

    auto declare = [ & ]( const std::string& name, parity par ) {
        if ( !is_identifier( name ) || name == "X" || name == "inc" )
            fail( kind::malformed, "'" + name + "' is not a usable latch name" );
        if ( declared.contains( name ) )
            fail( kind::duplicate_name, "latch '" + name + "' is declared twice" );
        declared.emplace( name, latch{ par, name } );
        ids.emplace( name, static_cast< latch_id >( latches.size() ) );
        latches.push_back( latch{ par, name } );
    };
    for ( const auto& name : desc.evens )
        declare( name, parity::even );
    for ( const auto& name : desc.odds )
        declare( name, parity::odd );

    auto even_odd = resolve_pairs( desc.even_odd_neighbors, declared, ids, parity::even, "even_odd_neighbors" );
    auto odd_even = resolve_pairs( desc.odd_even_neighbors, declared, ids, parity::odd, "odd_even_neighbors" );

    std::vector< std::set< latch_id > > left( latches.size() );
    for ( const auto& pairs : { &even_odd, &odd_even } )
        for ( const auto& p : *pairs )
            left[ p.right ].insert( p.left );

    for ( const auto& [ name, _ ] : desc.next_state )
        if ( !declared.contains( name ) )
            fail( kind::undeclared_latch, "next_state given for undeclared latch '" + name + "'" );

    std::vector< expr > next_state;
    for ( latch_id id = 0; id < latches.size(); ++id )
    {
        const auto& name = latches[ id ].name;
        auto it = desc.next_state.find( name );
        if ( it == desc.next_state.end() )
            fail( kind::missing_next_state, "latch '" + name + "' has no next_state entry" );

        expr e;
        try
        {
            e = parse_expr( it->second );
        }
        catch ( const parse_error& ex )
        {
            fail( kind::bad_expression, "next_state of '" + name + "': " + ex.what() );
        }

        for ( const auto& ref : e.references() )
        {
            auto target = ids.find( ref );
            if ( target == ids.end() || !left[ id ].contains( target->second ) )
                fail( kind::non_left_neighbor,
                      "next_state of '" + name + "' references '" + ref + "', which is not a left neighbor of '" + name + "'" );
        }
        next_state.push_back( e.resolved( [ & ]( const std::string& ref ) { return ids.at( ref ); } ) );
    }

    latch_state initial( latches.size(), value::x() );
    for ( const auto& [ name, text ] : desc.initial )
    {
        if ( !declared.contains( name ) )
            fail( kind::undeclared_latch, "initial value given for undeclared latch '" + name + "'" );
        if ( declared.at( name ).is_odd() )
            fail( kind::odd_initial, "initial value given for odd latch '" + name + "'; odd latches start undefined" );
        initial[ ids.at( name ) ] = parse_value( text );
    }

    loaded_circuit out{ circuit{ std::move( latches ), std::move( even_odd ), std::move( odd_even ), std::move( next_state ) },
                        std::move( initial ),
                        {} };
    for ( latch_id id = 0; id < out.circ.size(); ++id )
    {
        if ( out.circ.right_neighbors( id ).empty() )
            out.warnings.push_back( "latch '" + out.circ.name( id ) + "' has no right neighbor and never back-pressures a producer" );
    }
    return out;
}

loaded_circuit load_circuit( std::string_view contents )
{
    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse( contents );
    }
    catch ( const nlohmann::json::exception& ex )
    {
        fail( kind::malformed, std::string{ "invalid JSON: " } + ex.what() );
    }
    if ( !doc.is_object() )
        fail( kind::malformed, "circuit file must be a JSON object" );

    static const std::set< std::string, std::less<> > required{ "evens", "odds", "even_odd_neighbors",
                                                                  "odd_even_neighbors", "next_state" };
    for ( const auto& [ key, _ ] : doc.items() )
        if ( !required.contains( key ) && key != "initial" )
            fail( kind::malformed, "unknown key \"" + key + "\"" );
    for ( const auto& key : required )
        if ( !doc.contains( key ) )
            fail( kind::malformed, "missing key \"" + key + "\"" );

    circuit_description desc;
    desc.evens = string_list( doc, "evens" );
    desc.odds = string_list( doc, "odds" );
    desc.even_odd_neighbors = pair_list( doc, "even_odd_neighbors" );
    desc.odd_even_neighbors = pair_list( doc, "odd_even_neighbors" );

    if ( !doc[ "next_state" ].is_object() )
        fail( kind::malformed, "\"next_state\" must be an object of expression strings" );
    for ( const auto& [ name, src ] : doc[ "next_state" ].items() )
    {
        if ( !src.is_string() )
            fail( kind::malformed, "next_state of '" + name + "' must be a string" );
        desc.next_state.emplace( name, src.get< std::string >() );
    }

    if ( doc.contains( "initial" ) )
    {
        if ( !doc[ "initial" ].is_object() )
            fail( kind::malformed, "\"initial\" must be an object" );
        for ( const auto& [ name, v ] : doc[ "initial" ].items() )
        {
            if ( v.is_string() )
                desc.initial.emplace( name, v.get< std::string >() );
            else if ( v.is_number_unsigned() )
                desc.initial.emplace( name, std::to_string( v.get< std::uint64_t >() ) );
            else
                fail( kind::bad_value, "initial value of '" + name + "' must be \"X\" or a natural number" );
        }
    }

    return build_circuit( desc );
}

loaded_circuit load_circuit_file( const std::string& path )
{
    std::ifstream in{ path, std::ios::binary };
    if ( !in )
        fail( kind::malformed, "cannot open circuit file '" + path + "'" );
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_circuit( buf.str() );
}

} // namespace fe
