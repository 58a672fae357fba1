#include "flowequiv/trace.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace fe
{

transparency transparency_of( const circuit& c, std::span< const event > t, latch_id l )
{
    for ( auto it = t.rbegin(); it != t.rend(); ++it )
    {
        if ( it->latch == l )
            return it->is_rise() ? transparency::transparent : transparency::opaque;
    }
    return c.is_odd( l ) ? transparency::transparent : transparency::opaque;
}

std::size_t num_events( const event& e, std::span< const event > t )
{
    return static_cast< std::size_t >( std::count( t.begin(), t.end(), e ) );
}

std::string format_event( const circuit& c, const event& e )
{
    return c.name( e.latch ) + ( e.is_rise() ? "+" : "-" );
}

std::vector< std::string > trace_tokens( const circuit& c, std::span< const event > t )
{
    std::vector< std::string > out;
    out.reserve( t.size() );
    for ( const auto& e : t )
        out.push_back( format_event( c, e ) );
    return out;
}

std::string format_trace( const circuit& c, std::span< const event > t )
{
    std::string out;
    for ( const auto& e : t )
    {
        if ( !out.empty() )
            out += ' ';
        out += format_event( c, e );
    }
    return out;
}

event parse_event( const circuit& c, std::string_view token )
{
    static constexpr std::string_view unicode_minus = "\xE2\x88\x92";

    edge kind;
    std::string_view name;
    if ( token.size() > unicode_minus.size() && token.ends_with( unicode_minus ) )
    {
        kind = edge::fall;
        name = token.substr( 0, token.size() - unicode_minus.size() );
    }
    else if ( token.size() > 1 && ( token.back() == '+' || token.back() == '-' ) )
    {
        kind = token.back() == '+' ? edge::rise : edge::fall;
        name = token.substr( 0, token.size() - 1 );
    }
    else
    {
        throw trace_parse_error{ "malformed event token '" + std::string{ token } + "' (expected NAME+ or NAME-)" };
    }

    auto id = c.find( name );
    if ( !id )
        throw trace_parse_error{ "event '" + std::string{ token } + "' names unknown latch '" + std::string{ name } + "'" };
    return { *id, kind };
}

trace parse_trace( const circuit& c, std::string_view text )
{
    trace out;
    std::istringstream in{ std::string{ text } };
    std::string token;
    while ( in >> token )
        out.push_back( parse_event( c, token ) );
    return out;
}

trace parse_trace_file( const circuit& c, std::string_view contents )
{
    auto first = std::find_if_not( contents.begin(), contents.end(),
                                   []( char ch ) { return std::isspace( static_cast< unsigned char >( ch ) ); } );
    if ( first == contents.end() || *first != '{' )
        return parse_trace( c, contents );

    nlohmann::json doc;
    try
    {
        doc = nlohmann::json::parse( contents );
    }
    catch ( const nlohmann::json::exception& ex )
    {
        throw trace_parse_error{ std::string{ "invalid JSON trace report: " } + ex.what() };
    }
    if ( !doc.contains( "trace" ) || !doc[ "trace" ].is_array() )
        throw trace_parse_error{ "JSON trace report has no \"trace\" array" };

    trace out;
    for ( const auto& token : doc[ "trace" ] )
    {
        if ( !token.is_string() )
            throw trace_parse_error{ "trace tokens must be strings" };
        out.push_back( parse_event( c, token.get< std::string >() ) );
    }
    return out;
}

} // namespace fe
