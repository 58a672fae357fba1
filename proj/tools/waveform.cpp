#include "waveform.hpp"

#include <algorithm>
#include <sstream>
#include <vector>

namespace fe::cli
{

namespace
{

constexpr std::string_view high = "\xE2\x80\xBE"; // U+203E OVERLINE
constexpr std::string_view low = "_";

std::string repeat( std::string_view s, std::size_t n )
{
    std::string out;
    for ( std::size_t i = 0; i < n; ++i )
        out += s;
    return out;
}

std::string pad( const std::string& s, std::size_t width )
{
    return s.size() >= width ? s : s + std::string( width - s.size(), ' ' );
}

} // namespace

std::string render_waveform( const circuit& c, const latch_state& st0, const trace& t )
{
    std::size_t label_width = 5;
    for ( const auto& l : c.latches() )
        label_width = std::max( label_width, l.name.size() );
    label_width += 2;

    direct_evaluator eval{ c, st0, t };

    // Latched values, one per fall.
    std::vector< std::string > annotation( t.size() );
    std::vector< std::string > footnotes;
    for ( std::size_t i = 0; i < t.size(); ++i )
    {
        if ( !t[ i ].is_fall() )
            continue;
        const auto r = eval.eval( t[ i ].latch, i + 1 );
        if ( const auto* v = std::get_if< value >( &r ) )
        {
            annotation[ i ] = v->to_string();
        }
        else
        {
            annotation[ i ] = "?";
            footnotes.push_back( "? at event " + std::to_string( i ) + " (" + format_event( c, t[ i ] ) +
                                 "): " + std::get< eval_error >( r ).describe( c ) );
        }
    }

    std::size_t cell = 4;
    for ( std::size_t i = 0; i < t.size(); ++i )
        cell = std::max( { cell, format_event( c, t[ i ] ).size(), annotation[ i ].size(), std::to_string( i ).size() } );
    cell += 1;

    std::ostringstream out;
    out << pad( "", label_width ) << pad( "init", cell );
    for ( std::size_t i = 0; i < t.size(); ++i )
        out << pad( std::to_string( i ), cell );
    out << '\n';
    out << pad( "", label_width ) << pad( "", cell );
    for ( const auto& e : t )
        out << pad( format_event( c, e ), cell );
    out << '\n';

    for ( latch_id l = 0; l < c.size(); ++l )
    {
        transparency phase = transparency_of( c, {}, l );
        std::string wave = pad( c.name( l ), label_width );
        std::string values = pad( "", label_width ) + pad( "", cell );
        bool annotated = false;

        wave += repeat( phase == transparency::transparent ? high : low, cell );
        for ( std::size_t i = 0; i < t.size(); ++i )
        {
            const event& e = t[ i ];
            if ( e.latch == l && e.is_rise() )
            {
                wave += "/" + repeat( high, cell - 1 );
                phase = transparency::transparent;
                values += pad( "", cell );
            }
            else if ( e.latch == l )
            {
                wave += "\\" + repeat( low, cell - 1 );
                phase = transparency::opaque;
                values += pad( annotation[ i ], cell );
                annotated = true;
            }
            else
            {
                wave += repeat( phase == transparency::transparent ? high : low, cell );
                values += pad( "", cell );
            }
        }

        out << wave << '\n';
        if ( annotated )
        {
            values.erase( values.find_last_not_of( ' ' ) + 1 );
            out << values << '\n';
        }
    }

    for ( const auto& note : footnotes )
        out << note << '\n';
    return out.str();
}

} // namespace fe::cli
