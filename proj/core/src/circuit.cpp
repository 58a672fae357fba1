#include "flowequiv/circuit.hpp"

#include <cassert>
#include <functional>

namespace fe
{

circuit::circuit( std::vector< latch > latches, std::vector< neighbor_pair > even_odd,
                  std::vector< neighbor_pair > odd_even, std::vector< expr > next_state )
        : _latches{ std::move( latches ) }, _even_odd{ std::move( even_odd ) },
          _odd_even{ std::move( odd_even ) }, _next_state{ std::move( next_state ) },
          _left( _latches.size() ), _right( _latches.size() )
{
    assert( _next_state.size() == _latches.size() );

    for ( latch_id id = 0; id < _latches.size(); ++id )
    {
        ( _latches[ id ].is_even() ? _evens : _odds ).push_back( id );
        _by_name.emplace( _latches[ id ].name, id );
    }

    for ( const auto& pairs : { std::cref( _even_odd ), std::cref( _odd_even ) } )
    {
        for ( const auto& [ left, right ] : pairs.get() )
        {
            _left.at( right ).push_back( left );
            _right.at( left ).push_back( right );
        }
    }
}

std::optional< latch_id > circuit::find( std::string_view name ) const
{
    if ( auto it = _by_name.find( std::string{ name } ); it != _by_name.end() )
        return it->second;
    return std::nullopt;
}

latch_id circuit::id_of( std::string_view name ) const
{
    if ( auto id = find( name ) )
        return *id;
    throw unknown_latch{ std::string{ name } };
}

std::vector< neighbor_pair > circuit::all_neighbor_pairs() const
{
    std::vector< neighbor_pair > out{ _even_odd };
    out.insert( out.end(), _odd_even.begin(), _odd_even.end() );
    return out;
}

namespace
{

std::vector< std::string > names_of( const circuit& c, std::span< const latch_id > ids )
{
    std::vector< std::string > out;
    out.reserve( ids.size() );
    for ( auto id : ids )
        out.push_back( c.name( id ) );
    return out;
}

} // namespace

std::vector< std::string > left_neighbors( const circuit& c, std::string_view latch_name )
{
    return names_of( c, c.left_neighbors( c.id_of( latch_name ) ) );
}

std::vector< std::string > right_neighbors( const circuit& c, std::string_view latch_name )
{
    return names_of( c, c.right_neighbors( c.id_of( latch_name ) ) );
}

value next_state_value( const circuit& c, latch_id l, const latch_state& st )
{
    return eval_expr_with( c.next_state( l ), [ & ]( const expr& ref ) { return st.at( ref.ref_target() ); } );
}

} // namespace fe
