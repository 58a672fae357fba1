#include "flowequiv/expr.hpp"

#include <cctype>
#include <limits>

namespace fe
{

expr expr::lit( value v )
{
    expr e;
    e._kind = kind::lit;
    e._lit = v;
    return e;
}

expr expr::ref( std::string name )
{
    expr e;
    e._kind = kind::ref;
    e._name = std::move( name );
    return e;
}

expr expr::inc( expr operand )
{
    expr e;
    e._kind = kind::inc;
    e._operand.push_back( std::move( operand ) );
    return e;
}

std::vector< std::string > expr::references() const
{
    std::vector< std::string > out;
    const expr* cur = this;
    while ( cur->_kind == kind::inc )
        cur = &cur->operand();
    if ( cur->_kind == kind::ref )
        out.push_back( cur->_name );
    return out;
}

namespace
{

// Recursive descent over the four productions.
class parser
{
    std::string_view _src;
    std::size_t _pos = 0;

    void skip_ws()
    {
        while ( _pos < _src.size() && std::isspace( static_cast< unsigned char >( _src[ _pos ] ) ) )
            ++_pos;
    }

    [[noreturn]] void fail( const std::string& what ) const { throw parse_error{ what, _pos }; }

    static bool ident_start( char ch ) { return std::isalpha( static_cast< unsigned char >( ch ) ) || ch == '_'; }
    static bool ident_char( char ch ) { return std::isalnum( static_cast< unsigned char >( ch ) ) || ch == '_'; }

    void expect( char ch )
    {
        skip_ws();
        if ( _pos >= _src.size() )
            fail( std::string{ "expected '" } + ch + "' but input ended" );
        if ( _src[ _pos ] != ch )
            fail( std::string{ "expected '" } + ch + "'" );
        ++_pos;
    }

public:
    explicit parser( std::string_view src ) : _src{ src } {}

    expr parse_expression()
    {
        skip_ws();
        if ( _pos >= _src.size() )
            fail( "expected an expression but input ended" );

        const char ch = _src[ _pos ];
        if ( std::isdigit( static_cast< unsigned char >( ch ) ) )
        {
            std::uint64_t n = 0;
            const std::size_t start = _pos;
            while ( _pos < _src.size() && std::isdigit( static_cast< unsigned char >( _src[ _pos ] ) ) )
            {
                const auto digit = static_cast< std::uint64_t >( _src[ _pos ] - '0' );
                if ( n > ( std::numeric_limits< std::uint64_t >::max() - digit ) / 10 )
                    throw parse_error{ "numeric literal out of range", start };
                n = n * 10 + digit;
                ++_pos;
            }
            return expr::lit( value::num( n ) );
        }

        if ( !ident_start( ch ) )
            fail( std::string{ "unexpected character '" } + ch + "'" );

        const std::size_t start = _pos;
        while ( _pos < _src.size() && ident_char( _src[ _pos ] ) )
            ++_pos;
        const std::string_view word = _src.substr( start, _pos - start );

        if ( word == "X" )
            return expr::lit( value::x() );

        if ( word == "inc" )
        {
            skip_ws();
            if ( _pos >= _src.size() || _src[ _pos ] != '(' )
            {
                if ( _pos >= _src.size() )
                    fail( "expected '(' after inc but input ended" );
                throw parse_error{ "'inc' is reserved and cannot name a latch", start };
            }
            ++_pos;
            expr operand = parse_expression();
            expect( ')' );
            return expr::inc( std::move( operand ) );
        }

        return expr::ref( std::string{ word } );
    }

    expr parse_all()
    {
        expr e = parse_expression();
        skip_ws();
        if ( _pos != _src.size() )
            fail( "trailing input" );
        return e;
    }
};

} // namespace

expr parse_expr( std::string_view src )
{
    return parser{ src }.parse_all();
}

std::string print_expr( const expr& e )
{
    switch ( e.get_kind() )
    {
    case expr::kind::lit:
        return e.literal().to_string();
    case expr::kind::ref:
        return e.ref_name();
    case expr::kind::inc:
        return "inc(" + print_expr( e.operand() ) + ")";
    }
    return {};
}

// The undefined value increments to 0: an all-X start state must still let a
// counter latch distinct values on successive cycles.
value inc_value( const value& v )
{
    return v.is_x() ? value::num( 0 ) : value::num( v.as_num() + 1 );
}

value eval_expr( const expr& e, const std::map< std::string, value, std::less<> >& env )
{
    return eval_expr_with( e, [ & ]( const expr& ref ) {
        auto it = env.find( ref.ref_name() );
        if ( it == env.end() )
            throw eval_error_unresolved{ ref.ref_name() };
        return it->second;
    } );
}

} // namespace fe
