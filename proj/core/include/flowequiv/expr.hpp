#pragma once

#include "flowequiv/value.hpp"

#include <cstddef>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace fe
{

// Next-state expression: expr ::= "X" | NAT | IDENT | "inc" "(" expr ")".
class expr
{
public:
    enum class kind : std::uint8_t
    {
        lit,
        ref,
        inc,
    };

    static constexpr std::uint32_t unresolved = UINT32_MAX;

    static expr lit( value v );
    static expr ref( std::string name );
    static expr inc( expr operand );

    [[nodiscard]] kind get_kind() const { return _kind; }
    [[nodiscard]] const value& literal() const { return _lit; }
    [[nodiscard]] const std::string& ref_name() const { return _name; }
    // Latch id a reference resolves to, or `unresolved`.
    [[nodiscard]] std::uint32_t ref_target() const { return _target; }
    [[nodiscard]] const expr& operand() const { return _operand.front(); }

    // Names of every latch referenced, in left-to-right order.
    [[nodiscard]] std::vector< std::string > references() const;

    // Returns a copy whose references carry the ids produced by `resolve`.
    template < typename Resolve >
    [[nodiscard]] expr resolved( Resolve&& resolve ) const
    {
        expr out = *this;
        out.resolve_in_place( resolve );
        return out;
    }

    friend bool operator==( const expr& a, const expr& b )
    {
        return a._kind == b._kind && a._lit == b._lit && a._name == b._name && a._operand == b._operand;
    }

private:
    kind _kind = kind::lit;
    value _lit;
    std::string _name;
    std::uint32_t _target = unresolved;
    std::vector< expr > _operand; // exactly one element for inc

    template < typename Resolve >
    void resolve_in_place( Resolve& resolve )
    {
        if ( _kind == kind::ref )
            _target = resolve( _name );
        for ( auto& op : _operand )
            op.resolve_in_place( resolve );
    }
};

class parse_error : public std::runtime_error
{
    std::size_t _offset;

public:
    parse_error( const std::string& what, std::size_t offset )
            : std::runtime_error{ what + " at offset " + std::to_string( offset ) }, _offset{ offset }
    {}

    [[nodiscard]] std::size_t offset() const { return _offset; }
};

class eval_error_unresolved : public std::runtime_error
{
public:
    explicit eval_error_unresolved( const std::string& name )
            : std::runtime_error{ "unresolved reference '" + name + "'" }
    {}
};

// Throws parse_error with the byte offset of the first offending character.
expr parse_expr( std::string_view src );

std::string print_expr( const expr& e );

// inc on values: Num n -> Num (n+1), X -> Num 0.
value inc_value( const value& v );

// Evaluates with references looked up by name. Throws eval_error_unresolved.
value eval_expr( const expr& e, const std::map< std::string, value, std::less<> >& env );

// Evaluates with references looked up through `lookup(const expr&)`, which
// receives the ref node (resolved target and name available).
template < typename Lookup >
value eval_expr_with( const expr& e, Lookup&& lookup )
{
    switch ( e.get_kind() )
    {
    case expr::kind::lit:
        return e.literal();
    case expr::kind::ref:
        return lookup( e );
    case expr::kind::inc:
        return inc_value( eval_expr_with( e.operand(), lookup ) );
    }
    return value::x();
}

} // namespace fe
