#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace fe
{

// A latch datum: a natural number or the undefined value X.
class value
{
    std::optional< std::uint64_t > _num;

    explicit value( std::optional< std::uint64_t > n ) : _num{ n } {}

public:
    // Default-constructed values are X.
    value() = default;

    static value num( std::uint64_t n ) { return value{ n }; }
    static value x() { return value{ std::nullopt }; }

    [[nodiscard]] bool is_x() const { return !_num.has_value(); }
    [[nodiscard]] bool is_num() const { return _num.has_value(); }

    // Precondition: is_num().
    [[nodiscard]] std::uint64_t as_num() const { return *_num; }

    [[nodiscard]] std::string to_string() const
    {
        return _num ? std::to_string( *_num ) : std::string{ "X" };
    }

    friend bool operator==( const value&, const value& ) = default;
};

inline std::ostream& operator<<( std::ostream& os, const value& v )
{
    return os << v.to_string();
}

} // namespace fe
