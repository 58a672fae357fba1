#pragma once

#include "flowequiv/circuit.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace fe
{

// Serialized form of a circuit: the JSON file's six keys, unvalidated.
struct circuit_description
{
    std::vector< std::string > evens;
    std::vector< std::string > odds;
    std::vector< std::pair< std::string, std::string > > even_odd_neighbors;
    std::vector< std::pair< std::string, std::string > > odd_even_neighbors;
    std::map< std::string, std::string > next_state;
    std::map< std::string, std::string > initial;
};

class circuit_error : public std::runtime_error
{
public:
    enum class kind
    {
        malformed,
        duplicate_name,
        undeclared_latch,
        parity_violation,
        duplicate_pair,
        non_left_neighbor,
        missing_next_state,
        odd_initial,
        bad_expression,
        bad_value,
    };

    circuit_error( kind k, const std::string& what ) : std::runtime_error{ what }, _kind{ k } {}

    [[nodiscard]] kind get_kind() const { return _kind; }

private:
    kind _kind;
};

struct loaded_circuit
{
    circuit circ;
    latch_state initial;
    std::vector< std::string > warnings;
};

// Validates and builds. Throws circuit_error.
loaded_circuit build_circuit( const circuit_description& desc );

// Parses the JSON circuit file and validates it. Throws circuit_error.
loaded_circuit load_circuit( std::string_view contents );

// Reads and loads a file; I/O failures surface as circuit_error(malformed).
loaded_circuit load_circuit_file( const std::string& path );

// "X" or a decimal natural. Throws circuit_error(bad_value).
value parse_value( std::string_view text );

} // namespace fe
