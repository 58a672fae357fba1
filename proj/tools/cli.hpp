#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace fe::cli
{

enum exit_code : int
{
    holds = 0,     // property holds / command succeeded
    violation = 1, // violation, witness, or rejection found
    usage = 2,     // usage, parse, or validation error
};

// Runs `fe` with argv-style arguments (args[0] is the program name).
// Reports go to `out`, diagnostics to `err`.
int run( const std::vector< std::string >& args, std::ostream& out, std::ostream& err );

} // namespace fe::cli
