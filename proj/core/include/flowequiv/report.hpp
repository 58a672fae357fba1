#pragma once

#include "flowequiv/flow_equiv.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace fe
{

// JSON forms of verdicts. Traces are token arrays ("C+", "SNK-"); values are
// "X" or integers.

nlohmann::json value_to_json( const value& v );
nlohmann::json trace_to_json( const circuit& c, const trace& t );
nlohmann::json sync_table_to_json( const circuit& c, const std::vector< latch_state >& rows );

nlohmann::json check_to_json( const circuit& c, const latch_state& st0, const check_result& r,
                              std::string_view protocol, std::size_t depth );
nlohmann::json refinement_to_json( const circuit& c, const refinement_result& r, std::string_view from,
                                   std::string_view to );
nlohmann::json lemma_to_json( const circuit& c, const lemma_report& r );

} // namespace fe
