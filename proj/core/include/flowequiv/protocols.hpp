#pragma once

#include "flowequiv/circuit.hpp"
#include "flowequiv/marked_graph.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fe
{

enum class protocol_kind
{
    desynchronization,
    rise_decoupled,
    fall_decoupled,
};

// "desync", "rise", "fall"
std::string_view protocol_name( protocol_kind k );
std::optional< protocol_kind > parse_protocol( std::string_view name );

// Places of the protocol graph, in this order: for each latch (id order)
// self_fall then self_rise; then for each neighbor pair (even-odd list, then
// odd-even list) forward then backward. For a pair (l, l'):
//   desynchronization: forward l+ -> l'-
//   rise_decoupled:    forward l- -> l'-
//   fall_decoupled:    forward l+ -> l'+
//   all:               backward l'- -> l+, self_fall l+ -> l-, self_rise l- -> l+
std::vector< place > protocol_places( protocol_kind k, const circuit& c );

// self_fall(odd) = self_rise(even) = 1; backward = 0; forward = 1 for every
// pair (desynchronization), for even->odd pairs (rise_decoupled), or for
// odd->even pairs (fall_decoupled).
marking protocol_marking( protocol_kind k, const circuit& c, const std::vector< place >& places );

marked_graph build_protocol( protocol_kind k, const circuit& c );

// Every latch's self cycle (l+ -> l- -> l+) and every neighbor pair's
// protocol cycle: desync (l+ -> l'- -> l+), rise (l+ -> l- -> l'- -> l+),
// fall (l+ -> l'+ -> l'- -> l+). Each sums to 1 under the initial marking.
std::vector< path > protocol_local_cycles( protocol_kind k, const circuit& c, const marked_graph& g );

struct lemma_violation
{
    std::string lemma;
    trace witness;
    std::optional< latch_id > latch;
    std::string detail;
};

struct lemma_report
{
    std::string name;
    std::size_t checked = 0; // traces or markings examined
    std::optional< lemma_violation > violation;

    [[nodiscard]] bool passed() const { return !violation.has_value(); }
};

// Rise-decoupled lemmas over every admitted trace t (marking m) up to depth:
//  (a) m(l- -> l'-) > 0 for a right neighbor l'  =>  l opaque in t;
//  (b) l- enabled in m  =>  for every left neighbor l',
//      #(l'-) = #(l-) if l odd, 1 + #(l-) if l even.
lemma_report check_rd_lemmas( const circuit& c, std::size_t depth );
lemma_report check_rd_lemmas( const circuit& c, const marked_graph& g, std::size_t depth );

// Fall-decoupled lemmas over every admitted trace t up to depth:
//  opaque l:      #(l-) = 1 + #(l+) if l odd, #(l+) if l even;
//  transparent l: for every left neighbor l', #(l+) = #(l'+) if l odd,
//                 1 + #(l'+) if l even.
lemma_report check_fd_lemmas( const circuit& c, std::size_t depth );
lemma_report check_fd_lemmas( const circuit& c, const marked_graph& g, std::size_t depth );

// Every elementary cycle keeps its initial token sum at every marking
// reachable within depth.
lemma_report check_cycle_conservation( const marked_graph& g, std::size_t depth );

// Single-firing algebra on paths: at every marking reachable within depth and
// every enabled e, path_sum changes by exactly firing_delta for every place,
// every two-place chain, and every elementary cycle with its proper prefixes.
lemma_report check_firing_table( const marked_graph& g, std::size_t depth );

// Transitions enabled at the initial marking.
std::vector< event > initially_enabled( const marked_graph& g );

} // namespace fe
