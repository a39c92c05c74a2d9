#pragma once

#include <cstddef>
#include <cstdint>

namespace ttrack {

/// Resource limits for the bounded searches.  Exceeding a cap raises
/// errc::cap_exceeded rather than silently truncating.
struct Caps {
    std::size_t max_word_letters = 1'000'000;  // unreduced word materialization
    int horizon = 8;                           // iteration horizon for searches
    int kmax = 8;                              // exact hard-splitting bound
    std::size_t nielsen_max_len = 12;          // Nielsen path search length
    int depth = 4;                             // monochromatic generation depth
    std::size_t node_budget = 2'000'000;       // generic search node budget
    std::size_t max_states = 4096;             // exhaustive nibbling states kept per step
    int power_cap = 8;                         // iterate search bound
    std::uint64_t seed = 0;                    // randomized oracles / sampling
};

}  // namespace ttrack
