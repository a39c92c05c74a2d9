// Test-only oracles, independent of the library's computation paths.
#pragma once

#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ttrack/path.hpp"
#include "ttrack/traintrack.hpp"
#include "ttrack/ttm_io.hpp"

namespace oracles {

using namespace ttrack;

inline GraphMap load_map(const std::string& name) {
    return load_ttm_file(std::string(TTRACK_MAPS_DIR) + "/" + name);
}

/// Free reduction by cancelling adjacent inverse pairs in a random order.
inline EdgePath randomized_reduce(const EdgePath& p, std::mt19937_64& rng) {
    std::vector<OrientedEdge> word = p.letters;
    while (true) {
        std::vector<std::size_t> pairs;
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (word[i + 1] == word[i].reversal()) pairs.push_back(i);
        if (pairs.empty()) break;
        std::size_t pick = pairs[rng() % pairs.size()];
        word.erase(word.begin() + pick, word.begin() + pick + 2);
    }
    return EdgePath{word, p.basepoint};
}

/// Random incidence-valid word (possibly untight) of the given length.
inline EdgePath random_walk(const MarkedGraph& g, std::size_t len, std::mt19937_64& rng) {
    std::vector<OrientedEdge> letters;
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<OrientedEdge> options;
        if (letters.empty()) {
            options = g.all_oriented();
        } else {
            options = g.star(g.terminal(letters.back()));
        }
        if (options.empty()) break;
        letters.push_back(options[rng() % options.size()]);
    }
    return EdgePath{letters, letters.empty() ? g.basepoint() : g.initial(letters.front())};
}

/// Random tight path of the given length (no immediate backtracking).
inline EdgePath random_tight_path(const MarkedGraph& g, std::size_t len, std::mt19937_64& rng) {
    std::vector<OrientedEdge> letters;
    for (std::size_t i = 0; i < len; ++i) {
        std::vector<OrientedEdge> options;
        for (OrientedEdge e : letters.empty() ? g.all_oriented() : g.star(g.terminal(letters.back())))
            if (letters.empty() || e != letters.back().reversal()) options.push_back(e);
        if (options.empty()) break;
        letters.push_back(options[rng() % options.size()]);
    }
    return EdgePath{letters, letters.empty() ? g.basepoint() : g.initial(letters.front())};
}

/// Exhaustive check over every cancellation order: can some order cancel a
/// letter of u against a letter of v across the boundary?  Letters carry an
/// origin tag; memoized on the tagged word.
inline bool cross_cancellation_achievable(const std::vector<OrientedEdge>& u,
                                          const std::vector<OrientedEdge>& v) {
    using Tagged = std::vector<std::pair<std::int32_t, bool>>;  // (code, from-right)
    Tagged start;
    for (OrientedEdge e : u) start.emplace_back(e.code(), false);
    for (OrientedEdge e : v) start.emplace_back(e.code(), true);
    std::map<Tagged, bool> memo;
    std::function<bool(const Tagged&)> go = [&](const Tagged& w) -> bool {
        auto it = memo.find(w);
        if (it != memo.end()) return it->second;
        bool result = false;
        for (std::size_t i = 0; i + 1 < w.size() && !result; ++i) {
            if ((w[i].first ^ 1) != w[i + 1].first) continue;
            if (w[i].second != w[i + 1].second) {
                result = true;
                break;
            }
            Tagged next;
            next.reserve(w.size() - 2);
            next.insert(next.end(), w.begin(), w.begin() + i);
            next.insert(next.end(), w.begin() + i + 2, w.end());
            result = go(next);
        }
        memo.emplace(w, result);
        return result;
    };
    return go(start);
}

}  // namespace oracles
