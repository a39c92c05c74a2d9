#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

enum class VerdictKind { NotHard, HardUpTo, CertifiedHard };

enum class Certificate {
    None,
    ParabolicPrefix,  // C1: f(E) = E (.) w with w an initial subpath of u_E
    NielsenJunction,  // C2: both sides Nielsen, junction turn legal
    PositiveCone,     // C3: no letter and its reversal reachable on opposite sides
};

inline const char* certificate_name(Certificate c) {
    switch (c) {
        case Certificate::None: return "none";
        case Certificate::ParabolicPrefix: return "C1-parabolic-prefix";
        case Certificate::NielsenJunction: return "C2-nielsen-junction";
        case Certificate::PositiveCone: return "C3-positive-cone";
    }
    return "?";
}

/// A replayable cross-cancellation: positions i in the unreduced left image
/// and j in the unreduced right image with inverse letters and freely
/// trivial flanks between them.
struct CrossWitness {
    int k = 0;
    std::size_t i = 0;
    std::size_t j = 0;
};

struct SplitVerdict {
    VerdictKind kind = VerdictKind::HardUpTo;
    Certificate certificate = Certificate::None;
    int k = 0;  // failing iterate for NotHard; the checked bound for HardUpTo
    std::optional<CrossWitness> witness;

    bool hard() const { return kind != VerdictKind::NotHard; }
};

inline std::string verdict_name(const SplitVerdict& v) {
    switch (v.kind) {
        case VerdictKind::NotHard: return "NotHard(k=" + std::to_string(v.k) + ")";
        case VerdictKind::HardUpTo: return "HardUpTo(k=" + std::to_string(v.k) + ")";
        case VerdictKind::CertifiedHard:
            return std::string("CertifiedHard(") + certificate_name(v.certificate) + ")";
    }
    return "?";
}

/// Positions j such that the strict prefix word[0..j) is freely trivial.
inline std::vector<std::size_t> trivial_prefix_positions(const std::vector<OrientedEdge>& word) {
    std::vector<std::size_t> out;
    std::vector<OrientedEdge> stack;
    for (std::size_t j = 0; j < word.size(); ++j) {
        if (stack.empty()) out.push_back(j);
        OrientedEdge e = word[j];
        if (!stack.empty() && stack.back() == e.reversal())
            stack.pop_back();
        else
            stack.push_back(e);
    }
    return out;
}

/// Positions i such that the strict suffix word(i..] is freely trivial.
inline std::vector<std::size_t> trivial_suffix_positions(const std::vector<OrientedEdge>& word) {
    // The suffix after i is trivial iff the prefix of the formal inverse of
    // length n-1-i is trivial; one right-to-left pushdown pass suffices.
    std::vector<std::size_t> out;
    std::vector<OrientedEdge> stack;
    const std::size_t n = word.size();
    for (std::size_t t = 0; t < n; ++t) {
        if (stack.empty()) out.push_back(n - 1 - t);
        OrientedEdge e = word[n - 1 - t].reversal();
        if (!stack.empty() && stack.back() == e.reversal())
            stack.pop_back();
        else
            stack.push_back(e);
    }
    std::reverse(out.begin(), out.end());
    return out;
}

/// Is f#^k(sigma) = f#^k(sigma1) f#^k(sigma2) a decomposition into subpaths?
inline bool is_k_splitting(const GraphMap& f, const EdgePath& path, std::size_t pos, int k) {
    if (pos == 0 || pos >= path.size())
        throw error(errc::parse_error, "split position must be interior");
    EdgePath a = f.f_sharp_pow(subpath(path, 0, pos), k);
    EdgePath b = f.f_sharp_pow(subpath(path, pos, path.size()), k);
    if (!a.empty() && !b.empty() && b.letters.front() == a.letters.back().reversal()) return false;
    return a.size() + b.size() == f.f_sharp_pow(path, k).size();
}

/// Exact decision of the hard k-splitting predicate.
///
/// Let U, V be the unreduced words f^k(sigma1), f^k(sigma2).  Before the
/// first cross-boundary cancellation all cancellations are internal, so the
/// meeting letters are a suffix-survivor of U and a prefix-survivor of V.
/// Hence a cross-cancellation is achievable under some tightening order iff
/// there are positions i in U with freely trivial strict suffix and j in V
/// with freely trivial strict prefix and U[i] = reversal(V[j]).
inline bool is_hard_k_splitting(const GraphMap& f, const EdgePath& path, std::size_t pos, int k,
                                CrossWitness* witness = nullptr) {
    if (pos == 0 || pos >= path.size())
        throw error(errc::parse_error, "split position must be interior");
    EdgePath u = f.raw_pow(subpath(path, 0, pos), k);
    EdgePath v = f.raw_pow(subpath(path, pos, path.size()), k);
    auto su = trivial_suffix_positions(u.letters);
    auto pv = trivial_prefix_positions(v.letters);
    std::map<std::int32_t, std::size_t> first_left;  // letter code -> least i
    for (std::size_t i : su)
        if (!first_left.count(u.letters[i].code())) first_left[u.letters[i].code()] = i;
    for (std::size_t j : pv) {
        auto it = first_left.find(v.letters[j].reversal().code());
        if (it != first_left.end()) {
            if (witness) *witness = CrossWitness{k, it->second, j};
            return false;
        }
    }
    return true;
}

namespace detail {

inline bool parabolic_prefix_certifies(const GraphMap& f, const EdgePath& path, std::size_t pos) {
    if (pos != 1) return false;
    OrientedEdge e = path.letters[0];
    if (e.is_reversed()) return false;
    const Stratum& s = f.filtration().strata[f.filtration().stratum_of(e) - 1];
    if (s.kind != StratumKind::Parabolic || !s.prefix_form || s.prefix_edge != e.edge_index())
        return false;
    const EdgePath& u = s.suffix;
    std::size_t rest = path.size() - pos;
    if (rest > u.size()) return false;
    for (std::size_t t = 0; t < rest; ++t)
        if (path.letters[pos + t] != u.letters[t]) return false;
    return true;
}

inline bool nielsen_junction_certifies(const GraphMap& f, const EdgePath& path, std::size_t pos) {
    Turn t(path.letters[pos - 1].reversal(), path.letters[pos]);
    if (!f.turn_legal_cached(t)) return false;
    EdgePath a = subpath(path, 0, pos);
    EdgePath b = subpath(path, pos, path.size());
    return f.f_sharp(a) == a && f.f_sharp(b) == b;
}

inline bool positive_cone_certifies(const GraphMap& f, const EdgePath& path, std::size_t pos) {
    auto left = f.letter_closure(std::vector<OrientedEdge>(path.letters.begin(), path.letters.begin() + pos));
    auto right = f.letter_closure(std::vector<OrientedEdge>(path.letters.begin() + pos, path.letters.end()));
    for (std::int32_t code : left)
        if (right.count(code ^ 1)) return false;
    return true;
}

}  // namespace detail

/// Three-valued hardness verdict for one interior split position.  The exact
/// check runs first for k = 1..kmax; certificates can then upgrade bounded
/// knowledge to a for-all-k statement.
inline SplitVerdict hard_split_verdict(const GraphMap& f, const EdgePath& path, std::size_t pos,
                                       int kmax) {
    auto exact = [&](int k, SplitVerdict& v) {
        CrossWitness w;
        if (!is_hard_k_splitting(f, path, pos, k, &w)) {
            v.kind = VerdictKind::NotHard;
            v.k = k;
            v.witness = w;
            return false;
        }
        return true;
    };
    SplitVerdict v;
    v.k = kmax;
    if (kmax >= 1 && !exact(1, v)) return v;
    // A certificate subsumes the remaining exact levels.
    if (detail::parabolic_prefix_certifies(f, path, pos)) {
        v.kind = VerdictKind::CertifiedHard;
        v.certificate = Certificate::ParabolicPrefix;
        return v;
    }
    {
        // The mirror form: hardness is insensitive to global orientation.
        EdgePath rev = reverse_path(f.graph(), path);
        std::size_t rpos = path.size() - pos;
        if (detail::parabolic_prefix_certifies(f, rev, rpos)) {
            v.kind = VerdictKind::CertifiedHard;
            v.certificate = Certificate::ParabolicPrefix;
            return v;
        }
    }
    if (detail::nielsen_junction_certifies(f, path, pos)) {
        v.kind = VerdictKind::CertifiedHard;
        v.certificate = Certificate::NielsenJunction;
        return v;
    }
    if (detail::positive_cone_certifies(f, path, pos)) {
        v.kind = VerdictKind::CertifiedHard;
        v.certificate = Certificate::PositiveCone;
        return v;
    }
    for (int k = 2; k <= kmax; ++k)
        if (!exact(k, v)) return v;
    v.kind = VerdictKind::HardUpTo;
    return v;
}

/// A path with its verified hard splitting points.
struct Decomposition {
    EdgePath base;
    std::vector<std::size_t> positions;   // ascending interior split points
    std::vector<SplitVerdict> verdicts;   // parallel to positions

    std::vector<EdgePath> factors() const {
        std::vector<EdgePath> out;
        std::size_t prev = 0;
        for (std::size_t p : positions) {
            out.push_back(subpath(base, prev, p));
            prev = p;
        }
        out.push_back(subpath(base, prev, base.size()));
        return out;
    }

    bool fully_certified() const {
        for (const auto& v : verdicts)
            if (v.kind != VerdictKind::CertifiedHard) return false;
        return true;
    }
};

/// Marks every interior position whose verdict is not NotHard.  Factors are
/// h-indivisible at the reported confidence; positions are independent, so
/// the outcome is the unique maximal hard splitting at this confidence.
inline Decomposition maximal_hard_splitting(const GraphMap& f, const EdgePath& path, int kmax) {
    Decomposition d;
    d.base = path;
    for (std::size_t pos = 1; pos < path.size(); ++pos) {
        SplitVerdict v = hard_split_verdict(f, path, pos, kmax);
        if (v.hard()) {
            d.positions.push_back(pos);
            d.verdicts.push_back(v);
        }
    }
    return d;
}

/// True iff there is a hard splitting immediately on either side of the sub
/// edge-path [lo,hi).
inline bool is_displayed(const GraphMap& f, const EdgePath& path, std::size_t lo, std::size_t hi,
                         int kmax) {
    if (lo > 0 && !hard_split_verdict(f, path, lo, kmax).hard()) return false;
    if (hi < path.size() && !hard_split_verdict(f, path, hi, kmax).hard()) return false;
    return true;
}

}  // namespace ttrack
