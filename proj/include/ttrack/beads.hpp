#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/power.hpp"
#include "ttrack/splitting.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

struct NibblePolicy {
    enum class Kind { Entire, LeftOnly, RightOnly, BothEnds, Exhaustive, Seeded } kind = Kind::Entire;
    int trim_left = 1;   // per-step amounts for LeftOnly / RightOnly / BothEnds
    int trim_right = 1;
    std::size_t cap = 4096;    // Exhaustive: states kept per step
    std::uint64_t seed = 0;    // Seeded

    static NibblePolicy entire() { return {}; }
    static NibblePolicy left_only(int t = 1) { return {Kind::LeftOnly, t, 0, 4096, 0}; }
    static NibblePolicy right_only(int t = 1) { return {Kind::RightOnly, 0, t, 4096, 0}; }
    static NibblePolicy both_ends(int t = 1) { return {Kind::BothEnds, t, t, 4096, 0}; }
    static NibblePolicy exhaustive(std::size_t cap = 4096) { return {Kind::Exhaustive, 0, 0, cap, 0}; }
    static NibblePolicy seeded(std::uint64_t seed) { return {Kind::Seeded, 0, 0, 4096, seed}; }
};

/// Per-step parent correspondence: entry (pos, parent_pos, weight) says the
/// edge at `pos` of this step's path descends from the letter at
/// `parent_pos` of the previous step's path under the recorded tightening.
struct ForestEntry {
    std::size_t pos = 0;
    long parent_pos = -1;  // -1 at step zero
    int weight = 0;
};

struct TrajectoryStep {
    int step = 0;
    EdgePath path;
    std::vector<ForestEntry> entries;
};

namespace detail {

/// Free reduction in a random order of adjacent cancellations; origins of
/// surviving letters are reported.  The reduced word is order-independent,
/// the surviving positions are not.
inline EdgePath tighten_randomized(const EdgePath& p, std::vector<std::size_t>& parents,
                                   std::mt19937_64& rng) {
    std::vector<std::pair<OrientedEdge, std::size_t>> word;
    word.reserve(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) word.emplace_back(p.letters[i], i);
    while (true) {
        std::vector<std::size_t> cancellable;
        for (std::size_t i = 0; i + 1 < word.size(); ++i)
            if (word[i + 1].first == word[i].first.reversal()) cancellable.push_back(i);
        if (cancellable.empty()) break;
        std::size_t pick = cancellable[rng() % cancellable.size()];
        word.erase(word.begin() + pick, word.begin() + pick + 2);
    }
    EdgePath out;
    out.basepoint = p.basepoint;
    parents.clear();
    for (auto& [e, src] : word) {
        out.letters.push_back(e);
        parents.push_back(src);
    }
    return out;
}

}  // namespace detail

/// One f# step with the parent correspondence; `rng` selects a random
/// tightening order instead of the leftmost-innermost one.
inline TrajectoryStep nibble_step_full(const GraphMap& f, const TrajectoryStep& prev,
                                       std::mt19937_64* rng = nullptr) {
    const EdgePath& p = prev.path;
    std::vector<OrientedEdge> raw;
    std::vector<std::size_t> raw_parent;  // index of the source letter of p
    std::size_t total = 0;
    for (OrientedEdge e : p.letters) total += f.forward_image(e.edge_index()).size();
    if (total > f.word_cap()) throw error(errc::cap_exceeded, "nibble_step: word cap exceeded");
    raw.reserve(total);
    for (std::size_t i = 0; i < p.size(); ++i) {
        std::size_t before = raw.size();
        f.append_image(p.letters[i], raw);
        for (std::size_t t = before; t < raw.size(); ++t) raw_parent.push_back(i);
    }
    EdgePath raw_path{std::move(raw), f.vertex_image(initial_vertex(f.graph(), p))};
    std::vector<std::size_t> survivors;
    EdgePath tightened = rng ? detail::tighten_randomized(raw_path, survivors, *rng)
                             : tighten_with_parents(raw_path, survivors);
    TrajectoryStep out;
    out.step = prev.step + 1;
    out.path = tightened;
    for (std::size_t t = 0; t < tightened.size(); ++t) {
        ForestEntry fe;
        fe.pos = t;
        fe.parent_pos = static_cast<long>(raw_parent[survivors[t]]);
        fe.weight = f.filtration().stratum_of(tightened.letters[t]);
        out.entries.push_back(fe);
    }
    return out;
}

/// Restricts a step to the sub edge-path [lo,hi), renumbering positions.
inline TrajectoryStep trim_step(const TrajectoryStep& full, std::size_t lo, std::size_t hi) {
    TrajectoryStep out;
    out.step = full.step;
    out.path = subpath(full.path, lo, hi);
    for (std::size_t t = lo; t < hi; ++t) {
        ForestEntry fe = full.entries[t];
        fe.pos = t - lo;
        out.entries.push_back(fe);
    }
    return out;
}

inline TrajectoryStep nibble_step(const GraphMap& f, const TrajectoryStep& prev, int trim_left,
                                  int trim_right, std::mt19937_64* rng = nullptr) {
    TrajectoryStep full = nibble_step_full(f, prev, rng);
    std::size_t lo = std::min<std::size_t>(trim_left < 0 ? 0 : trim_left, full.path.size());
    std::size_t hi = full.path.size() - std::min<std::size_t>(trim_right < 0 ? 0 : trim_right,
                                                              full.path.size() - lo);
    return trim_step(full, lo, hi);
}

inline TrajectoryStep trajectory_root(const GraphMap& f, const EdgePath& p) {
    TrajectoryStep root;
    root.step = 0;
    root.path = p;
    for (std::size_t i = 0; i < p.size(); ++i)
        root.entries.push_back(ForestEntry{i, -1, f.filtration().stratum_of(p.letters[i])});
    return root;
}

/// Deterministic single-trajectory nibbled future with its family forest.
inline std::vector<TrajectoryStep> nibbled_trajectory(const GraphMap& f, const EdgePath& path,
                                                      int steps, const NibblePolicy& policy,
                                                      bool randomized_tightening = false) {
    std::vector<TrajectoryStep> out;
    out.push_back(trajectory_root(f, path));
    std::mt19937_64 rng(policy.seed);
    std::mt19937_64 trng(policy.seed ^ 0x9e3779b97f4a7c15ull);
    for (int s = 1; s <= steps; ++s) {
        const TrajectoryStep& prev = out.back();
        if (prev.path.empty()) break;
        TrajectoryStep full = nibble_step_full(f, prev, randomized_tightening ? &trng : nullptr);
        std::size_t lo = 0, hi = full.path.size();
        auto clamp_trim = [&](int t) {
            return std::min<std::size_t>(t < 0 ? 0 : static_cast<std::size_t>(t), hi - lo);
        };
        switch (policy.kind) {
            case NibblePolicy::Kind::Entire: break;
            case NibblePolicy::Kind::LeftOnly: lo += clamp_trim(policy.trim_left); break;
            case NibblePolicy::Kind::RightOnly: hi -= clamp_trim(policy.trim_right); break;
            case NibblePolicy::Kind::BothEnds:
                lo += clamp_trim(policy.trim_left);
                hi -= clamp_trim(policy.trim_right);
                break;
            case NibblePolicy::Kind::Seeded: {
                // Modest random trim from each side, often nothing.
                auto draw = [&]() -> std::size_t {
                    std::size_t len = hi - lo;
                    if (len == 0 || (rng() & 1)) return 0;
                    return rng() % std::max<std::size_t>(len / 4, 2);
                };
                lo += std::min(draw(), hi - lo);
                hi -= std::min(draw(), hi - lo);
                break;
            }
            case NibblePolicy::Kind::Exhaustive:
                throw error(errc::parse_error, "exhaustive policy has no single trajectory");
        }
        out.push_back(trim_step(full, lo, hi));
    }
    return out;
}

/// All k-step nibbled futures up to caps, deduplicated by (path, step).
inline std::vector<std::pair<int, EdgePath>> exhaustive_futures(const GraphMap& f, const EdgePath& path,
                                                                int steps, std::size_t state_cap,
                                                                bool* capped = nullptr) {
    std::vector<std::pair<int, EdgePath>> out;
    std::set<EdgePath> level{path};
    out.emplace_back(0, path);
    for (int s = 1; s <= steps; ++s) {
        std::set<EdgePath> next;
        for (const EdgePath& p : level) {
            if (p.empty()) continue;
            EdgePath img = f.f_sharp(p);
            for (EdgePath& sp : sub_edge_paths(img)) {
                if (next.size() >= state_cap) {
                    if (capped) *capped = true;
                    break;
                }
                next.insert(std::move(sp));
            }
        }
        for (const EdgePath& p : next) out.emplace_back(s, p);
        level = std::move(next);
    }
    return out;
}

/// Closure of the edge set under (f#^r then sub edge-path) up to the given
/// depth; each path appears once, at its first depth, in (depth, size, lex)
/// order.
inline std::vector<std::pair<int, EdgePath>> monochromatic_paths(const GraphMap& f, int r, int depth,
                                                                 const Caps& caps = {},
                                                                 bool* capped = nullptr) {
    if (r < 1) throw error(errc::parse_error, "monochromatic generation needs r >= 1");
    const MarkedGraph& g = f.graph();
    std::set<EdgePath> seen;
    std::vector<std::pair<int, EdgePath>> out;
    std::vector<EdgePath> level;
    for (OrientedEdge e : g.all_oriented()) {
        EdgePath p{{e}, g.initial(e)};
        if (seen.insert(p).second) {
            out.emplace_back(0, p);
            level.push_back(p);
        }
    }
    std::sort(out.begin(), out.end());
    std::sort(level.begin(), level.end());
    for (int d = 1; d <= depth; ++d) {
        std::set<EdgePath> fresh;
        for (const EdgePath& p : level) {
            EdgePath img = f.f_sharp_pow(p, r);
            for (EdgePath& sp : sub_edge_paths(img)) {
                if (seen.size() >= caps.max_states) {
                    if (capped) *capped = true;
                    break;
                }
                if (!seen.count(sp)) {
                    seen.insert(sp);
                    fresh.insert(std::move(sp));
                }
            }
        }
        level.assign(fresh.begin(), fresh.end());
        for (const EdgePath& p : level) out.emplace_back(d, p);
    }
    return out;
}

enum class BeadKind { Gep, Pep, Nielsen, Atom };

inline const char* bead_kind_name(BeadKind k) {
    switch (k) {
        case BeadKind::Gep: return "gep";
        case BeadKind::Pep: return "pep";
        case BeadKind::Nielsen: return "nielsen";
        case BeadKind::Atom: return "atom";
    }
    return "?";
}

struct Bead {
    BeadKind kind = BeadKind::Atom;
    EdgePath path;
    std::optional<GepData> gep;
    std::optional<PepData> pep;
    std::string evidence;
};

struct BeadContext {
    int J = 1;
    int kmax = 8;
    bool k1_context = false;     // caller asserts the map is the certified iterate
    bool inherited_mono = true;  // atom monochromaticity inherited from the pipeline
    int r = 1;                   // iterate exponent for the bounded atom evidence search
    Caps caps;
};

/// First match in the order GEP, PEP, indivisible Nielsen (<= J), atom (<= J).
/// The path must be h-indivisible (a factor of a maximal hard splitting).
inline std::optional<Bead> classify_bead(const GraphMap& f, const EdgePath& path,
                                         const BeadContext& ctx) {
    if (path.empty()) return std::nullopt;
    if (auto gd = is_gep(f, path)) {
        Bead b;
        b.kind = BeadKind::Gep;
        b.path = path;
        b.gep = gd;
        return b;
    }
    if (auto pd = is_pep(f, path, ctx.k1_context)) {
        Bead b;
        b.kind = BeadKind::Pep;
        b.path = path;
        b.pep = pd;
        return b;
    }
    if (static_cast<int>(path.size()) <= ctx.J && is_nielsen(f, path) &&
        detail::nielsen_indivisible(f, path)) {
        Bead b;
        b.kind = BeadKind::Nielsen;
        b.path = path;
        return b;
    }
    if (static_cast<int>(path.size()) <= ctx.J) {
        bool mono = ctx.inherited_mono;
        std::string evidence = mono ? "inherited" : "";
        if (!mono) {
            for (OrientedEdge e : f.graph().all_oriented()) {
                EdgePath cur{{e}, f.graph().initial(e)};
                for (int t = 0; t <= ctx.caps.horizon && !mono; ++t) {
                    if (contains_subpath(cur, path)) {
                        mono = true;
                        evidence = "subpath of f#^" + std::to_string(t * ctx.r) + "(" +
                                   f.graph().token(e) + ")";
                    }
                    if (cur.size() > ctx.caps.max_word_letters / 4) break;
                    cur = f.f_sharp_pow(cur, ctx.r);
                }
                if (mono) break;
            }
        }
        if (mono) {
            Bead b;
            b.kind = BeadKind::Atom;
            b.path = path;
            b.evidence = evidence;
            return b;
        }
    }
    return std::nullopt;
}

struct BeadedResult {
    bool ok = false;
    Decomposition decomposition;
    std::vector<Bead> beads;
    EdgePath failed_factor;  // first unclassifiable factor when !ok
};

/// Maximal hard splitting, then bead classification of every factor.
inline BeadedResult beaded_decomposition(const GraphMap& f, const EdgePath& path,
                                         const BeadContext& ctx) {
    BeadedResult res;
    res.decomposition = maximal_hard_splitting(f, path, ctx.kmax);
    for (const EdgePath& factor : res.decomposition.factors()) {
        if (factor.empty()) continue;
        auto bead = classify_bead(f, factor, ctx);
        if (!bead) {
            res.ok = false;
            res.failed_factor = factor;
            return res;
        }
        res.beads.push_back(std::move(*bead));
    }
    res.ok = true;
    return res;
}

struct BeadParams {
    int r = 1;
    int J = 1;
    std::string provenance;
};

/// r from the power search; J as the longest factor that is neither a GEP
/// nor a PEP across the exhaustive monochromatic sample of the r-iterate,
/// recorded as an empirical stand-in for the theorem constant.  Indivisible
/// Nielsen factors count towards J: beads admit them only up to length J.
inline BeadParams find_bead_params(const GraphMap& f, const Caps& caps = {}) {
    BeadParams params;
    PowerReport pr = find_power_k1(f, caps);
    params.r = pr.k1;
    const GraphMap* work = &f;
    std::optional<GraphMap> iterate_storage;
    if (params.r > 1) {
        iterate_storage = f.iterate(params.r);
        work = &*iterate_storage;
    }
    bool capped = false;
    auto mono = monochromatic_paths(*work, 1, caps.depth, caps, &capped);
    std::size_t j = 1;
    for (auto& [d, p] : mono) {
        Decomposition dec = maximal_hard_splitting(*work, p, caps.kmax);
        for (const EdgePath& factor : dec.factors()) {
            if (factor.empty()) continue;
            if (is_gep(*work, factor)) continue;
            if (is_pep(*work, factor, true)) continue;
            j = std::max(j, factor.size());
        }
    }
    params.J = static_cast<int>(j);
    params.provenance = "r from power search; J from exhaustive monochromatic audit to depth " +
                        std::to_string(caps.depth) + (capped ? " (state cap hit)" : "");
    return params;
}

struct BdtReport {
    bool verified = false;
    bool capped = false;
    std::size_t paths_checked = 0;
    std::map<std::string, std::size_t> bead_counts;
    std::optional<EdgePath> counterexample;
    std::optional<EdgePath> failing_factor;
};

/// Every generated r-monochromatic path must decompose into beads.
inline BdtReport verify_bdt(const GraphMap& f, const BeadParams& params, int depth,
                            const Caps& caps = {}) {
    BdtReport rep;
    const GraphMap* work = &f;
    std::optional<GraphMap> iterate_storage;
    if (params.r > 1) {
        iterate_storage = f.iterate(params.r);
        work = &*iterate_storage;
    }
    BeadContext ctx;
    ctx.J = params.J;
    ctx.kmax = caps.kmax;
    ctx.k1_context = true;
    ctx.inherited_mono = true;
    ctx.caps = caps;
    auto mono = monochromatic_paths(*work, 1, depth, caps, &rep.capped);
    for (auto& [d, p] : mono) {
        ++rep.paths_checked;
        BeadedResult br = beaded_decomposition(*work, p, ctx);
        if (!br.ok) {
            rep.verified = false;
            rep.counterexample = p;
            rep.failing_factor = br.failed_factor;
            return rep;
        }
        for (const Bead& b : br.beads) rep.bead_counts[bead_kind_name(b.kind)]++;
    }
    rep.verified = true;
    return rep;
}

struct DecompReport {
    bool verified = false;
    bool capped = false;
    std::vector<std::size_t> vhat;  // vhat[m-1] for paths of length <= m
    bool monotone = false;
    std::size_t futures_checked = 0;
};

namespace detail {

inline void all_tight_paths(const MarkedGraph& g, std::size_t max_len,
                            std::vector<EdgePath>& out, std::size_t budget) {
    std::vector<OrientedEdge> letters;
    std::function<void()> dfs = [&]() {
        if (out.size() >= budget) return;
        if (!letters.empty()) out.push_back(EdgePath{letters, g.initial(letters.front())});
        if (letters.size() >= max_len) return;
        for (OrientedEdge nxt : g.all_oriented()) {
            if (!letters.empty() &&
                (g.initial(nxt) != g.terminal(letters.back()) || nxt == letters.back().reversal()))
                continue;
            letters.push_back(nxt);
            dfs();
            letters.pop_back();
        }
    };
    dfs();
}

/// Is the factor accounted for by the GEP side of the dichotomy?  GEPs and
/// their proper sub edge-paths (recognized syntactically) are exactly the
/// futures a GEP can leave behind.
inline bool gep_future_factor(const GraphMap& f, const EdgePath& factor) {
    if (is_gep(f, factor)) return true;
    auto table = linear_edge_table(f);
    if (detail::parse_pep_oriented(f, table, factor)) return true;
    EdgePath rev = reverse_path(f.graph(), factor);
    if (detail::parse_pep_oriented(f, table, rev)) return true;
    return false;
}

}  // namespace detail

/// Dichotomy of nibbled futures: every maximal-hard-splitting factor is a
/// GEP future or short; reports the empirical bound V^(m) for each m <= n
/// over a deterministic trajectory sample.
inline DecompReport verify_decomp_theorem(const GraphMap& f, int n, int steps,
                                          const Caps& caps = {}) {
    DecompReport rep;
    rep.vhat.assign(n, 0);
    std::vector<EdgePath> starts;
    detail::all_tight_paths(f.graph(), static_cast<std::size_t>(n), starts, caps.node_budget);
    for (const EdgePath& start : starts) {
        std::size_t m = start.size();
        std::set<EdgePath> futures;
        std::vector<NibblePolicy> policies{NibblePolicy::entire(), NibblePolicy::left_only(),
                                           NibblePolicy::right_only(), NibblePolicy::both_ends(),
                                           NibblePolicy::seeded(caps.seed + PathHash{}(start))};
        for (const NibblePolicy& pol : policies) {
            for (const TrajectoryStep& st : nibbled_trajectory(f, start, steps, pol))
                if (!st.path.empty()) futures.insert(st.path);
        }
        for (const EdgePath& fut : futures) {
            ++rep.futures_checked;
            Decomposition dec = maximal_hard_splitting(f, fut, caps.kmax);
            for (const EdgePath& factor : dec.factors()) {
                if (factor.empty() || detail::gep_future_factor(f, factor)) continue;
                for (std::size_t mm = m; mm <= static_cast<std::size_t>(n); ++mm)
                    rep.vhat[mm - 1] = std::max(rep.vhat[mm - 1], factor.size());
            }
        }
    }
    rep.monotone = true;
    for (std::size_t i = 1; i < rep.vhat.size(); ++i)
        if (rep.vhat[i] < rep.vhat[i - 1]) rep.monotone = false;
    rep.verified = rep.monotone;
    return rep;
}

struct SplitAfterResult {
    int iterations = 0;
    Decomposition decomposition;
};

/// Least i such that f#^i(path) splits hard into: single edges of the
/// path's weight, indivisible Nielsen paths of that weight, GEPs of that
/// weight, or paths of strictly lower weight.
inline SplitAfterResult split_after_iteration(const GraphMap& f, const EdgePath& path,
                                              const Caps& caps = {}) {
    int r = f.filtration().weight(path);
    EdgePath cur = path;
    for (int i = 0; i <= caps.horizon; ++i) {
        Decomposition dec = maximal_hard_splitting(f, cur, caps.kmax);
        bool all_ok = true;
        for (const EdgePath& factor : dec.factors()) {
            if (factor.empty()) continue;
            int w = f.filtration().weight(factor);
            if (w <= r - 1) continue;
            if (w == r && factor.size() == 1) continue;
            if (w == r && is_nielsen(f, factor) && detail::nielsen_indivisible(f, factor)) continue;
            if (w == r && is_gep(f, factor)) continue;
            all_ok = false;
            break;
        }
        if (all_ok) return SplitAfterResult{i, std::move(dec)};
        cur = f.f_sharp(cur);
    }
    throw error(errc::cap_exceeded, "no menu splitting within the horizon");
}

}  // namespace ttrack
