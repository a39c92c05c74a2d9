#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/splitting.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

inline bool is_nielsen(const GraphMap& f, const EdgePath& p) {
    if (p.empty()) return false;
    return f.f_sharp(p) == p;
}

/// Least t <= horizon with f#^t(p) a Nielsen path, if any.
inline std::optional<int> nielsen_settle_step(const GraphMap& f, const EdgePath& p, int horizon) {
    EdgePath cur = p;
    for (int t = 0; t <= horizon; ++t) {
        if (!cur.empty() && f.f_sharp(cur) == cur) return t;
        cur = f.f_sharp(cur);
    }
    return std::nullopt;
}

inline EdgePath repeat_path(const EdgePath& tau, int k) {
    EdgePath out;
    out.basepoint = tau.basepoint;
    for (int i = 0; i < k; ++i)
        out.letters.insert(out.letters.end(), tau.letters.begin(), tau.letters.end());
    return out;
}

/// Canonical representative of {p, reverse(p)}.
inline EdgePath canonical_up_to_reversal(const MarkedGraph& g, const EdgePath& p) {
    EdgePath r = reverse_path(g, p);
    return r < p ? r : p;
}

/// An edge whose image has the form f(E) = E tau^m with tau a primitive
/// (not a proper power) closed Nielsen path.  Such edges grow linearly.
struct LinearEdge {
    std::int32_t edge = -1;
    EdgePath u;    // full suffix
    EdgePath tau;  // primitive root of u
    int m = 0;     // u = tau^m
};

inline EdgePath primitive_root(const EdgePath& w, int& exponent) {
    const std::size_t n = w.size();
    for (std::size_t d = 1; d <= n; ++d) {
        if (n % d) continue;
        bool ok = true;
        for (std::size_t i = d; i < n && ok; ++i)
            if (w.letters[i] != w.letters[i % d]) ok = false;
        if (ok) {
            exponent = static_cast<int>(n / d);
            EdgePath root = subpath(w, 0, d);
            root.basepoint = w.basepoint;
            return root;
        }
    }
    exponent = 1;
    return w;
}

inline std::vector<LinearEdge> linear_edge_table(const GraphMap& f) {
    std::vector<LinearEdge> out;
    for (const Stratum& s : f.filtration().strata) {
        if (s.kind != StratumKind::Parabolic || !s.prefix_form || s.suffix.empty()) continue;
        const EdgePath& u = s.suffix;
        if (initial_vertex(f.graph(), u) != terminal_vertex(f.graph(), u)) continue;
        if (!is_nielsen(f, u)) continue;
        LinearEdge le;
        le.edge = s.prefix_edge;
        le.u = u;
        le.tau = primitive_root(u, le.m);
        if (!is_nielsen(f, le.tau)) continue;  // unique roots make this automatic
        out.push_back(std::move(le));
    }
    return out;
}

enum class NielsenKind { FixedEdge, ParabolicExceptional, ExponentialPr, Other };

struct NielsenPath {
    EdgePath path;
    NielsenKind kind = NielsenKind::Other;
    bool indivisible = false;
    // ParabolicExceptional parse:
    std::int32_t edge_i = -1, edge_j = -1;
    EdgePath tau;
    int exponent = 0;  // number of tau repetitions
    bool tau_reversed = false;
    // ExponentialPr:
    int stratum = 0;
};

/// A parabolic exceptional family E_i tau^k E_j-bar with unboundedly many k;
/// members are materialized only up to the requested length.
struct NielsenFamily {
    std::int32_t edge_i = -1, edge_j = -1;
    EdgePath tau;
    int m = 0;            // shared exponent of the two linear edges
    bool tau_reversed = false;
    int k_min = 1;
    bool unbounded = true;
};

struct NielsenInventory {
    std::vector<NielsenPath> members;     // deduplicated up to reversal, sorted
    std::vector<NielsenFamily> families;  // symbolic records
    bool capped = false;                  // some search hit a cap
    std::size_t nodes_searched = 0;
};

namespace detail {

/// Splits a Nielsen edge path at the leftmost interior position where both
/// halves are Nielsen; recurses to the indivisible factorization.
inline void nielsen_factorize(const GraphMap& f, const EdgePath& p, std::vector<EdgePath>& out) {
    for (std::size_t pos = 1; pos < p.size(); ++pos) {
        EdgePath a = subpath(p, 0, pos), b = subpath(p, pos, p.size());
        if (is_nielsen(f, a) && is_nielsen(f, b)) {
            out.push_back(a);
            nielsen_factorize(f, b, out);
            return;
        }
    }
    out.push_back(p);
}

inline bool nielsen_indivisible(const GraphMap& f, const EdgePath& p) {
    for (std::size_t pos = 1; pos < p.size(); ++pos)
        if (is_nielsen(f, subpath(p, 0, pos)) && is_nielsen(f, subpath(p, pos, p.size()))) return false;
    return true;
}

}  // namespace detail

inline std::vector<EdgePath> nielsen_indivisible_factors(const GraphMap& f, const EdgePath& p) {
    std::vector<EdgePath> out;
    detail::nielsen_factorize(f, p, out);
    return out;
}

/// Nielsen paths up to max_len: fixed edges, parabolic exceptional families
/// synthesized from the linear-edge table, and a bounded search for
/// exponential-weight candidates (paths in G_r bracketed by H_r edges with
/// exactly one illegal turn in H_r).  Members are indivisible unless
/// include_divisible asks for the brute-force inventory.
inline NielsenInventory enumerate_nielsen(const GraphMap& f, std::size_t max_len, const Caps& caps = {},
                                          bool include_divisible = false) {
    NielsenInventory inv;
    std::set<EdgePath> seen;
    const MarkedGraph& g = f.graph();

    auto add = [&](NielsenPath np) {
        np.path = canonical_up_to_reversal(g, np.path);
        if (seen.insert(np.path).second) inv.members.push_back(std::move(np));
    };

    // (a) fixed edges
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        EdgePath p{{OrientedEdge::forward(static_cast<std::int32_t>(e))}, g.edge(e).from};
        if (is_nielsen(f, p)) {
            NielsenPath np;
            np.path = p;
            np.kind = NielsenKind::FixedEdge;
            np.indivisible = true;
            add(std::move(np));
        }
    }

    // (b) parabolic exceptional families with matching exponents
    auto table = linear_edge_table(f);
    for (std::size_t a = 0; a < table.size(); ++a) {
        for (std::size_t b = 0; b < table.size(); ++b) {
            const LinearEdge& ei = table[a];
            const LinearEdge& ej = table[b];
            if (ei.m != ej.m || ei.tau != ej.tau) continue;
            if (a > b) continue;  // families come in reversal pairs, keep one
            for (int rev = 0; rev < 2; ++rev) {
                if (a == b && rev == 1) continue;  // reversal-equivalent to rev=0
                EdgePath tau = rev ? reverse_path(g, ei.tau) : ei.tau;
                NielsenFamily fam;
                fam.edge_i = ei.edge;
                fam.edge_j = ej.edge;
                fam.tau = tau;
                fam.m = ei.m;
                fam.tau_reversed = rev;
                fam.k_min = (a == b) ? 1 : 0;
                inv.families.push_back(fam);
                for (int k = fam.k_min;; ++k) {
                    std::size_t len = 2 + static_cast<std::size_t>(k) * tau.size();
                    if (len > max_len) break;
                    EdgePath p;
                    p.letters.push_back(OrientedEdge::forward(ei.edge));
                    EdgePath reps = repeat_path(tau, k);
                    p.letters.insert(p.letters.end(), reps.letters.begin(), reps.letters.end());
                    p.letters.push_back(OrientedEdge::backward(ej.edge));
                    p.basepoint = g.edge(ei.edge).from;
                    if (!is_incidence_valid(g, p.letters) || !is_tight(p)) continue;
                    if (!is_nielsen(f, p)) continue;
                    NielsenPath np;
                    np.path = p;
                    np.kind = NielsenKind::ParabolicExceptional;
                    np.indivisible = detail::nielsen_indivisible(f, p);
                    np.edge_i = ei.edge;
                    np.edge_j = ej.edge;
                    np.tau = tau;
                    np.exponent = k;
                    np.tau_reversed = rev;
                    add(std::move(np));
                }
            }
        }
    }

    // (c) exponential-weight candidates: depth-first search over tight paths
    // in G_r that start and end in H_r with exactly one illegal H_r turn.
    for (const Stratum& s : f.filtration().strata) {
        if (s.kind != StratumKind::Exponential) continue;
        const int r = s.index;
        std::vector<OrientedEdge> letters;
        std::size_t nodes = 0;
        auto in_hr = [&](OrientedEdge e) { return f.filtration().stratum_of(e) == r; };

        std::function<void(int)> dfs = [&](int illegal_count) {
            if (++nodes > caps.node_budget) {
                inv.capped = true;
                return;
            }
            if (!letters.empty() && in_hr(letters.back()) && illegal_count == 1) {
                EdgePath p{letters, g.initial(letters.front())};
                if (is_nielsen(f, p)) {
                    NielsenPath np;
                    np.path = p;
                    np.kind = NielsenKind::ExponentialPr;
                    np.indivisible = detail::nielsen_indivisible(f, p);
                    np.stratum = r;
                    add(std::move(np));
                }
            }
            if (letters.size() >= max_len) return;
            VertexId at = letters.empty() ? 0 : g.terminal(letters.back());
            for (OrientedEdge nxt : g.all_oriented()) {
                if (f.filtration().stratum_of(nxt) > r) continue;
                if (letters.empty()) {
                    if (!in_hr(nxt)) continue;  // first edge in H_r
                    letters.push_back(nxt);
                    dfs(illegal_count);
                    letters.pop_back();
                } else {
                    if (g.initial(nxt) != at) continue;
                    if (nxt == letters.back().reversal()) continue;
                    Turn t(letters.back().reversal(), nxt);
                    int add_illegal =
                        (in_hr(t.a) && in_hr(t.b) && !f.turn_legal_cached(t)) ? 1 : 0;
                    if (illegal_count + add_illegal > 1) continue;
                    letters.push_back(nxt);
                    dfs(illegal_count + add_illegal);
                    letters.pop_back();
                }
            }
        };
        dfs(0);
        inv.nodes_searched += nodes;
    }

    // Optional brute-force inventory including divisible Nielsen paths.
    if (include_divisible) {
        std::vector<OrientedEdge> letters;
        std::size_t nodes = 0;
        std::function<void()> dfs = [&]() {
            if (++nodes > caps.node_budget) {
                inv.capped = true;
                return;
            }
            if (!letters.empty()) {
                EdgePath p{letters, g.initial(letters.front())};
                if (is_nielsen(f, p)) {
                    NielsenPath np;
                    np.path = p;
                    np.kind = NielsenKind::Other;
                    np.indivisible = detail::nielsen_indivisible(f, p);
                    add(std::move(np));
                }
            }
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
        inv.nodes_searched += nodes;
    }

    std::sort(inv.members.begin(), inv.members.end(),
              [](const NielsenPath& x, const NielsenPath& y) { return x.path < y.path; });
    return inv;
}

/// Growing exceptional path parse: the path or its reverse has the shape
/// E_i tau-bar^k E_j-bar with f(E_i) = E_i (.) tau^{m_i},
/// f(E_j) = E_j (.) tau^{m_j} and m_j > m_i > 0, k >= 1.
struct GepData {
    bool from_reverse = false;  // parse matched reverse(path)
    std::int32_t edge_i = -1, edge_j = -1;
    int m_i = 0, m_j = 0;
    EdgePath tau;  // primitive
    int k = 0;

    EdgePath assemble(const MarkedGraph& g) const {
        EdgePath tbar = reverse_path(g, tau);
        EdgePath p;
        p.letters.push_back(OrientedEdge::forward(edge_i));
        for (int t = 0; t < k; ++t)
            p.letters.insert(p.letters.end(), tbar.letters.begin(), tbar.letters.end());
        p.letters.push_back(OrientedEdge::backward(edge_j));
        p.basepoint = g.edge(edge_i).from;
        return p;
    }
};

namespace detail {

inline std::optional<GepData> parse_gep_oriented(const GraphMap& f, const std::vector<LinearEdge>& table,
                                                 const EdgePath& p) {
    if (p.size() < 3) return std::nullopt;
    OrientedEdge first = p.letters.front(), last = p.letters.back();
    if (first.is_reversed() || !last.is_reversed()) return std::nullopt;
    const LinearEdge* ei = nullptr;
    const LinearEdge* ej = nullptr;
    for (const auto& le : table) {
        if (le.edge == first.edge_index()) ei = &le;
        if (le.edge == last.edge_index()) ej = &le;
    }
    if (!ei || !ej) return std::nullopt;
    if (ei->tau != ej->tau || ej->m <= ei->m) return std::nullopt;
    EdgePath tbar = reverse_path(f.graph(), ei->tau);
    std::size_t mid = p.size() - 2;
    if (tbar.empty() || mid % tbar.size() != 0) return std::nullopt;
    int k = static_cast<int>(mid / tbar.size());
    if (k < 1) return std::nullopt;
    for (std::size_t t = 0; t < mid; ++t)
        if (p.letters[1 + t] != tbar.letters[t % tbar.size()]) return std::nullopt;
    GepData gd;
    gd.edge_i = ei->edge;
    gd.edge_j = ej->edge;
    gd.m_i = ei->m;
    gd.m_j = ej->m;
    gd.tau = ei->tau;
    gd.k = k;
    return gd;
}

}  // namespace detail

inline std::optional<GepData> is_gep(const GraphMap& f, const EdgePath& p) {
    auto table = linear_edge_table(f);
    if (auto gd = detail::parse_gep_oriented(f, table, p)) return gd;
    if (auto gd = detail::parse_gep_oriented(f, table, reverse_path(f.graph(), p))) {
        gd->from_reverse = true;
        return gd;
    }
    return std::nullopt;
}

/// Pseudo-exceptional path: a proper initial (terminal, via the reverse)
/// sub edge-path of a GEP.  Recognized in the post-iterate normal form
/// E_i tau-bar^s nu-bar gamma where tau = iota (.) sigma (.) nu is cut inside
/// the indivisible factor sigma; gamma is a single edge in the stable form.
struct PepData {
    bool from_reverse = false;
    std::int32_t edge_i = -1;
    std::int32_t partner_j = -1;  // some valid parent E_j (m_j > m_i)
    EdgePath tau;                 // primitive, as in the parent GEP
    int m_i = 0;
    int s = 0;                    // visible tau-bar repetitions
    EdgePath iota, sigma, nu;     // tau = iota (.) sigma (.) nu
    EdgePath gamma;               // possibly empty; single edge when stable
    bool stable = false;          // gamma is a single edge
    bool transient = false;       // gamma a (possibly empty) proper prefix of sigma-bar

    EdgePath path(const MarkedGraph& g) const {
        EdgePath p;
        p.letters.push_back(OrientedEdge::forward(edge_i));
        EdgePath tbar = reverse_path(g, tau);
        for (int t = 0; t < s; ++t)
            p.letters.insert(p.letters.end(), tbar.letters.begin(), tbar.letters.end());
        EdgePath nbar = reverse_path(g, nu);
        p.letters.insert(p.letters.end(), nbar.letters.begin(), nbar.letters.end());
        p.letters.insert(p.letters.end(), gamma.letters.begin(), gamma.letters.end());
        p.basepoint = g.edge(edge_i).from;
        return p;
    }
};

namespace detail {

inline std::optional<PepData> parse_pep_oriented(const GraphMap& f, const std::vector<LinearEdge>& table,
                                                 const EdgePath& p) {
    if (p.size() < 2) return std::nullopt;
    OrientedEdge first = p.letters.front();
    if (first.is_reversed()) return std::nullopt;
    const LinearEdge* ei = nullptr;
    for (const auto& le : table)
        if (le.edge == first.edge_index()) ei = &le;
    if (!ei) return std::nullopt;
    const LinearEdge* partner = nullptr;
    for (const auto& le : table)
        if (le.tau == ei->tau && le.m > ei->m) partner = &le;
    if (!partner) return std::nullopt;  // no parent GEP exists

    const MarkedGraph& g = f.graph();
    EdgePath tbar = reverse_path(g, ei->tau);
    std::size_t idx = 1;
    int s = 0;
    while (idx + tbar.size() <= p.size()) {
        bool match = true;
        for (std::size_t t = 0; t < tbar.size() && match; ++t)
            if (p.letters[idx + t] != tbar.letters[t]) match = false;
        if (!match) break;
        idx += tbar.size();
        ++s;
    }
    std::size_t rem = p.size() - idx;
    if (rem >= tbar.size()) return std::nullopt;  // maximality violated or junk
    for (std::size_t t = 0; t < rem; ++t)
        if (p.letters[idx + t] != tbar.letters[t]) return std::nullopt;  // omega not a prefix of tau-bar

    // Cut tau-bar = nu-bar sigma-bar iota-bar at the matched length: complete
    // indivisible factors give nu, the partial factor is gamma.
    std::vector<EdgePath> factors = nielsen_indivisible_factors(f, ei->tau);
    PepData pd;
    pd.edge_i = ei->edge;
    pd.partner_j = partner->edge;
    pd.tau = ei->tau;
    pd.m_i = ei->m;
    pd.s = s;
    std::size_t consumed = 0;  // letters of tau-bar consumed by complete reversed factors
    std::size_t fi = factors.size();
    while (fi > 0 && consumed + factors[fi - 1].size() <= rem) {
        consumed += factors[fi - 1].size();
        --fi;
    }
    // nu = factors[fi..end), sigma = factors[fi-1] (or last factor when the
    // cut is at a junction), iota = the rest.
    EdgePath nu;
    nu.basepoint = terminal_vertex(g, ei->tau);
    for (std::size_t t = fi; t < factors.size(); ++t) {
        nu.letters.insert(nu.letters.end(), factors[t].letters.begin(), factors[t].letters.end());
        if (t == fi) nu.basepoint = initial_vertex(g, factors[t]);
    }
    std::size_t gamma_len = rem - consumed;
    std::size_t sigma_idx = gamma_len > 0 ? fi - 1 : (fi > 0 ? fi - 1 : 0);
    if (gamma_len > 0 && fi == 0) return std::nullopt;  // whole tau consumed: contradicts rem < |tau|
    pd.sigma = factors.empty() ? EdgePath{} : factors[sigma_idx];
    pd.nu = nu;
    pd.iota.basepoint = initial_vertex(g, ei->tau);
    for (std::size_t t = 0; t < sigma_idx; ++t)
        pd.iota.letters.insert(pd.iota.letters.end(), factors[t].letters.begin(),
                               factors[t].letters.end());
    if (gamma_len > 0) {
        EdgePath sbar = reverse_path(g, pd.sigma);
        pd.gamma = subpath(sbar, 0, gamma_len);
        pd.gamma.basepoint = initial_vertex(g, sbar);
    } else {
        pd.gamma.basepoint = nu.basepoint;
    }
    pd.stable = (gamma_len == 1);
    pd.transient = !pd.stable;
    return pd;
}

}  // namespace detail

/// Requires the caller to assert that the map is the iterate from the power
/// search (the normal form only holds there).
inline std::optional<PepData> is_pep(const GraphMap& f, const EdgePath& p, bool k1_context) {
    if (!k1_context)
        throw error(errc::not_iterated, "pep recognition requires the certified iterate context");
    auto table = linear_edge_table(f);
    if (auto pd = detail::parse_pep_oriented(f, table, p)) return pd;
    if (auto pd = detail::parse_pep_oriented(f, table, reverse_path(f.graph(), p))) {
        pd->from_reverse = true;
        return pd;
    }
    return std::nullopt;
}

/// One nibbled-future step of a pseudo-exceptional path, nibbling on the
/// gamma side; reports the successor pep or the post-death splitting E_i (.) lambda.
struct PepStep {
    bool death = false;
    std::optional<PepData> successor;
    EdgePath lambda;      // remainder right of the pep prefix (or of E_i at death)
    EdgePath future;      // the full immediate nibbled future
};

inline PepStep pep_step(const GraphMap& f, const PepData& pep, int nibble = 0) {
    const MarkedGraph& g = f.graph();
    EdgePath cur = pep.path(g);
    if (pep.from_reverse) cur = reverse_path(g, cur);
    EdgePath w = f.f_sharp(cur);
    if (pep.from_reverse) w = reverse_path(g, w);  // normalize: gamma side on the right
    if (nibble > 0) {
        std::size_t keep = w.size() > static_cast<std::size_t>(nibble) ? w.size() - nibble : 0;
        w = subpath(w, 0, keep);
    }
    PepStep out;
    out.future = pep.from_reverse ? reverse_path(g, w) : w;
    auto table = linear_edge_table(f);
    // Longest pep prefix: maximal tau-bar power then the longest partial factor.
    for (std::size_t len = w.size(); len >= 2; --len) {
        EdgePath pre = subpath(w, 0, len);
        if (auto pd = detail::parse_pep_oriented(f, table, pre)) {
            out.successor = pd;
            out.lambda = subpath(w, len, w.size());
            return out;
        }
    }
    out.death = true;
    if (!w.empty() && w.letters.front() == OrientedEdge::forward(pep.edge_i))
        out.lambda = subpath(w, 1, w.size());
    else
        out.lambda = w;
    return out;
}

/// Bounded search for the exponential-stratum path set P_r: tight paths in
/// G_r with exactly one illegal turn in H_r whose iterates keep one illegal
/// turn, keep H_r boundary edges, and keep a stable H_r-edge count.
struct PrCandidate {
    EdgePath path;
    bool nielsen = false;
    std::optional<int> settles_at;            // pre-Nielsen settling step
    std::vector<std::size_t> hr_edge_counts;  // per iterate, 0..horizon
};

inline std::vector<PrCandidate> compute_Pr(const GraphMap& f, int r, const Caps& caps = {},
                                           bool* capped = nullptr) {
    const Stratum& s = f.filtration().strata.at(r - 1);
    if (s.kind != StratumKind::Exponential)
        throw error(errc::invalid_map, "P_r is defined for exponential strata");
    const MarkedGraph& g = f.graph();
    std::vector<PrCandidate> out;
    std::set<EdgePath> seen;
    auto in_hr = [&](OrientedEdge e) { return f.filtration().stratum_of(e) == r; };
    auto hr_count = [&](const EdgePath& p) {
        std::size_t c = 0;
        for (OrientedEdge e : p.letters)
            if (in_hr(e)) ++c;
        return c;
    };
    auto illegal_hr_turns = [&](const EdgePath& p) {
        int c = 0;
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            Turn t = GraphMap::taken_turn(p, i);
            if (in_hr(t.a) && in_hr(t.b) && !f.turn_legal_cached(t)) ++c;
        }
        return c;
    };

    std::vector<OrientedEdge> letters;
    std::size_t nodes = 0;
    std::function<void(int)> dfs = [&](int illegal_count) {
        if (++nodes > caps.node_budget) {
            if (capped) *capped = true;
            return;
        }
        if (!letters.empty() && in_hr(letters.back()) && illegal_count == 1) {
            EdgePath p{letters, g.initial(letters.front())};
            EdgePath canon = canonical_up_to_reversal(g, p);
            if (seen.insert(canon).second) {
                // Evidence horizon: the defining clauses along iterates.
                bool ok = true;
                PrCandidate cand;
                cand.path = canon;
                EdgePath cur = p;
                cand.hr_edge_counts.push_back(hr_count(cur));
                for (int k = 1; k <= caps.horizon && ok; ++k) {
                    cur = f.f_sharp(cur);
                    if (cur.empty() || illegal_hr_turns(cur) != 1 || !in_hr(cur.letters.front()) ||
                        !in_hr(cur.letters.back()))
                        ok = false;
                    cand.hr_edge_counts.push_back(hr_count(cur));
                }
                if (ok) {
                    std::size_t n = cand.hr_edge_counts.size();
                    ok = n >= 2 && cand.hr_edge_counts[n - 1] == cand.hr_edge_counts[n - 2];
                }
                if (ok) {
                    cand.nielsen = is_nielsen(f, p);
                    cand.settles_at = nielsen_settle_step(f, p, caps.horizon);
                    out.push_back(std::move(cand));
                }
            }
        }
        if (letters.size() >= caps.nielsen_max_len) return;
        VertexId at = letters.empty() ? 0 : g.terminal(letters.back());
        for (OrientedEdge nxt : g.all_oriented()) {
            if (f.filtration().stratum_of(nxt) > r) continue;
            if (letters.empty()) {
                if (!in_hr(nxt)) continue;
                letters.push_back(nxt);
                dfs(illegal_count);
                letters.pop_back();
            } else {
                if (g.initial(nxt) != at || nxt == letters.back().reversal()) continue;
                Turn t(letters.back().reversal(), nxt);
                int add = (in_hr(t.a) && in_hr(t.b) && !f.turn_legal_cached(t)) ? 1 : 0;
                if (illegal_count + add > 1) continue;
                letters.push_back(nxt);
                dfs(illegal_count + add);
                letters.pop_back();
            }
        }
    };
    dfs(0);
    std::sort(out.begin(), out.end(),
              [](const PrCandidate& x, const PrCandidate& y) { return x.path < y.path; });
    return out;
}

/// P_r over every exponential stratum; empty when there are none.
inline std::map<int, std::vector<PrCandidate>> compute_Pr_all(const GraphMap& f, const Caps& caps = {},
                                                              bool* capped = nullptr) {
    std::map<int, std::vector<PrCandidate>> out;
    for (const Stratum& s : f.filtration().strata)
        if (s.kind == StratumKind::Exponential) out[s.index] = compute_Pr(f, s.index, caps, capped);
    return out;
}

}  // namespace ttrack
