#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ttrack/caps.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

/// An exceptional Nielsen path E_i eta^m E_j-bar (either orientation of the
/// middle), with both bracket edges linear and matching suffix exponents.
struct ExceptionalParse {
    std::int32_t edge_i = -1, edge_j = -1;
    EdgePath eta;  // primitive
    int reps = 0;  // visible repetitions of eta
    bool eta_reversed = false;
};

inline std::optional<ExceptionalParse> parse_exceptional(const GraphMap& f,
                                                         const std::vector<LinearEdge>& table,
                                                         const EdgePath& p) {
    if (p.size() < 2) return std::nullopt;
    OrientedEdge first = p.letters.front(), last = p.letters.back();
    if (first.is_reversed() || !last.is_reversed()) return std::nullopt;
    const LinearEdge* ei = nullptr;
    const LinearEdge* ej = nullptr;
    for (const auto& le : table) {
        if (le.edge == first.edge_index()) ei = &le;
        if (le.edge == last.edge_index()) ej = &le;
    }
    if (!ei || !ej) return std::nullopt;
    if (ei->tau != ej->tau || ei->m != ej->m) return std::nullopt;
    std::size_t mid = p.size() - 2;
    if (mid == 0) {
        if (ei->edge == ej->edge) return std::nullopt;  // E E-bar is untight
        ExceptionalParse ep;
        ep.edge_i = ei->edge;
        ep.edge_j = ej->edge;
        ep.eta = ei->tau;
        ep.reps = 0;
        return ep;
    }
    for (int rev = 0; rev < 2; ++rev) {
        EdgePath eta = rev ? reverse_path(f.graph(), ei->tau) : ei->tau;
        if (mid % eta.size() != 0) continue;
        bool ok = true;
        for (std::size_t t = 0; t < mid && ok; ++t)
            if (p.letters[1 + t] != eta.letters[t % eta.size()]) ok = false;
        if (!ok) continue;
        ExceptionalParse ep;
        ep.edge_i = ei->edge;
        ep.edge_j = ej->edge;
        ep.eta = ei->tau;
        ep.reps = static_cast<int>(mid / eta.size());
        ep.eta_reversed = rev;
        return ep;
    }
    return std::nullopt;
}

struct PowerClauseInstance {
    std::string clause;
    std::string subject;  // path literal or edge name
    int stratum = 0;
    bool pass = false;
    std::string note;
};

struct PowerReport {
    int k1 = 0;
    std::vector<PowerClauseInstance> instances;  // evaluated at k1
    std::vector<int> rejected;                   // candidate powers that failed
};

namespace detail {

inline bool starts_with(const EdgePath& w, const EdgePath& prefix) {
    if (prefix.size() > w.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i)
        if (w.letters[i] != prefix.letters[i]) return false;
    return true;
}

inline bool ends_with(const EdgePath& w, const EdgePath& suffix) {
    if (suffix.size() > w.size()) return false;
    std::size_t off = w.size() - suffix.size();
    for (std::size_t i = 0; i < suffix.size(); ++i)
        if (w.letters[off + i] != suffix.letters[i]) return false;
    return true;
}

inline int count_reps_from(const EdgePath& w, std::size_t idx, const EdgePath& block) {
    int c = 0;
    while (idx + block.size() <= w.size()) {
        bool match = true;
        for (std::size_t t = 0; t < block.size() && match; ++t)
            if (w.letters[idx + t] != block.letters[t]) match = false;
        if (!match) break;
        idx += block.size();
        ++c;
    }
    return c;
}

}  // namespace detail

/// Finds the least power k1 such that f#^{k1} satisfies the iterate
/// conditions used downstream: stratum edges outgrow their indivisible
/// Nielsen path, proper subpaths of exponential Nielsen paths become
/// r-legal with pinned boundary images, and proper subpaths of bracket-form
/// parabolic Nielsen paths expose more than m_sigma suffix repetitions.
inline PowerReport find_power_k1(const GraphMap& f, const Caps& caps = {}) {
    const MarkedGraph& g = f.graph();
    const Filtration& filt = f.filtration();

    bool have_exponential = false;
    for (const Stratum& s : filt.strata)
        if (s.kind == StratumKind::Exponential) have_exponential = true;

    NielsenInventory inv;
    if (have_exponential) {
        inv = enumerate_nielsen(f, caps.nielsen_max_len, caps);
        if (inv.capped)
            throw error(errc::missing_inventory,
                        "Nielsen search capped; cannot certify the power clauses");
    }

    // Exponential-weight indivisible Nielsen paths per stratum.
    std::vector<std::pair<int, EdgePath>> exp_inps;
    for (const NielsenPath& np : inv.members)
        if (np.kind == NielsenKind::ExponentialPr && np.indivisible)
            exp_inps.emplace_back(np.stratum, np.path);

    // Bracket-form parabolic Nielsen paths occurring inside linear edge images.
    auto table = linear_edge_table(f);
    std::vector<std::pair<ExceptionalParse, EdgePath>> brackets;
    {
        std::set<EdgePath> seen;
        for (const LinearEdge& le : table) {
            const EdgePath& im = f.forward_image(le.edge);
            for (const EdgePath& sp : sub_edge_paths(im)) {
                if (sp.size() < 2 || !is_nielsen(f, sp)) continue;
                auto ep = parse_exceptional(f, table, sp);
                if (!ep) continue;
                if (seen.insert(sp).second) brackets.emplace_back(*ep, sp);
            }
        }
    }

    auto evaluate = [&](int k, std::vector<PowerClauseInstance>& out) -> bool {
        bool all = true;
        auto push = [&](PowerClauseInstance inst) {
            all = all && inst.pass;
            out.push_back(std::move(inst));
        };

        for (auto& [r, sigma] : exp_inps) {
            for (std::int32_t e : filt.strata[r - 1].edges) {
                EdgePath edge{{OrientedEdge::forward(e)}, g.edge(e).from};
                std::size_t len = f.f_sharp_pow(edge, k).size();
                PowerClauseInstance inst;
                inst.clause = "edge-outgrows-nielsen";
                inst.subject = g.edge(e).name;
                inst.stratum = r;
                inst.pass = len > sigma.size();
                inst.note = "|f1(E)|=" + std::to_string(len) + " |sigma|=" + std::to_string(sigma.size());
                push(std::move(inst));
            }
            for (std::size_t lo = 0; lo < sigma.size(); ++lo) {
                for (std::size_t hi = lo + 1; hi <= sigma.size(); ++hi) {
                    if (hi - lo == sigma.size()) continue;  // proper subpaths only
                    EdgePath sub = subpath(sigma, lo, hi);
                    EdgePath w = f.f_sharp_pow(sub, k);
                    PowerClauseInstance inst;
                    inst.clause = "nielsen-subpath-legal";
                    inst.subject = format_path(g, sub);
                    inst.stratum = r;
                    inst.pass = f.is_r_legal(w, r);
                    push(std::move(inst));
                    if (lo == 0) {
                        EdgePath head = f.image(sigma.letters.front());
                        PowerClauseInstance pin;
                        pin.clause = "initial-subpath-pins-left-edge-image";
                        pin.subject = format_path(g, sub);
                        pin.stratum = r;
                        pin.pass = detail::starts_with(w, head);
                        push(std::move(pin));
                    }
                    if (hi == sigma.size()) {
                        EdgePath tail = f.image(sigma.letters.back());
                        PowerClauseInstance pin;
                        pin.clause = "terminal-subpath-pins-right-edge-image";
                        pin.subject = format_path(g, sub);
                        pin.stratum = r;
                        pin.pass = detail::ends_with(w, tail);
                        push(std::move(pin));
                    }
                }
            }
        }

        for (auto& [ep, sigma] : brackets) {
            // After the power takes effect the exposed repetition blocks are
            // copies of the primitive suffix root of the bracket edges, in
            // its forward orientation on the left and reversed on the right,
            // whichever way the middle of sigma was written.
            for (std::size_t cut = 1; cut < sigma.size(); ++cut) {
                {
                    EdgePath sub = subpath(sigma, 0, cut);
                    EdgePath w = f.f_sharp_pow(sub, k);
                    PowerClauseInstance inst;
                    inst.clause = "bracket-initial-exposes-repetitions";
                    inst.subject = format_path(g, sub);
                    inst.pass = !w.empty() && w.letters.front() == sigma.letters.front() &&
                                detail::count_reps_from(w, 1, ep.eta) > ep.reps;
                    push(std::move(inst));
                }
                {
                    EdgePath sub = subpath(sigma, cut, sigma.size());
                    EdgePath w = f.f_sharp_pow(sub, k);
                    PowerClauseInstance inst;
                    inst.clause = "bracket-terminal-exposes-repetitions";
                    inst.subject = format_path(g, sub);
                    bool ok = !w.empty() && w.letters.back() == sigma.letters.back();
                    if (ok) {
                        EdgePath wrev = reverse_path(g, w);
                        ok = detail::count_reps_from(wrev, 1, ep.eta) > ep.reps;
                    }
                    inst.pass = ok;
                    push(std::move(inst));
                }
            }
        }

        // Linear edges expose their suffix splittings at any power; recorded
        // as informational instances.
        for (const LinearEdge& le : table) {
            PowerClauseInstance inst;
            inst.clause = "linear-edge-prefix-splitting";
            inst.subject = g.edge(le.edge).name;
            inst.stratum = filt.stratum_of_edge[le.edge];
            inst.pass = true;
            inst.note = g.edge(le.edge).name + " (.) " + format_path(g, le.u);
            push(std::move(inst));
        }
        return all;
    };

    std::vector<int> rejected;
    for (int k = 1; k <= caps.power_cap; ++k) {
        std::vector<PowerClauseInstance> instances;
        if (evaluate(k, instances)) {
            PowerReport rep;
            rep.k1 = k;
            rep.instances = std::move(instances);
            rep.rejected = std::move(rejected);
            return rep;
        }
        rejected.push_back(k);
    }
    throw error(errc::cap_exceeded, "no suitable power within the configured cap");
}

}  // namespace ttrack
