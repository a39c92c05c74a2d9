#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "ttrack/beads.hpp"
#include "ttrack/caps.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/splitting.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

struct RefinementsReport {
    // (a) weight-persistent edges lie in displayed Nielsen / GEP / PEP / single-edge paths
    bool persistence_pass = false;
    int d1_hat = 0;
    std::size_t persistence_instances = 0;
    std::string persistence_witness;
    // (b) per path, displayed PEPs longer than J number fewer than 2*omega
    bool pep_count_pass = false;
    std::size_t max_displayed_long_peps = 0;
    std::string pep_count_witness;
    // (c) atoms reach the all-Nielsen/GEP form or the displayed-edge dichotomy
    bool atom_dichotomy_pass = false;
    std::size_t atoms_checked = 0;
    std::string atom_witness;
    // (d) beadedness is preserved along random nibbled trajectories
    bool nibble_preserve_pass = false;
    std::size_t trajectories_run = 0;
    std::string nibble_witness;

    bool capped = false;

    bool all_pass() const {
        return persistence_pass && pep_count_pass && atom_dichotomy_pass && nibble_preserve_pass;
    }
};

namespace detail {

/// Weight of the deepest past of each position, following parent pointers;
/// an edge is weight-persistent when its whole trace keeps its weight.
inline std::vector<bool> persistent_flags(const std::vector<TrajectoryStep>& traj, int upto_step) {
    const TrajectoryStep& last = traj[upto_step];
    std::vector<bool> persistent(last.entries.size(), true);
    for (std::size_t idx = 0; idx < last.entries.size(); ++idx) {
        int w = last.entries[idx].weight;
        long pos = static_cast<long>(last.entries[idx].pos);
        for (int s = upto_step; s >= 0; --s) {
            if (pos < 0 || static_cast<std::size_t>(pos) >= traj[s].entries.size()) {
                persistent[idx] = false;  // trace trimmed away before reaching the start
                break;
            }
            const ForestEntry& fe = traj[s].entries[pos];
            if (fe.weight != w) {
                persistent[idx] = false;
                break;
            }
            pos = fe.parent_pos;
        }
    }
    return persistent;
}

inline bool factor_is_persistence_shape(const GraphMap& f, const EdgePath& factor) {
    if (factor.size() == 1) return true;
    if (is_nielsen(f, factor)) return true;
    if (is_gep(f, factor)) return true;
    auto table = linear_edge_table(f);
    if (parse_pep_oriented(f, table, factor)) return true;
    EdgePath rev = reverse_path(f.graph(), factor);
    if (parse_pep_oriented(f, table, rev)) return true;
    return false;
}

}  // namespace detail

/// The post-theorem refinements, checked empirically over generated
/// monochromatic paths and their family forests.  `work` must already be
/// the certified iterate (params.r applied); pass the base map otherwise
/// and it is iterated here.
inline RefinementsReport verify_refinements(const GraphMap& f, const BeadParams& params,
                                            const Caps& caps = {}, std::size_t nibble_trajectories = 64,
                                            std::size_t sample_cap = 48) {
    RefinementsReport rep;
    const GraphMap* work = &f;
    std::optional<GraphMap> storage;
    if (params.r > 1) {
        storage = f.iterate(params.r);
        work = &*storage;
    }
    const int omega = work->filtration().omega();
    BeadContext ctx;
    ctx.J = params.J;
    ctx.kmax = caps.kmax;
    ctx.k1_context = true;
    ctx.caps = caps;

    auto mono = monochromatic_paths(*work, 1, caps.depth, caps, &rep.capped);
    std::vector<EdgePath> sample;
    {
        std::size_t stride = std::max<std::size_t>(1, mono.size() / sample_cap);
        for (std::size_t i = 0; i < mono.size(); i += stride) sample.push_back(mono[i].second);
    }

    // (a) weight persistence: trace entire futures under the deterministic
    // and one randomized tightening; persistent edges must sit in displayed
    // paths of the four admissible shapes once the empirical D1 is reached.
    {
        rep.persistence_pass = true;
        int d1 = 1;
        for (const EdgePath& chi : sample) {
            if (!rep.persistence_pass) break;
            for (bool randomized : {false, true}) {
                std::vector<TrajectoryStep> traj;
                try {
                    traj = nibbled_trajectory(*work, chi, caps.horizon, NibblePolicy::entire(),
                                              randomized);
                } catch (const error&) {
                    rep.capped = true;
                    break;
                }
                int first_ok = -1;
                for (int s = 1; s < static_cast<int>(traj.size()); ++s) {
                    auto persistent = detail::persistent_flags(traj, s);
                    Decomposition dec = maximal_hard_splitting(*work, traj[s].path, caps.kmax);
                    std::vector<std::size_t> bounds{0};
                    for (std::size_t p : dec.positions) bounds.push_back(p);
                    bounds.push_back(traj[s].path.size());
                    bool all_ok = true;
                    for (std::size_t idx = 0; idx < persistent.size(); ++idx) {
                        if (!persistent[idx]) continue;
                        ++rep.persistence_instances;
                        std::size_t pos = traj[s].entries[idx].pos;
                        std::size_t fi = 0;
                        while (fi + 1 < bounds.size() && bounds[fi + 1] <= pos) ++fi;
                        EdgePath factor = subpath(traj[s].path, bounds[fi], bounds[fi + 1]);
                        if (!detail::factor_is_persistence_shape(*work, factor)) {
                            all_ok = false;
                            break;
                        }
                    }
                    if (all_ok) {
                        if (first_ok < 0) first_ok = s;
                    } else {
                        first_ok = -1;
                        if (s == static_cast<int>(traj.size()) - 1) {
                            rep.persistence_pass = false;
                            rep.persistence_witness = format_path(work->graph(), chi);
                        }
                    }
                }
                if (first_ok > d1) d1 = first_ok;
            }
        }
        rep.d1_hat = d1;
    }

    // (b) displayed PEPs of length more than J, per monochromatic path.
    {
        rep.pep_count_pass = true;
        auto table = linear_edge_table(*work);
        for (const EdgePath& chi : sample) {
            Decomposition dec = maximal_hard_splitting(*work, chi, caps.kmax);
            std::size_t count = 0;
            for (const EdgePath& factor : dec.factors()) {
                if (factor.size() <= static_cast<std::size_t>(params.J)) continue;
                bool pep = detail::parse_pep_oriented(*work, table, factor).has_value();
                if (!pep) {
                    EdgePath rev = reverse_path(work->graph(), factor);
                    pep = detail::parse_pep_oriented(*work, table, rev).has_value();
                }
                if (pep) ++count;
            }
            rep.max_displayed_long_peps = std::max(rep.max_displayed_long_peps, count);
            if (count >= static_cast<std::size_t>(2 * omega)) {
                rep.pep_count_pass = false;
                rep.pep_count_witness = format_path(work->graph(), chi) + " has " +
                                        std::to_string(count) + " displayed long peps";
            }
        }
    }

    // (c) atoms, pushed through omega applications of the D1-iterate, become
    // all-Nielsen/GEP beaded or expose a displayed edge dominating every
    // heavier edge outside Nielsen/GEP factors.
    {
        rep.atom_dichotomy_pass = true;
        std::set<EdgePath> atoms;
        for (const EdgePath& chi : sample) {
            BeadedResult br = beaded_decomposition(*work, chi, ctx);
            if (!br.ok) continue;
            for (const Bead& b : br.beads)
                if (b.kind == BeadKind::Atom) atoms.insert(b.path);
        }
        int d1 = std::max(1, rep.d1_hat);
        for (const EdgePath& atom : atoms) {
            ++rep.atoms_checked;
            bool ok = false;
            EdgePath cur = atom;
            for (int t = 1; t <= omega && !ok; ++t) {
                cur = work->f_sharp_pow(cur, d1);
                if (cur.empty()) {
                    ok = true;
                    break;
                }
                Decomposition dec = maximal_hard_splitting(*work, cur, caps.kmax);
                bool all_ng = true;
                std::vector<std::pair<EdgePath, bool>> factors_ng;
                for (const EdgePath& factor : dec.factors()) {
                    if (factor.empty()) continue;
                    bool ng = is_nielsen(*work, factor) || is_gep(*work, factor).has_value();
                    factors_ng.emplace_back(factor, ng);
                    if (!ng) all_ng = false;
                }
                if (all_ng) {
                    ok = true;
                    break;
                }
                // displayed single-edge factor dominating all heavier edges
                for (auto& [factor, ng] : factors_ng) {
                    if (factor.size() != 1 || ok) continue;
                    int w = work->filtration().weight(factor);
                    bool dominated = true;
                    for (auto& [other, other_ng] : factors_ng) {
                        if (other_ng) continue;
                        for (OrientedEdge e : other.letters)
                            if (work->filtration().stratum_of(e) > w) dominated = false;
                    }
                    if (dominated) ok = true;
                }
            }
            if (!ok) {
                rep.atom_dichotomy_pass = false;
                rep.atom_witness = format_path(work->graph(), atom);
                break;
            }
        }
    }

    // (d) beadedness along seeded random nibbled trajectories.
    {
        rep.nibble_preserve_pass = true;
        std::vector<EdgePath> starts = sample;
        auto table = linear_edge_table(*work);
        for (std::size_t a = 0; a < table.size(); ++a)
            for (std::size_t b = 0; b < table.size(); ++b)
                if (table[a].tau == table[b].tau && table[b].m > table[a].m)
                    for (int k = 1; k <= 3; ++k) {
                        GepData gd;
                        gd.edge_i = table[a].edge;
                        gd.edge_j = table[b].edge;
                        gd.m_i = table[a].m;
                        gd.m_j = table[b].m;
                        gd.tau = table[a].tau;
                        gd.k = k;
                        starts.push_back(gd.assemble(work->graph()));
                    }
        if (starts.empty()) starts.push_back(mono.front().second);
        for (std::size_t t = 0; t < nibble_trajectories && rep.nibble_preserve_pass; ++t) {
            const EdgePath& start = starts[t % starts.size()];
            NibblePolicy pol = NibblePolicy::seeded(caps.seed + 0x5851f42d4c957f2dull * (t + 1));
            std::vector<TrajectoryStep> traj;
            try {
                traj = nibbled_trajectory(*work, start, caps.horizon, pol, (t & 1) != 0);
            } catch (const error&) {
                rep.capped = true;
                continue;
            }
            ++rep.trajectories_run;
            for (const TrajectoryStep& st : traj) {
                if (st.path.empty()) break;
                BeadedResult br = beaded_decomposition(*work, st.path, ctx);
                if (!br.ok) {
                    rep.nibble_preserve_pass = false;
                    rep.nibble_witness = "step " + std::to_string(st.step) + ": " +
                                         format_path(work->graph(), st.path) + " factor " +
                                         format_path(work->graph(), br.failed_factor);
                    break;
                }
            }
        }
    }

    return rep;
}

}  // namespace ttrack
