#pragma once

#include <json.hpp>

#include "ttrack/beads.hpp"
#include "ttrack/irtt.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/power.hpp"
#include "ttrack/refinements.hpp"
#include "ttrack/splitting.hpp"
#include "ttrack/traintrack.hpp"

namespace ttrack {

using json = nlohmann::ordered_json;

inline json path_json(const MarkedGraph& g, const EdgePath& p) { return format_path(g, p); }

inline json strata_json(const GraphMap& f) {
    const MarkedGraph& g = f.graph();
    json strata = json::array();
    for (const Stratum& s : f.filtration().strata) {
        json edges = json::array();
        for (std::int32_t e : s.edges) edges.push_back(g.edge(e).name);
        json matrix = json::array();
        for (const auto& row : s.matrix) matrix.push_back(row);
        json js{{"index", s.index},
                {"edges", edges},
                {"kind", stratum_kind_name(s.kind)},
                {"lambda_lo", s.lambda_lo},
                {"lambda_hi", s.lambda_hi},
                {"aperiodic", s.aperiodic},
                {"matrix", matrix}};
        if (s.prefix_form) {
            js["prefix_edge"] = g.edge(s.prefix_edge).name;
            js["suffix"] = path_json(g, s.suffix);
        }
        strata.push_back(std::move(js));
    }
    return strata;
}

inline json turns_json(const GraphMap& f) {
    const MarkedGraph& g = f.graph();
    json turns = json::array();
    for (Turn t : f.all_turns()) {
        std::vector<Turn> orbit;
        bool legal = f.is_legal_turn(t, &orbit);
        turns.push_back(json{{"turn", json::array({g.token(t.a), g.token(t.b)})},
                             {"legal", legal},
                             {"orbit_length", orbit.size()}});
    }
    return turns;
}

inline json verdict_json(const MarkedGraph& g, const GraphMap& f, const EdgePath& path,
                         std::size_t pos, const SplitVerdict& v) {
    json jv{{"pos", pos}, {"verdict", verdict_name(v)}, {"k", v.k}};
    if (v.kind == VerdictKind::CertifiedHard) jv["certificate"] = certificate_name(v.certificate);
    if (v.witness) {
        EdgePath u = f.raw_pow(subpath(path, 0, pos), v.witness->k);
        EdgePath w = f.raw_pow(subpath(path, pos, path.size()), v.witness->k);
        jv["witness"] = json{{"k", v.witness->k},
                             {"i", v.witness->i},
                             {"j", v.witness->j},
                             {"left_letter", g.token(u.letters[v.witness->i])},
                             {"right_letter", g.token(w.letters[v.witness->j])}};
    }
    return jv;
}

inline json decomposition_json(const MarkedGraph& g, const GraphMap& f, const Decomposition& d) {
    json factors = json::array();
    for (const EdgePath& fac : d.factors()) factors.push_back(path_json(g, fac));
    json splits = json::array();
    for (std::size_t i = 0; i < d.positions.size(); ++i)
        splits.push_back(verdict_json(g, f, d.base, d.positions[i], d.verdicts[i]));
    return json{{"path", path_json(g, d.base)}, {"factors", factors}, {"splits", splits}};
}

inline json irtt_json(const IrttReport& rep) {
    json clauses = json::array();
    for (const ClauseResult& c : rep.clauses) {
        json jc{{"name", c.name},
                {"applicable", c.applicable},
                {"pass", c.pass},
                {"bounded", c.bounded}};
        if (!c.witness.empty()) jc["witness"] = c.witness;
        clauses.push_back(std::move(jc));
    }
    return json{{"clauses", clauses},
                {"exact_pass", rep.exact_pass()},
                {"all_pass", rep.all_pass()},
                {"capped", rep.capped}};
}

inline json nielsen_json(const GraphMap& f, const NielsenInventory& inv) {
    const MarkedGraph& g = f.graph();
    json members = json::array();
    for (const NielsenPath& np : inv.members) {
        json jm{{"path", path_json(g, np.path)}, {"indivisible", np.indivisible}};
        switch (np.kind) {
            case NielsenKind::FixedEdge: jm["kind"] = "fixed-edge"; break;
            case NielsenKind::ParabolicExceptional:
                jm["kind"] = "parabolic-exceptional";
                jm["edge_i"] = g.edge(np.edge_i).name;
                jm["edge_j"] = g.edge(np.edge_j).name;
                jm["tau"] = path_json(g, np.tau);
                jm["k"] = np.exponent;
                break;
            case NielsenKind::ExponentialPr:
                jm["kind"] = "exponential";
                jm["stratum"] = np.stratum;
                break;
            case NielsenKind::Other: jm["kind"] = "other"; break;
        }
        members.push_back(std::move(jm));
    }
    json families = json::array();
    for (const NielsenFamily& fam : inv.families)
        families.push_back(json{{"edge_i", g.edge(fam.edge_i).name},
                                {"edge_j", g.edge(fam.edge_j).name},
                                {"tau", path_json(g, fam.tau)},
                                {"m", fam.m},
                                {"tau_reversed", fam.tau_reversed},
                                {"k_min", fam.k_min},
                                {"k_max", "unbounded"}});
    return json{{"members", members}, {"families", families}, {"capped", inv.capped}};
}

inline json gep_json(const MarkedGraph& g, const GepData& gd) {
    return json{{"edge_i", g.edge(gd.edge_i).name}, {"m_i", gd.m_i},
                {"edge_j", g.edge(gd.edge_j).name}, {"m_j", gd.m_j},
                {"tau", path_json(g, gd.tau)},      {"k", gd.k},
                {"from_reverse", gd.from_reverse}};
}

inline json pep_json(const MarkedGraph& g, const PepData& pd) {
    return json{{"edge_i", g.edge(pd.edge_i).name},
                {"partner_j", g.edge(pd.partner_j).name},
                {"tau", path_json(g, pd.tau)},
                {"m_i", pd.m_i},
                {"s", pd.s},
                {"iota", path_json(g, pd.iota)},
                {"sigma", path_json(g, pd.sigma)},
                {"nu", path_json(g, pd.nu)},
                {"gamma", path_json(g, pd.gamma)},
                {"stable", pd.stable},
                {"transient", pd.transient},
                {"from_reverse", pd.from_reverse}};
}

inline json bead_json(const MarkedGraph& g, const Bead& b) {
    json jb{{"kind", bead_kind_name(b.kind)}, {"path", path_json(g, b.path)}};
    if (b.gep) jb["gep"] = gep_json(g, *b.gep);
    if (b.pep) jb["pep"] = pep_json(g, *b.pep);
    if (!b.evidence.empty()) jb["evidence"] = b.evidence;
    return jb;
}

inline json power_json(const PowerReport& rep) {
    json instances = json::array();
    for (const PowerClauseInstance& inst : rep.instances) {
        json ji{{"clause", inst.clause}, {"subject", inst.subject}, {"pass", inst.pass}};
        if (inst.stratum) ji["stratum"] = inst.stratum;
        if (!inst.note.empty()) ji["note"] = inst.note;
        instances.push_back(std::move(ji));
    }
    return json{{"k1", rep.k1}, {"rejected", rep.rejected}, {"instances", instances}};
}

inline json trajectory_json(const MarkedGraph& g, const std::vector<TrajectoryStep>& traj) {
    json steps = json::array();
    for (const TrajectoryStep& st : traj) {
        json edges = json::array();
        for (const ForestEntry& fe : st.entries)
            edges.push_back(json{{"pos", fe.pos}, {"parent_pos", fe.parent_pos}, {"weight", fe.weight}});
        steps.push_back(json{{"step", st.step}, {"path", path_json(g, st.path)}, {"edges", edges}});
    }
    return steps;
}

inline json bdt_json(const MarkedGraph& g, const BdtReport& rep) {
    json jr{{"verified", rep.verified},
            {"paths_checked", rep.paths_checked},
            {"bead_counts", rep.bead_counts},
            {"capped", rep.capped}};
    if (rep.counterexample) jr["counterexample"] = path_json(g, *rep.counterexample);
    if (rep.failing_factor) jr["witness"] = path_json(g, *rep.failing_factor);
    return jr;
}

inline json decomp_theorem_json(const DecompReport& rep) {
    return json{{"verified", rep.verified},
                {"vhat", rep.vhat},
                {"monotone", rep.monotone},
                {"futures_checked", rep.futures_checked},
                {"capped", rep.capped}};
}

inline json refinements_json(const RefinementsReport& rep) {
    return json{{"persistence",
                 json{{"pass", rep.persistence_pass},
                      {"d1_hat", rep.d1_hat},
                      {"instances", rep.persistence_instances},
                      {"witness", rep.persistence_witness}}},
                {"displayed_pep_bound",
                 json{{"pass", rep.pep_count_pass},
                      {"max_count", rep.max_displayed_long_peps},
                      {"witness", rep.pep_count_witness}}},
                {"atom_dichotomy",
                 json{{"pass", rep.atom_dichotomy_pass},
                      {"atoms_checked", rep.atoms_checked},
                      {"witness", rep.atom_witness}}},
                {"nibble_preservation",
                 json{{"pass", rep.nibble_preserve_pass},
                      {"trajectories", rep.trajectories_run},
                      {"witness", rep.nibble_witness}}},
                {"all_pass", rep.all_pass()},
                {"capped", rep.capped}};
}

}  // namespace ttrack
