// Command-line front end: parses .ttm map files, dispatches the analyses,
// and emits text or JSON reports with stable schemas and exit codes.
//
//   0  success / property verified
//   1  property violated (counterexample in the report)
//   2  input error
//   3  resource cap exceeded

#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>

#include "ttrack/beads.hpp"
#include "ttrack/irtt.hpp"
#include "ttrack/json_report.hpp"
#include "ttrack/nielsen.hpp"
#include "ttrack/power.hpp"
#include "ttrack/refinements.hpp"
#include "ttrack/splitting.hpp"
#include "ttrack/ttm_io.hpp"

namespace {

using namespace ttrack;

struct Options {
    std::string file;
    std::string path_literal;
    bool json = false;
    bool assume_k1 = false;
    bool include_divisible = false;
    bool randomized_tightening = false;
    int power = 1;
    int kmax = 8;
    int depth = 4;
    int steps = 4;
    int r = 0;
    int J = 0;
    int n = 3;
    int nibble = 0;
    std::size_t max_len = 12;
    std::string policy = "entire";
    int trim = 1;
    std::size_t trajectories = 64;
    Caps caps;
};

void add_common(CLI::App* cmd, Options& opt, bool needs_path = false) {
    cmd->add_option("file", opt.file, "input .ttm map file")->required()->check(CLI::ExistingFile);
    cmd->add_flag("--json", opt.json, "emit JSON instead of text");
    cmd->add_option("--power", opt.power, "replace the map by its k-th iterate after loading")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", opt.caps.seed, "seed for randomized oracles and sampling");
    cmd->add_option("--kmax", opt.kmax, "exact hard-splitting bound")->check(CLI::PositiveNumber);
    cmd->add_option("--word-cap", opt.caps.max_word_letters, "unreduced word materialization cap");
    cmd->add_option("--horizon", opt.caps.horizon, "search horizon for bounded checks");
    cmd->add_option("--node-budget", opt.caps.node_budget, "search node budget");
    cmd->add_option("--max-states", opt.caps.max_states, "state cap for exhaustive generation");
    cmd->add_option("--power-cap", opt.caps.power_cap, "bound for the iterate search");
    if (needs_path)
        cmd->add_option("--path", opt.path_literal, "edge path literal (~NAME reverses)")->required();
}

GraphMap load(const Options& opt) {
    GraphMap f = load_ttm_file(opt.file, opt.caps.max_word_letters);
    if (opt.power > 1) return f.iterate(opt.power);
    return f;
}

void emit(const Options& opt, const json& report, const std::string& text) {
    if (opt.json)
        std::cout << report.dump(2) << "\n";
    else
        std::cout << text;
}

/// Ensures the map is the certified iterate for pep recognition; returns the
/// possibly-iterated map and the power applied.
std::pair<GraphMap, int> ensure_k1(GraphMap f, const Options& opt) {
    if (opt.assume_k1) return {std::move(f), 1};
    PowerReport pr = find_power_k1(f, opt.caps);
    if (pr.k1 == 1) return {std::move(f), 1};
    GraphMap it = f.iterate(pr.k1);
    return {std::move(it), pr.k1};
}

int cmd_analyze(const Options& opt) {
    GraphMap f = load(opt);
    const MarkedGraph& g = f.graph();
    json rep{{"file", opt.file},
             {"power", f.power()},
             {"edges", g.edge_count()},
             {"vertices", g.vertex_count()},
             {"L", f.max_image_length()},
             {"omega", f.filtration().omega()},
             {"strata", strata_json(f)},
             {"turns", turns_json(f)}};
    std::string text;
    text += "map: " + opt.file + " (power " + std::to_string(f.power()) + ")\n";
    text += "L = " + std::to_string(f.max_image_length()) +
            ", omega = " + std::to_string(f.filtration().omega()) + "\n";
    for (const Stratum& s : f.filtration().strata) {
        text += "stratum " + std::to_string(s.index) + " [" + stratum_kind_name(s.kind) + "]";
        for (std::int32_t e : s.edges) text += " " + g.edge(e).name;
        if (s.kind == StratumKind::Exponential) {
            text += "  lambda in [" + std::to_string(s.lambda_lo) + ", " +
                    std::to_string(s.lambda_hi) + "]" + (s.aperiodic ? " aperiodic" : "");
        }
        if (s.prefix_form && !s.suffix.empty())
            text += "  f(" + g.edge(s.prefix_edge).name + ") = " + g.edge(s.prefix_edge).name +
                    " . " + format_path(g, s.suffix);
        text += "\n";
    }
    int illegal = 0;
    for (Turn t : f.all_turns())
        if (!f.turn_legal_cached(t)) ++illegal;
    text += "turns: " + std::to_string(f.all_turns().size()) + " (" + std::to_string(illegal) +
            " illegal)\n";
    emit(opt, rep, text);
    return 0;
}

int cmd_tighten(const Options& opt) {
    GraphMap f = load(opt);
    EdgePath p = parse_path(f.graph(), opt.path_literal);
    EdgePath t = tighten(p);
    json rep{{"input", opt.path_literal},
             {"output", format_path(f.graph(), t)},
             {"length", t.size()}};
    emit(opt, rep, format_path(f.graph(), t) + "\n");
    return 0;
}

int cmd_image(const Options& opt) {
    GraphMap f = load(opt);
    EdgePath p = parse_path(f.graph(), opt.path_literal);
    EdgePath raw = f.image_raw(p);
    EdgePath sharp = tighten(raw);
    json rep{{"input", opt.path_literal},
             {"raw", format_path(f.graph(), raw)},
             {"tight", format_path(f.graph(), sharp)}};
    emit(opt, rep,
         "raw:   " + format_path(f.graph(), raw) + "\ntight: " + format_path(f.graph(), sharp) + "\n");
    return 0;
}

int cmd_split(const Options& opt) {
    GraphMap f = load(opt);
    EdgePath p = tighten(parse_path(f.graph(), opt.path_literal));
    Decomposition d;
    d.base = p;
    std::vector<std::pair<std::size_t, SplitVerdict>> verdicts;
    for (std::size_t pos = 1; pos < p.size(); ++pos) {
        SplitVerdict v = hard_split_verdict(f, p, pos, opt.kmax);
        verdicts.emplace_back(pos, v);
        if (v.hard()) {
            d.positions.push_back(pos);
            d.verdicts.push_back(v);
        }
    }
    json factors = json::array();
    for (const EdgePath& fac : d.factors()) factors.push_back(format_path(f.graph(), fac));
    json splits = json::array();
    for (auto& [pos, v] : verdicts) splits.push_back(verdict_json(f.graph(), f, p, pos, v));
    json rep{{"path", format_path(f.graph(), p)}, {"factors", factors}, {"splits", splits}};
    std::string text;
    auto factor_paths = d.factors();
    for (std::size_t i = 0; i < factor_paths.size(); ++i) {
        if (i) text += " (.) ";
        text += "[" + format_path(f.graph(), factor_paths[i]) + "]";
    }
    text += "\n";
    for (auto& [pos, v] : verdicts) {
        text += "pos " + std::to_string(pos) + ": " + verdict_name(v);
        if (v.witness)
            text += "  witness (k=" + std::to_string(v.witness->k) + ", i=" +
                    std::to_string(v.witness->i) + ", j=" + std::to_string(v.witness->j) + ")";
        text += "\n";
    }
    emit(opt, rep, text);
    return 0;
}

int cmd_verify_irtt(const Options& opt) {
    GraphMap f = load(opt);
    Caps caps = opt.caps;
    caps.nielsen_max_len = opt.max_len;
    IrttReport rep = verify_irtt(f, caps);
    json jr = irtt_json(rep);
    std::string text;
    for (const ClauseResult& c : rep.clauses) {
        text += (c.pass ? "[pass] " : "[FAIL] ");
        text += c.name;
        if (!c.applicable) text += " (vacuous)";
        if (c.bounded) text += " (bounded)";
        if (!c.witness.empty()) text += "  witness: " + c.witness;
        text += "\n";
    }
    text += rep.all_pass() ? "verdict: improved relative train track properties hold\n"
                           : "verdict: FAILED\n";
    emit(opt, jr, text);
    if (!rep.all_pass()) return 1;
    if (rep.capped) return 3;
    return 0;
}

int cmd_nielsen(const Options& opt) {
    GraphMap f = load(opt);
    Caps caps = opt.caps;
    NielsenInventory inv = enumerate_nielsen(f, opt.max_len, caps, opt.include_divisible);
    json rep = nielsen_json(f, inv);
    std::string text;
    for (const NielsenPath& np : inv.members)
        text += format_path(f.graph(), np.path) + (np.indivisible ? "  (indivisible)\n" : "\n");
    for (const NielsenFamily& fam : inv.families)
        text += "family: " + f.graph().edge(fam.edge_i).name + " " +
                (fam.tau_reversed ? "~(" : "(") + format_path(f.graph(), fam.tau) + ")^k " + "~" +
                f.graph().edge(fam.edge_j).name + "  for k >= " + std::to_string(fam.k_min) + "\n";
    emit(opt, rep, text);
    return inv.capped ? 3 : 0;
}

int cmd_geps(const Options& opt) {
    GraphMap f = load(opt);
    if (!opt.path_literal.empty()) {
        EdgePath p = tighten(parse_path(f.graph(), opt.path_literal));
        auto gd = is_gep(f, p);
        if (!gd) {
            emit(opt, json{{"path", opt.path_literal}, {"gep", nullptr}}, "not a GEP\n");
            return 0;
        }
        json rep{{"path", opt.path_literal}, {"gep", gep_json(f.graph(), *gd)}};
        emit(opt, rep,
             "GEP: E_i=" + f.graph().edge(gd->edge_i).name + " m_i=" + std::to_string(gd->m_i) +
                 " E_j=" + f.graph().edge(gd->edge_j).name + " m_j=" + std::to_string(gd->m_j) +
                 " tau=" + format_path(f.graph(), gd->tau) + " k=" + std::to_string(gd->k) + "\n");
        return 0;
    }
    auto table = linear_edge_table(f);
    json fams = json::array();
    std::string text;
    for (const LinearEdge& ei : table)
        for (const LinearEdge& ej : table) {
            if (ei.tau != ej.tau || ej.m <= ei.m) continue;
            fams.push_back(json{{"edge_i", f.graph().edge(ei.edge).name},
                                {"m_i", ei.m},
                                {"edge_j", f.graph().edge(ej.edge).name},
                                {"m_j", ej.m},
                                {"tau", format_path(f.graph(), ei.tau)}});
            text += f.graph().edge(ei.edge).name + " ~(" + format_path(f.graph(), ei.tau) + ")^k ~" +
                    f.graph().edge(ej.edge).name + "  (m_i=" + std::to_string(ei.m) +
                    ", m_j=" + std::to_string(ej.m) + ", k >= 1)\n";
        }
    emit(opt, json{{"gep_families", fams}}, text.empty() ? "no GEP families\n" : text);
    return 0;
}

int cmd_peps(const Options& opt) {
    GraphMap base = load(opt);
    auto [f, applied] = ensure_k1(std::move(base), opt);
    EdgePath p = tighten(parse_path(f.graph(), opt.path_literal));
    auto pd = is_pep(f, p, true);
    if (!pd) {
        emit(opt, json{{"path", opt.path_literal}, {"pep", nullptr}, {"auto_power", applied}},
             "not a pseudo-exceptional path\n");
        return 0;
    }
    json rep{{"path", opt.path_literal}, {"pep", pep_json(f.graph(), *pd)}, {"auto_power", applied}};
    std::string text = "PEP: anchored at " + f.graph().edge(pd->edge_i).name + ", s=" +
                       std::to_string(pd->s) + (pd->stable ? ", stable" : ", transient") + "\n";
    PepStep st = pep_step(f, *pd, opt.nibble);
    if (st.death) {
        rep["step"] = json{{"death", true}, {"lambda", format_path(f.graph(), st.lambda)}};
        text += "step: death, E_i (.) [" + format_path(f.graph(), st.lambda) + "]\n";
    } else {
        rep["step"] = json{{"death", false},
                           {"successor", pep_json(f.graph(), *st.successor)},
                           {"lambda", format_path(f.graph(), st.lambda)}};
        text += "step: successor [" + format_path(f.graph(), st.successor->path(f.graph())) + "]";
        if (!st.lambda.empty()) text += " (.) [" + format_path(f.graph(), st.lambda) + "]";
        text += "\n";
    }
    emit(opt, rep, text);
    return 0;
}

int cmd_mono(const Options& opt) {
    GraphMap f = load(opt);
    int r = opt.r > 0 ? opt.r : 1;
    bool capped = false;
    auto mono = monochromatic_paths(f, r, opt.depth, opt.caps, &capped);
    json list = json::array();
    std::string text;
    for (auto& [d, p] : mono) {
        list.push_back(json{{"depth", d}, {"path", format_path(f.graph(), p)}});
        text += std::to_string(d) + ": " + format_path(f.graph(), p) + "\n";
    }
    emit(opt, json{{"r", r}, {"depth", opt.depth}, {"paths", list}, {"capped", capped}}, text);
    return capped ? 3 : 0;
}

int cmd_beads(const Options& opt) {
    GraphMap base = load(opt);
    auto [f, applied] = ensure_k1(std::move(base), opt);
    BeadContext ctx;
    ctx.kmax = opt.kmax;
    ctx.k1_context = true;
    ctx.inherited_mono = false;
    ctx.caps = opt.caps;
    if (opt.J > 0) {
        ctx.J = opt.J;
    } else {
        BeadParams params = find_bead_params(f, opt.caps);
        ctx.J = params.J;
    }
    EdgePath p = tighten(parse_path(f.graph(), opt.path_literal));
    BeadedResult br = beaded_decomposition(f, p, ctx);
    json rep{{"path", opt.path_literal},
             {"J", ctx.J},
             {"auto_power", applied},
             {"ok", br.ok},
             {"decomposition", decomposition_json(f.graph(), f, br.decomposition)}};
    json beads = json::array();
    for (const Bead& b : br.beads) beads.push_back(bead_json(f.graph(), b));
    rep["beads"] = beads;
    std::string text;
    if (br.ok) {
        for (std::size_t i = 0; i < br.beads.size(); ++i) {
            if (i) text += " (.) ";
            text += std::string(bead_kind_name(br.beads[i].kind)) + "[" +
                    format_path(f.graph(), br.beads[i].path) + "]";
        }
        text += "\n";
    } else {
        rep["witness"] = format_path(f.graph(), br.failed_factor);
        text = "not beaded; unclassifiable factor [" + format_path(f.graph(), br.failed_factor) +
               "]\n";
    }
    emit(opt, rep, text);
    return br.ok ? 0 : 1;
}

int cmd_find_params(const Options& opt) {
    GraphMap f = load(opt);
    Caps caps = opt.caps;
    caps.depth = opt.depth;
    BeadParams params = find_bead_params(f, caps);
    json rep{{"r", params.r}, {"J", params.J}, {"provenance", params.provenance}};
    emit(opt, rep,
         "r = " + std::to_string(params.r) + ", J = " + std::to_string(params.J) + "\n  (" +
             params.provenance + ")\n");
    return 0;
}

int cmd_find_power(const Options& opt) {
    GraphMap f = load(opt);
    PowerReport pr = find_power_k1(f, opt.caps);
    json rep = power_json(pr);
    std::string text = "k1 = " + std::to_string(pr.k1) + "\n";
    for (const PowerClauseInstance& inst : pr.instances)
        text += "  [" + std::string(inst.pass ? "pass" : "FAIL") + "] " + inst.clause + " " +
                inst.subject + (inst.note.empty() ? "" : "  " + inst.note) + "\n";
    emit(opt, rep, text);
    return 0;
}

int cmd_verify_bdt(const Options& opt) {
    GraphMap f = load(opt);
    BeadParams params;
    if (opt.r > 0 && opt.J > 0) {
        params.r = opt.r;
        params.J = opt.J;
        params.provenance = "supplied";
    } else {
        params = find_bead_params(f, opt.caps);
    }
    BdtReport rep = verify_bdt(f, params, opt.depth, opt.caps);
    json jr = bdt_json(f.graph(), rep);
    jr["r"] = params.r;
    jr["J"] = params.J;
    std::string text = std::string(rep.verified ? "verified" : "FAILED") + " (r=" +
                       std::to_string(params.r) + ", J=" + std::to_string(params.J) +
                       ", depth=" + std::to_string(opt.depth) + ", paths=" +
                       std::to_string(rep.paths_checked) + ")\n";
    for (auto& [kind, count] : rep.bead_counts)
        text += "  " + kind + ": " + std::to_string(count) + "\n";
    if (rep.counterexample)
        text += "counterexample: " + format_path(f.graph(), *rep.counterexample) + "\n";
    emit(opt, jr, text);
    if (!rep.verified) return 1;
    if (rep.capped) return 3;
    return 0;
}

int cmd_verify_decomp(const Options& opt) {
    GraphMap f = load(opt);
    Caps caps = opt.caps;
    caps.kmax = opt.kmax;
    DecompReport rep = verify_decomp_theorem(f, opt.n, opt.steps, caps);
    json jr = decomp_theorem_json(rep);
    std::string text = std::string(rep.verified ? "verified" : "FAILED") + "; vhat =";
    for (std::size_t v : rep.vhat) text += " " + std::to_string(v);
    text += rep.monotone ? " (monotone)\n" : " (NOT monotone)\n";
    emit(opt, jr, text);
    return rep.verified ? 0 : 1;
}

int cmd_verify_refinements(const Options& opt) {
    GraphMap f = load(opt);
    Caps caps = opt.caps;
    caps.depth = opt.depth;
    BeadParams params;
    if (opt.r > 0 && opt.J > 0) {
        params.r = opt.r;
        params.J = opt.J;
    } else {
        params = find_bead_params(f, caps);
    }
    RefinementsReport rep = verify_refinements(f, params, caps, opt.trajectories);
    json jr = refinements_json(rep);
    std::string text;
    text += std::string(rep.persistence_pass ? "[pass]" : "[FAIL]") +
            " weight persistence (D1^ = " + std::to_string(rep.d1_hat) + ", " +
            std::to_string(rep.persistence_instances) + " instances)\n";
    text += std::string(rep.pep_count_pass ? "[pass]" : "[FAIL]") +
            " displayed long-pep bound (max " + std::to_string(rep.max_displayed_long_peps) + ")\n";
    text += std::string(rep.atom_dichotomy_pass ? "[pass]" : "[FAIL]") + " atom dichotomy (" +
            std::to_string(rep.atoms_checked) + " atoms)\n";
    text += std::string(rep.nibble_preserve_pass ? "[pass]" : "[FAIL]") +
            " beadedness under nibbling (" + std::to_string(rep.trajectories_run) +
            " trajectories)\n";
    emit(opt, jr, text);
    return rep.all_pass() ? 0 : 1;
}

int cmd_trace(const Options& opt) {
    GraphMap f = load(opt);
    EdgePath p = tighten(parse_path(f.graph(), opt.path_literal));
    NibblePolicy pol;
    if (opt.policy == "entire") pol = NibblePolicy::entire();
    else if (opt.policy == "left") pol = NibblePolicy::left_only(opt.trim);
    else if (opt.policy == "right") pol = NibblePolicy::right_only(opt.trim);
    else if (opt.policy == "both") pol = NibblePolicy::both_ends(opt.trim);
    else if (opt.policy == "seeded") pol = NibblePolicy::seeded(opt.caps.seed);
    else throw error(errc::parse_error, "unknown policy: " + opt.policy);
    auto traj = nibbled_trajectory(f, p, opt.steps, pol, opt.randomized_tightening);
    json rep = trajectory_json(f.graph(), traj);
    std::string text;
    for (const TrajectoryStep& st : traj) {
        text += std::to_string(st.step) + ": " + format_path(f.graph(), st.path) + "\n";
        for (const ForestEntry& fe : st.entries)
            text += "    pos " + std::to_string(fe.pos) + " <- " + std::to_string(fe.parent_pos) +
                    "  w" + std::to_string(fe.weight) + "\n";
    }
    emit(opt, rep, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"computations with topological representatives of free-group automorphisms"};
    app.require_subcommand(1);
    Options opt;

    auto* analyze = app.add_subcommand("analyze", "filtration, strata and turn tables");
    add_common(analyze, opt);
    auto* tighten_cmd = app.add_subcommand("tighten", "freely reduce a path literal");
    add_common(tighten_cmd, opt, true);
    auto* image = app.add_subcommand("image", "raw and tightened image of a path");
    add_common(image, opt, true);
    auto* split = app.add_subcommand("split", "maximal hard splitting with verdicts");
    add_common(split, opt, true);
    auto* virtt = app.add_subcommand("verify-irtt", "train track property battery");
    add_common(virtt, opt);
    virtt->add_option("--max-len", opt.max_len, "Nielsen search length");
    auto* nielsen = app.add_subcommand("nielsen", "Nielsen path inventory");
    add_common(nielsen, opt);
    nielsen->add_option("--max-len", opt.max_len, "maximum member length");
    nielsen->add_flag("--include-divisible", opt.include_divisible,
                      "brute-force inventory including divisible paths");
    auto* geps = app.add_subcommand("geps", "growing exceptional path parse / families");
    add_common(geps, opt);
    geps->add_option("--path", opt.path_literal, "path literal to parse");
    auto* peps = app.add_subcommand("peps", "pseudo-exceptional path parse and step");
    add_common(peps, opt, true);
    peps->add_flag("--assume-k1", opt.assume_k1, "caller asserts the map is the certified iterate");
    peps->add_option("--nibble", opt.nibble, "right-trim amount for the step");
    auto* mono = app.add_subcommand("mono", "monochromatic path generation");
    add_common(mono, opt);
    mono->add_option("--r", opt.r, "iterate exponent per step");
    mono->add_option("--depth", opt.depth, "recursion depth");
    auto* beads = app.add_subcommand("beads", "beaded decomposition of a path");
    add_common(beads, opt, true);
    beads->add_option("--J", opt.J, "bead length bound (computed when omitted)");
    beads->add_flag("--assume-k1", opt.assume_k1, "caller asserts the map is the certified iterate");
    auto* findp = app.add_subcommand("find-params", "empirical bead parameters r and J");
    add_common(findp, opt);
    findp->add_option("--depth", opt.depth, "audit depth");
    auto* findpow = app.add_subcommand("find-power", "least power satisfying the iterate clauses");
    add_common(findpow, opt);
    auto* vbdt = app.add_subcommand("verify-bdt", "beaded decomposition over monochromatic paths");
    add_common(vbdt, opt);
    vbdt->add_option("--r", opt.r, "iterate exponent");
    vbdt->add_option("--J", opt.J, "bead length bound");
    vbdt->add_option("--depth", opt.depth, "generation depth");
    auto* vdec = app.add_subcommand("verify-decomp", "nibbled-future dichotomy with empirical bound");
    add_common(vdec, opt);
    vdec->add_option("--n", opt.n, "maximum start path length");
    vdec->add_option("--steps", opt.steps, "nibbling horizon");
    auto* vref = app.add_subcommand("verify-refinements", "persistence, pep bound, atom dichotomy, preservation");
    add_common(vref, opt);
    vref->add_option("--r", opt.r, "iterate exponent");
    vref->add_option("--J", opt.J, "bead length bound");
    vref->add_option("--depth", opt.depth, "generation depth");
    vref->add_option("--trajectories", opt.trajectories, "random nibbling trajectories");
    auto* trace = app.add_subcommand("trace", "family forest of a nibbled trajectory");
    add_common(trace, opt, true);
    trace->add_option("--steps", opt.steps, "number of steps");
    trace->add_option("--policy", opt.policy, "entire | left | right | both | seeded");
    trace->add_option("--trim", opt.trim, "per-step trim amount");
    trace->add_flag("--randomized-tightening", opt.randomized_tightening,
                    "use a random cancellation order");

    CLI11_PARSE(app, argc, argv);

    try {
        if (analyze->parsed()) return cmd_analyze(opt);
        if (tighten_cmd->parsed()) return cmd_tighten(opt);
        if (image->parsed()) return cmd_image(opt);
        if (split->parsed()) return cmd_split(opt);
        if (virtt->parsed()) return cmd_verify_irtt(opt);
        if (nielsen->parsed()) return cmd_nielsen(opt);
        if (geps->parsed()) return cmd_geps(opt);
        if (peps->parsed()) return cmd_peps(opt);
        if (mono->parsed()) return cmd_mono(opt);
        if (beads->parsed()) return cmd_beads(opt);
        if (findp->parsed()) return cmd_find_params(opt);
        if (findpow->parsed()) return cmd_find_power(opt);
        if (vbdt->parsed()) return cmd_verify_bdt(opt);
        if (vdec->parsed()) return cmd_verify_decomp(opt);
        if (vref->parsed()) return cmd_verify_refinements(opt);
        if (trace->parsed()) return cmd_trace(opt);
    } catch (const ttrack::error& e) {
        std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
        switch (e.code()) {
            case errc::cap_exceeded:
            case errc::missing_inventory: return 3;
            default: return 2;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
