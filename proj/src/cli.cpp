#include "steerlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "steerlab/classical_bound.hpp"
#include "steerlab/fidelity_bounds.hpp"
#include "steerlab/format.hpp"
#include "steerlab/fullstate_witness.hpp"
#include "steerlab/noise_robustness.hpp"
#include "steerlab/oneway_computing.hpp"
#include "steerlab/report_writer.hpp"
#include "steerlab/rng.hpp"
#include "steerlab/serialization.hpp"

namespace steerlab {

namespace {

struct Options {
    std::string format = "table";
    std::string out;
    std::string preset;
    std::string graph_file;
    std::string spec_file;
    std::string method;
    std::string source = "ideal";
    std::string cluster = "horseshoe";
    std::string mode = "postselect";
    std::string state = "w";
    std::string dofs = "2,2";
    std::string n_range;
    std::string d_range;
    std::optional<int> d;
    std::optional<std::size_t> n;
    std::optional<int> q;
    std::optional<double> kernel;
    std::optional<double> fidelity;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::size_t mixed_dof = 0;
    std::size_t samples = 0;
    bool terms = false;
    BruteForceOptions brute;
};

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        s += (i ? std::string(sep) : std::string()) + parts[i];
    }
    return s;
}

long long parse_integer(std::string_view text, std::string_view what) {
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
        throw ValidationError("invalid " + std::string(what) + " '" + std::string(text) + "'");
    }
    return v;
}

/// "a..b", "a,b,c" or "a".
std::vector<long long> parse_int_list(std::string_view text, std::string_view what) {
    std::vector<long long> values;
    if (const auto dots = text.find(".."); dots != std::string_view::npos) {
        const long long lo = parse_integer(text.substr(0, dots), what);
        const long long hi = parse_integer(text.substr(dots + 2), what);
        if (hi < lo || hi - lo > 10'000) {
            throw ValidationError("invalid " + std::string(what) + " range '" + std::string(text) + "'");
        }
        for (long long v = lo; v <= hi; ++v) {
            values.push_back(v);
        }
        return values;
    }
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        values.push_back(parse_integer(text.substr(start, end - start), what));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return values;
}

void require_probability(double p, std::string_view what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ValidationError(std::string(what) + " must lie in [0, 1]");
    }
}

std::string describe_strategy(const CheatingStrategy& s) {
    std::vector<std::string> untrusted;
    std::vector<std::string> rows;
    for (std::size_t i = 0; i < s.untrusted.size(); ++i) {
        untrusted.push_back(std::to_string(s.untrusted[i] + 1));
        std::string row;
        for (int v : s.declared[i]) {
            row += std::to_string(v);
        }
        rows.push_back(row);
    }
    return "untrusted {" + join(untrusted, ",") + "} declares " + join(rows, "/");
}

/// Witness target: a named preset or a graph document.
struct Target {
    std::string kind;
    ColoredGraph graph;
    StateVector state;
    WitnessSpec spec;
};

Target resolve_target(const Options& o, const std::string& fallback_preset) {
    if (!o.preset.empty() && !o.graph_file.empty()) {
        throw ValidationError("--preset and --graph-file are mutually exclusive");
    }
    std::optional<Target> t;
    if (!o.graph_file.empty()) {
        ColoredGraph g = load_graph_file(o.graph_file);
        StateVector psi = build_graph_state(g);
        WitnessSpec spec = spec_from_graph(g);
        t.emplace(Target{"graph", std::move(g), std::move(psi), std::move(spec)});
    } else {
        const std::string name = o.preset.empty() ? fallback_preset : o.preset;
        Preset p = make_preset(name, o.n.value_or(4), o.d.value_or(2));
        WitnessSpec spec = p.kind == PresetKind::g4_prime ? w4_prime_spec() : spec_from_graph(p.graph);
        t.emplace(Target{p.name, std::move(p.graph), std::move(p.state), std::move(spec)});
    }
    if (!o.spec_file.empty()) {
        WitnessSpec custom = parse_spec(read_text_file(o.spec_file));
        if (!(custom.reg() == t->spec.reg())) {
            throw ValidationError("the witness spec register does not match the target state");
        }
        t->spec = std::move(custom);
    }
    return std::move(*t);
}

int min_dim(const QuditRegister& reg) {
    int d = reg.dim(0);
    for (std::size_t k = 1; k < reg.parties(); ++k) {
        d = std::min(d, reg.dim(k));
    }
    return d;
}

struct BoundValue {
    double value;
    std::string method;
    std::string strategy;
};

BoundValue witness_bound(const Options& o, int q, int d, const WitnessSpec* spec) {
    const std::string method = o.method.empty() ? "closed" : o.method;
    if (method == "closed") {
        return {closed_form_bound(q, d), method, ""};
    }
    if (method == "eigen") {
        return {eigenvalue_bound(q, d), method, ""};
    }
    if (method == "brute") {
        if (spec == nullptr) {
            throw ValidationError("--method brute needs a preset, graph or spec");
        }
        const BruteForceResult r = brute_force_bound(*spec, o.brute);
        return {r.value, method, describe_strategy(r.strategy)};
    }
    throw ValidationError("unknown --method '" + method + "' (expected closed, eigen or brute)");
}

void add_window(std::vector<std::pair<std::string, Cell>>& fields, const FidelityWindow& w) {
    fields.emplace_back("fidelity_lower", w.lower);
    fields.emplace_back("fidelity_upper", w.upper);
    fields.emplace_back("raw_fidelity_lower", w.raw_lower);
    fields.emplace_back("raw_fidelity_upper", w.raw_upper);
}

Report cmd_witness(const Options& o) {
    Report report;
    require_probability(o.noise, "--noise");
    if (o.kernel) {
        int q = o.q.value_or(2);
        int d = o.d.value_or(2);
        std::optional<Target> t;
        if (!o.preset.empty() || !o.graph_file.empty() || !o.spec_file.empty()) {
            t.emplace(resolve_target(o, "chain"));
            q = static_cast<int>(t->spec.q());
            d = min_dim(t->spec.reg());
        }
        const BoundValue b = witness_bound(o, q, d, t ? &t->spec : nullptr);
        const SteeringReport r = report_from_value(*o.kernel, static_cast<std::size_t>(q), d, b.value);
        std::vector<std::pair<std::string, Cell>> fields{
            {"q", static_cast<long long>(q)}, {"d", static_cast<long long>(d)}, {"kernel", r.kernel_value},
            {"bound", r.classical_bound},     {"bound_method", b.method},       {"steerable", r.steerable},
            {"margin", r.margin},
        };
        add_window(fields, r.fidelity_window);
        fields.emplace_back("fidelity_threshold", fidelity_threshold(q, d));
        fields.emplace_back("provenance", to_string(r.provenance));
        Section& s = report.add_record("witness", std::move(fields));
        if (!b.strategy.empty()) {
            s.notes.push_back("strategy: " + b.strategy);
        }
        return report;
    }

    const Target t = resolve_target(o, "chain");
    const QuditRegister& reg = t.spec.reg();
    const int q = static_cast<int>(t.spec.q());
    const int d = min_dim(reg);
    double kernel = 0.0;
    double fidelity = 0.0;
    if (o.source == "ideal") {
        // The kernel and the target fidelity are affine in the noise weight.
        const double dim = static_cast<double>(reg.total_dim());
        kernel = (1.0 - o.noise) * evaluate_kernel(t.spec, t.state) + o.noise * evaluate_kernel_maximally_mixed(t.spec);
        fidelity = (1.0 - o.noise) + o.noise / dim;
    } else if (o.source == "random") {
        const DensityOperator rho =
            DensityOperator::mixture(DensityOperator::maximally_mixed(reg), random_mixed_state(reg, o.seed), o.noise);
        kernel = evaluate_kernel(t.spec, rho);
        fidelity = fidelity_with_pure(rho, t.state);
    } else {
        throw ValidationError("unknown --source '" + o.source + "' (expected ideal or random)");
    }
    const BoundValue b = witness_bound(o, q, d, &t.spec);
    const SteeringReport r = report_from_value(kernel, static_cast<std::size_t>(q), d, b.value);
    std::vector<std::pair<std::string, Cell>> fields{
        {"graph_kind", t.kind},
        {"n", static_cast<long long>(reg.parties())},
        {"d", static_cast<long long>(d)},
        {"q", static_cast<long long>(q)},
        {"source", o.source},
        {"noise", o.noise},
        {"kernel", r.kernel_value},
        {"bound", r.classical_bound},
        {"bound_method", b.method},
        {"steerable", r.steerable},
        {"margin", r.margin},
    };
    add_window(fields, r.fidelity_window);
    fields.emplace_back("target_fidelity", fidelity);
    fields.emplace_back("fidelity_threshold", fidelity_threshold(q, d));
    fields.emplace_back("provenance", to_string(KernelProvenance::simulated));
    Section& s = report.add_record("witness", std::move(fields));
    if (!b.strategy.empty()) {
        s.notes.push_back("strategy: " + b.strategy);
    }
    return report;
}

struct CommandResult {
    Report report;
    int code = exit_ok;
};

CommandResult cmd_robustness(const Options& o, std::ostream& err) {
    const std::string kind = o.preset.empty() ? "chain" : o.preset;
    const std::string n_text = !o.n_range.empty() ? o.n_range : std::to_string(o.n.value_or(4));
    const std::string d_text = !o.d_range.empty() ? o.d_range : std::to_string(o.d.value_or(2));
    std::vector<std::size_t> ns;
    for (long long v : parse_int_list(n_text, "--n-range")) {
        if (v < 1) {
            throw ValidationError("--n-range values must be positive");
        }
        ns.push_back(static_cast<std::size_t>(v));
    }
    std::vector<int> ds;
    for (long long v : parse_int_list(d_text, "--d-range")) {
        if (v < 2 || v > 1'000'000) {
            throw ValidationError("--d-range values must be >= 2");
        }
        ds.push_back(static_cast<int>(v));
    }
    const SweepResult sweep_result = sweep(kind, ns, ds);
    CommandResult result;
    Section& s = result.report.add(
        "robustness", {"graph_kind", "n", "d", "q", "bound", "kernel_pure", "kernel_mixed", "p_threshold"});
    for (const RobustnessPoint& p : sweep_result.points) {
        s.add_row({p.graph_kind, static_cast<long long>(p.n), static_cast<long long>(p.d), static_cast<long long>(p.q),
                   p.bound, p.kernel_pure, p.kernel_mixed, p.p_threshold});
    }
    if (sweep_result.truncated) {
        s.notes.push_back("truncated: " + sweep_result.truncation_reason);
        err << "warning: sweep truncated at the dimension cap (" << sweep_result.truncation_reason << ")\n";
        result.code = exit_cap;
    }
    return result;
}

Report oneway_from_kernel(double w) {
    Report report;
    const FidelityWindow fc = fcomp_window(w);
    const ProcessBounds pb = process_and_average_bounds(w);
    const double w4c = closed_form_bound(2, 2);
    report.add_record("oneway", {
                                    {"w4_kernel", w},
                                    {"w4_bound", w4c},
                                    {"steerable", w > w4c},
                                    {"fcomp_lower", fc.lower},
                                    {"fcomp_upper", fc.upper},
                                    {"fcomp_threshold", w4c / 2.0},
                                    {"process_lower", pb.process_lower},
                                    {"average_lower", pb.average_lower},
                                    {"provenance", to_string(KernelProvenance::user_supplied)},
                                });
    return report;
}

Report cmd_oneway(const Options& o) {
    if (o.kernel) {
        return oneway_from_kernel(*o.kernel);
    }
    require_probability(o.noise, "--noise");
    if (o.mode != "postselect" && o.mode != "feedforward") {
        throw ValidationError("unknown --mode '" + o.mode + "' (expected postselect or feedforward)");
    }
    const Cluster cluster = parse_cluster(o.cluster);
    const QuditRegister reg = QuditRegister::uniform(4, 2);
    DensityOperator base = DensityOperator::from_pure(cluster_state(cluster));
    if (o.source == "random") {
        base = random_mixed_state(reg, o.seed);
    } else if (o.source != "ideal") {
        throw ValidationError("unknown --source '" + o.source + "' (expected ideal or random)");
    }
    const DensityOperator rho = DensityOperator::mixture(DensityOperator::maximally_mixed(reg), base, o.noise);

    Report report;
    Section& rows = report.add("branches", {"alpha", "beta", "s2", "s3", "probability", "corrected_fidelity", "status"});
    for (const AngleSetting& s : standard_settings()) {
        for (const BranchOutcome& b : run_branching(rho, cluster, s)) {
            rows.add_row({s.alpha, s.beta, static_cast<long long>(b.s2), static_cast<long long>(b.s3), b.probability,
                          b.corrected_fidelity, std::string(b.post_state ? "ok" : "zero-probability")});
        }
    }

    const WitnessSpec w4 = cluster == Cluster::horseshoe ? w4_spec() : w4box_spec();
    const double w = evaluate_kernel(w4, rho);
    const double wcz = wcz_kernel(rho, cluster);
    const double w4c = closed_form_bound(2, 2);
    std::vector<std::pair<std::string, Cell>> fields{
        {"cluster", to_string(cluster)}, {"source", o.source}, {"noise", o.noise}};
    try {
        fields.emplace_back("f_comp", computation_fidelity(rho, cluster));
        fields.emplace_back("f_postselected", postselected_fidelity(rho, cluster));
    } catch (const NumericalError&) {
        fields.emplace_back("f_comp", std::string("undefined"));
        fields.emplace_back("f_postselected", std::string("undefined"));
    }
    if (o.mode == "feedforward") {
        fields.emplace_back("f_feedforward", feedforward_fidelity(rho, cluster));
    }
    fields.emplace_back("wcz_kernel", wcz);
    fields.emplace_back("wcz_bound", w4c);
    fields.emplace_back("gate_steerable", wcz > w4c);
    fields.emplace_back("w4_kernel", w);
    fields.emplace_back("w4_steerable", w > w4c);
    if (w >= 0.0 && w <= 2.0) {
        const FidelityWindow fc = fcomp_window(w);
        const ProcessBounds pb = process_and_average_bounds(w);
        fields.emplace_back("fcomp_lower", fc.lower);
        fields.emplace_back("fcomp_upper", fc.upper);
        fields.emplace_back("process_lower", pb.process_lower);
        fields.emplace_back("average_lower", pb.average_lower);
    }
    Section& summary = report.add_record("summary", std::move(fields));
    summary.notes.push_back("f_comp weights the s2 = s3 = 0 branch by its ideal probability 1/4");
    return report;
}

Report cmd_bound(const Options& o) {
    Report report;
    Section& s = report.add("bound", {"method", "q", "d", "value", "strategy"});
    const bool structural = !o.preset.empty() || !o.graph_file.empty() || !o.spec_file.empty();
    std::optional<Target> t;
    int q = o.q.value_or(2);
    int d = o.d.value_or(2);
    if (structural) {
        t.emplace(resolve_target(o, "chain"));
        q = static_cast<int>(t->spec.q());
        d = min_dim(t->spec.reg());
    }
    const std::string method = o.method.empty() ? "all" : o.method;
    if (method != "all" && method != "closed" && method != "eigen" && method != "brute") {
        throw ValidationError("unknown --method '" + method + "' (expected closed, eigen, brute or all)");
    }
    const auto qq = static_cast<long long>(q);
    const auto dd = static_cast<long long>(d);
    if (method == "all" || method == "closed") {
        s.add_row({std::string("closed"), qq, dd, closed_form_bound(q, d), std::string()});
    }
    if (method == "all" || method == "eigen") {
        s.add_row({std::string("eigen"), qq, dd, eigenvalue_bound(q, d), std::string()});
    }
    if (method == "brute" || (method == "all" && t)) {
        if (!t) {
            throw ValidationError("--method brute needs a preset, graph or spec");
        }
        const BruteForceResult r = brute_force_bound(t->spec, o.brute);
        s.add_row({std::string("brute"), qq, dd, r.value, describe_strategy(r.strategy)});
    }
    if (q >= 3 && (method == "all")) {
        s.notes.push_back("for q >= 3 the eigenvalue value is a diagnostic; the closed form is the bound used for verdicts");
    }
    return report;
}

Report cmd_multidof(const Options& o) {
    std::vector<int> dims;
    for (long long v : parse_int_list(o.dofs, "--dofs")) {
        if (v < 2 || v > 1'000'000) {
            throw ValidationError("--dofs entries must be >= 2");
        }
        dims.push_back(static_cast<int>(v));
    }
    const DofSystem dofs(dims);
    Report report;
    if (o.fidelity) {
        const double threshold = 1.0 / std::sqrt(static_cast<double>(dofs.d_min()));
        report.add_record("multidof", {{"d_min", static_cast<long long>(dofs.d_min())},
                                       {"fidelity", *o.fidelity},
                                       {"fidelity_threshold", threshold},
                                       {"steerable", multidof_fidelity_verdict(*o.fidelity, dofs.d_min())},
                                       {"provenance", to_string(KernelProvenance::user_supplied)}});
        return report;
    }
    require_probability(o.noise, "--noise");
    if (o.mixed_dof > dofs.dof_count()) {
        throw ValidationError("--mixed-dof must name a DOF between 1 and " + std::to_string(dofs.dof_count()));
    }
    detail::require_density_cap(dofs.joint_register().total_dim());
    std::optional<DensityOperator> rho;
    for (std::size_t k = 0; k < dofs.dof_count(); ++k) {
        const QuditRegister pair({dims[k], dims[k]});
        const DensityOperator factor = k + 1 == o.mixed_dof ? DensityOperator::maximally_mixed(pair)
                                                            : DensityOperator::from_pure(two_vertex(dims[k]).state);
        rho = rho ? kron(*rho, factor) : factor;
    }
    const QuditRegister joint = dofs.joint_register();
    const DensityOperator noisy = DensityOperator::mixture(DensityOperator::maximally_mixed(joint), *rho, o.noise);
    const MultiDofResult r = multidof_kernel(noisy, dofs);
    Section& per = report.add("dofs", {"dof", "d", "kernel"});
    for (std::size_t k = 0; k < dofs.dof_count(); ++k) {
        per.add_row({static_cast<long long>(k + 1), static_cast<long long>(dims[k]), r.per_dof_kernels[k]});
    }
    const double f = fidelity_with_pure(noisy, build_hyper_state(dofs));
    report.add_record("multidof", {{"noise", o.noise},
                                   {"product", r.product},
                                   {"threshold", r.threshold},
                                   {"steerable", r.steerable},
                                   {"hyper_fidelity", f},
                                   {"fidelity_threshold", 1.0 / std::sqrt(static_cast<double>(dofs.d_min()))},
                                   {"fidelity_steerable", multidof_fidelity_verdict(f, dofs.d_min())}});
    return report;
}

Report cmd_fullstate(const Options& o) {
    require_probability(o.noise, "--noise");
    const std::size_t n = o.n.value_or(3);
    if (o.state != "w" && o.state != "ghz") {
        throw ValidationError("unknown --state '" + o.state + "' (expected w or ghz)");
    }
    const StateVector psi = o.state == "w" ? w_state(n) : ghz_state(n);
    const std::vector<TomographicTerm> terms = decompose(psi);
    const DensityOperator rho = werner_mix(psi, o.noise);
    const double kernel = evaluate_fullstate_kernel(terms, rho);
    const double threshold = wstate_threshold();
    const double mixed = 1.0 / static_cast<double>(psi.reg().total_dim());

    Report report;
    std::vector<std::pair<std::string, Cell>> fields{
        {"state", o.state},
        {"n", static_cast<long long>(n)},
        {"noise", o.noise},
        {"kernel", kernel},
        {"target_fidelity", fidelity_with_pure(rho, psi)},
        {"threshold", threshold},
        {"steerable", wstate_verdict(kernel)},
        {"p_flip", (1.0 - threshold) / (1.0 - mixed)},
        {"terms", static_cast<long long>(terms.size())},
    };
    if (n <= 4) {
        fields.emplace_back("brute_force_diagnostic", fullstate_brute_force(terms, psi.reg()));
    }
    Section& summary = report.add_record("fullstate", std::move(fields));
    if (n <= 4) {
        summary.notes.push_back("brute_force_diagnostic is reported for comparison only; verdicts use threshold");
    }

    if (o.samples > 0) {
        SplitMix64 rng(o.seed);
        double worst = 0.0;
        for (std::size_t i = 0; i < o.samples; ++i) {
            const StateVector target = random_pure_state(psi.reg(), rng());
            const DensityOperator sample = random_mixed_state(psi.reg(), rng());
            const double diff =
                std::abs(evaluate_fullstate_kernel(decompose(target), sample) - fidelity_with_pure(sample, target));
            worst = std::max(worst, diff);
        }
        report.add_record("identity_check", {{"samples", static_cast<long long>(o.samples)},
                                             {"seed", static_cast<long long>(o.seed)},
                                             {"max_abs_deviation", worst}});
    }
    if (o.terms) {
        Section& t = report.add("terms", {"observables", "outcomes", "coefficient"});
        for (const TomographicTerm& term : terms) {
            std::string obs;
            std::string outs;
            for (std::size_t k = 0; k < term.observables.size(); ++k) {
                obs += observable_symbol(term.observables[k]);
                outs += static_cast<char>('0' + term.outcomes[k]);
            }
            t.add_row({obs, outs, term.coefficient});
        }
    }
    return report;
}

Report cmd_build_graph(const Options& o) {
    const Target t = resolve_target(o, "chain");
    std::vector<std::string> edges;
    for (const Edge& e : t.graph.edges()) {
        edges.push_back(std::to_string(e.a + 1) + "-" + std::to_string(e.b + 1));
    }
    std::vector<std::string> colors;
    for (const auto& cls : t.graph.colors()) {
        std::vector<std::string> members;
        for (std::size_t v : cls) {
            members.push_back(std::to_string(v + 1));
        }
        colors.push_back("{" + join(members, ",") + "}");
    }
    Report report;
    report.add_record("graph", {{"graph_kind", t.kind},
                                {"n", static_cast<long long>(t.graph.n_vertices())},
                                {"d", static_cast<long long>(t.graph.d())},
                                {"q", static_cast<long long>(t.graph.q())},
                                {"edges", join(edges, " ")},
                                {"colors", join(colors, " ")},
                                {"document", dump_graph(t.graph)}});
    Section& amps = report.add("amplitudes", {"index", "digits", "re", "im"});
    const QuditRegister& reg = t.state.reg();
    if (reg.total_dim() > dimension_caps().max_density_dim) {
        amps.notes.push_back("amplitude listing omitted above " + std::to_string(dimension_caps().max_density_dim) +
                             " basis states");
        return report;
    }
    for (std::size_t i = 0; i < reg.total_dim(); ++i) {
        const Complex a = t.state.amplitude(i);
        if (std::abs(a) < 1e-15) {
            continue;
        }
        std::string digits;
        for (int v : reg.digits(i)) {
            digits += (digits.empty() ? "" : ".") + std::to_string(v);
        }
        amps.add_row({static_cast<long long>(i), digits, a.real(), a.imag()});
    }
    return report;
}

/// Moves --config into the argument list: config entries become flags placed
/// before the command-line flags, so that later (command-line) values win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> rest;
    std::optional<std::string> config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) {
                throw ValidationError("--config needs a file argument");
            }
            config_path = args[++i];
        } else if (args[i].starts_with("--config=")) {
            config_path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!config_path) {
        return rest;
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(*config_path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("malformed config document: " + std::string(e.what()));
    }
    if (!doc.is_object()) {
        throw ValidationError("the config document must be a JSON object");
    }
    std::optional<std::string> command;
    std::vector<std::string> flags;
    for (const auto& [key, value] : doc.items()) {
        if (key == "command") {
            if (!value.is_string()) {
                throw ValidationError("config key 'command' must be a string");
            }
            command = value.get<std::string>();
            continue;
        }
        const std::string flag = "--" + key;
        if (value.is_boolean()) {
            if (value.get<bool>()) {
                flags.push_back(flag);
            }
        } else if (value.is_string()) {
            flags.push_back(flag);
            flags.push_back(value.get<std::string>());
        } else if (value.is_number_integer()) {
            flags.push_back(flag);
            flags.push_back(std::to_string(value.get<long long>()));
        } else if (value.is_number()) {
            flags.push_back(flag);
            flags.push_back(format_number(value.get<double>()));
        } else {
            throw ValidationError("config key '" + key + "' must be a string, number or boolean");
        }
    }
    // Command: the first positional argument on the command line, else the config's.
    std::vector<std::string> out;
    std::size_t first = 0;
    if (!rest.empty() && !rest.front().starts_with("-")) {
        out.push_back(rest.front());
        first = 1;
    } else if (command) {
        out.push_back(*command);
    } else {
        throw ValidationError("no command given on the command line or in the config document");
    }
    out.insert(out.end(), flags.begin(), flags.end());
    out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(first), rest.end());
    return out;
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "Output format: table, csv or json-lines")
        ->check(CLI::IsMember({"table", "csv", "json-lines"}));
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
    cmd->add_option("--seed", o.seed, "Seed for random sources");
}

void add_target(CLI::App* cmd, Options& o) {
    cmd->add_option("--preset", o.preset, "chain, star, box4, horseshoe4, two_vertex or g4_prime");
    cmd->add_option("--graph-file", o.graph_file, "Graph document (JSON)");
    cmd->add_option("--spec-file", o.spec_file, "Witness spec document (JSON) replacing the graph witness");
    cmd->add_option("--n", o.n, "Number of parties for chain and star presets")->check(CLI::Range(1, 64));
    cmd->add_option("--d", o.d, "Local dimension")->check(CLI::Range(2, 1'000'000));
}

void add_brute_caps(CLI::App* cmd, Options& o) {
    cmd->add_option("--max-parties", o.brute.max_parties, "Brute-force party cap");
    cmd->add_option("--max-dimension", o.brute.max_dimension, "Brute-force dimension cap");
    cmd->add_option("--max-settings", o.brute.max_settings, "Brute-force settings-per-party cap");
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Genuine multipartite steering witnesses for qudit graph states", "steerlab"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every command");

    CLI::App* witness = app.add_subcommand("witness", "Kernel value, bound, verdict and fidelity window");
    add_common(witness, o);
    add_target(witness, o);
    add_brute_caps(witness, o);
    witness->add_option("--noise", o.noise, "White-noise weight p");
    witness->add_option("--kernel", o.kernel, "Measured kernel value (skips simulation)");
    witness->add_option("--q", o.q, "Color count for a supplied kernel")->check(CLI::Range(2, 1'000'000));
    witness->add_option("--method", o.method, "Bound: closed, eigen or brute");
    witness->add_option("--source", o.source, "ideal (Werner-mixed target) or random (seeded)");

    CLI::App* robustness = app.add_subcommand("robustness", "Noise thresholds over an (n, d) grid");
    add_common(robustness, o);
    robustness->add_option("--preset", o.preset, "Graph kind: chain, star, box4, horseshoe4 or two_vertex");
    robustness->add_option("--n", o.n, "Single party count");
    robustness->add_option("--d", o.d, "Single local dimension");
    robustness->add_option("--n-range", o.n_range, "Party counts, \"a..b\" or \"a,b,c\"");
    robustness->add_option("--d-range", o.d_range, "Dimensions, \"a..b\" or \"a,b,c\"");

    CLI::App* oneway = app.add_subcommand("oneway", "One-way gate simulation on a four-qubit cluster");
    add_common(oneway, o);
    oneway->add_option("--cluster", o.cluster, "horseshoe or box");
    oneway->add_option("--noise", o.noise, "White-noise weight p");
    oneway->add_option("--source", o.source, "ideal or random");
    oneway->add_option("--mode", o.mode, "postselect, or feedforward to add the corrected-branch average");
    oneway->add_option("--kernel", o.kernel, "Measured four-qubit kernel (skips simulation)");

    CLI::App* bound = app.add_subcommand("bound", "Classical bound by closed form, eigenvalue or brute force");
    add_common(bound, o);
    add_target(bound, o);
    add_brute_caps(bound, o);
    bound->add_option("--q", o.q, "Color count")->check(CLI::Range(2, 1'000'000));
    bound->add_option("--method", o.method, "closed, eigen, brute or all");

    CLI::App* multidof = app.add_subcommand("multidof", "Steering in several degrees of freedom of one pair");
    add_common(multidof, o);
    multidof->add_option("--dofs", o.dofs, "Dimensions of the degrees of freedom, e.g. 2,2");
    multidof->add_option("--noise", o.noise, "White-noise weight p on the joint state");
    multidof->add_option("--mixed-dof", o.mixed_dof, "Replace this DOF (1-based) by its maximally mixed state");
    multidof->add_option("--fidelity", o.fidelity, "Measured state fidelity (skips simulation)");

    CLI::App* fullstate = app.add_subcommand("fullstate", "Witness from the full tomographic decomposition");
    add_common(fullstate, o);
    fullstate->add_option("--state", o.state, "w or ghz");
    fullstate->add_option("--n", o.n, "Number of qubits")->check(CLI::Range(2, 6));
    fullstate->add_option("--noise", o.noise, "White-noise weight p");
    fullstate->add_option("--samples", o.samples, "Random identity checks against the direct fidelity");
    fullstate->add_flag("--terms", o.terms, "List the decomposition");

    CLI::App* build = app.add_subcommand("build-graph", "Graph document and state amplitudes");
    add_common(build, o);
    add_target(build, o);

    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        const auto subs = app.get_subcommands();
        out << (subs.empty() ? app.help() : subs.front()->help());
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    }

    const OutputFormat format = parse_format(o.format);
    CommandResult result;
    CLI::App* chosen = app.get_subcommands().front();
    if (chosen == witness) {
        result.report = cmd_witness(o);
    } else if (chosen == robustness) {
        result = cmd_robustness(o, err);
    } else if (chosen == oneway) {
        result.report = cmd_oneway(o);
    } else if (chosen == bound) {
        result.report = cmd_bound(o);
    } else if (chosen == multidof) {
        result.report = cmd_multidof(o);
    } else if (chosen == fullstate) {
        result.report = cmd_fullstate(o);
    } else {
        result.report = cmd_build_graph(o);
    }

    if (o.out.empty()) {
        write_report(out, result.report, format);
    } else {
        std::ofstream file(o.out, std::ios::binary | std::ios::trunc);
        if (!file) {
            throw ValidationError("cannot write '" + o.out + "'");
        }
        write_report(file, result.report, format);
    }
    return result.code;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        return run(args, out, err);
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << '\n';
        return exit_validation;
    } catch (const CapExceeded& e) {
        err << "error: " << e.what() << '\n';
        return exit_cap;
    } catch (const NumericalError& e) {
        err << "error: " << e.what() << '\n';
        return exit_numerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_failure;
    }
}

} // namespace steerlab
