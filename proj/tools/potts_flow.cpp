#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pottsflow/counting.hpp"
#include "pottsflow/couplings.hpp"
#include "pottsflow/diagnostics.hpp"
#include "pottsflow/error.hpp"
#include "pottsflow/exact.hpp"
#include "pottsflow/flow_chain.hpp"
#include "pottsflow/io.hpp"
#include "pottsflow/joint_chain.hpp"

namespace {

using nlohmann::json;
using namespace pottsflow;

constexpr const char* kVersion = "0.1.0";
constexpr int kSchema = 1;

enum ExitCode : int { kOk = 0, kIoFailure = 1, kInadmissible = 2, kCheckFailed = 3 };

struct Common {
    std::string graph;
    std::string gens = "auto";
    Residue q = 2;
    std::uint64_t seed = 0;
    bool timings = false;
    std::string output;
};

struct ChainOptions {
    std::optional<double> x;
    std::optional<double> y;
    std::optional<double> w;
    double delta = 0.01;
    std::optional<std::uint64_t> steps;
    std::string chain = "flow";
};

void add_instance_options(CLI::App* sub, Common& c) {
    sub->add_option("--graph", c.graph, "Graph file or lattice spec (grid:WxH, grid3:WxHxD, tri:WxH, hex:WxH)")
        ->required();
    sub->add_option("--gens", c.gens, "Generating-set file, or auto")->capture_default_str();
    sub->add_option("--q", c.q, "Number of colours / flow modulus")->capture_default_str()->check(CLI::Range(2u, 1u << 16));
}

void add_output_options(CLI::App* sub, Common& c) {
    sub->add_option("--seed", c.seed, "64-bit seed")->capture_default_str();
    sub->add_flag("--timings", c.timings, "Include wall-clock timings in the output");
    sub->add_option("--output,-o", c.output, "Write output to this file instead of stdout");
}

json params_json(const Instance& inst) {
    return {{"r", inst.gens.size()},
            {"computed", params_to_json(inst.gens.params())},
            {"bound", params_to_json(inst.gens.bound_params())},
            {"family_bound", inst.gens.family_bound().has_value()}};
}

json manifest(const std::string& command, const Common& c, const Instance* inst) {
    json m = {{"command", command}, {"version", kVersion}, {"seed", c.seed}, {"q", c.q}};
    if (inst) {
        m["graph"] = {{"source", inst->graph_source},
                      {"vertices", inst->graph.vertex_count()},
                      {"edges", inst->graph.edge_count()}};
        m["gens"] = {{"source", inst->gens_source}};
        m["gens"].update(params_json(*inst));
    }
    return m;
}

void emit(const std::string& text, const Common& c) {
    if (c.output.empty()) {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("cannot write to stdout");
        return;
    }
    std::ofstream out(c.output);
    if (!out) throw IoError("cannot open '" + c.output + "' for writing");
    out << text;
    if (!out) throw IoError("cannot write to '" + c.output + "'");
}

void emit(const json& j, const Common& c) { emit(j.dump(2) + "\n", c); }

double require_flow_x(double x) {
    if (!(x > 0.0 && x < 1.0)) throw InvalidArgument("x must lie in (0, 1)");
    return x;
}

/// x from whichever of --x, --y, --w was given.
double resolve_x(const ChainOptions& o, Residue q) {
    if (o.x) return require_flow_x(*o.x);
    if (o.y) return require_flow_x(param_map::flow_from_rc(*o.y, q));
    if (o.w) return require_flow_x(param_map::flow_from_potts(*o.w, q));
    throw InvalidArgument("one of --x, --y, --w is required");
}

json parameter_map_json(double x, Residue q) {
    return {{"x", x}, {"y", param_map::rc_from_flow(x, q)}, {"w", param_map::potts_from_flow(x, q)}};
}

/// Runs the chosen chain and returns the edge set of its random-cluster sample,
/// recording chain details in `out`.
EdgeSubset sample_rc_edges(const Instance& inst, const Common& c, const ChainOptions& o, double x, json& out) {
    const GenParams bp = inst.gens.bound_params();
    Rng chain_rng = Rng::stream(c.seed, StreamPurpose::Chain);
    if (o.chain == "joint") {
        JointSample s = sample_joint(inst.graph, inst.gens, x, c.q, bp.ell, bp.s, o.delta, chain_rng, o.steps);
        out["chain"] = {{"kind", "joint"},
                        {"p", s.params.p},
                        {"alpha", s.params.alpha},
                        {"bound", bound_to_json(s.bound)},
                        {"steps", s.steps}};
        return s.state.edges;
    }
    FlowSample s = sample_flow(inst.gens, x, c.q, bp.d, bp.iota, o.delta, chain_rng, o.steps);
    out["chain"] = {{"kind", "flow"}, {"bound", bound_to_json(s.bound)}, {"steps", s.steps}};
    Rng coupling_rng = Rng::stream(c.seed, StreamPurpose::Coupling);
    return flow_to_rc(inst.graph, s.flow, x, coupling_rng);
}

void add_chain_options(CLI::App* sub, ChainOptions& o) {
    sub->add_option("--delta", o.delta, "Target total-variation distance")->capture_default_str();
    sub->add_option("--steps", o.steps, "Run exactly this many steps instead of the mixing bound");
}

json chains_suite(const Instance& inst, Residue q, double x) {
    json out = json::object();
    bool ok = true;
    try {
        const SparseChain chain = flow_chain_matrix(inst.graph, inst.gens, q, x);
        const Distribution target = to_distribution(weighted_flows(inst.graph, q, x), flow_key);
        long double unreached = 0.0L;
        const std::vector<long double> pi = align(chain, target, &unreached);
        const double rows = static_cast<double>(max_row_sum_error(chain));
        const double balance = static_cast<double>(detailed_balance_error(chain, pi));
        const double residual = static_cast<double>(fixed_point_residual(chain, pi));
        const bool pass = rows <= 1e-12 && balance <= 1e-12 && residual <= 1e-10 && unreached == 0.0L;
        ok = ok && pass;
        out["flow"] = {{"states", chain.size()},
                       {"row_sum_error", rows},
                       {"detailed_balance_error", balance},
                       {"fixed_point_residual", residual},
                       {"unreached_mass", static_cast<double>(unreached)},
                       {"ok", pass}};
    } catch (const TooLarge& e) {
        out["flow"] = {{"skipped", e.what()}};
    }
    try {
        const GenParams bp = inst.gens.bound_params();
        double p = 0.5;
        std::string p_source = "fixed";
        try {
            p = compute_p(x, q, bp.ell, bp.s, inst.graph.edge_count(), inst.gens.size()).p;
            p_source = "balanced";
        } catch (const OutOfRange&) {
        }
        const SparseChain chain = joint_chain_matrix(inst.graph, inst.gens, q, x, p);
        const Distribution target = to_distribution(weighted_joint_states(inst.graph, q, x), joint_key);
        long double unreached = 0.0L;
        const std::vector<long double> pi = align(chain, target, &unreached);
        const double rows = static_cast<double>(max_row_sum_error(chain));
        const double balance = static_cast<double>(detailed_balance_error(chain, pi));
        const double residual = static_cast<double>(fixed_point_residual(chain, pi));
        const bool pass = rows <= 1e-12 && balance <= 1e-12 && residual <= 1e-10 && unreached == 0.0L;
        ok = ok && pass;
        out["joint"] = {{"states", chain.size()},
                        {"p", p},
                        {"p_source", p_source},
                        {"row_sum_error", rows},
                        {"detailed_balance_error", balance},
                        {"fixed_point_residual", residual},
                        {"unreached_mass", static_cast<double>(unreached)},
                        {"ok", pass}};
    } catch (const TooLarge& e) {
        out["joint"] = {{"skipped", e.what()}};
    }
    out["ok"] = ok;
    return out;
}

json identities_suite(const Instance& inst, Residue q, double x) {
    const IdentityReport rep = identity_suite(inst.graph, q, x);
    json out = {{"flow_side", static_cast<double>(rep.flow_side)},
                {"potts_side", static_cast<double>(rep.potts_side)},
                {"rc_side", static_cast<double>(rep.rc_side)},
                {"potts_rel_error", static_cast<double>(rep.potts_rel_error)},
                {"rc_rel_error", static_cast<double>(rep.rc_rel_error)},
                {"subsets_checked", rep.subsets_checked},
                {"flow_count_failures", rep.flow_count_failures},
                {"ok", rep.ok}};
    if (!rep.ok) out["witness"] = rep.witness;
    return out;
}

json minima_suite() {
    const std::vector<double> xs{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    const SumOfMinimaSweep sweep = sum_of_minima_sweep(4, 4, 3, xs);
    return {{"cases", sweep.cases},
            {"failures", sweep.failures},
            {"min_slack", static_cast<double>(sweep.min_slack)},
            {"equality_max_error", static_cast<double>(sweep.equality_max_error)},
            {"ok", sweep.ok}};
}

std::string verify_text(const json& report) {
    std::ostringstream out;
    for (const auto& [name, suite] : report["suites"].items()) {
        out << (suite.value("ok", false) ? "PASS " : "FAIL ") << name;
        if (suite.contains("witness")) out << ": " << suite["witness"].get<std::string>();
        out << '\n';
    }
    out << (report["ok"].get<bool>() ? "all checks passed" : "some checks failed") << '\n';
    return out.str();
}

void print_error(const std::string& kind, const std::string& message, std::optional<double> threshold = {}) {
    json err = {{"schema", kSchema}, {"error", kind}, {"message", message}};
    if (threshold) err["threshold"] = *threshold;
    std::cerr << err.dump() << std::endl;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Flow-chain samplers and partition-function estimators for the ferromagnetic Potts model"};
    app.set_config("--config", "", "Read options from a TOML or INI file");
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    Common common;
    ChainOptions chain;
    std::function<int()> action;
    const auto started = std::chrono::steady_clock::now();
    auto finish = [&](json out, const std::string& command, const Instance* inst) {
        json doc = {{"schema", kSchema}, {"manifest", manifest(command, common, inst)}};
        doc.update(out);
        if (common.timings)
            doc["manifest"]["timings"] = {
                {"wall_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count()}};
        emit(doc, common);
    };

    // sample-flow
    auto* sf = app.add_subcommand("sample-flow", "Sample a flow with the heat-bath flow chain");
    add_instance_options(sf, common);
    add_output_options(sf, common);
    add_chain_options(sf, chain);
    sf->add_option("--x", chain.x, "Flow parameter in (0, 1)")->required();
    sf->callback([&] {
        action = [&] {
            const Instance inst = load_instance(common.graph, common.gens);
            const double x = require_flow_x(*chain.x);
            const GenParams bp = inst.gens.bound_params();
            Rng rng = Rng::stream(common.seed, StreamPurpose::Chain);
            const FlowSample s = sample_flow(inst.gens, x, common.q, bp.d, bp.iota, chain.delta, rng, chain.steps);
            finish({{"x", x},
                    {"delta", chain.delta},
                    {"bound", bound_to_json(s.bound)},
                    {"steps", s.steps},
                    {"flow", flow_to_json(s.flow, inst.graph)}},
                   "sample-flow", &inst);
            return kOk;
        };
    });

    // sample-joint
    auto* sj = app.add_subcommand("sample-joint", "Sample a flow and edge set with the joint flow/random-cluster chain");
    add_instance_options(sj, common);
    add_output_options(sj, common);
    add_chain_options(sj, chain);
    sj->add_option("--x", chain.x, "Flow parameter in (0, 1)")->required();
    sj->callback([&] {
        action = [&] {
            const Instance inst = load_instance(common.graph, common.gens);
            const double x = require_flow_x(*chain.x);
            const GenParams bp = inst.gens.bound_params();
            Rng rng = Rng::stream(common.seed, StreamPurpose::Chain);
            const JointSample s =
                sample_joint(inst.graph, inst.gens, x, common.q, bp.ell, bp.s, chain.delta, rng, chain.steps);
            finish({{"x", x},
                    {"delta", chain.delta},
                    {"p", s.params.p},
                    {"alpha", s.params.alpha},
                    {"bound", bound_to_json(s.bound)},
                    {"steps", s.steps},
                    {"flow", flow_to_json(s.state.flow, inst.graph)},
                    {"edge_set", subset_to_json(s.state.edges)}},
                   "sample-joint", &inst);
            return kOk;
        };
    });

    // sample-rc and sample-potts
    auto add_pipeline = [&](const std::string& name, const std::string& help, bool potts) {
        auto* sub = app.add_subcommand(name, help);
        add_instance_options(sub, common);
        add_output_options(sub, common);
        add_chain_options(sub, chain);
        auto* ox = sub->add_option("--x", chain.x, "Flow parameter in (0, 1)");
        auto* oy = sub->add_option("--y", chain.y, "Random-cluster parameter y = qx/(1-x)");
        auto* ow = sub->add_option("--w", chain.w, "Potts parameter w = y + 1");
        ox->excludes(oy)->excludes(ow);
        oy->excludes(ow);
        sub->add_option("--chain", chain.chain, "Sampler: flow or joint")
            ->capture_default_str()
            ->check(CLI::IsMember({"flow", "joint"}));
        sub->callback([&, name, potts] {
            action = [&, name, potts] {
                const Instance inst = load_instance(common.graph, common.gens);
                const double x = resolve_x(chain, common.q);
                json out = {{"parameters", parameter_map_json(x, common.q)}, {"delta", chain.delta}};
                const EdgeSubset f = sample_rc_edges(inst, common, chain, x, out);
                if (potts) {
                    Rng rng = Rng::stream(common.seed, StreamPurpose::Coupling, 1);
                    const PottsConfig sigma = rc_to_potts(inst.graph, f, common.q, rng);
                    json spins = json::array();
                    for (VertexId v = 0; v < sigma.spins.size(); ++v) {
                        if (inst.graph.vertex_live(v)) {
                            spins.push_back(sigma.spins[v]);
                        } else {
                            spins.push_back(nullptr);
                        }
                    }
                    out["spins"] = std::move(spins);
                } else {
                    out["edge_set"] = subset_to_json(f);
                    out["components"] = components(inst.graph, f);
                }
                finish(out, name, &inst);
                return kOk;
            };
        });
    };
    add_pipeline("sample-rc", "Sample the random-cluster model through a flow sampler", false);
    add_pipeline("sample-potts", "Sample the Potts model through a flow sampler", true);

    // estimate-z
    std::string model = "flow";
    EstimateConfig est;
    std::string est_chain = "flow";
    auto* ez = app.add_subcommand("estimate-z", "Estimate the flow or Potts partition function");
    add_instance_options(ez, common);
    add_output_options(ez, common);
    ez->add_option("--model", model, "flow or potts")->capture_default_str()->check(CLI::IsMember({"flow", "potts"}));
    auto* ezx = ez->add_option("--x", chain.x, "Flow parameter");
    ez->add_option("--w", chain.w, "Potts parameter")->excludes(ezx);
    ez->add_option("--epsilon", est.epsilon, "Target relative accuracy")->capture_default_str();
    ez->add_option("--chain", est_chain, "Sampler: flow or joint")
        ->capture_default_str()
        ->check(CLI::IsMember({"flow", "joint"}));
    ez->add_option("--samples-per-ratio", est.samples_per_ratio, "Samples per contraction ratio");
    ez->add_option("--delta-per-sample", est.delta_per_sample, "Total-variation budget per sample");
    ez->add_option("--median-of", est.median_of, "Independent estimates combined by median")->capture_default_str();
    ez->add_option("--threads", est.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    ez->callback([&] {
        action = [&] {
            const Instance inst = load_instance(common.graph, common.gens);
            est.seed = common.seed;
            est.sampler = est_chain == "joint" ? SamplerKind::Joint : SamplerKind::Flow;
            EstimateReport rep;
            json out;
            if (model == "potts") {
                double w = 0.0;
                if (chain.w) {
                    w = *chain.w;
                } else if (chain.x) {
                    w = param_map::potts_from_flow(require_flow_x(*chain.x), common.q);
                } else {
                    throw InvalidArgument("estimate-z --model potts needs --w or --x");
                }
                rep = estimate_z_potts(inst.graph, inst.gens, common.q, w, est);
                out["w"] = w;
                out["x"] = param_map::flow_from_potts(w, common.q);
            } else {
                double x = 0.0;
                if (chain.x) {
                    x = *chain.x;
                } else if (chain.w) {
                    x = param_map::flow_from_potts(*chain.w, common.q);
                } else {
                    throw InvalidArgument("estimate-z --model flow needs --x or --w");
                }
                rep = estimate_z_flow(inst.graph, inst.gens, common.q, x, est);
                out["x"] = x;
            }
            json ratios = json::array();
            for (const RatioEstimate& r : rep.ratios)
                ratios.push_back({{"edge", r.edge},
                                  {"y", r.y},
                                  {"samples", r.samples},
                                  {"zero_on_edge", r.zero_on_edge},
                                  {"steps_per_sample", r.steps_per_sample}});
            out["model"] = model;
            out["chain"] = est_chain;
            out["epsilon"] = est.epsilon;
            out["estimate"] = {{"zeta", rep.zeta},
                               {"log_zeta", rep.log_zeta},
                               {"replicate_zetas", rep.replicate_zetas},
                               {"contraction_sequence", rep.contraction_sequence},
                               {"loops", rep.loops},
                               {"samples_per_ratio", rep.samples_per_ratio},
                               {"delta_per_sample", rep.delta_per_sample},
                               {"total_steps", rep.total_steps},
                               {"ratios", ratios}};
            finish(out, "estimate-z", &inst);
            return kOk;
        };
    });

    // verify
    std::string suite = "all";
    std::string format = "json";
    double verify_x = 0.5;
    auto* vf = app.add_subcommand("verify", "Check identities, chain stationarity and the sum-of-minima inequality");
    add_instance_options(vf, common);
    vf->add_option("--x", verify_x, "Flow parameter for the identity and chain checks")->capture_default_str();
    vf->add_option("--suite", suite, "identities, chains, minima or all")
        ->capture_default_str()
        ->check(CLI::IsMember({"identities", "chains", "minima", "all"}));
    vf->add_option("--format", format, "json or text")->capture_default_str()->check(CLI::IsMember({"json", "text"}));
    vf->add_option("--output,-o", common.output, "Write output to this file instead of stdout");
    vf->callback([&] {
        action = [&] {
            const Instance inst = load_instance(common.graph, common.gens);
            require_flow_x(verify_x);
            json suites = json::object();
            if (suite == "identities" || suite == "all") suites["identities"] = identities_suite(inst, common.q, verify_x);
            if (suite == "chains" || suite == "all") suites["chains"] = chains_suite(inst, common.q, verify_x);
            if (suite == "minima" || suite == "all") suites["minima"] = minima_suite();
            bool ok = true;
            for (const auto& s : suites) ok = ok && s["ok"].get<bool>();
            json report = {{"schema", kSchema},
                           {"manifest", manifest("verify", common, &inst)},
                           {"x", verify_x},
                           {"suites", suites},
                           {"ok", ok}};
            if (format == "text") {
                emit(verify_text(report), common);
            } else {
                emit(report, common);
            }
            return ok ? kOk : kCheckFailed;
        };
    });

    // duality
    std::size_t dual_L = 2;
    double dual_x = 0.7;
    auto* du = app.add_subcommand("duality", "Compare Potts Glauber dynamics with the flow chain on the dual grid");
    du->add_option("--L", dual_L, "Side of the Potts grid")->capture_default_str()->check(CLI::PositiveNumber);
    du->add_option("--q", common.q, "Number of colours")->capture_default_str()->check(CLI::Range(2u, 1u << 16));
    du->add_option("--x", dual_x, "Flow parameter in (0, 1)")->capture_default_str();
    du->add_option("--output,-o", common.output, "Write output to this file instead of stdout");
    du->callback([&] {
        action = [&] {
            const DualityReport rep = verify_duality(dual_L, common.q, dual_x);
            json doc = {{"schema", kSchema},
                        {"manifest", manifest("duality", common, nullptr)},
                        {"L", rep.L},
                        {"x", rep.x},
                        {"potts_states", rep.potts_states},
                        {"flow_states", rep.flow_states},
                        {"bijective", rep.bijective},
                        {"max_entry_difference", static_cast<double>(rep.max_entry_difference)},
                        {"ok", rep.ok}};
            doc["manifest"].erase("seed");
            emit(doc, common);
            return rep.ok ? kOk : kCheckFailed;
        };
    });

    // tv-curve
    TvCurveSpec tv;
    tv.xs = {0.3, 0.6, 0.9};
    std::string tv_chain = "flow";
    std::string tv_format = "csv";
    auto* tc = app.add_subcommand("tv-curve", "Exact total-variation decay of a chain from its start state");
    add_instance_options(tc, common);
    tc->add_option("--xs", tv.xs, "Flow parameters")->capture_default_str()->delimiter(',');
    tc->add_option("--t-max", tv.t_max, "Last step")->capture_default_str();
    tc->add_option("--chain", tv_chain, "flow or joint")->capture_default_str()->check(CLI::IsMember({"flow", "joint"}));
    tc->add_option("--p", tv.p, "Flow-move probability of the joint chain");
    tc->add_option("--format", tv_format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    tc->add_option("--output,-o", common.output, "Write output to this file instead of stdout");
    tc->callback([&] {
        action = [&] {
            const Instance inst = load_instance(common.graph, common.gens);
            for (double x : tv.xs) require_flow_x(x);
            tv.chain = tv_chain == "joint" ? ChainKind::Joint : ChainKind::Flow;
            const std::vector<TvPoint> points = tv_curve(inst.graph, inst.gens, common.q, tv);
            if (tv_format == "csv") {
                std::ostringstream csv;
                write_tv_csv(csv, points);
                emit(csv.str(), common);
            } else {
                json series = json::array();
                for (const TvPoint& p : points)
                    series.push_back({{"t", p.t}, {"x", p.x}, {"tv", static_cast<double>(p.tv)}});
                json doc = {{"schema", kSchema},
                            {"manifest", manifest("tv-curve", common, &inst)},
                            {"chain", tv_chain},
                            {"series", series}};
                doc["manifest"].erase("seed");
                emit(doc, common);
            }
            return kOk;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error("usage", e.what());
        return kInadmissible;
    }

    try {
        return action();
    } catch (const OutOfRange& e) {
        print_error("inadmissible_parameters", e.what(), e.threshold());
        return kInadmissible;
    } catch (const InvalidGenerator& e) {
        print_error("invalid_generating_set", e.what());
        return kInadmissible;
    } catch (const InvalidArgument& e) {
        print_error("invalid_argument", e.what());
        return kInadmissible;
    } catch (const TooLarge& e) {
        print_error("too_large", e.what());
        return kInadmissible;
    } catch (const IoError& e) {
        print_error("io", e.what());
        return kIoFailure;
    } catch (const std::exception& e) {
        print_error("internal", e.what());
        return kIoFailure;
    }
}
