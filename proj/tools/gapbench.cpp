#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "gapbench/diffusion.hpp"
#include "gapbench/harness.hpp"
#include "gapbench/io.hpp"

using namespace gapbench;

namespace {

std::map<std::string, std::string> parse_params(const std::string& text) {
    std::map<std::string, std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("param '" + item + "' must look like key=value");
        out[item.substr(0, eq)] = item.substr(eq + 1);
    }
    return out;
}

std::vector<VertexId> parse_ids(const std::string& text) {
    std::vector<VertexId> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<VertexId>(std::stol(item)));
    }
    return out;
}

std::optional<std::uint64_t> env_seed() {
    const char* s = std::getenv("GAPBENCH_SEED");
    if (s == nullptr || *s == '\0') return std::nullopt;
    return std::strtoull(s, nullptr, 10);
}

std::uint64_t effective_seed(std::uint64_t cli_seed) {
    auto env = env_seed();
    return env ? *env : cli_seed;
}

FeedbackKind parse_feedback(const std::string& s) {
    if (s == "full") return FeedbackKind::FullAdoption;
    if (s == "myopic") return FeedbackKind::Myopic;
    throw ConfigError("feedback must be 'full' or 'myopic'");
}

int run_oracle_check(const std::string& path) {
    InstanceFile inst = read_instance(path);
    const ModelSpec& m = inst.model;
    int failures = 0;
    auto report = [&](const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };

    report("validation", true, std::to_string(m.graph.n) + " vertices, " +
                                   std::to_string(m.graph.edge_count()) + " edges");

    bool lt_ok = true;
    for (VertexId v = 0; v < m.graph.n; ++v) {
        if (m.label_of(v) != VertexLabel::LT) continue;
        double sum = 0.0;
        for (int eid : m.graph.in_edges[v]) sum += m.graph.edges[eid].weight;
        lt_ok = lt_ok && sum <= 1.0 + kLtSumTolerance;
    }
    report("lt-in-weight-sums", lt_ok);

    ExactOptions small_cap;
    small_cap.max_states = 1 << 16;
    bool enumerable = true;
    try {
        ExactEngine<double> probe(m, nullptr, nullptr, nullptr, true, small_cap);
    } catch (const TooLargeToEnumerate&) {
        enumerable = false;
    }
    if (!enumerable) {
        std::cout << "[SKIP] exact-mode oracles (instance too large to enumerate)\n";
        return failures == 0 ? 0 : 2;
    }

    RngStream rng(effective_seed(20240501), 0);
    std::vector<VertexId> seeds;
    std::vector<VertexId> cands = m.candidate_list();
    for (std::size_t i = 0; i < cands.size() && seeds.size() < 2; i += 1 + cands.size() / 3)
        seeds.push_back(cands[i]);

    double exact = sigma_exact(m, seeds, small_cap);
    EstimateCI mc = sigma_mc(m, seeds, 100000, rng.derive(1));
    report("sigma-exact-vs-mc", std::abs(mc.mean - exact) <= 3.0 * mc.std_error() + 1e-12,
           "exact=" + std::to_string(exact) + " mc=" + std::to_string(mc.mean));

    bool submod_ok = true, mono_ok = true;
    if (m.graph.n <= 12) {
        auto table = sigma_exact_all_subsets<double>(m, small_cap);
        std::uint32_t full = (std::uint32_t{1} << m.graph.n) - 1;
        for (std::uint32_t b = 0; b <= full && submod_ok; ++b) {
            if (__builtin_popcount(b) > 3) continue;
            for (std::uint32_t a = b; ; a = (a - 1) & b) {
                if (a != b) {
                    for (VertexId v = 0; v < m.graph.n && submod_ok; ++v) {
                        std::uint32_t bit = std::uint32_t{1} << v;
                        if (b & bit) continue;
                        submod_ok = table[a | bit] - table[a] >= table[b | bit] - table[b] - 1e-9;
                    }
                    mono_ok = mono_ok && table[a] <= table[b] + 1e-9;
                }
                if (a == 0) break;
            }
        }
        report("sigma-submodular", submod_ok);
        report("sigma-monotone", mono_ok);
    }

    if (m.is_triggering()) {
        Realization phi = sample_realization(m, rng);
        PartialRealization part = feedback(m, FeedbackKind::FullAdoption, phi, seeds);
        Rational lhs = conditional_sigma_exact_rational(m, part, seeds, {});
        // independent route: enumerate consistent realizations of the raw model
        ExactEngine<Rational> eng(m, nullptr, nullptr, nullptr, true, small_cap);
        Rational num(0), mass(0);
        Bits seed_bits = make_vertex_set(m.graph.n, seeds);
        eng.for_each([&](const Rational& prob) {
            for (int e = 0; e < m.graph.edge_count(); ++e)
                if (part.known(e) && part.live(e) != eng.live(e)) return;
            mass += prob;
            num += prob * Rational(total_weight(m.graph, eng.closure(seed_bits)));
        });
        report("conditioning-identity", mass > 0 && lhs == num / mass);
    }
    return failures == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Influence-cascade simulation and greedy adaptivity gap measurement"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Build an instance and write it as JSON");
    std::string gen_name, gen_params, gen_out;
    gen->add_option("--gen", gen_name, "generator name")->required();
    gen->add_option("--params", gen_params, "comma-separated key=value parameters");
    gen->add_option("-o,--output", gen_out, "output path")->required();

    // sigma
    auto* sig = app.add_subcommand("sigma", "Evaluate the expected influence of a seed set");
    std::string sig_in, sig_seeds, sig_mode = "exact";
    std::int64_t sig_samples = 100000;
    std::uint64_t sig_seed = 1;
    bool sig_gtm = false;
    sig->add_option("-i,--instance", sig_in)->required();
    sig->add_option("--seeds", sig_seeds, "comma-separated vertex ids")->required();
    sig->add_option("--mode", sig_mode)->check(CLI::IsMember({"exact", "mc"}));
    sig->add_option("--samples", sig_samples);
    sig->add_option("--seed", sig_seed);
    double sig_max_states = 16777216.0;
    sig->add_option("--max-states", sig_max_states, "exact-mode enumeration cap");
    sig->add_flag("--gtm", sig_gtm, "lift the triggering instance to its GTM form (mc only)");

    // greedy
    auto* grd = app.add_subcommand("greedy", "Non-adaptive greedy seed selection");
    std::string grd_in, grd_mode = "exact";
    int grd_k = 1;
    std::int64_t grd_samples = 10000;
    std::uint64_t grd_seed = 1;
    grd->add_option("-i,--instance", grd_in)->required();
    grd->add_option("-k", grd_k)->required();
    grd->add_option("--mode", grd_mode)->check(CLI::IsMember({"exact", "mc"}));
    grd->add_option("--samples", grd_samples);
    grd->add_option("--seed", grd_seed);

    // adaptive
    auto* adp = app.add_subcommand("adaptive", "Evaluate an adaptive policy");
    std::string adp_in, adp_policy = "greedy", adp_feedback = "full", adp_mode = "mc";
    int adp_k = 1;
    std::int64_t adp_samples = 10000, adp_inner = 1000;
    std::uint64_t adp_seed = 1;
    adp->add_option("-i,--instance", adp_in)->required();
    adp->add_option("-k", adp_k)->required();
    adp->add_option("--policy", adp_policy)->check(CLI::IsMember({"greedy", "riskfree"}));
    adp->add_option("--feedback", adp_feedback)->check(CLI::IsMember({"full", "myopic"}));
    adp->add_option("--mode", adp_mode)->check(CLI::IsMember({"exact", "mc"}));
    adp->add_option("--samples", adp_samples);
    adp->add_option("--inner-samples", adp_inner);
    adp->add_option("--seed", adp_seed);

    // gap
    auto* gap = app.add_subcommand("gap", "Measure the greedy adaptivity gap");
    std::string gap_in, gap_feedback = "full", gap_mode = "exact";
    int gap_k = 0;
    std::int64_t gap_samples = 10000, gap_inner = 1000;
    std::uint64_t gap_seed = 1;
    bool gap_optimal = false, gap_timings = false;
    gap->add_option("-i,--instance", gap_in)->required();
    gap->add_option("-k", gap_k, "seed budget (default: instance k)");
    gap->add_option("--feedback", gap_feedback)->check(CLI::IsMember({"full", "myopic"}));
    gap->add_option("--mode", gap_mode)->check(CLI::IsMember({"exact", "mc"}));
    gap->add_option("--samples", gap_samples);
    gap->add_option("--inner-samples", gap_inner);
    gap->add_option("--seed", gap_seed);
    gap->add_flag("--optimal", gap_optimal, "also run the brute-force optimal oracles");
    gap->add_flag("--timings", gap_timings, "include runtime_ms in the report");
    double gap_max_states = 16777216.0;
    gap->add_option("--max-states", gap_max_states, "exact-mode enumeration cap");

    // oracle-check
    auto* chk = app.add_subcommand("oracle-check", "Run the invariant suite on one instance");
    std::string chk_in;
    chk->add_option("-i,--instance", chk_in)->required();

    // experiment
    auto* exp = app.add_subcommand("experiment", "Run a list of gap-measurement jobs");
    std::string exp_config, exp_out;
    exp->add_option("-c,--config", exp_config)->required();
    exp->add_option("-o,--output", exp_out, "output directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            InstanceSpec spec{gen_name, parse_params(gen_params)};
            GeneratedInstance inst = build_instance(spec);
            write_instance(gen_out, inst.model, inst.k, inst.names);
            std::cout << "wrote " << gen_out << " (" << inst.descriptor << ", n=" << inst.model.graph.n
                      << ", k=" << inst.k << ")\n";
        } else if (sig->parsed()) {
            InstanceFile inst = read_instance(sig_in);
            std::vector<VertexId> seeds = parse_ids(sig_seeds);
            std::uint64_t seed = effective_seed(sig_seed);
            if (sig_gtm) {
                if (sig_mode == "exact")
                    throw WrongModelKind("GTM evaluation is Monte Carlo only");
                ModelSpec gtm = lift_to_gtm(inst.model);
                EstimateCI e = sigma_mc(gtm, seeds, sig_samples, RngStream(seed, 0));
                std::cout << "{\"sigma\": " << e.mean << ", \"ci99\": " << e.half_width
                          << ", \"samples\": " << e.samples << ", \"seed\": " << seed << "}\n";
            } else if (sig_mode == "exact") {
                ExactOptions opt;
                opt.max_states = sig_max_states;
                double value = sigma_exact(inst.model, seeds, opt);
                std::cout << "{\"sigma\": " << value << "}\n";
            } else {
                EstimateCI e = sigma_mc(inst.model, seeds, sig_samples, RngStream(seed, 0));
                std::cout << "{\"sigma\": " << e.mean << ", \"ci99\": " << e.half_width
                          << ", \"samples\": " << e.samples << ", \"seed\": " << seed << "}\n";
            }
        } else if (grd->parsed()) {
            InstanceFile inst = read_instance(grd_in);
            EvalOptions eval;
            eval.mode = grd_mode == "exact" ? EvalMode::Exact : EvalMode::MonteCarlo;
            eval.samples = grd_samples;
            eval.rng = RngStream(effective_seed(grd_seed), 0);
            GreedyOrder order = greedy_nonadaptive(inst.model, grd_k, eval);
            std::cout << "{\"seeds\": [";
            for (std::size_t i = 0; i < order.order.size(); ++i)
                std::cout << (i ? ", " : "") << order.order[i];
            std::cout << "], \"marginals\": [";
            for (std::size_t i = 0; i < order.marginal_at_pick.size(); ++i)
                std::cout << (i ? ", " : "") << order.marginal_at_pick[i];
            std::cout << "]}\n";
        } else if (adp->parsed()) {
            InstanceFile inst = read_instance(adp_in);
            std::uint64_t seed = effective_seed(adp_seed);
            FeedbackKind fb = parse_feedback(adp_feedback);
            EvalOptions inner;
            inner.mode = adp_mode == "exact" ? EvalMode::Exact : EvalMode::MonteCarlo;
            inner.samples = adp_inner;
            inner.rng = RngStream(seed, 1);
            Policy policy = Policy::adaptive_greedy();
            if (adp_policy == "riskfree") {
                int all = static_cast<int>(inst.model.candidate_list().size());
                policy = Policy::risk_free(greedy_nonadaptive(inst.model, all, inner));
            }
            if (adp_mode == "exact") {
                double v = sigma_adaptive_exact(inst.model, policy, adp_k, fb);
                std::cout << "{\"policy\": \"" << adp_policy << "\", \"value\": " << v
                          << ", \"mode\": \"exact\"}\n";
            } else {
                EstimateCI e = sigma_adaptive(inst.model, policy, adp_k, fb, adp_samples,
                                              RngStream(seed, 0), inner);
                std::cout << "{\"policy\": \"" << adp_policy << "\", \"value\": " << e.mean
                          << ", \"ci99\": " << e.half_width << ", \"samples\": " << e.samples
                          << ", \"seed\": " << seed << "}\n";
            }
        } else if (gap->parsed()) {
            InstanceFile inst = read_instance(gap_in);
            GapOptions opts;
            opts.mode = gap_mode == "exact" ? EvalMode::Exact : EvalMode::MonteCarlo;
            opts.samples = gap_samples;
            opts.inner_samples = gap_inner;
            opts.with_optimal = gap_optimal;
            opts.seed = effective_seed(gap_seed);
            opts.exact.max_states = gap_max_states;
            int k = gap_k > 0 ? gap_k : inst.k.value_or(1);
            GapReport r = measure_gap(inst.model, gap_in, k, parse_feedback(gap_feedback), opts);
            std::cout << gap_report_json(r, gap_timings) << "\n";
        } else if (chk->parsed()) {
            return run_oracle_check(chk_in);
        } else if (exp->parsed()) {
            ExperimentConfig cfg = parse_experiment_config(exp_config, env_seed());
            run_experiment(cfg, exp_out);
            std::cout << "experiment complete: " << cfg.jobs.size() << " job(s), master_seed="
                      << cfg.master_seed << ", results in " << exp_out << "\n";
        }
    } catch (const TooLargeToEnumerate& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
