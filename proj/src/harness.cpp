#include "gapbench/harness.hpp"

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "gapbench/errors.hpp"

namespace gapbench {

using nlohmann::json;

namespace {

Interval ratio_interval(const ValueOrCI& num, const ValueOrCI& den) {
    double nlo = num.value - num.ci99, nhi = num.value + num.ci99;
    double dlo = den.value - den.ci99, dhi = den.value + den.ci99;
    Interval r;
    if (dlo <= 0.0) {
        r.lo = 0.0;
        r.hi = std::numeric_limits<double>::infinity();
        if (den.value > 0.0 && den.ci99 == 0.0) {
            r.lo = nlo / den.value;
            r.hi = nhi / den.value;
        }
        return r;
    }
    r.lo = std::max(0.0, nlo) / dhi;
    r.hi = nhi / dlo;
    return r;
}

}  // namespace

GapReport measure_gap(const ModelSpec& m, const std::string& descriptor, int k, FeedbackKind fb,
                      const GapOptions& opt) {
    auto start = std::chrono::steady_clock::now();
    GapReport r;
    r.instance = descriptor;
    r.k = k;
    r.feedback = fb;
    r.mode = opt.mode;
    r.seed = opt.seed;
    r.samples = opt.mode == EvalMode::MonteCarlo ? opt.samples : 0;

    RngStream rng(opt.seed, 0);
    EvalOptions inner;
    inner.mode = opt.mode;
    inner.samples = opt.inner_samples;
    inner.exact = opt.exact;
    inner.rng = rng.derive(1);

    int n_candidates = static_cast<int>(m.candidate_list().size());
    GreedyOrder prefix = greedy_nonadaptive(m, k, inner);
    GreedyOrder full_order = greedy_nonadaptive(m, n_candidates, inner);
    r.greedy_seeds = prefix.order;

    if (opt.mode == EvalMode::Exact) {
        r.nonadaptive.value = sigma_exact(m, prefix.order, opt.exact);
        r.adaptive.value = sigma_adaptive_exact(m, Policy::adaptive_greedy(), k, fb, opt.exact);
        r.risk_free.value = sigma_adaptive_exact(m, Policy::risk_free(full_order), k, fb, opt.exact);
        if (opt.with_optimal) {
            r.optimal_nonadaptive = optimal_nonadaptive_exact(m, k, opt.exact).second;
            r.optimal_adaptive = optimal_adaptive_exact(m, k, fb, opt.exact);
        }
    } else {
        EstimateCI nonadaptive = sigma_mc(m, prefix.order, opt.samples, rng.derive(2));
        r.nonadaptive = {nonadaptive.mean, nonadaptive.half_width, nonadaptive.samples};
        EstimateCI adaptive = sigma_adaptive(m, Policy::adaptive_greedy(), k, fb, opt.samples,
                                             rng.derive(3), inner);
        r.adaptive = {adaptive.mean, adaptive.half_width, adaptive.samples};
        EstimateCI risk_free = sigma_adaptive(m, Policy::risk_free(full_order), k, fb,
                                              opt.samples, rng.derive(4), inner);
        r.risk_free = {risk_free.mean, risk_free.half_width, risk_free.samples};
    }
    r.ratio_adaptive = ratio_interval(r.adaptive, r.nonadaptive);
    r.ratio_risk_free = ratio_interval(r.risk_free, r.nonadaptive);
    r.runtime_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    return r;
}

namespace {

json value_json(const ValueOrCI& v, EvalMode mode) {
    json j;
    j["value"] = v.value;
    j["ci99"] = v.ci99;
    j["samples"] = v.samples;
    j["mode"] = mode == EvalMode::Exact ? "exact" : "mc";
    return j;
}

json record_json_impl(const GapReport& r, const std::string& policy, const ValueOrCI& v,
                      bool timings) {
    json j;
    j["instance"] = r.instance;
    j["policy"] = policy;
    j["feedback"] = to_string(r.feedback);
    j["k"] = r.k;
    j["mode"] = r.mode == EvalMode::Exact ? "exact" : "mc";
    j["value"] = v.value;
    j["ci99"] = v.ci99;
    j["samples"] = v.samples;
    j["seed"] = r.seed;
    if (timings) j["runtime_ms"] = r.runtime_ms;
    return j;
}

}  // namespace

std::string result_record_json(const GapReport& r, bool timings) {
    json arr = json::array();
    arr.push_back(record_json_impl(r, "nonadaptive_greedy", r.nonadaptive, timings));
    arr.push_back(record_json_impl(r, "adaptive_greedy", r.adaptive, timings));
    arr.push_back(record_json_impl(r, "risk_free", r.risk_free, timings));
    return arr.dump(2);
}

std::string gap_report_json(const GapReport& r, bool timings) {
    json j;
    j["instance"] = r.instance;
    j["k"] = r.k;
    j["feedback"] = to_string(r.feedback);
    j["mode"] = r.mode == EvalMode::Exact ? "exact" : "mc";
    j["seed"] = r.seed;
    j["greedy_seeds"] = r.greedy_seeds;
    j["nonadaptive"] = value_json(r.nonadaptive, r.mode);
    j["adaptive"] = value_json(r.adaptive, r.mode);
    j["risk_free"] = value_json(r.risk_free, r.mode);
    if (r.optimal_nonadaptive) j["optimal_nonadaptive"] = *r.optimal_nonadaptive;
    if (r.optimal_adaptive) j["optimal_adaptive"] = *r.optimal_adaptive;
    j["ratio_adaptive"] = json::array({r.ratio_adaptive.lo, r.ratio_adaptive.hi});
    j["ratio_risk_free"] = json::array({r.ratio_risk_free.lo, r.ratio_risk_free.hi});
    if (timings) j["runtime_ms"] = r.runtime_ms;
    return j.dump(2);
}

ExperimentConfig parse_experiment_config(const std::string& path,
                                         std::optional<std::uint64_t> seed_override) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError(path + ": " + e.what());
    }
    ExperimentConfig cfg;
    cfg.master_seed = j.value("master_seed", std::uint64_t{1});
    if (seed_override) cfg.master_seed = *seed_override;
    cfg.timings = j.value("timings", false);
    if (!j.contains("jobs") || !j.at("jobs").is_array())
        throw ConfigError(path + ": field 'jobs' must be an array");
    int index = 0;
    for (const auto& job : j.at("jobs")) {
        auto where = [&] { return path + ": jobs[" + std::to_string(index) + "]"; };
        ExperimentJob e;
        if (!job.contains("instance")) throw ConfigError(where() + " needs field 'instance'");
        const auto& inst = job.at("instance");
        if (inst.is_string()) {
            e.instance.generator = "file";
            e.instance.params["path"] = inst.get<std::string>();
        } else {
            if (!inst.contains("generator"))
                throw ConfigError(where() + ".instance needs field 'generator'");
            e.instance.generator = inst.at("generator").get<std::string>();
            if (inst.contains("params"))
                for (auto& [key, val] : inst.at("params").items())
                    e.instance.params[key] =
                        val.is_string() ? val.get<std::string>() : val.dump();
        }
        e.k = job.value("k", 0);  // 0 = instance default
        std::string fb = job.value("feedback", std::string("full"));
        if (fb == "full") e.feedback = FeedbackKind::FullAdoption;
        else if (fb == "myopic") e.feedback = FeedbackKind::Myopic;
        else throw ConfigError(where() + ": feedback must be 'full' or 'myopic'");
        std::string mode = job.value("mode", std::string("exact"));
        if (mode == "exact") e.options.mode = EvalMode::Exact;
        else if (mode == "mc") e.options.mode = EvalMode::MonteCarlo;
        else throw ConfigError(where() + ": mode must be 'exact' or 'mc'");
        e.options.samples = job.value("samples", std::int64_t{10000});
        e.options.inner_samples = job.value("inner_samples", std::int64_t{1000});
        e.options.with_optimal = job.value("optimal", false);
        cfg.jobs.push_back(std::move(e));
        ++index;
    }
    return cfg;
}

std::vector<GapReport> run_experiment(const ExperimentConfig& config, const std::string& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    std::vector<GapReport> reports(config.jobs.size());
    std::vector<std::string> errors(config.jobs.size());
    auto run_job = [&](std::size_t i) {
        const ExperimentJob& job = config.jobs[i];
        try {
            GeneratedInstance inst = build_instance(job.instance);
            GapOptions opts = job.options;
            opts.seed = RngStream::hash_combine(config.master_seed, i);
            int k = job.k > 0 ? job.k : inst.k;
            reports[i] = measure_gap(inst.model, inst.descriptor, k, job.feedback, opts);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    };

    unsigned workers = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                       config.jobs.size()));
    std::vector<std::thread> threads;
    std::atomic<std::size_t> next{0};
    for (unsigned t = 0; t < workers; ++t)
        threads.emplace_back([&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= config.jobs.size()) break;
                run_job(i);
            }
        });
    for (auto& t : threads) t.join();
    for (std::size_t i = 0; i < errors.size(); ++i)
        if (!errors[i].empty())
            throw Error("job " + std::to_string(i) + " failed: " + errors[i]);

    json results = json::array();
    for (const GapReport& r : reports)
        results.push_back(json::parse(gap_report_json(r, config.timings)));
    {
        std::ofstream out(fs::path(out_dir) / "results.json");
        json top;
        top["master_seed"] = config.master_seed;
        top["results"] = results;
        out << top.dump(2) << "\n";
    }
    {
        std::ofstream out(fs::path(out_dir) / "summary.csv");
        out << "instance,k,feedback,mode,seed,nonadaptive,adaptive,risk_free,"
               "ratio_adaptive_lo,ratio_adaptive_hi,ratio_risk_free_lo,ratio_risk_free_hi\n";
        for (const GapReport& r : reports) {
            std::ostringstream line;
            line.precision(17);
            line << '"' << r.instance << '"' << "," << r.k << "," << to_string(r.feedback) << ","
                 << (r.mode == EvalMode::Exact ? "exact" : "mc") << "," << r.seed << ","
                 << r.nonadaptive.value << "," << r.adaptive.value << "," << r.risk_free.value
                 << "," << r.ratio_adaptive.lo << "," << r.ratio_adaptive.hi << ","
                 << r.ratio_risk_free.lo << "," << r.ratio_risk_free.hi << "\n";
            out << line.str();
        }
    }
    return reports;
}

}  // namespace gapbench
