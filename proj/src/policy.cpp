#include "gapbench/policy.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>

#include "gapbench/diffusion.hpp"
#include "gapbench/errors.hpp"

namespace gapbench {

const char* to_string(Policy::Kind k) {
    switch (k) {
        case Policy::Kind::AdaptiveGreedy: return "greedy";
        case Policy::Kind::RiskFree: return "riskfree";
        case Policy::Kind::Fixed: return "fixed";
        case Policy::Kind::Custom: return "custom";
    }
    return "?";
}

namespace {

// ---------------------------------------------------------------------------
// Monte Carlo marginal evaluation with common random numbers: one shared pool
// of realizations per greedy iteration, all candidates scored on the same
// pool.

struct McPool {
    std::vector<Realization> phis;             // triggering models
    std::vector<ThresholdRealization> thetas;  // GTM
    std::vector<Bits> base;                    // infected set of the current seeds
    std::vector<double> base_weight;
    Bits seeds;
};

McPool build_pool(const ModelSpec& m, const Bits& seeds, std::int64_t samples, RngStream rng) {
    McPool pool;
    pool.seeds = seeds;
    pool.base.reserve(samples);
    for (std::int64_t i = 0; i < samples; ++i) {
        RngStream r = rng.derive(i);
        Bits infected(m.graph.n);
        if (m.kind == ModelKind::GTM) {
            pool.thetas.push_back(sample_thresholds(m, r));
            infected = gtm_cascade_bits(m, pool.thetas.back(), seeds);
        } else {
            pool.phis.push_back(sample_realization(m, r));
            infected = cascade_bits(m, pool.phis.back(), seeds);
        }
        pool.base_weight.push_back(static_cast<double>(total_weight(m.graph, infected)));
        pool.base.push_back(std::move(infected));
    }
    return pool;
}

// Mean added weight of seeding `c` on top of the pool's seed set.
double pool_marginal(const ModelSpec& m, const McPool& pool, VertexId c) {
    const WeightedDigraph& g = m.graph;
    double total = 0.0;
    std::size_t samples = pool.base.size();
    if (m.kind == ModelKind::GTM) {
        Bits seeds = pool.seeds;
        seeds.set(c);
        for (std::size_t i = 0; i < samples; ++i) {
            Bits infected = gtm_cascade_bits(m, pool.thetas[i], seeds);
            total += static_cast<double>(total_weight(g, infected)) - pool.base_weight[i];
        }
    } else {
        std::vector<VertexId> stack;
        for (std::size_t i = 0; i < samples; ++i) {
            if (pool.base[i].test(c)) continue;  // nothing new in this realization
            const Realization& phi = pool.phis[i];
            Bits visited(g.n);
            visited.set(c);
            stack.assign(1, c);
            double added = static_cast<double>(g.vertex_weight[c]);
            while (!stack.empty()) {
                VertexId u = stack.back();
                stack.pop_back();
                for (int eid : g.out_edges[u]) {
                    if (!phi.live(eid)) continue;
                    VertexId w = g.edges[eid].dst;
                    if (visited.test(w)) continue;
                    visited.set(w);
                    stack.push_back(w);
                    if (!pool.base[i].test(w))
                        added += static_cast<double>(g.vertex_weight[w]);
                }
            }
            total += added;
        }
    }
    return total / static_cast<double>(samples);
}

// ---------------------------------------------------------------------------
// Lazy (CELF-style) greedy: a priority queue of stale upper bounds, each
// re-evaluated on pop.  On a fresh top we keep draining entries whose stale
// bound could still tie, so the lowest-id tie-break sees every true tie.

struct HeapEntry {
    double gain;
    VertexId id;
    int iter;
};
struct HeapCmp {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.gain != b.gain) return a.gain < b.gain;
        return a.id > b.id;
    }
};

template <class EvalFn>
GreedyOrder lazy_greedy(const std::vector<VertexId>& candidates, int k, EvalFn&& evaluate,
                        const std::function<void(const std::vector<VertexId>&, int)>& on_pick) {
    constexpr double kTieTol = 1e-9;
    GreedyOrder out;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapCmp> heap;
    for (VertexId c : candidates) heap.push({evaluate(c, 0), c, 0});
    std::vector<VertexId> picked;
    for (int step = 0; step < k; ++step) {
        if (step > 0) {
            on_pick(picked, step);  // refresh evaluation context (pools, base sigma)
        }
        HeapEntry best{0.0, -1, -1};
        std::vector<HeapEntry> pending;
        while (!heap.empty()) {
            HeapEntry top = heap.top();
            // stale gains are upper bounds, so nothing below best - tol can tie
            if (best.id >= 0 && top.gain < best.gain - kTieTol) break;
            heap.pop();
            if (top.iter != step) top = {evaluate(top.id, step), top.id, step};
            if (best.id < 0) {
                best = top;
            } else if (top.gain > best.gain + kTieTol ||
                       (top.gain >= best.gain - kTieTol && top.id < best.id)) {
                pending.push_back(best);
                best = top;
            } else {
                pending.push_back(top);
            }
        }
        if (best.id < 0) throw NotEnoughCandidates("greedy ran out of candidates");
        for (const HeapEntry& e : pending) heap.push(e);
        picked.push_back(best.id);
        out.order.push_back(best.id);
        out.marginal_at_pick.push_back(best.gain);
    }
    return out;
}

}  // namespace

GreedyOrder greedy_nonadaptive(const ModelSpec& m, int k, const EvalOptions& eval) {
    std::vector<VertexId> candidates = m.candidate_list();
    if (k < 0 || k > static_cast<int>(candidates.size()))
        throw NotEnoughCandidates("k exceeds the number of seed candidates");

    if (eval.mode == EvalMode::Exact) {
        double sigma_base = 0.0;
        Bits seeds(m.graph.n);
        auto evaluate = [&](VertexId c, int) {
            Bits s = seeds;
            s.set(c);
            return sigma_exact_t<double>(m, s, eval.exact) - sigma_base;
        };
        auto on_pick = [&](const std::vector<VertexId>& picked, int) {
            seeds = make_vertex_set(m.graph.n, picked);
            sigma_base = sigma_exact_t<double>(m, seeds, eval.exact);
        };
        return lazy_greedy(candidates, k, evaluate, on_pick);
    }

    McPool pool = build_pool(m, Bits(m.graph.n), eval.samples, eval.rng.derive(0));
    auto evaluate = [&](VertexId c, int) { return pool_marginal(m, pool, c); };
    auto on_pick = [&](const std::vector<VertexId>& picked, int step) {
        pool = build_pool(m, make_vertex_set(m.graph.n, picked), eval.samples,
                          eval.rng.derive(step));
    };
    return lazy_greedy(candidates, k, evaluate, on_pick);
}

VertexId adaptive_greedy_step(const ModelSpec& m, const std::vector<VertexId>& seeds,
                              const PartialRealization& partial, const EvalOptions& eval) {
    Bits seed_bits = make_vertex_set(m.graph.n, seeds);
    std::vector<VertexId> open;
    for (VertexId c : m.candidate_list())
        if (!seed_bits.test(c)) open.push_back(c);
    if (open.empty()) throw NotEnoughCandidates("no unseeded candidate left");

    ConditionedModel cm = condition_model(m, partial, seeds);
    VertexId best = -1;
    double best_val = 0.0;
    if (eval.mode == EvalMode::Exact) {
        for (VertexId c : open) {
            Bits extra(m.graph.n);
            extra.set(c);
            double val = conditioned_sigma_t<double>(cm, extra, eval.exact);
            if (best < 0 || val > best_val + 1e-9) {
                best = c;
                best_val = val;
            }
        }
        return best;
    }
    McPool pool = build_pool(cm.reduced, cm.known_bits, eval.samples, eval.rng);
    for (VertexId c : open) {
        double val = cm.known_bits.test(c) ? 0.0 : pool_marginal(cm.reduced, pool, c);
        if (best < 0 || val > best_val + 1e-9) {
            best = c;
            best_val = val;
        }
    }
    return best;
}

VertexId risk_free_step(const ModelSpec& m, const GreedyOrder& order,
                        const std::vector<VertexId>& seeds, const PartialRealization& partial) {
    Bits known = known_infected_bits(m, partial, make_vertex_set(m.graph.n, seeds));
    for (VertexId v : order.order)
        if (!known.test(v)) return v;
    throw AllKnownInfected("every ordered candidate is already known infected");
}

namespace {

VertexId risk_free_step_known(const GreedyOrder& order, const Bits& known, const Bits& seeds) {
    for (VertexId v : order.order)
        if (!known.test(v)) return v;
    // Everything the order lists is known infected; seeding any of them is
    // value-neutral, so pad with the first unseeded one to keep |S| = k.
    for (VertexId v : order.order)
        if (!seeds.test(v)) return v;
    throw NotEnoughCandidates("risk-free order exhausted");
}

VertexId pick_next_seed(const ModelSpec& m, const Policy& policy,
                        const std::vector<VertexId>& seeds, const Bits& seed_bits,
                        const PartialRealization& partial, const Bits& known,
                        const EvalOptions& eval) {
    switch (policy.kind) {
        case Policy::Kind::AdaptiveGreedy:
            return adaptive_greedy_step(m, seeds, partial, eval);
        case Policy::Kind::RiskFree:
            return risk_free_step_known(policy.order, known, seed_bits);
        case Policy::Kind::Fixed: {
            std::size_t i = seeds.size();
            if (i >= policy.fixed.size()) throw NotEnoughCandidates("fixed seed list exhausted");
            return policy.fixed[i];
        }
        case Policy::Kind::Custom:
            return policy.custom(m, seeds, partial);
    }
    throw BadParams("unknown policy kind");
}

}  // namespace

PolicyRun run_policy(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                     const Realization& phi, const EvalOptions& eval) {
    if (!m.is_triggering()) throw WrongModelKind("run_policy requires a triggering model");
    if (k < 0 || k > static_cast<int>(m.candidate_list().size()))
        throw NotEnoughCandidates("k exceeds the number of seed candidates");
    PolicyRun run;
    for (int i = 0; i < k; ++i) {
        PartialRealization part = feedback(m, fb, phi, run.seeds_in_order);
        Bits seed_bits = make_vertex_set(m.graph.n, run.seeds_in_order);
        Bits known = known_infected_bits(m, part, seed_bits);
        VertexId s = pick_next_seed(m, policy, run.seeds_in_order, seed_bits, part, known, eval);
        run.seeds_in_order.push_back(s);
        run.snapshots.push_back(feedback(m, fb, phi, run.seeds_in_order));
    }
    run.infected = cascade(m, phi, run.seeds_in_order);
    run.objective = static_cast<double>(total_weight(m.graph, run.infected));
    return run;
}

PolicyRun run_policy_gtm(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                         const ThresholdRealization& theta, const EvalOptions& eval) {
    if (m.kind != ModelKind::GTM) throw WrongModelKind("run_policy_gtm requires a GTM model");
    if (k < 0 || k > static_cast<int>(m.candidate_list().size()))
        throw NotEnoughCandidates("k exceeds the number of seed candidates");
    PolicyRun run;
    for (int i = 0; i < k; ++i) {
        LevelRealization levels = gtm_feedback(m, fb, theta, run.seeds_in_order);
        Bits seed_bits = make_vertex_set(m.graph.n, run.seeds_in_order);
        VertexId s = -1;
        switch (policy.kind) {
            case Policy::Kind::AdaptiveGreedy: {
                GtmConditionedModel cm = gtm_condition(m, levels);
                McPool pool = build_pool(cm.reduced, cm.known_bits, eval.samples,
                                         eval.rng.derive(i));
                VertexId best = -1;
                double best_val = 0.0;
                for (VertexId c : m.candidate_list()) {
                    if (seed_bits.test(c)) continue;
                    double val =
                        cm.known_bits.test(c) ? 0.0 : pool_marginal(cm.reduced, pool, c);
                    if (best < 0 || val > best_val + 1e-9) {
                        best = c;
                        best_val = val;
                    }
                }
                if (best < 0) throw NotEnoughCandidates("no unseeded candidate left");
                s = best;
                break;
            }
            case Policy::Kind::RiskFree: {
                Bits known(m.graph.n);
                for (VertexId v = 0; v < m.graph.n; ++v)
                    if (levels.infected[v]) known.set(v);
                s = risk_free_step_known(policy.order, known, seed_bits);
                break;
            }
            case Policy::Kind::Fixed: {
                if (run.seeds_in_order.size() >= policy.fixed.size())
                    throw NotEnoughCandidates("fixed seed list exhausted");
                s = policy.fixed[run.seeds_in_order.size()];
                break;
            }
            case Policy::Kind::Custom:
                throw BadParams("custom policies are defined on edge feedback only");
        }
        run.seeds_in_order.push_back(s);
        run.level_snapshots.push_back(gtm_feedback(m, fb, theta, run.seeds_in_order));
    }
    run.infected = gtm_cascade(m, theta, run.seeds_in_order);
    run.objective = static_cast<double>(total_weight(m.graph, run.infected));
    return run;
}

EstimateCI sigma_adaptive(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                          std::int64_t n, const RngStream& rng, const EvalOptions& inner_eval) {
    if (n < 2) throw BadParams("sigma_adaptive needs at least two samples");
    std::vector<double> vals;
    vals.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
        RngStream r = rng.derive(i);
        EvalOptions eval = inner_eval;
        eval.rng = r.derive(0x91f);
        if (m.kind == ModelKind::GTM) {
            ThresholdRealization theta = sample_thresholds(m, r);
            vals.push_back(run_policy_gtm(m, policy, k, fb, theta, eval).objective);
        } else {
            Realization phi = sample_realization(m, r);
            vals.push_back(run_policy(m, policy, k, fb, phi, eval).objective);
        }
    }
    return make_estimate(vals, rng.master_seed());
}

// ---------------------------------------------------------------------------
// Exact adaptive evaluation: recursion over (seed set, feedback) states.

namespace {

std::string state_key(const Bits& seeds, const PartialRealization& partial) {
    std::string key;
    key.reserve(seeds.words().size() * 8 + partial.status.size());
    for (std::uint64_t w : seeds.words())
        for (int b = 0; b < 8; ++b) key.push_back(static_cast<char>((w >> (8 * b)) & 0xff));
    for (PartialStatus s : partial.status) key.push_back(static_cast<char>(s));
    return key;
}

template <class Num>
class ExactPolicyEvaluator {
  public:
    ExactPolicyEvaluator(const ModelSpec& m, FeedbackKind fb, const ExactOptions& opt)
        : m_(m), fb_(fb), opt_(opt), candidates_(m.candidate_list()) {}

    Num policy_value(const Policy& policy, int k) {
        if (k < 0 || k > static_cast<int>(candidates_.size()))
            throw NotEnoughCandidates("k exceeds the number of seed candidates");
        Bits seeds(m_.graph.n);
        PartialRealization partial = PartialRealization::all_unknown(m_.graph.edge_count());
        return value(seeds, partial, k, &policy, false);
    }

    Num optimal_value(int k) {
        if (k < 0 || k > static_cast<int>(candidates_.size()))
            throw NotEnoughCandidates("k exceeds the number of seed candidates");
        Bits seeds(m_.graph.n);
        PartialRealization partial = PartialRealization::all_unknown(m_.graph.edge_count());
        return value(seeds, partial, k, nullptr, false);
    }

    // Expected adaptive-greedy seeds until target is known infected.
    Num steps_to_infect(VertexId target) {
        target_ = target;
        Bits seeds(m_.graph.n);
        PartialRealization partial = PartialRealization::all_unknown(m_.graph.edge_count());
        return value(seeds, partial, static_cast<int>(candidates_.size()), nullptr, true);
    }

  private:
    Num conditional_value(const Bits& seeds, const PartialRealization& partial) {
        ConditionedModel cm = condition_model(m_, partial, seeds.to_vector());
        return conditioned_sigma_t<Num>(cm, Bits(m_.graph.n), opt_);
    }

    VertexId greedy_pick(const Bits& seeds, const PartialRealization& partial) {
        ConditionedModel cm = condition_model(m_, partial, seeds.to_vector());
        VertexId best = -1;
        Num best_val = NumOps<Num>::from_int(0);
        const Num tol = NumOps<Num>::tie_tolerance();
        for (VertexId c : candidates_) {
            if (seeds.test(c)) continue;
            Bits extra(m_.graph.n);
            extra.set(c);
            Num val = conditioned_sigma_t<Num>(cm, extra, opt_);
            if (best < 0 || val > best_val + tol) {
                best = c;
                best_val = val;
            }
        }
        if (best < 0) throw NotEnoughCandidates("no unseeded candidate left");
        return best;
    }

    VertexId pick(const Bits& seeds, const PartialRealization& partial, const Policy* policy) {
        if (policy == nullptr) return -1;  // optimal mode maximizes over all candidates
        switch (policy->kind) {
            case Policy::Kind::AdaptiveGreedy:
                return greedy_pick(seeds, partial);
            case Policy::Kind::RiskFree: {
                Bits known = known_infected_bits(m_, partial, seeds);
                return risk_free_step_known(policy->order, known, seeds);
            }
            case Policy::Kind::Fixed: {
                std::size_t i = static_cast<std::size_t>(seeds.count());
                if (i >= policy->fixed.size())
                    throw NotEnoughCandidates("fixed seed list exhausted");
                return policy->fixed[i];
            }
            case Policy::Kind::Custom:
                return policy->custom(m_, seeds.to_vector(), partial);
        }
        throw BadParams("unknown policy kind");
    }

    // Probability-weighted feedback classes after seeding s on top of state.
    std::map<std::string, std::pair<Num, PartialRealization>> classes(
        const Bits& new_seeds, const PartialRealization& partial) {
        std::map<std::string, std::pair<Num, PartialRealization>> out;
        ExactEngine<Num> eng(m_, &partial, nullptr, &new_seeds, true, opt_);
        const WeightedDigraph& g = m_.graph;
        eng.for_each([&](const Num& prob) {
            Bits sources = fb_ == FeedbackKind::FullAdoption ? eng.closure(new_seeds) : new_seeds;
            PartialRealization next = partial;
            sources.for_each([&](int u) {
                for (int eid : g.out_edges[u])
                    next.status[eid] =
                        eng.live(eid) ? PartialStatus::Live : PartialStatus::Blocked;
            });
            next = strengthen_partial(m_, std::move(next));
            std::string key = state_key(new_seeds, next);
            auto it = out.find(key);
            if (it == out.end())
                out.emplace(std::move(key), std::make_pair(prob, std::move(next)));
            else
                it->second.first = it->second.first + prob;
        });
        return out;
    }

    Num value(const Bits& seeds, const PartialRealization& partial, int steps_left,
              const Policy* policy, bool counting_steps) {
        std::string key = state_key(seeds, partial);
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((steps_left >> (8 * b)) & 0xff));
        auto hit = memo_.find(key);
        if (hit != memo_.end()) return hit->second;
        if (memo_.size() >= opt_.max_tree_nodes)
            throw TooLargeToEnumerate("adaptive decision tree exceeds the node cap");

        Num result = NumOps<Num>::from_int(0);
        if (counting_steps &&
            known_infected_bits(m_, partial, seeds).test(target_)) {
            result = NumOps<Num>::from_int(0);
        } else if (steps_left == 0) {
            if (counting_steps)
                throw Error("candidates exhausted before the target was infected");
            result = conditional_value(seeds, partial);
        } else if (policy == nullptr && !counting_steps) {
            // optimal adaptive policy: maximize over the next seed
            bool any = false;
            for (VertexId c : candidates_) {
                if (seeds.test(c)) continue;
                Bits ns = seeds;
                ns.set(c);
                Num val = NumOps<Num>::from_int(0);
                for (auto& [k2, cls] : classes(ns, partial))
                    val = val + cls.first * value(ns, cls.second, steps_left - 1, policy, false);
                if (!any || val > result) result = val;
                any = true;
            }
            if (!any) throw NotEnoughCandidates("no unseeded candidate left");
        } else {
            VertexId s = counting_steps ? greedy_pick(seeds, partial)
                                        : pick(seeds, partial, policy);
            Bits ns = seeds;
            ns.set(s);
            if (counting_steps) result = NumOps<Num>::from_int(1);
            for (auto& [k2, cls] : classes(ns, partial)) {
                Num child = value(ns, cls.second, steps_left - 1, policy, counting_steps);
                result = result + cls.first * child;
            }
        }
        memo_.emplace(std::move(key), result);
        return result;
    }

    const ModelSpec& m_;
    FeedbackKind fb_;
    ExactOptions opt_;
    std::vector<VertexId> candidates_;
    VertexId target_ = -1;
    std::unordered_map<std::string, Num> memo_;
};

}  // namespace

double sigma_adaptive_exact(const ModelSpec& m, const Policy& policy, int k, FeedbackKind fb,
                            const ExactOptions& opt) {
    ExactPolicyEvaluator<double> eval(m, fb, opt);
    return eval.policy_value(policy, k);
}

Rational sigma_adaptive_exact_rational(const ModelSpec& m, const Policy& policy, int k,
                                       FeedbackKind fb, const ExactOptions& opt) {
    ExactPolicyEvaluator<Rational> eval(m, fb, opt);
    return eval.policy_value(policy, k);
}

double optimal_adaptive_exact(const ModelSpec& m, int k, FeedbackKind fb,
                              const ExactOptions& opt) {
    ExactPolicyEvaluator<double> eval(m, fb, opt);
    return eval.optimal_value(k);
}

Rational optimal_adaptive_exact_rational(const ModelSpec& m, int k, FeedbackKind fb,
                                         const ExactOptions& opt) {
    ExactPolicyEvaluator<Rational> eval(m, fb, opt);
    return eval.optimal_value(k);
}

double exact_expected_steps_to_infect(const ModelSpec& m, VertexId target,
                                      const ExactOptions& opt) {
    if (target < 0 || target >= m.graph.n) throw BadVertexId("target out of range");
    ExactPolicyEvaluator<double> eval(m, FeedbackKind::FullAdoption, opt);
    return eval.steps_to_infect(target);
}

namespace {

template <class Num>
std::pair<std::vector<VertexId>, Num> optimal_nonadaptive_t(const ModelSpec& m, int k,
                                                            const ExactOptions& opt) {
    std::vector<VertexId> candidates = m.candidate_list();
    int n = static_cast<int>(candidates.size());
    if (k < 0 || k > n) throw NotEnoughCandidates("k exceeds the number of seed candidates");
    double combos = 1.0;
    for (int i = 0; i < k; ++i) combos = combos * (n - i) / (i + 1);
    if (combos > opt.max_subsets)
        throw TooLargeToEnumerate("subset enumeration exceeds the cap");

    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    std::vector<VertexId> best_set;
    Num best_val = NumOps<Num>::from_int(-1);
    while (true) {
        std::vector<VertexId> seeds;
        for (int i : idx) seeds.push_back(candidates[i]);
        Num val = sigma_exact_t<Num>(m, make_vertex_set(m.graph.n, seeds), opt);
        if (best_set.empty() || val > best_val) {
            best_val = val;
            best_set = seeds;
        }
        int pos = k - 1;
        while (pos >= 0 && idx[pos] == n - k + pos) --pos;
        if (pos < 0) break;
        ++idx[pos];
        for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return {best_set, best_val};
}

}  // namespace

std::pair<std::vector<VertexId>, double> optimal_nonadaptive_exact(const ModelSpec& m, int k,
                                                                   const ExactOptions& opt) {
    return optimal_nonadaptive_t<double>(m, k, opt);
}

std::pair<std::vector<VertexId>, Rational> optimal_nonadaptive_exact_rational(
    const ModelSpec& m, int k, const ExactOptions& opt) {
    return optimal_nonadaptive_t<Rational>(m, k, opt);
}

}  // namespace gapbench
