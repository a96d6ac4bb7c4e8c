#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "dbm/error.hpp"
#include "dbm/util.hpp"

namespace dbm::evo {

enum class Sense { minimize, maximize };

// ---------------------------------------------------------------------------
// Pareto dominance: no worse in every objective, strictly better in at least
// one. Ties in every coordinate dominate nothing.
// ---------------------------------------------------------------------------

inline bool dominates(const std::vector<double>& a, const std::vector<double>& b,
                      Sense sense) {
    if (a.size() != b.size() || a.empty())
        throw ContractError("dominates: objective vectors must match and be non-empty");
    bool strict = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double x = a[k], y = b[k];
        if (sense == Sense::maximize) std::swap(x, y);
        if (x > y) return false;
        if (x < y) strict = true;
    }
    return strict;
}

// ---------------------------------------------------------------------------
// Fast non-dominated sort (domination counts + dominated lists). Returns the
// fronts as index lists, best first; every input index lands in exactly one.
// ---------------------------------------------------------------------------

inline std::vector<std::vector<std::size_t>>
non_dominated_sort(const std::vector<std::vector<double>>& objs, Sense sense) {
    std::size_t n = objs.size();
    std::vector<std::vector<std::size_t>> fronts;
    if (n == 0) return fronts;
    std::vector<int> count(n, 0);
    std::vector<std::vector<std::size_t>> dominated(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dominates(objs[i], objs[j], sense)) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (dominates(objs[j], objs[i], sense)) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    std::vector<std::size_t> current;
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) current.push_back(i);
    while (!current.empty()) {
        fronts.push_back(current);
        std::vector<std::size_t> next;
        for (std::size_t i : current)
            for (std::size_t j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        current = std::move(next);
    }
    return fronts;
}

// ---------------------------------------------------------------------------
// Crowding distance within one front. Boundary points get +inf; an objective
// whose values are all equal contributes nothing (rather than 0/0).
// ---------------------------------------------------------------------------

inline std::vector<double> crowding_distance(const std::vector<std::vector<double>>& objs,
                                             const std::vector<std::size_t>& front) {
    std::size_t n = front.size();
    std::vector<double> dist(n, 0.0);
    if (n == 0) return dist;
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), std::numeric_limits<double>::infinity());
        return dist;
    }
    std::size_t n_obj = objs[front[0]].size();
    std::vector<std::size_t> order(n);
    for (std::size_t m = 0; m < n_obj; ++m) {
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return objs[front[a]][m] < objs[front[b]][m];
        });
        double lo = objs[front[order.front()]][m];
        double hi = objs[front[order.back()]][m];
        dist[order.front()] = std::numeric_limits<double>::infinity();
        dist[order.back()] = std::numeric_limits<double>::infinity();
        if (hi == lo) continue;
        for (std::size_t i = 1; i + 1 < n; ++i)
            dist[order[i]] += (objs[front[order[i + 1]]][m] - objs[front[order[i - 1]]][m]) /
                              (hi - lo);
    }
    return dist;
}

// ---------------------------------------------------------------------------
// Box bounds for real-coded genomes.
// ---------------------------------------------------------------------------

struct Bounds {
    std::vector<double> lo, hi;

    Bounds() = default;
    Bounds(std::vector<double> l, std::vector<double> h) : lo(std::move(l)), hi(std::move(h)) {
        validate();
    }
    static Bounds uniform(std::size_t dim, double l, double h) {
        return Bounds(std::vector<double>(dim, l), std::vector<double>(dim, h));
    }

    std::size_t dim() const { return lo.size(); }

    void validate() const {
        if (lo.size() != hi.size() || lo.empty())
            throw ContractError("Bounds: lo/hi sizes must match and be non-empty");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] < hi[i]))
                throw ContractError("Bounds: lo[" + std::to_string(i) + "] must be < hi");
    }

    void clip(std::vector<double>& g) const {
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = std::clamp(g[i], lo[i], hi[i]);
    }

    std::vector<double> sample(Rng& rng) const {
        std::vector<double> g(dim());
        for (std::size_t i = 0; i < g.size(); ++i) g[i] = rng.uniform(lo[i], hi[i]);
        return g;
    }
};

// ---------------------------------------------------------------------------
// Genetic algorithm configuration shared by the scalar GA and NSGA-II.
// ---------------------------------------------------------------------------

struct GaConfig {
    int population = 100;
    int max_generations = 500;
    std::uint64_t seed = 1;
    double crossover_rate = 0.9;
    double mutation_rate = -1.0;  // < 0 means 1/dim, resolved at run time
    double mutation_scale = 1.0;  // multiplies the polynomial-mutation step
    double eta_crossover = 15.0;
    double eta_mutation = 20.0;
    double elitism_fraction = 0.05;             // scalar GA only
    std::optional<double> early_stop;           // scalar GA: stop at/below this value
    std::optional<std::pair<double, double>> hv_reference; // metrics only
    int workers = 1;                            // 0 means hardware concurrency

    void validate() const {
        if (population < 4 || population % 2 != 0)
            throw ContractError("GaConfig: population must be even and >= 4");
        if (max_generations < 1) throw ContractError("GaConfig: max_generations must be >= 1");
        if (crossover_rate < 0.0 || crossover_rate > 1.0)
            throw ContractError("GaConfig: crossover_rate outside [0,1]");
        if (mutation_rate > 1.0) throw ContractError("GaConfig: mutation_rate above 1");
        if (mutation_scale <= 0.0) throw ContractError("GaConfig: mutation_scale must be > 0");
        if (eta_crossover <= 0.0 || eta_mutation <= 0.0)
            throw ContractError("GaConfig: distribution indices must be > 0");
        if (elitism_fraction < 0.0 || elitism_fraction >= 1.0)
            throw ContractError("GaConfig: elitism_fraction outside [0,1)");
        if (workers < 0) throw ContractError("GaConfig: workers must be >= 0");
    }

    double resolved_mutation_rate(std::size_t dim) const {
        return mutation_rate < 0.0 ? 1.0 / static_cast<double>(dim) : mutation_rate;
    }
};

struct Individual {
    std::vector<double> genome;
    std::vector<double> objectives;
    int rank = 0;
    double crowding = 0.0;
};

// ---------------------------------------------------------------------------
// Variation operators: simulated binary crossover and polynomial mutation in
// their bounded forms (Deb's formulation). All randomness flows through the
// caller's Rng so runs replay exactly.
// ---------------------------------------------------------------------------

namespace detail {

inline void sbx_pair(std::vector<double>& c1, std::vector<double>& c2, const Bounds& b,
                     double eta, Rng& rng) {
    constexpr double eps = 1e-14;
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (rng.uniform() > 0.5) continue;
        double y1 = c1[i], y2 = c2[i];
        if (std::abs(y1 - y2) <= eps) continue;
        if (y1 > y2) std::swap(y1, y2);
        double yl = b.lo[i], yu = b.hi[i];
        double u = rng.uniform();
        auto spread = [&](double beta) {
            double alpha = 2.0 - std::pow(beta, -(eta + 1.0));
            if (u <= 1.0 / alpha) return std::pow(u * alpha, 1.0 / (eta + 1.0));
            return std::pow(1.0 / (2.0 - u * alpha), 1.0 / (eta + 1.0));
        };
        double bq1 = spread(1.0 + 2.0 * (y1 - yl) / (y2 - y1));
        double v1 = 0.5 * ((y1 + y2) - bq1 * (y2 - y1));
        double bq2 = spread(1.0 + 2.0 * (yu - y2) / (y2 - y1));
        double v2 = 0.5 * ((y1 + y2) + bq2 * (y2 - y1));
        v1 = std::clamp(v1, yl, yu);
        v2 = std::clamp(v2, yl, yu);
        if (rng.uniform() <= 0.5) std::swap(v1, v2);
        c1[i] = v1;
        c2[i] = v2;
    }
}

inline void polynomial_mutation(std::vector<double>& g, const Bounds& b, double rate,
                                double eta, double scale, Rng& rng) {
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (rng.uniform() > rate) continue;
        double y = g[i], yl = b.lo[i], yu = b.hi[i];
        double d1 = (y - yl) / (yu - yl), d2 = (yu - y) / (yu - yl);
        double r = rng.uniform();
        double mp = 1.0 / (eta + 1.0);
        double dq;
        if (r <= 0.5) {
            double xy = 1.0 - d1;
            dq = std::pow(2.0 * r + (1.0 - 2.0 * r) * std::pow(xy, eta + 1.0), mp) - 1.0;
        } else {
            double xy = 1.0 - d2;
            dq = 1.0 - std::pow(2.0 * (1.0 - r) + 2.0 * (r - 0.5) * std::pow(xy, eta + 1.0), mp);
        }
        g[i] = std::clamp(y + dq * scale * (yu - yl), yl, yu);
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// NSGA-II. (mu+lambda) elitist: parents and offspring compete in one pool,
// fronts fill the next population, the straddling front is truncated by
// crowding distance. Evaluations run through parallel_for and are gathered in
// index order, so worker count does not change results.
// ---------------------------------------------------------------------------

using MultiObjectiveFn = std::function<std::vector<double>(const std::vector<double>&)>;

struct GenerationStats {
    int generation = 0;
    int front_size = 0;
    double best_f1 = 0.0;
    double best_f2 = 0.0;
    double hypervolume = 0.0;
};

struct Nsga2Result {
    std::vector<Individual> population;
    std::vector<Individual> archive; // final first front, deduplicated
    std::vector<GenerationStats> stats;
};

// Dedup tolerance in genome space for the final archive.
inline constexpr double k_archive_dedup_tol = 1e-9;

// 2D hypervolume against a reference point: sum of the staircase rectangles.
// Points on the wrong side of the reference contribute nothing.
inline double hypervolume_2d(const std::vector<std::vector<double>>& objs,
                             std::pair<double, double> ref, Sense sense) {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(objs.size());
    double rx = ref.first, ry = ref.second;
    for (const auto& o : objs) {
        if (o.size() != 2) throw ContractError("hypervolume_2d: needs exactly 2 objectives");
        double x = o[0], y = o[1];
        if (sense == Sense::maximize) { // mirror into a minimization problem
            x = -x;
            y = -y;
        }
        pts.push_back({x, y});
    }
    if (sense == Sense::maximize) {
        rx = -rx;
        ry = -ry;
    }
    std::sort(pts.begin(), pts.end());
    double hv = 0.0;
    double ceiling = ry;
    for (const auto& [x, y] : pts) {
        if (x >= rx || y >= ceiling) continue;
        hv += (rx - x) * (ceiling - y);
        ceiling = y;
    }
    return hv;
}

namespace detail {

inline void evaluate_all(std::vector<Individual>& pop, const MultiObjectiveFn& f,
                         int workers, std::size_t& n_obj) {
    parallel_for(pop.size(), workers,
                 [&](std::size_t i) { pop[i].objectives = f(pop[i].genome); });
    for (const auto& ind : pop) {
        if (n_obj == 0) n_obj = ind.objectives.size();
        if (ind.objectives.empty() || ind.objectives.size() != n_obj)
            throw ContractError("objective function returned inconsistent sizes");
    }
}

// Crowded-comparison tournament between two known contestants; full ties
// resolved by coin flip.
inline std::size_t tourney_pick(const std::vector<Individual>& pop, std::size_t a,
                                std::size_t b, Rng& rng) {
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding ? a : b;
    return rng.coin() ? a : b;
}

// Binary tournament with replacement (scalar GA path).
inline std::size_t tournament(const std::vector<Individual>& pop, Rng& rng) {
    std::size_t a = rng.index(pop.size());
    std::size_t b = rng.index(pop.size());
    return tourney_pick(pop, a, b, rng);
}

// Mating pool built the way the original NSGA-II code does it: two shuffled
// index permutations per generation, binary tournaments on consecutive pairs.
// Every individual competes in exactly two tournaments, which keeps selection
// pressure even across the population instead of leaving it to sampling luck.
inline std::vector<std::size_t> mating_pool(const std::vector<Individual>& pop, Rng& rng) {
    const std::size_t n = pop.size();
    std::vector<std::size_t> stream;
    stream.reserve(2 * n);
    for (int pass = 0; pass < 2; ++pass) {
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t i = n; i > 1; --i)
            std::swap(perm[i - 1], perm[rng.index(i)]);
        stream.insert(stream.end(), perm.begin(), perm.end());
    }
    std::vector<std::size_t> pool;
    pool.reserve(n);
    for (std::size_t i = 0; i + 1 < stream.size(); i += 2)
        pool.push_back(tourney_pick(pop, stream[i], stream[i + 1], rng));
    return pool;
}

inline std::vector<Individual> init_population(const Bounds& bounds, int n,
                                               const std::vector<std::vector<double>>& seeds,
                                               Rng& rng) {
    std::vector<Individual> pop;
    pop.reserve(static_cast<std::size_t>(n));
    for (const auto& s : seeds) {
        if (static_cast<int>(pop.size()) >= n) break;
        if (s.size() != bounds.dim())
            throw ContractError("seed genome has wrong dimension");
        Individual ind;
        ind.genome = s;
        bounds.clip(ind.genome);
        pop.push_back(std::move(ind));
    }
    while (static_cast<int>(pop.size()) < n) {
        Individual ind;
        ind.genome = bounds.sample(rng);
        pop.push_back(std::move(ind));
    }
    return pop;
}

} // namespace detail

inline Nsga2Result nsga2(const MultiObjectiveFn& f, const Bounds& bounds, const GaConfig& cfg,
                         Sense sense, const std::vector<std::vector<double>>& seed_genomes = {},
                         double archive_dedup_tol = k_archive_dedup_tol) {
    cfg.validate();
    bounds.validate();
    Rng rng(cfg.seed);
    const int n = cfg.population;
    const double pmut = cfg.resolved_mutation_rate(bounds.dim());
    std::size_t n_obj = 0;

    Nsga2Result result;
    auto pop = detail::init_population(bounds, n, seed_genomes, rng);
    detail::evaluate_all(pop, f, cfg.workers, n_obj);

    auto assign_rank_crowding = [&](std::vector<Individual>& group) {
        std::vector<std::vector<double>> objs;
        objs.reserve(group.size());
        for (const auto& ind : group) objs.push_back(ind.objectives);
        auto fronts = non_dominated_sort(objs, sense);
        for (std::size_t fi = 0; fi < fronts.size(); ++fi) {
            auto cd = crowding_distance(objs, fronts[fi]);
            for (std::size_t k = 0; k < fronts[fi].size(); ++k) {
                group[fronts[fi][k]].rank = static_cast<int>(fi);
                group[fronts[fi][k]].crowding = cd[k];
            }
        }
        return fronts;
    };

    auto record_stats = [&](const std::vector<Individual>& group, int gen) {
        GenerationStats st;
        st.generation = gen;
        std::vector<std::vector<double>> front0;
        for (const auto& ind : group) {
            if (ind.rank == 0) {
                ++st.front_size;
                front0.push_back(ind.objectives);
            }
        }
        bool maximize = sense == Sense::maximize;
        st.best_f1 = maximize ? -std::numeric_limits<double>::infinity()
                              : std::numeric_limits<double>::infinity();
        st.best_f2 = st.best_f1;
        for (const auto& ind : group) {
            if (maximize) {
                st.best_f1 = std::max(st.best_f1, ind.objectives[0]);
                st.best_f2 = std::max(st.best_f2, ind.objectives[1]);
            } else {
                st.best_f1 = std::min(st.best_f1, ind.objectives[0]);
                st.best_f2 = std::min(st.best_f2, ind.objectives[1]);
            }
        }
        st.hypervolume = cfg.hv_reference ? hypervolume_2d(front0, *cfg.hv_reference, sense)
                                          : std::numeric_limits<double>::quiet_NaN();
        result.stats.push_back(st);
    };

    assign_rank_crowding(pop);
    record_stats(pop, 0);

    for (int gen = 1; gen <= cfg.max_generations; ++gen) {
        // variation
        auto parents = detail::mating_pool(pop, rng);
        std::vector<Individual> offspring;
        offspring.reserve(static_cast<std::size_t>(n));
        std::size_t next_parent = 0;
        while (static_cast<int>(offspring.size()) < n) {
            const auto& p1 = pop[parents[next_parent++ % parents.size()]];
            const auto& p2 = pop[parents[next_parent++ % parents.size()]];
            Individual c1, c2;
            c1.genome = p1.genome;
            c2.genome = p2.genome;
            if (rng.uniform() <= cfg.crossover_rate)
                detail::sbx_pair(c1.genome, c2.genome, bounds, cfg.eta_crossover, rng);
            detail::polynomial_mutation(c1.genome, bounds, pmut, cfg.eta_mutation,
                                        cfg.mutation_scale, rng);
            detail::polynomial_mutation(c2.genome, bounds, pmut, cfg.eta_mutation,
                                        cfg.mutation_scale, rng);
            offspring.push_back(std::move(c1));
            if (static_cast<int>(offspring.size()) < n) offspring.push_back(std::move(c2));
        }
        detail::evaluate_all(offspring, f, cfg.workers, n_obj);

        // environmental selection on the combined pool
        std::vector<Individual> pool = std::move(pop);
        pool.insert(pool.end(), std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
        auto fronts = assign_rank_crowding(pool);
        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(n));
        for (const auto& front : fronts) {
            if (static_cast<int>(next.size() + front.size()) <= n) {
                for (auto idx : front) next.push_back(pool[idx]);
            } else {
                std::vector<std::size_t> order(front.size());
                for (std::size_t i = 0; i < front.size(); ++i) order[i] = i;
                // crowded truncation; stable tie-break on pool index for determinism
                std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                    return pool[front[a]].crowding > pool[front[b]].crowding;
                });
                for (std::size_t i = 0; i < order.size() &&
                                        static_cast<int>(next.size()) < n; ++i)
                    next.push_back(pool[front[order[i]]]);
                break;
            }
            if (static_cast<int>(next.size()) == n) break;
        }
        pop = std::move(next);
        record_stats(pop, gen);
    }

    // archive: final first front, deduplicated in genome space
    for (const auto& ind : pop) {
        if (ind.rank != 0) continue;
        bool dup = false;
        for (const auto& kept : result.archive) {
            double d = 0.0;
            for (std::size_t i = 0; i < ind.genome.size(); ++i)
                d = std::max(d, std::abs(ind.genome[i] - kept.genome[i]));
            if (d <= archive_dedup_tol) {
                dup = true;
                break;
            }
        }
        if (!dup) result.archive.push_back(ind);
    }
    result.population = std::move(pop);
    return result;
}

// ---------------------------------------------------------------------------
// Scalar GA (minimization): binary tournament on fitness, SBX + polynomial
// mutation, elite carry-over, optional early stop once the best value reaches
// a target. Used for shape reconstruction and for seeding the two-objective
// runs with single-objective champions.
// ---------------------------------------------------------------------------

using ScalarFn = std::function<double(const std::vector<double>&)>;

struct GaTracePoint {
    int generation = 0;
    double best = 0.0;
};

struct GaResult {
    std::vector<double> best_genome;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<GaTracePoint> trace;
    int generations_run = 0;
    bool early_stopped = false;
};

inline GaResult ga_minimize(const ScalarFn& f, const Bounds& bounds, const GaConfig& cfg,
                            const std::vector<std::vector<double>>& seed_genomes = {}) {
    cfg.validate();
    bounds.validate();
    Rng rng(cfg.seed);
    const int n = cfg.population;
    const double pmut = cfg.resolved_mutation_rate(bounds.dim());

    auto pop = detail::init_population(bounds, n, seed_genomes, rng);
    std::vector<double> value(pop.size());
    auto evaluate = [&](std::vector<Individual>& group, std::vector<double>& vals) {
        vals.resize(group.size());
        parallel_for(group.size(), cfg.workers,
                     [&](std::size_t i) { vals[i] = f(group[i].genome); });
    };
    evaluate(pop, value);

    GaResult result;
    auto note_best = [&](int gen) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < value.size(); ++i)
            if (value[i] < value[best]) best = i;
        if (value[best] < result.best_value) {
            result.best_value = value[best];
            result.best_genome = pop[best].genome;
        }
        result.trace.push_back({gen, result.best_value});
        result.generations_run = gen;
        return cfg.early_stop && result.best_value <= *cfg.early_stop;
    };
    if (note_best(0)) {
        result.early_stopped = true;
        return result;
    }

    int n_elite = std::max(1, static_cast<int>(std::lround(cfg.elitism_fraction *
                                                           static_cast<double>(n))));
    n_elite = std::min(n_elite, n - 2);

    for (int gen = 1; gen <= cfg.max_generations; ++gen) {
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] < value[b]; });

        auto pick = [&]() -> const Individual& {
            std::size_t a = rng.index(pop.size());
            std::size_t b = rng.index(pop.size());
            if (value[a] != value[b]) return value[a] < value[b] ? pop[a] : pop[b];
            return rng.coin() ? pop[a] : pop[b];
        };

        std::vector<Individual> next;
        next.reserve(static_cast<std::size_t>(n));
        for (int e = 0; e < n_elite; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);
        while (static_cast<int>(next.size()) < n) {
            Individual c1, c2;
            c1.genome = pick().genome;
            c2.genome = pick().genome;
            if (rng.uniform() <= cfg.crossover_rate)
                detail::sbx_pair(c1.genome, c2.genome, bounds, cfg.eta_crossover, rng);
            detail::polynomial_mutation(c1.genome, bounds, pmut, cfg.eta_mutation,
                                        cfg.mutation_scale, rng);
            detail::polynomial_mutation(c2.genome, bounds, pmut, cfg.eta_mutation,
                                        cfg.mutation_scale, rng);
            next.push_back(std::move(c1));
            if (static_cast<int>(next.size()) < n) next.push_back(std::move(c2));
        }

        // evaluate only the non-elite tail; elites keep their known values
        std::vector<double> next_value(next.size());
        for (int e = 0; e < n_elite; ++e)
            next_value[static_cast<std::size_t>(e)] = value[order[static_cast<std::size_t>(e)]];
        parallel_for(next.size() - static_cast<std::size_t>(n_elite), cfg.workers,
                     [&](std::size_t i) {
                         std::size_t k = i + static_cast<std::size_t>(n_elite);
                         next_value[k] = f(next[k].genome);
                     });
        pop = std::move(next);
        value = std::move(next_value);
        if (note_best(gen)) {
            result.early_stopped = true;
            return result;
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// ZDT benchmark family on n=25 decision variables (first variable drives f1,
// the rest feed the distance function g).
// ---------------------------------------------------------------------------

enum class ZdtProblem { zdt1, zdt2, zdt4, zdt6 };

inline const char* zdt_name(ZdtProblem p) {
    switch (p) {
        case ZdtProblem::zdt1: return "zdt1";
        case ZdtProblem::zdt2: return "zdt2";
        case ZdtProblem::zdt4: return "zdt4";
        case ZdtProblem::zdt6: return "zdt6";
    }
    return "?";
}

inline ZdtProblem zdt_from_name(const std::string& s) {
    if (s == "zdt1") return ZdtProblem::zdt1;
    if (s == "zdt2") return ZdtProblem::zdt2;
    if (s == "zdt4") return ZdtProblem::zdt4;
    if (s == "zdt6") return ZdtProblem::zdt6;
    throw ConfigError("unknown ZDT problem '" + s + "'");
}

inline Bounds zdt_bounds(ZdtProblem p, std::size_t n = 25) {
    if (n < 2) throw ContractError("zdt_bounds: need at least 2 variables");
    std::vector<double> lo(n, 0.0), hi(n, 1.0);
    if (p == ZdtProblem::zdt4) {
        for (std::size_t i = 1; i < n; ++i) {
            lo[i] = -5.0;
            hi[i] = 5.0;
        }
    }
    return Bounds(std::move(lo), std::move(hi));
}

inline std::vector<double> zdt_eval(ZdtProblem p, const std::vector<double>& w) {
    auto b = zdt_bounds(p, w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i] < b.lo[i] - 1e-12 || w[i] > b.hi[i] + 1e-12)
            throw ContractError("zdt_eval: w[" + std::to_string(i) + "] out of bounds");
    const std::size_t n = w.size();
    const double nm1 = static_cast<double>(n - 1);
    double f1, g, f2;
    switch (p) {
        case ZdtProblem::zdt1: {
            f1 = w[0];
            double s = 0.0;
            for (std::size_t i = 1; i < n; ++i) s += w[i];
            g = 1.0 + 9.0 * s / nm1;
            f2 = g * (1.0 - std::sqrt(f1 / g));
            break;
        }
        case ZdtProblem::zdt2: {
            f1 = w[0];
            double s = 0.0;
            for (std::size_t i = 1; i < n; ++i) s += w[i];
            g = 1.0 + 9.0 * s / nm1;
            f2 = g * (1.0 - (f1 / g) * (f1 / g));
            break;
        }
        case ZdtProblem::zdt4: {
            f1 = w[0];
            double s = 0.0;
            for (std::size_t i = 1; i < n; ++i)
                s += w[i] * w[i] - 10.0 * std::cos(4.0 * M_PI * w[i]);
            g = 1.0 + 10.0 * nm1 + s;
            f2 = g * (1.0 - std::sqrt(f1 / g));
            break;
        }
        case ZdtProblem::zdt6: {
            double s6 = std::sin(6.0 * M_PI * w[0]);
            f1 = 1.0 - std::exp(-4.0 * w[0]) * s6 * s6 * s6 * s6 * s6 * s6;
            double s = 0.0;
            for (std::size_t i = 1; i < n; ++i) s += w[i];
            g = 1.0 + 9.0 * std::pow(s / nm1, 0.25);
            f2 = g * (1.0 - (f1 / g) * (f1 / g));
            break;
        }
        default:
            throw ContractError("zdt_eval: bad problem");
    }
    return {f1, f2};
}

// Analytic Pareto front f2*(f1), valid on the problem's f1 range.
inline double zdt_front_f2(ZdtProblem p, double f1) {
    switch (p) {
        case ZdtProblem::zdt1:
        case ZdtProblem::zdt4: return 1.0 - std::sqrt(f1);
        case ZdtProblem::zdt2:
        case ZdtProblem::zdt6: return 1.0 - f1 * f1;
    }
    return 0.0;
}

inline std::pair<double, double> zdt_f1_range(ZdtProblem p) {
    if (p == ZdtProblem::zdt6) return {0.2807753191, 1.0};
    return {0.0, 1.0};
}

// Mean vertical distance of a front's points from the analytic front; the
// standard convergence score for the ZDT acceptance runs.
inline double zdt_front_deviation(ZdtProblem p,
                                  const std::vector<std::vector<double>>& objs) {
    if (objs.empty()) throw ContractError("zdt_front_deviation: empty front");
    double s = 0.0;
    for (const auto& o : objs) {
        if (o.size() != 2) throw ContractError("zdt_front_deviation: needs 2 objectives");
        s += std::abs(o[1] - zdt_front_f2(p, o[0]));
    }
    return s / static_cast<double>(objs.size());
}

} // namespace dbm::evo
