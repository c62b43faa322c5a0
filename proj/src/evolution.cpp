#include "fuzzygeno/evolution.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace fuzzygeno {

double ga_fitness(const Chromosome& ch, const LabeledSet& data, const FuzzyParams& fp,
                  const std::vector<int>& allowed) {
    if (data.items.empty()) throw DataError("ga_fitness: empty dataset");

    std::vector<std::pair<FeatureVector, int>> features;
    std::vector<bool> seen(allowed.size(), false);
    for (const auto& item : data.items) {
        auto it = std::find(allowed.begin(), allowed.end(), item.label);
        if (it == allowed.end()) continue;
        seen[it - allowed.begin()] = true;
        features.emplace_back(extract_features(item.image, ch, fp), item.label);
    }
    for (std::size_t i = 0; i < allowed.size(); ++i)
        if (!seen[i])
            throw DataError("ga_fitness: no samples of class " + std::to_string(allowed[i]));

    ModelSet ms = build_models(features, ch, fp);
    long correct = 0;
    for (const auto& [vec, label] : features)
        if (classify(vec, ms, allowed).label == label) ++correct;
    return static_cast<double>(correct) / static_cast<double>(features.size());
}

namespace {

// Sort, dedupe, pin endpoints, then push the cut count into bounds by
// deleting or inserting random interior cuts.
std::vector<int> repair_cuts(std::vector<int> cuts, int lo, int hi, Rng& rng,
                             const CutBounds& bounds) {
    cuts.push_back(lo);
    cuts.push_back(hi);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::erase_if(cuts, [&](int c) { return c < lo || c > hi; });

    while (static_cast<int>(cuts.size()) > bounds.max_cuts) {
        int i = rng.uniform_int(1, static_cast<int>(cuts.size()) - 2);
        cuts.erase(cuts.begin() + i);
    }
    while (static_cast<int>(cuts.size()) < bounds.min_cuts) {
        std::vector<int> free;
        for (int c = lo + 1; c < hi; ++c)
            if (!std::binary_search(cuts.begin(), cuts.end(), c)) free.push_back(c);
        if (free.empty()) break;  // region physically too small; caller validated parents
        int c = free[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(free.size()) - 1))];
        cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), c), c);
    }
    return cuts;
}

void split_part(const std::vector<int>& a, const std::vector<int>& b, int x,
                std::vector<int>& child1, std::vector<int>& child2) {
    child1.clear();
    child2.clear();
    for (int c : a) (c < x ? child1 : child2).push_back(c);
    for (int c : b) (c < x ? child2 : child1).push_back(c);
}

}  // namespace

std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               int h_split, int v_split, Rng& rng,
                                               const CutBounds& bounds) {
    if (!(a.region == b.region)) throw DataError("crossover: region mismatch");

    Chromosome c1, c2;
    c1.region = c2.region = a.region;

    std::vector<int> h1, h2, v1, v2;
    split_part(a.h_cuts, b.h_cuts, h_split, h1, h2);
    split_part(a.v_cuts, b.v_cuts, v_split, v1, v2);

    c1.h_cuts = repair_cuts(std::move(h1), a.region.top, a.region.bottom, rng, bounds);
    c2.h_cuts = repair_cuts(std::move(h2), a.region.top, a.region.bottom, rng, bounds);
    c1.v_cuts = repair_cuts(std::move(v1), a.region.left, a.region.right, rng, bounds);
    c2.v_cuts = repair_cuts(std::move(v2), a.region.left, a.region.right, rng, bounds);
    return {std::move(c1), std::move(c2)};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            const CutBounds& bounds) {
    if (!(a.region == b.region)) throw DataError("crossover: region mismatch");
    int h_split = rng.uniform_int(a.region.top + 1, a.region.bottom);
    int v_split = rng.uniform_int(a.region.left + 1, a.region.right);
    return crossover_at(a, b, h_split, v_split, rng, bounds);
}

namespace {

struct Move {
    enum Kind { Shift, Insert, Delete } kind;
    bool horizontal;
};

std::vector<int> interior_free(const std::vector<int>& cuts, int lo, int hi) {
    std::vector<int> free;
    for (int c = lo + 1; c < hi; ++c)
        if (!std::binary_search(cuts.begin(), cuts.end(), c)) free.push_back(c);
    return free;
}

bool shift_possible(const std::vector<int>& cuts) {
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i)
        if (cuts[i + 1] - cuts[i] > 1 || cuts[i] - cuts[i - 1] > 1) return true;
    return false;
}

void apply_shift(std::vector<int>& cuts, Rng& rng) {
    // (cut index, signed delta) pairs that keep the sequence strictly increasing
    std::vector<std::pair<std::size_t, int>> options;
    for (std::size_t i = 1; i + 1 < cuts.size(); ++i)
        for (int d = 1; d <= 3; ++d) {
            if (cuts[i] + d < cuts[i + 1]) options.emplace_back(i, d);
            if (cuts[i] - d > cuts[i - 1]) options.emplace_back(i, -d);
        }
    if (options.empty()) return;
    auto [i, d] = options[static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<int>(options.size()) - 1))];
    cuts[i] += d;
}

}  // namespace

Chromosome mutate(const Chromosome& ch, Rng& rng, const CutBounds& bounds) {
    std::vector<Move> legal;
    auto collect = [&](const std::vector<int>& cuts, int lo, int hi, bool horizontal) {
        int n = static_cast<int>(cuts.size());
        if (n > 2 && shift_possible(cuts)) legal.push_back({Move::Shift, horizontal});
        if (n < bounds.max_cuts && !interior_free(cuts, lo, hi).empty())
            legal.push_back({Move::Insert, horizontal});
        if (n > bounds.min_cuts && n > 2) legal.push_back({Move::Delete, horizontal});
    };
    collect(ch.h_cuts, ch.region.top, ch.region.bottom, true);
    collect(ch.v_cuts, ch.region.left, ch.region.right, false);
    if (legal.empty()) return ch;

    Move move = legal[static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(legal.size()) - 1))];
    Chromosome out = ch;
    std::vector<int>& cuts = move.horizontal ? out.h_cuts : out.v_cuts;
    int lo = move.horizontal ? ch.region.top : ch.region.left;
    int hi = move.horizontal ? ch.region.bottom : ch.region.right;

    switch (move.kind) {
        case Move::Shift:
            apply_shift(cuts, rng);
            break;
        case Move::Insert: {
            auto free = interior_free(cuts, lo, hi);
            int c = free[static_cast<std::size_t>(
                rng.uniform_int(0, static_cast<int>(free.size()) - 1))];
            cuts.insert(std::upper_bound(cuts.begin(), cuts.end(), c), c);
            break;
        }
        case Move::Delete: {
            int i = rng.uniform_int(1, static_cast<int>(cuts.size()) - 2);
            cuts.erase(cuts.begin() + i);
            break;
        }
    }
    return out;
}

namespace {

std::size_t tournament(const std::vector<Individual>& pop, int k, Rng& rng) {
    std::size_t best = static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
    for (int i = 1; i < k; ++i) {
        std::size_t cand =
            static_cast<std::size_t>(rng.uniform_int(0, static_cast<int>(pop.size()) - 1));
        if (pop[cand].fitness > pop[best].fitness) best = cand;
    }
    return best;
}

std::vector<std::size_t> rank_by_fitness(const std::vector<Individual>& pop) {
    std::vector<std::size_t> order(pop.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return pop[a].fitness > pop[b].fitness; });
    return order;
}

}  // namespace

std::pair<Chromosome, EvolutionTrace> evolve(const LabeledSet& data, const Rect& region,
                                             const GAConfig& cfg, const FuzzyParams& fp,
                                             const std::vector<int>& allowed,
                                             const PopulationObserver& observer) {
    if (cfg.population_size < 2) throw DataError("evolve: population_size must be >= 2");
    if (cfg.elite_count >= cfg.population_size)
        throw DataError("evolve: elite_count must be below population_size");
    if (cfg.tournament_size < 1) throw DataError("evolve: tournament_size must be >= 1");
    if (cfg.crossover_prob < 0 || cfg.crossover_prob > 1 || cfg.mutation_prob < 0 ||
        cfg.mutation_prob > 1)
        throw DataError("evolve: probabilities must lie in [0,1]");

    Rng rng(cfg.seed);
    std::vector<Individual> pop(static_cast<std::size_t>(cfg.population_size));
    for (auto& ind : pop) ind.chromosome = random_chromosome(region, cfg.cut_bounds, rng);
    for (auto& ind : pop) ind.fitness = ga_fitness(ind.chromosome, data, fp, allowed);

    EvolutionTrace trace;
    Individual best_ever;
    double best_fitness = -1.0;
    int stall = 0;

    auto record = [&](int gen) {
        double sum = 0.0;
        std::size_t best_idx = 0;
        for (std::size_t i = 0; i < pop.size(); ++i) {
            sum += pop[i].fitness;
            if (pop[i].fitness > pop[best_idx].fitness) best_idx = i;
        }
        if (pop[best_idx].fitness > best_fitness) {
            best_ever = pop[best_idx];
            best_fitness = best_ever.fitness;
            stall = 0;
        } else {
            ++stall;
        }
        trace.push_back({gen, best_fitness, sum / static_cast<double>(pop.size()),
                         best_ever.chromosome});
        if (observer) observer(gen, pop);
    };

    record(0);
    for (int gen = 1; gen <= cfg.max_generations; ++gen) {
        if (cfg.stall_generations > 0 && stall >= cfg.stall_generations) break;

        std::vector<Individual> next;
        next.reserve(pop.size());
        for (std::size_t i : rank_by_fitness(pop)) {
            if (static_cast<int>(next.size()) >= cfg.elite_count) break;
            next.push_back(pop[i]);
        }
        while (next.size() < pop.size()) {
            const Chromosome& p1 = pop[tournament(pop, cfg.tournament_size, rng)].chromosome;
            const Chromosome& p2 = pop[tournament(pop, cfg.tournament_size, rng)].chromosome;
            Chromosome c1 = p1, c2 = p2;
            if (rng.bernoulli(cfg.crossover_prob))
                std::tie(c1, c2) = crossover(p1, p2, rng, cfg.cut_bounds);
            if (rng.bernoulli(cfg.mutation_prob)) c1 = mutate(c1, rng, cfg.cut_bounds);
            if (rng.bernoulli(cfg.mutation_prob)) c2 = mutate(c2, rng, cfg.cut_bounds);
            next.push_back({std::move(c1), 0.0});
            if (next.size() < pop.size()) next.push_back({std::move(c2), 0.0});
        }
        pop = std::move(next);
        // elites keep their fitness; offspring are re-evaluated
        for (std::size_t i = static_cast<std::size_t>(cfg.elite_count); i < pop.size(); ++i)
            pop[i].fitness = ga_fitness(pop[i].chromosome, data, fp, allowed);
        record(gen);
    }
    return {best_ever.chromosome, std::move(trace)};
}

std::string trace_to_tsv(const EvolutionTrace& trace) {
    std::ostringstream out;
    out << "generation\tbest_fitness\tmean_fitness\n";
    for (const auto& g : trace)
        out << g.generation << '\t' << g.best_fitness << '\t' << g.mean_fitness << '\n';
    return out.str();
}

}  // namespace fuzzygeno
