#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fuzzygeno/classifier.hpp"
#include "fuzzygeno/imaging.hpp"
#include "fuzzygeno/partitions.hpp"

namespace fuzzygeno {

struct GAConfig {
    int population_size = 50;
    int max_generations = 100;
    int stall_generations = 20;  // <= 0 disables stall termination
    int tournament_size = 3;
    double crossover_prob = 0.8;
    double mutation_prob = 0.1;
    int elite_count = 2;
    CutBounds cut_bounds{};
    std::uint64_t seed = 0;
};

struct Individual {
    Chromosome chromosome;
    double fitness = 0.0;
};

struct GenerationStats {
    int generation = 0;
    double best_fitness = 0.0;
    double mean_fitness = 0.0;
    Chromosome best;
};

using EvolutionTrace = std::vector<GenerationStats>;

// Resubstitution recognition rate of the classifier induced by the chromosome
// over the samples of the allowed classes. Deterministic, draw-free.
double ga_fitness(const Chromosome& ch, const LabeledSet& data, const FuzzyParams& fp,
                  const std::vector<int>& allowed);

// Coordinate-split crossover plus repair; both children valid.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b, Rng& rng,
                                            const CutBounds& bounds);

// Same, with the per-part split coordinates fixed (rng only feeds the repair).
std::pair<Chromosome, Chromosome> crossover_at(const Chromosome& a, const Chromosome& b,
                                               int h_split, int v_split, Rng& rng,
                                               const CutBounds& bounds);

// One of {shift a cut, insert a cut, delete a cut}, uniform over the legal
// moves; returns the input unchanged if no move is legal.
Chromosome mutate(const Chromosome& ch, Rng& rng, const CutBounds& bounds);

using PopulationObserver = std::function<void(int generation, const std::vector<Individual>&)>;

std::pair<Chromosome, EvolutionTrace> evolve(const LabeledSet& data, const Rect& region,
                                             const GAConfig& cfg, const FuzzyParams& fp,
                                             const std::vector<int>& allowed,
                                             const PopulationObserver& observer = {});

// generation \t best_fitness \t mean_fitness rows.
std::string trace_to_tsv(const EvolutionTrace& trace);

}  // namespace fuzzygeno
