// moea.hpp — two-objective evolutionary engines (NSGA-II and SMS-EMOA
// survivor selection), the variation operators, and random search.
#ifndef RIGAA_MOEA_HPP_
#define RIGAA_MOEA_HPP_

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rigaa/rng.hpp"
#include "rigaa/scenario.hpp"

namespace rigaa::moea {

enum class Algo { nsga2, smsemoa, random };

struct MoeaConfig {
  int pop_size = 150;
  int offspring_count = 100;
  double crossover_rate = 0.9;
  double mutation_rate = 0.4;
  long eval_budget = 2000;
  std::optional<double> time_budget_s;
  int suite_size = 30;
  double dedupe_threshold = 0.2;
  Algo algo = Algo::nsga2;
};

// Indices of individuals sharing a dominance rank.
using Front = std::vector<std::size_t>;

// Fast non-dominated sorting; objectives minimized, front 0 is the
// non-dominated set.
std::vector<Front> non_dominated_sort(
    const std::vector<Eigen::Vector2d>& objs);

// NSGA-II density within one front: boundary points infinite, interior
// sum of normalized neighbour gaps; a zero-range objective contributes 0.
std::vector<double> crowding_distance(
    const std::vector<Eigen::Vector2d>& front_objs);

// Dominated 2D hypervolume w.r.t. the reference point (dominated points in
// the set are ignored).
double hypervolume_2d(const std::vector<Eigen::Vector2d>& points,
                      const Eigen::Vector2d& ref);

// Exclusive contribution of every point of a non-dominated front; used by
// the SMS-EMOA truncation sweep.
std::vector<double> hypervolume_contributions(
    const std::vector<Eigen::Vector2d>& front,
    const Eigen::Vector2d& ref);

// Binary tournament: lower rank, then higher density, then uniform.
const Individual& tournament_pick(const Individual& a, const Individual& b,
                                  Rng& rng);
const Individual& tournament_select(const std::vector<Individual>& population,
                                    Rng& rng);

// One-point crossover at k in [1, min(len)-1]; children swap tails.
// Throws ParentTooShort when either parent has fewer than 2 elements.
std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& p1,
                                                      const Chromosome& p2,
                                                      Rng& rng);

// Fair coin between the exchange operator (two elements swap wholesale) and
// change-of-variable (one attribute resampled within range, != old value).
Chromosome mutate(const Chromosome& individual, const ScenarioSchema& schema,
                  Rng& rng);

// (mu + lambda) truncation to pop_size: fill by fronts, truncate the last
// front by crowding distance (NSGA-II) or by iterative least-hypervolume-
// contributor removal (SMS-EMOA, ref = combined per-objective max + 1).
// The returned population is ordered by (rank, density desc).
std::vector<Individual> survivor_select(std::vector<Individual> combined,
                                        int pop_size, Algo algo);

struct ConvergenceRow {
  long evaluations = 0;
  double best_f1 = 0.0;   // best |F1| evaluated so far
  double mean_f1 = 0.0;   // mean |F1| of the current population
  double suite_diversity = 0.0;
};

struct SearchResult {
  std::vector<Individual> suite;
  std::vector<ConvergenceRow> log;
  long evaluations = 0;
};

// Algorithm main loop: evaluate, dedupe, vary, (mu + lambda) select, until
// the evaluation (or time) budget is exhausted. The suite holds the
// suite_size best individuals by (rank, then |F1|).
SearchResult evolve(const Domain& domain,
                    std::vector<Individual> initial_population,
                    const MoeaConfig& config, Rng& rng);

// Baseline: sample eval_budget valid scenarios and keep the
// non-dominated-then-fittest suite_size.
SearchResult random_search(const Domain& domain, const MoeaConfig& config,
                           Rng& rng);

}  // namespace rigaa::moea

#endif  // RIGAA_MOEA_HPP_
