#include "rigaa/moea.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "rigaa/diversity.hpp"
#include "rigaa/errors.hpp"

namespace rigaa::moea {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool dominates(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

// Ranks + per-front densities of the whole population, ordered best first.
void rank_population(std::vector<Individual>& population, Algo algo) {
  std::vector<Eigen::Vector2d> objs;
  objs.reserve(population.size());
  for (const Individual& ind : population) objs.push_back(ind.obj);
  const std::vector<Front> fronts = non_dominated_sort(objs);

  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<Eigen::Vector2d> front_objs;
    front_objs.reserve(fronts[f].size());
    for (const std::size_t idx : fronts[f]) front_objs.push_back(objs[idx]);
    std::vector<double> density;
    if (algo == Algo::smsemoa) {
      Eigen::Vector2d ref(-kInf, -kInf);
      for (const auto& o : objs) ref = ref.cwiseMax(o);
      ref.array() += 1.0;
      density = hypervolume_contributions(front_objs, ref);
    } else {
      density = crowding_distance(front_objs);
    }
    for (std::size_t k = 0; k < fronts[f].size(); ++k) {
      population[fronts[f][k]].rank = static_cast<int>(f);
      population[fronts[f][k]].density = density[k];
    }
  }
  std::stable_sort(population.begin(), population.end(),
                   [](const Individual& a, const Individual& b) {
                     if (a.rank != b.rank) return a.rank < b.rank;
                     return a.density > b.density;
                   });
}

std::vector<std::size_t> best_by_fitness(const std::vector<Individual>& pop,
                                         std::size_t count) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return pop[a].fitness() > pop[b].fitness();
                   });
  order.resize(std::min(count, order.size()));
  return order;
}

// (rank asc, |F1| desc) order used for the final suite.
std::vector<Individual> select_suite(std::vector<Individual> population,
                                     int suite_size) {
  std::stable_sort(population.begin(), population.end(),
                   [](const Individual& a, const Individual& b) {
                     if (a.rank != b.rank) return a.rank < b.rank;
                     return a.fitness() > b.fitness();
                   });
  if (static_cast<int>(population.size()) > suite_size)
    population.resize(static_cast<std::size_t>(suite_size));
  return population;
}

double suite_diversity_of(const std::vector<Individual>& population,
                          int suite_size,
                          const diversity::SimilarityThresholds& th) {
  std::vector<Individual> suite = select_suite(population, suite_size);
  if (suite.size() < 2) return 0.0;
  std::vector<const Chromosome*> chromosomes;
  chromosomes.reserve(suite.size());
  for (const Individual& ind : suite) chromosomes.push_back(&ind.chromosome);
  return diversity::suite_diversity(chromosomes, th);
}

struct OffspringFactory {
  const Domain& domain;
  const MoeaConfig& config;
  Rng& rng;

  Chromosome repaired(Chromosome child) const {
    for (int attempt = 0; attempt < 10; ++attempt) {
      if (domain.validate(child).valid) return child;
      child = mutate(child, domain.schema(), rng);
    }
    if (domain.validate(child).valid) return child;
    return random_valid_scenario(domain, rng);
  }

  std::vector<Individual> make(const std::vector<Individual>& pool,
                               long count) const {
    std::vector<Individual> out;
    out.reserve(static_cast<std::size_t>(count));
    while (static_cast<long>(out.size()) < count) {
      const Individual* p1 = &tournament_select(pool, rng);
      const Individual* p2 = &tournament_select(pool, rng);
      if (p1 == p2) p2 = &tournament_select(pool, rng);  // one re-draw

      Chromosome c1 = p1->chromosome;
      Chromosome c2 = p2->chromosome;
      if (rng.bernoulli(config.crossover_rate))
        std::tie(c1, c2) = one_point_crossover(p1->chromosome, p2->chromosome,
                                               rng);
      for (Chromosome* child : {&c1, &c2}) {
        if (static_cast<long>(out.size()) == count) break;
        Chromosome c = *child;
        if (rng.bernoulli(config.mutation_rate))
          c = mutate(c, domain.schema(), rng);
        Individual ind;
        ind.chromosome = repaired(std::move(c));
        ind.origin = Origin::offspring;
        out.push_back(std::move(ind));
      }
    }
    return out;
  }
};

}  // namespace

std::vector<Front> non_dominated_sort(
    const std::vector<Eigen::Vector2d>& objs) {
  const std::size_t n = objs.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<int> domination_count(n, 0);
  std::vector<Front> fronts(1);

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p == q) continue;
      if (dominates(objs[p], objs[q]))
        dominated[p].push_back(q);
      else if (dominates(objs[q], objs[p]))
        ++domination_count[p];
    }
    if (domination_count[p] == 0) fronts[0].push_back(p);
  }

  std::size_t f = 0;
  while (!fronts[f].empty()) {
    Front next;
    for (const std::size_t p : fronts[f]) {
      for (const std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) next.push_back(q);
      }
    }
    ++f;
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(
    const std::vector<Eigen::Vector2d>& front_objs) {
  const std::size_t n = front_objs.size();
  std::vector<double> distance(n, 0.0);
  if (n == 0) return distance;

  for (int m = 0; m < 2; ++m) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return front_objs[a][m] < front_objs[b][m];
                     });
    const double range =
        front_objs[order.back()][m] - front_objs[order.front()][m];
    distance[order.front()] = kInf;
    distance[order.back()] = kInf;
    if (range <= 0.0) continue;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      if (distance[order[k]] == kInf) continue;
      distance[order[k]] +=
          (front_objs[order[k + 1]][m] - front_objs[order[k - 1]][m]) / range;
    }
  }
  return distance;
}

double hypervolume_2d(const std::vector<Eigen::Vector2d>& points,
                      const Eigen::Vector2d& ref) {
  // Non-dominated points strictly inside the reference corner.
  std::vector<Eigen::Vector2d> box;
  for (const auto& p : points) {
    if (p[0] >= ref[0] || p[1] >= ref[1]) continue;
    bool dominated_by_other = false;
    for (const auto& q : points) {
      if (&q != &p && dominates(q, p)) {
        dominated_by_other = true;
        break;
      }
    }
    if (!dominated_by_other) box.push_back(p);
  }
  std::sort(box.begin(), box.end(),
            [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
              if (a[0] != b[0]) return a[0] < b[0];
              return a[1] < b[1];
            });
  box.erase(std::unique(box.begin(), box.end(),
                        [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                          return a[0] == b[0] && a[1] == b[1];
                        }),
            box.end());

  double volume = 0.0;
  for (std::size_t i = 0; i < box.size(); ++i) {
    const double width =
        (i + 1 < box.size() ? box[i + 1][0] : ref[0]) - box[i][0];
    volume += width * (ref[1] - box[i][1]);
  }
  return volume;
}

std::vector<double> hypervolume_contributions(
    const std::vector<Eigen::Vector2d>& front, const Eigen::Vector2d& ref) {
  const std::size_t n = front.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (front[a][0] != front[b][0])
                       return front[a][0] < front[b][0];
                     return front[a][1] < front[b][1];
                   });
  std::vector<double> contribution(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t i = order[k];
    const double next_f0 = (k + 1 < n) ? front[order[k + 1]][0] : ref[0];
    const double prev_f1 = (k > 0) ? front[order[k - 1]][1] : ref[1];
    contribution[i] = std::max(0.0, next_f0 - front[i][0]) *
                      std::max(0.0, prev_f1 - front[i][1]);
  }
  return contribution;
}

const Individual& tournament_pick(const Individual& a, const Individual& b,
                                  Rng& rng) {
  if (a.rank != b.rank) return a.rank < b.rank ? a : b;
  if (a.density != b.density) return a.density > b.density ? a : b;
  return rng.bernoulli(0.5) ? a : b;
}

const Individual& tournament_select(const std::vector<Individual>& population,
                                    Rng& rng) {
  const Individual& a = population[rng.uniform_index(population.size())];
  const Individual& b = population[rng.uniform_index(population.size())];
  return tournament_pick(a, b, rng);
}

std::pair<Chromosome, Chromosome> one_point_crossover(const Chromosome& p1,
                                                      const Chromosome& p2,
                                                      Rng& rng) {
  if (p1.rows() < 2 || p2.rows() < 2)
    throw ParentTooShort("one_point_crossover needs >= 2 elements");
  const int max_point = static_cast<int>(std::min(p1.rows(), p2.rows())) - 1;
  const Eigen::Index k = rng.uniform_int(1, max_point);

  Chromosome c1(p2.rows(), p1.cols());
  c1.topRows(k) = p1.topRows(k);
  c1.bottomRows(p2.rows() - k) = p2.bottomRows(p2.rows() - k);
  Chromosome c2(p1.rows(), p1.cols());
  c2.topRows(k) = p2.topRows(k);
  c2.bottomRows(p1.rows() - k) = p1.bottomRows(p1.rows() - k);
  return {std::move(c1), std::move(c2)};
}

Chromosome mutate(const Chromosome& individual, const ScenarioSchema& schema,
                  Rng& rng) {
  Chromosome out = individual;
  const auto rows = out.rows();
  if (rows >= 2 && rng.bernoulli(0.5)) {
    // exchange: two distinct elements swap wholesale
    const auto i = static_cast<Eigen::Index>(rng.uniform_index(
        static_cast<std::size_t>(rows)));
    auto j = static_cast<Eigen::Index>(
        rng.uniform_index(static_cast<std::size_t>(rows - 1)));
    if (j >= i) ++j;
    out.row(i).swap(out.row(j));
    return out;
  }
  // change of variable: one attribute resampled within its range
  const auto e = static_cast<Eigen::Index>(
      rng.uniform_index(static_cast<std::size_t>(rows)));
  const auto a = static_cast<Eigen::Index>(
      rng.uniform_index(static_cast<std::size_t>(out.cols())));
  const AttributeSpec& spec = schema.attributes[static_cast<std::size_t>(a)];
  if (spec.hi > spec.lo) {
    int value = rng.uniform_int(spec.lo, spec.hi - 1);
    if (value >= out(e, a)) ++value;  // guaranteed != old
    out(e, a) = value;
  }
  return out;
}

std::vector<Individual> survivor_select(std::vector<Individual> combined,
                                        int pop_size, Algo algo) {
  if (static_cast<int>(combined.size()) < pop_size)
    throw std::invalid_argument("survivor_select: combined set too small");

  std::vector<Eigen::Vector2d> objs;
  objs.reserve(combined.size());
  for (const Individual& ind : combined) objs.push_back(ind.obj);
  const std::vector<Front> fronts = non_dominated_sort(objs);

  Eigen::Vector2d ref(-kInf, -kInf);
  for (const auto& o : objs) ref = ref.cwiseMax(o);
  ref.array() += 1.0;

  std::vector<Individual> next;
  next.reserve(static_cast<std::size_t>(pop_size));
  for (std::size_t f = 0; f < fronts.size(); ++f) {
    std::vector<Eigen::Vector2d> front_objs;
    front_objs.reserve(fronts[f].size());
    for (const std::size_t idx : fronts[f]) front_objs.push_back(objs[idx]);

    const std::size_t room = static_cast<std::size_t>(pop_size) - next.size();
    if (fronts[f].size() <= room) {
      const std::vector<double> density =
          algo == Algo::smsemoa
              ? hypervolume_contributions(front_objs, ref)
              : crowding_distance(front_objs);
      for (std::size_t k = 0; k < fronts[f].size(); ++k) {
        Individual ind = std::move(combined[fronts[f][k]]);
        ind.rank = static_cast<int>(f);
        ind.density = density[k];
        next.push_back(std::move(ind));
      }
      if (next.size() == static_cast<std::size_t>(pop_size)) break;
      continue;
    }

    // Truncate the split front.
    std::vector<std::size_t> members = fronts[f];
    if (algo == Algo::smsemoa) {
      // Iteratively drop the least hypervolume contributor.
      std::vector<Eigen::Vector2d> current = front_objs;
      std::vector<std::size_t> alive(members.size());
      std::iota(alive.begin(), alive.end(), 0u);
      while (alive.size() > room) {
        std::vector<Eigen::Vector2d> alive_objs;
        alive_objs.reserve(alive.size());
        for (const std::size_t k : alive) alive_objs.push_back(front_objs[k]);
        const std::vector<double> contribution =
            hypervolume_contributions(alive_objs, ref);
        std::size_t worst = 0;
        for (std::size_t k = 1; k < contribution.size(); ++k)
          if (contribution[k] < contribution[worst]) worst = k;
        alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(worst));
      }
      std::vector<Eigen::Vector2d> kept_objs;
      for (const std::size_t k : alive) kept_objs.push_back(front_objs[k]);
      const std::vector<double> density =
          hypervolume_contributions(kept_objs, ref);
      for (std::size_t k = 0; k < alive.size(); ++k) {
        Individual ind = std::move(combined[members[alive[k]]]);
        ind.rank = static_cast<int>(f);
        ind.density = density[k];
        next.push_back(std::move(ind));
      }
    } else {
      const std::vector<double> density = crowding_distance(front_objs);
      std::vector<std::size_t> order(members.size());
      std::iota(order.begin(), order.end(), 0u);
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) {
                         return density[a] > density[b];
                       });
      for (std::size_t k = 0; k < room; ++k) {
        Individual ind = std::move(combined[members[order[k]]]);
        ind.rank = static_cast<int>(f);
        ind.density = density[order[k]];
        next.push_back(std::move(ind));
      }
    }
    break;
  }

  std::stable_sort(next.begin(), next.end(),
                   [](const Individual& a, const Individual& b) {
                     if (a.rank != b.rank) return a.rank < b.rank;
                     return a.density > b.density;
                   });
  return next;
}

SearchResult evolve(const Domain& domain,
                    std::vector<Individual> initial_population,
                    const MoeaConfig& config, Rng& rng) {
  if (config.eval_budget < config.pop_size)
    throw BudgetTooSmall("eval_budget below pop_size");
  if (static_cast<int>(initial_population.size()) != config.pop_size)
    throw std::invalid_argument("initial population must be pop_size");

  const diversity::SimilarityThresholds th = domain.similarity_thresholds();
  const auto started = std::chrono::steady_clock::now();
  const auto out_of_time = [&] {
    if (!config.time_budget_s) return false;
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - started;
    return elapsed.count() >= *config.time_budget_s;
  };

  SearchResult result;
  std::vector<Individual>& pop = initial_population;
  double best_f1 = 0.0;

  const auto evaluate = [&](std::vector<Individual>& batch,
                            const std::vector<const Chromosome*>& elite) {
    for (Individual& ind : batch) {
      ind.obj[0] = -domain.surrogate_fitness(ind.chromosome);
      ind.obj[1] =
          -diversity::novelty_objective(ind.chromosome, elite, th);
      best_f1 = std::max(best_f1, ind.fitness());
      ++result.evaluations;
    }
  };
  const auto elite_of = [&](const std::vector<Individual>& from) {
    std::vector<const Chromosome*> elite;
    for (const std::size_t idx : best_by_fitness(from, 5))
      elite.push_back(&from[idx].chromosome);
    return elite;
  };
  const auto log_row = [&] {
    double mean = 0.0;
    for (const Individual& ind : pop) mean += ind.fitness();
    mean /= static_cast<double>(pop.size());
    result.log.push_back({result.evaluations, best_f1, mean,
                          suite_diversity_of(pop, config.suite_size, th)});
  };

  // Initial evaluation: an F1-only pass seeds the elite set for F2.
  for (Individual& ind : pop) {
    ind.obj[0] = -domain.surrogate_fitness(ind.chromosome);
    best_f1 = std::max(best_f1, ind.fitness());
    ++result.evaluations;
  }
  {
    const auto elite = elite_of(pop);
    for (Individual& ind : pop)
      ind.obj[1] = -diversity::novelty_objective(ind.chromosome, elite, th);
  }
  rank_population(pop, config.algo);
  log_row();

  const OffspringFactory factory{domain, config, rng};
  while (result.evaluations < config.eval_budget && !out_of_time()) {
    const auto elite = elite_of(pop);
    std::vector<Individual> parents =
        diversity::dedupe(pop, config.dedupe_threshold, th);

    const long remaining = config.eval_budget - result.evaluations;
    const long batch = std::min<long>(config.offspring_count, remaining);
    std::vector<Individual> offspring = factory.make(parents, batch);
    evaluate(offspring, elite);

    std::vector<Individual> combined = std::move(parents);
    combined.insert(combined.end(),
                    std::make_move_iterator(offspring.begin()),
                    std::make_move_iterator(offspring.end()));
    while (static_cast<int>(combined.size()) < config.pop_size) {
      Individual filler;
      filler.chromosome = random_valid_scenario(domain, rng);
      filler.origin = Origin::random;
      filler.obj[0] = -domain.surrogate_fitness(filler.chromosome);
      filler.obj[1] =
          -diversity::novelty_objective(filler.chromosome, elite, th);
      best_f1 = std::max(best_f1, filler.fitness());
      ++result.evaluations;
      combined.push_back(std::move(filler));
    }

    pop = survivor_select(std::move(combined), config.pop_size, config.algo);
    log_row();
  }

  result.suite = select_suite(pop, config.suite_size);
  return result;
}

SearchResult random_search(const Domain& domain, const MoeaConfig& config,
                           Rng& rng) {
  if (config.eval_budget < config.suite_size)
    throw BudgetTooSmall("eval_budget below suite_size");
  const diversity::SimilarityThresholds th = domain.similarity_thresholds();

  SearchResult result;
  std::vector<Individual> samples;
  samples.reserve(static_cast<std::size_t>(config.eval_budget));
  double best_f1 = 0.0;
  double fitness_sum = 0.0;

  const auto log_row = [&] {
    // Diversity over the current fittest suite, mirroring the evolve cadence.
    std::vector<std::size_t> top = best_by_fitness(
        samples, static_cast<std::size_t>(config.suite_size));
    double d_av = 0.0;
    if (top.size() >= 2) {
      std::vector<const Chromosome*> chromosomes;
      for (const std::size_t idx : top)
        chromosomes.push_back(&samples[idx].chromosome);
      d_av = diversity::suite_diversity(chromosomes, th);
    }
    result.log.push_back({result.evaluations, best_f1,
                          fitness_sum / static_cast<double>(samples.size()),
                          d_av});
  };

  for (long i = 0; i < config.eval_budget; ++i) {
    Individual ind;
    ind.chromosome = random_valid_scenario(domain, rng);
    ind.origin = Origin::random;
    ind.obj[0] = -domain.surrogate_fitness(ind.chromosome);
    best_f1 = std::max(best_f1, ind.fitness());
    fitness_sum += ind.fitness();
    ++result.evaluations;
    samples.push_back(std::move(ind));
    const long k = i + 1;
    if (k == config.pop_size ||
        (k > config.pop_size &&
         (k - config.pop_size) % config.offspring_count == 0) ||
        k == config.eval_budget)
      log_row();
  }

  const auto elite = [&] {
    std::vector<const Chromosome*> out;
    for (const std::size_t idx : best_by_fitness(samples, 5))
      out.push_back(&samples[idx].chromosome);
    return out;
  }();
  for (Individual& ind : samples)
    ind.obj[1] = -diversity::novelty_objective(ind.chromosome, elite, th);

  // Non-dominated-then-fittest selection by front peeling; a full O(n^2)
  // sort over the whole sample set would dominate large budgets.
  std::vector<std::size_t> remaining(samples.size());
  std::iota(remaining.begin(), remaining.end(), 0u);
  std::stable_sort(remaining.begin(), remaining.end(),
                   [&](std::size_t a, std::size_t b) {
                     if (samples[a].obj[0] != samples[b].obj[0])
                       return samples[a].obj[0] < samples[b].obj[0];
                     return samples[a].obj[1] < samples[b].obj[1];
                   });
  int rank = 0;
  while (static_cast<int>(result.suite.size()) < config.suite_size &&
         !remaining.empty()) {
    std::vector<std::size_t> front;
    std::vector<std::size_t> rest;
    double min_f1 = kInf;
    double f0_of_min = kInf;
    for (const std::size_t idx : remaining) {
      const Eigen::Vector2d& o = samples[idx].obj;
      const bool nondominated =
          o[1] < min_f1 || (o[1] == min_f1 && o[0] == f0_of_min);
      if (nondominated) {
        front.push_back(idx);
        if (o[1] < min_f1) {
          min_f1 = o[1];
          f0_of_min = o[0];
        }
      } else {
        rest.push_back(idx);
      }
    }
    std::stable_sort(front.begin(), front.end(),
                     [&](std::size_t a, std::size_t b) {
                       return samples[a].fitness() > samples[b].fitness();
                     });
    for (const std::size_t idx : front) {
      if (static_cast<int>(result.suite.size()) == config.suite_size) break;
      Individual ind = samples[idx];
      ind.rank = rank;
      result.suite.push_back(std::move(ind));
    }
    remaining = std::move(rest);
    ++rank;
  }
  return result;
}

}  // namespace rigaa::moea
