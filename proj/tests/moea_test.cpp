#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rigaa/errors.hpp"
#include "rigaa/maze.hpp"
#include "rigaa/moea.hpp"
#include "rigaa/rng.hpp"

using namespace rigaa;
using namespace rigaa::moea;

namespace {

std::vector<Eigen::Vector2d> objs(
    std::initializer_list<std::pair<double, double>> points) {
  std::vector<Eigen::Vector2d> out;
  for (const auto& [a, b] : points) out.emplace_back(a, b);
  return out;
}

Individual with_obj(double f0, double f1, int rank = 0, double density = 0.0) {
  Individual ind;
  ind.chromosome = Chromosome::Zero(2, 1);
  ind.obj = {f0, f1};
  ind.rank = rank;
  ind.density = density;
  return ind;
}

}  // namespace

TEST_CASE("non-dominated sort splits simple fronts") {
  const auto fronts = non_dominated_sort(objs({{1, 1}, {2, 2}, {0, 3}}));
  REQUIRE(fronts.size() == 2);
  CHECK(fronts[0] == Front{0, 2});
  CHECK(fronts[1] == Front{1});

  const auto tied = non_dominated_sort(objs({{1, 1}, {1, 1}, {1, 1}}));
  REQUIRE(tied.size() == 1);
  CHECK(tied[0].size() == 3);
}

TEST_CASE("non-dominated sort matches the brute-force oracle") {
  Rng rng(19);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Eigen::Vector2d> points;
    const int n = 5 + static_cast<int>(rng.uniform_index(25));
    for (int i = 0; i < n; ++i)
      points.emplace_back(rng.uniform_int(0, 8), rng.uniform_int(0, 8));
    const auto fronts = non_dominated_sort(points);
    const auto oracle = oracles::brute_force_ranks(points);
    std::size_t assigned = 0;
    for (std::size_t f = 0; f < fronts.size(); ++f) {
      for (const std::size_t idx : fronts[f]) {
        CHECK(oracle[idx] == static_cast<int>(f));
        ++assigned;
      }
    }
    CHECK(assigned == points.size());
  }
}

TEST_CASE("crowding distance boundary and interior values") {
  const auto two = crowding_distance(objs({{0, 1}, {1, 0}}));
  CHECK(std::isinf(two[0]));
  CHECK(std::isinf(two[1]));

  const auto three =
      crowding_distance(objs({{0, 0}, {0.5, 0.5}, {1, 1}}));
  CHECK(std::isinf(three[0]));
  CHECK(three[1] == doctest::Approx(2.0));
  CHECK(std::isinf(three[2]));

  // hand-computed: see per-objective neighbour gaps over range 10
  const auto five =
      crowding_distance(objs({{0, 10}, {1, 8}, {3, 5}, {7, 1}, {10, 0}}));
  CHECK(std::isinf(five[0]));
  CHECK(five[1] == doctest::Approx(0.8));
  CHECK(five[2] == doctest::Approx(1.3));
  CHECK(five[3] == doctest::Approx(1.2));
  CHECK(std::isinf(five[4]));

  // a zero-range objective contributes nothing
  const auto flat = crowding_distance(objs({{0, 1}, {0.5, 1}, {1, 1}}));
  CHECK(flat[1] == doctest::Approx(1.0));
}

TEST_CASE("2d hypervolume of known sets") {
  CHECK(hypervolume_2d(objs({{1, 2}, {2, 1}}), {3, 3}) ==
        doctest::Approx(3.0));
  CHECK(hypervolume_2d(objs({{0, 4}, {1, 1}, {4, 0}}), {5, 5}) ==
        doctest::Approx(18.0));
  // dominated and out-of-reference points are ignored
  CHECK(hypervolume_2d(objs({{1, 2}, {2, 1}, {2, 2}, {4, 4}}), {3, 3}) ==
        doctest::Approx(3.0));
  CHECK(hypervolume_2d({}, {3, 3}) == 0.0);
}

TEST_CASE("hypervolume matches strip integration and Monte-Carlo") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Eigen::Vector2d> points;
    const int n = 3 + static_cast<int>(rng.uniform_index(10));
    for (int i = 0; i < n; ++i)
      points.emplace_back(rng.uniform() * 10.0, rng.uniform() * 10.0);
    const Eigen::Vector2d ref(11.0, 11.0);
    const double hv = hypervolume_2d(points, ref);
    CHECK(hv == doctest::Approx(oracles::hv_strip_integration(points, ref))
                    .epsilon(1e-9));
  }
  // one Monte-Carlo spot check (the acceptance suite runs the full battery)
  std::vector<Eigen::Vector2d> front;
  for (int i = 0; i < 8; ++i)
    front.emplace_back(rng.uniform() * 5.0, rng.uniform() * 5.0);
  const Eigen::Vector2d ref(6.0, 6.0);
  const double mc = oracles::hv_monte_carlo(front, ref, 200000, rng);
  CHECK(hypervolume_2d(front, ref) == doctest::Approx(mc).epsilon(0.02));
}

TEST_CASE("least hypervolume contributor agrees with leave-one-out") {
  const auto front = objs({{0, 4}, {1, 1}, {4, 0}});
  const Eigen::Vector2d ref(5, 5);
  const auto contributions = hypervolume_contributions(front, ref);
  const double total = hypervolume_2d(front, ref);
  for (std::size_t i = 0; i < front.size(); ++i) {
    std::vector<Eigen::Vector2d> without;
    for (std::size_t j = 0; j < front.size(); ++j)
      if (j != i) without.push_back(front[j]);
    CHECK(contributions[i] ==
          doctest::Approx(total - hypervolume_2d(without, ref))
              .epsilon(1e-12));
  }
  CHECK(contributions[0] == doctest::Approx(1.0));
  CHECK(contributions[1] == doctest::Approx(9.0));  // (1,1) is no least contributor
  CHECK(contributions[2] == doctest::Approx(1.0));
}

TEST_CASE("tournament pick prefers rank then density") {
  Rng rng(5);
  const Individual best = with_obj(0, 0, 0, 0.5);
  const Individual worse_rank = with_obj(0, 0, 1, 9.0);
  CHECK(&tournament_pick(best, worse_rank, rng) == &best);
  CHECK(&tournament_pick(worse_rank, best, rng) == &best);

  const Individual dense = with_obj(0, 0, 0, 2.0);
  const Individual sparse = with_obj(0, 0, 0, 0.5);
  CHECK(&tournament_pick(dense, sparse, rng) == &dense);
}

TEST_CASE("full ties are broken uniformly") {
  Rng rng(7);
  std::vector<Individual> population{with_obj(0, 0, 0, 1.0),
                                     with_obj(0, 0, 0, 1.0)};
  int first = 0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t)
    if (&tournament_select(population, rng) == &population[0]) ++first;
  CHECK(first > trials * 0.47);
  CHECK(first < trials * 0.53);
}

TEST_CASE("one-point crossover swaps tails") {
  // deterministic at the only admissible point k = 1... use 2-element parents
  Chromosome p1(2, 1);
  p1 << 1, 2;
  Chromosome p2(2, 1);
  p2 << 5, 6;
  Rng rng(1);
  const auto [c1, c2] = one_point_crossover(p1, p2, rng);
  CHECK(c1(0, 0) == 1);
  CHECK(c1(1, 0) == 6);
  CHECK(c2(0, 0) == 5);
  CHECK(c2(1, 0) == 2);

  Chromosome tiny(1, 1);
  tiny << 3;
  CHECK_THROWS_AS(one_point_crossover(tiny, p2, rng), ParentTooShort);
}

TEST_CASE("crossover point stays in range and children keep lengths") {
  Rng rng(13);
  Chromosome p1(4, 2);
  p1 << 1, 1, 2, 2, 3, 3, 4, 4;
  Chromosome p2(6, 2);
  p2 << 10, 10, 20, 20, 30, 30, 40, 40, 50, 50, 60, 60;
  for (int trial = 0; trial < 100; ++trial) {
    const auto [c1, c2] = one_point_crossover(p1, p2, rng);
    CHECK(c1.rows() == 6);
    CHECK(c2.rows() == 4);
    // prefix comes from the named parent
    CHECK(c1(0, 0) == 1);
    CHECK(c2(0, 0) == 10);
    // tails come from the other parent
    CHECK(c1(5, 0) == 60);
    CHECK(c2(3, 0) == 4);
  }

  // equal-length parents, Fig.-10 style ABCD x EFGH at k = 2
  Chromosome a(4, 1);
  a << 1, 2, 3, 4;
  Chromosome b(4, 1);
  b << 5, 6, 7, 8;
  bool saw_k2 = false;
  for (int trial = 0; trial < 200 && !saw_k2; ++trial) {
    const auto [c1, c2] = one_point_crossover(a, b, rng);
    if (c1(0, 0) == 1 && c1(1, 0) == 2 && c1(2, 0) == 7 && c1(3, 0) == 8) {
      CHECK(c2(0, 0) == 5);
      CHECK(c2(1, 0) == 6);
      CHECK(c2(2, 0) == 3);
      CHECK(c2(3, 0) == 4);
      saw_k2 = true;
    }
  }
  CHECK(saw_k2);
}

TEST_CASE("mutate applies exchange or change-of-variable") {
  const ScenarioSchema& schema = maze::maze_schema();
  Rng rng(11);
  Chromosome original = random_chromosome(schema, rng);
  int exchanges = 0;
  int changes = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Chromosome mutated = mutate(original, schema, rng);
    CHECK(matches_schema(mutated, schema));
    CHECK(mutated != original);
    // count differing cells: an exchange moves whole rows, a change touches 1
    int diff_cells = 0;
    for (Eigen::Index e = 0; e < original.rows(); ++e)
      for (Eigen::Index a = 0; a < original.cols(); ++a)
        if (mutated(e, a) != original(e, a)) ++diff_cells;
    if (diff_cells == 1) {
      ++changes;
    } else {
      ++exchanges;
      // row multiset preserved
      std::multiset<std::array<int, 3>> rows_a, rows_b;
      for (Eigen::Index e = 0; e < original.rows(); ++e) {
        rows_a.insert({original(e, 0), original(e, 1), original(e, 2)});
        rows_b.insert({mutated(e, 0), mutated(e, 1), mutated(e, 2)});
      }
      CHECK(rows_a == rows_b);
    }
  }
  CHECK(exchanges > 100);
  CHECK(changes > 100);
}

TEST_CASE("change-of-variable avoids the old value") {
  ScenarioSchema schema{"t", {AttributeSpec::integer("x", 5, 15)}, 1, 1, true};
  Chromosome c(1, 1);
  c << 5;
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const Chromosome m = mutate(c, schema, rng);
    CHECK(m(0, 0) >= 6);
    CHECK(m(0, 0) <= 15);
  }
}

TEST_CASE("survivor selection keeps pop_size and whole fronts") {
  std::vector<Individual> combined;
  for (int i = 0; i < 4; ++i)
    combined.push_back(with_obj(i, 3 - i));  // one non-dominated front
  for (int i = 0; i < 4; ++i) combined.push_back(with_obj(i + 10, 13 - i));
  const auto next = survivor_select(combined, 4, Algo::nsga2);
  REQUIRE(next.size() == 4);
  for (const Individual& ind : next) {
    CHECK(ind.rank == 0);
    CHECK(ind.obj[0] < 10.0);
  }
}

TEST_CASE("NSGA-II truncation drops the most crowded") {
  std::vector<Individual> front;
  front.push_back(with_obj(0, 10));
  front.push_back(with_obj(1, 8));    // crowding 0.8
  front.push_back(with_obj(3, 5));    // crowding 1.3
  front.push_back(with_obj(7, 1));    // crowding 1.2
  front.push_back(with_obj(10, 0));
  const auto next = survivor_select(front, 4, Algo::nsga2);
  REQUIRE(next.size() == 4);
  for (const Individual& ind : next)
    CHECK_FALSE((ind.obj[0] == 1.0 && ind.obj[1] == 8.0));
}

TEST_CASE("SMS-EMOA truncation removes least contributors iteratively") {
  // ref = (11, 11): contributions pинned by the leave-one-out oracle
  std::vector<Individual> front;
  front.push_back(with_obj(0, 4));
  front.push_back(with_obj(1, 1));
  front.push_back(with_obj(4, 0));
  front.push_back(with_obj(10, 10));  // dominated, second front
  const auto next = survivor_select(front, 3, Algo::smsemoa);
  REQUIRE(next.size() == 3);
  // front 0 fits entirely; the dominated point is cut
  for (const Individual& ind : next) CHECK(ind.rank == 0);

  // now force truncation inside front 0
  std::vector<Individual> tight;
  tight.push_back(with_obj(0, 4));
  tight.push_back(with_obj(1, 1));
  tight.push_back(with_obj(4, 0));
  const auto kept = survivor_select(tight, 2, Algo::smsemoa);
  REQUIRE(kept.size() == 2);
  // (1,1) contributes 9, the extremes 1 each with ref = max+1: drop one extreme
  bool has_middle = false;
  for (const Individual& ind : kept)
    if (ind.obj[0] == 1.0 && ind.obj[1] == 1.0) has_middle = true;
  CHECK(has_middle);
}

TEST_CASE("evolve with budget equal to pop_size keeps the initial pool") {
  maze::MazeDomain domain;
  Rng rng(23);
  MoeaConfig config;
  config.pop_size = 12;
  config.offspring_count = 6;
  config.eval_budget = 12;
  config.suite_size = 4;
  std::vector<Individual> initial;
  std::set<std::string> initial_keys;
  for (int i = 0; i < 12; ++i) {
    Individual ind;
    ind.chromosome = random_valid_scenario(domain, rng);
    initial_keys.insert(serialize_scenario(ind.chromosome, domain.schema()));
    initial.push_back(std::move(ind));
  }
  const SearchResult result = evolve(domain, initial, config, rng);
  CHECK(result.evaluations == 12);
  REQUIRE(result.suite.size() == 4);
  for (const Individual& ind : result.suite)
    CHECK(initial_keys.count(
        serialize_scenario(ind.chromosome, domain.schema())));
}

TEST_CASE("evolve logs a non-decreasing best and returns valid individuals") {
  maze::MazeDomain domain;
  Rng rng(31);
  MoeaConfig config;
  config.pop_size = 20;
  config.offspring_count = 10;
  config.eval_budget = 80;
  config.suite_size = 6;
  std::vector<Individual> initial;
  for (int i = 0; i < 20; ++i) {
    Individual ind;
    ind.chromosome = random_valid_scenario(domain, rng);
    initial.push_back(std::move(ind));
  }
  const SearchResult result = evolve(domain, initial, config, rng);
  CHECK(result.evaluations == 80);
  REQUIRE(result.log.size() >= 2);
  for (std::size_t k = 1; k < result.log.size(); ++k)
    CHECK(result.log[k].best_f1 >= result.log[k - 1].best_f1);
  for (const Individual& ind : result.suite) {
    CHECK(domain.validate(ind.chromosome).valid);
    CHECK(ind.fitness() > 0.0);
  }

  CHECK_THROWS_AS(evolve(domain, initial, MoeaConfig{.pop_size = 20,
                                                     .eval_budget = 10},
                         rng),
                  BudgetTooSmall);
}

TEST_CASE("evolve is deterministic under a fixed seed") {
  maze::MazeDomain domain;
  MoeaConfig config;
  config.pop_size = 10;
  config.offspring_count = 5;
  config.eval_budget = 30;
  config.suite_size = 4;

  const auto run = [&](int seed) {
    Rng rng(seed);
    std::vector<Individual> initial;
    for (int i = 0; i < 10; ++i) {
      Individual ind;
      ind.chromosome = random_valid_scenario(domain, rng);
      initial.push_back(std::move(ind));
    }
    return evolve(domain, initial, config, rng);
  };
  const SearchResult a = run(77);
  const SearchResult b = run(77);
  REQUIRE(a.suite.size() == b.suite.size());
  for (std::size_t k = 0; k < a.suite.size(); ++k) {
    CHECK(a.suite[k].chromosome == b.suite[k].chromosome);
    CHECK(a.suite[k].obj == b.suite[k].obj);
  }
}

TEST_CASE("random search returns every sample at minimal budget") {
  maze::MazeDomain domain;
  Rng rng(41);
  MoeaConfig config;
  config.pop_size = 8;
  config.offspring_count = 4;
  config.eval_budget = 8;
  config.suite_size = 8;
  config.algo = Algo::random;
  const SearchResult result = random_search(domain, config, rng);
  CHECK(result.suite.size() == 8);
  CHECK(result.evaluations == 8);
}

TEST_CASE("random search selection follows (rank, fitness)") {
  maze::MazeDomain domain;
  MoeaConfig config;
  config.pop_size = 10;
  config.offspring_count = 10;
  config.eval_budget = 40;
  config.suite_size = 10;
  config.algo = Algo::random;
  Rng rng(43);
  const SearchResult result = random_search(domain, config, rng);
  REQUIRE(result.suite.size() == 10);
  for (std::size_t k = 1; k < result.suite.size(); ++k) {
    const Individual& prev = result.suite[k - 1];
    const Individual& cur = result.suite[k];
    CHECK((prev.rank < cur.rank ||
           (prev.rank == cur.rank && prev.fitness() >= cur.fitness())));
  }
  // deterministic replay
  Rng replay(43);
  const SearchResult again = random_search(domain, config, replay);
  for (std::size_t k = 0; k < result.suite.size(); ++k)
    CHECK(result.suite[k].chromosome == again.suite[k].chromosome);
}
