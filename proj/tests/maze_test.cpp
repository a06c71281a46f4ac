#include <doctest.h>

#include <cmath>
#include <set>

#include "oracles.hpp"
#include "rigaa/errors.hpp"
#include "rigaa/maze.hpp"
#include "rigaa/rng.hpp"

using namespace rigaa;
using namespace rigaa::maze;

namespace {

constexpr double kFreeSpaceOptimum = 52.32590180780452;  // 37 * sqrt(2)

Chromosome uniform_walls(int type, int position, int size) {
  Chromosome c(kElementCount, 3);
  for (int i = 0; i < kElementCount; ++i) {
    c(i, kWallType) = type;
    c(i, kPosition) = position;
    c(i, kSize) = size;
  }
  return c;
}

// Independent re-decode of the documented wall rule, cell by cell.
Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> hand_decode(
    const Chromosome& c) {
  auto cells = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
                   kGridSize, kGridSize, false)
                   .eval();
  for (int i = 0; i < kGridSize; ++i) {
    cells(0, i) = cells(kGridSize - 1, i) = true;
    cells(i, 0) = cells(i, kGridSize - 1) = true;
  }
  for (int i = 0; i < kElementCount; ++i) {
    for (int k = 0; k < c(i, kSize); ++k) {
      const int at = c(i, kPosition) + k;
      if (at < 1 || at > kGridSize - 2) continue;
      if (c(i, kWallType) == 0)
        cells(i, at) = true;
      else
        cells(at, i) = true;
    }
  }
  cells(1, 1) = false;
  cells(kGridSize - 2, kGridSize - 2) = false;
  return cells;
}

}  // namespace

TEST_CASE("decode places horizontal walls row by row") {
  const OccupancyGrid grid = decode_grid(uniform_walls(0, 2, 5));
  for (int row = 1; row <= 38; ++row) {
    for (int col = 2; col <= 6; ++col) CHECK(grid.blocked(row, col));
    CHECK_FALSE(grid.blocked(row, 7));
  }
  CHECK_FALSE(grid.blocked(1, 1));    // start force-cleared
  CHECK_FALSE(grid.blocked(38, 38));  // goal free
}

TEST_CASE("decode clips vertical walls at the border") {
  Chromosome c = uniform_walls(0, 2, 5);
  c(10, kWallType) = 1;
  c(10, kPosition) = 35;
  c(10, kSize) = 15;
  const OccupancyGrid grid = decode_grid(c);
  for (int row = 35; row <= 38; ++row) CHECK(grid.blocked(row, 10));
  CHECK_FALSE(grid.blocked(34, 10));
}

TEST_CASE("decode matches the hand-decoded example layout") {
  // The paper-style 5-element sample (wall type, position, size) scaled to
  // the 40x40 schema, placed at elements 10..14.
  Chromosome c = uniform_walls(0, 2, 5);
  const int sample[5][3] = {
      {0, 28, 8}, {0, 12, 12}, {0, 26, 8}, {1, 18, 12}, {0, 10, 12}};
  for (int k = 0; k < 5; ++k) {
    c(10 + k, kWallType) = sample[k][0];
    c(10 + k, kPosition) = sample[k][1];
    c(10 + k, kSize) = sample[k][2];
  }
  const OccupancyGrid grid = decode_grid(c);
  const auto expected = hand_decode(c);
  for (int row = 0; row < kGridSize; ++row)
    for (int col = 0; col < kGridSize; ++col)
      CHECK(grid.blocked(row, col) == expected(row, col));

  // spot literals: horizontal wall of element 10 and vertical of element 13
  CHECK(grid.blocked(10, 28));
  CHECK(grid.blocked(10, 35));
  CHECK_FALSE(grid.blocked(10, 27));
  CHECK_FALSE(grid.blocked(10, 36));
  CHECK(grid.blocked(18, 13));
  CHECK(grid.blocked(29, 13));
  CHECK_FALSE(grid.blocked(30, 13));
}

TEST_CASE("validate accepts sparse mazes and flags total blockage") {
  CHECK(validate(uniform_walls(0, 2, 5)).valid);

  // Vertical walls in every column covering rows 18..22 sever the room.
  const Chromosome blocked = uniform_walls(1, 18, 5);
  const ValidityReport report = validate(blocked);
  CHECK_FALSE(report.valid);
  REQUIRE(report.violated_constraints.size() == 1);
  CHECK(report.violated_constraints[0] == "no-path");
}

TEST_CASE("clipped walls never violate the boundary constraint") {
  Chromosome c = uniform_walls(0, 2, 5);
  c(5, kWallType) = 1;
  c(5, kPosition) = 30;
  c(5, kSize) = 15;  // extends past the wall, clipped
  CHECK(validate(c).valid);
  const ValidityReport strict = validate(c, true);
  CHECK_FALSE(strict.valid);
  CHECK(strict.violated_constraints[0] == "wall-out-of-bounds");
}

TEST_CASE("shortest_path crosses an empty room diagonally") {
  OccupancyGrid grid;
  grid.cells.setConstant(kGridSize, kGridSize, false);
  for (int i = 0; i < kGridSize; ++i) {
    grid.cells(0, i) = grid.cells(kGridSize - 1, i) = true;
    grid.cells(i, 0) = grid.cells(i, kGridSize - 1) = true;
  }
  const PathResult path = shortest_path(grid);
  REQUIRE(path.found);
  CHECK(path.length == doctest::Approx(kFreeSpaceOptimum).epsilon(1e-12));
  CHECK(path.waypoints.front() == grid.start);
  CHECK(path.waypoints.back() == grid.goal);
}

TEST_CASE("shortest_path equals Dijkstra through a single gap") {
  // One full wall with a one-cell gap between start and goal.
  OccupancyGrid grid;
  grid.cells.setConstant(kGridSize, kGridSize, false);
  for (int i = 0; i < kGridSize; ++i) {
    grid.cells(0, i) = grid.cells(kGridSize - 1, i) = true;
    grid.cells(i, 0) = grid.cells(i, kGridSize - 1) = true;
  }
  for (int col = 1; col <= 38; ++col) grid.cells(20, col) = true;
  grid.cells(20, 31) = false;
  const PathResult path = shortest_path(grid);
  REQUIRE(path.found);
  CHECK(path.length ==
        doctest::Approx(oracles::dijkstra_length(grid)).epsilon(1e-12));
}

TEST_CASE("shortest_path reports unreachable goals") {
  OccupancyGrid grid;
  grid.cells.setConstant(kGridSize, kGridSize, true);
  grid.cells(1, 1) = false;
  grid.cells(38, 38) = false;
  const PathResult path = shortest_path(grid);
  CHECK_FALSE(path.found);
}

TEST_CASE("A* equals Dijkstra on random mazes") {
  Rng rng(17);
  int found = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Chromosome c = random_chromosome(maze_schema(), rng);
    const OccupancyGrid grid = decode_grid(c);
    const PathResult path = shortest_path(grid);
    const double oracle = oracles::dijkstra_length(grid);
    if (path.found) {
      ++found;
      CHECK(path.length == doctest::Approx(oracle).epsilon(1e-12));
    } else {
      CHECK(std::isinf(oracle));
    }
  }
  CHECK(found > 50);  // most random mazes are solvable
}

TEST_CASE("path waypoints are adjacent free cells") {
  Rng rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const OccupancyGrid grid =
        decode_grid(random_chromosome(maze_schema(), rng));
    const PathResult path = shortest_path(grid);
    if (!path.found) continue;
    for (std::size_t k = 0; k < path.waypoints.size(); ++k) {
      const Cell& cell = path.waypoints[k];
      CHECK_FALSE(grid.blocked(cell.row, cell.col));
      if (k > 0) {
        const Cell& prev = path.waypoints[k - 1];
        CHECK(std::abs(cell.row - prev.row) <= 1);
        CHECK(std::abs(cell.col - prev.col) <= 1);
        CHECK((cell.row != prev.row || cell.col != prev.col));
      }
    }
  }
}

TEST_CASE("adding obstacles never shortens the path") {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    OccupancyGrid grid = decode_grid(random_chromosome(maze_schema(), rng));
    const PathResult before = shortest_path(grid);
    if (!before.found) continue;
    // flip a random free interior cell
    for (int tries = 0; tries < 50; ++tries) {
      const int row = rng.uniform_int(1, 38);
      const int col = rng.uniform_int(1, 38);
      if (grid.blocked(row, col)) continue;
      if ((Cell{row, col} == grid.start) || (Cell{row, col} == grid.goal))
        continue;
      grid.cells(row, col) = true;
      break;
    }
    const PathResult after = shortest_path(grid);
    if (after.found) CHECK(after.length >= before.length - 1e-12);
  }
}

TEST_CASE("surrogate_fitness equals the decoded shortest path") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Chromosome c = random_valid_scenario(MazeDomain(), rng);
    const double fitness = surrogate_fitness(c);
    CHECK(fitness ==
          doctest::Approx(shortest_path(decode_grid(c)).length)
              .epsilon(1e-12));
    CHECK(fitness >= kFreeSpaceOptimum - 1e-9);
  }
}

TEST_CASE("surrogate_fitness on a serpentine maze matches Dijkstra") {
  // Alternating left- and right-anchored horizontal walls.
  Chromosome c = uniform_walls(0, 2, 5);
  for (int row = 4; row <= 36; row += 8) {
    c(row, kWallType) = 0;
    c(row, kPosition) = 2;
    c(row, kSize) = 15;
  }
  for (int row = 8; row <= 36; row += 8) {
    c(row, kWallType) = 0;
    c(row, kPosition) = 23;
    c(row, kSize) = 15;
  }
  REQUIRE(validate(c).valid);
  const double oracle = oracles::dijkstra_length(decode_grid(c));
  CHECK(surrogate_fitness(c) == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("surrogate_fitness rejects invalid scenarios") {
  CHECK_THROWS_AS(surrogate_fitness(uniform_walls(1, 18, 5)),
                  InvalidScenario);
}

TEST_CASE("ascii dump shows the endpoints") {
  const std::string dump = ascii_dump(decode_grid(uniform_walls(0, 2, 5)));
  CHECK(dump.find('S') != std::string::npos);
  CHECK(dump.find('G') != std::string::npos);
  CHECK(dump.find('#') != std::string::npos);
}

TEST_CASE("prefix fitness treats unfilled elements as free space") {
  MazeDomain domain;
  const Chromosome c = uniform_walls(1, 18, 5);  // fully blocking when complete
  CHECK(domain.prefix_fitness(c, 10).has_value());
  CHECK_FALSE(domain.prefix_fitness(c, 40).has_value());
  const auto empty_prefixish = domain.prefix_fitness(uniform_walls(0, 2, 5), 1);
  REQUIRE(empty_prefixish.has_value());
  CHECK(*empty_prefixish >= kFreeSpaceOptimum - 1e-9);
}
