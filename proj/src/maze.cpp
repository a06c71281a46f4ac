#include "rigaa/maze.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <utility>

#include "rigaa/errors.hpp"

namespace rigaa::maze {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;

constexpr int kNeighborOffsets[8][2] = {{1, 0},  {-1, 0}, {0, 1},  {0, -1},
                                        {1, 1},  {1, -1}, {-1, 1}, {-1, -1}};

int clip_interior(int v) { return std::clamp(v, 1, kGridSize - 2); }

// Octile distance: admissible for unit orthogonal / sqrt(2) diagonal costs.
double octile(const Cell& a, const Cell& b) {
  const int dr = std::abs(a.row - b.row);
  const int dc = std::abs(a.col - b.col);
  return (dr + dc) + (kSqrt2 - 2.0) * std::min(dr, dc);
}

bool step_allowed(const OccupancyGrid& grid, int row, int col, int dr,
                  int dc) {
  const int nr = row + dr;
  const int nc = col + dc;
  if (nr < 0 || nr >= kGridSize || nc < 0 || nc >= kGridSize) return false;
  if (grid.blocked(nr, nc)) return false;
  if (dr != 0 && dc != 0 && grid.blocked(row + dr, col) &&
      grid.blocked(row, col + dc))
    return false;  // corner squeeze between two blocked orthogonals
  return true;
}

}  // namespace

const ScenarioSchema& maze_schema() {
  static const ScenarioSchema schema{
      "maze-v1",
      {AttributeSpec::categorical("wall_type", 2),
       AttributeSpec::integer("position", 2, kGridSize - 2),
       AttributeSpec::integer("size", 5, 15)},
      kElementCount,
      kElementCount,
      true};
  return schema;
}

OccupancyGrid decode_grid(const Chromosome& chromosome) {
  if (!matches_schema(chromosome, maze_schema()))
    throw SchemaMismatch("chromosome does not match maze-v1");

  OccupancyGrid grid;
  grid.cells.setConstant(kGridSize, kGridSize, false);
  for (int i = 0; i < kGridSize; ++i) {
    grid.cells(0, i) = grid.cells(kGridSize - 1, i) = true;
    grid.cells(i, 0) = grid.cells(i, kGridSize - 1) = true;
  }

  for (Eigen::Index i = 0; i < chromosome.rows(); ++i) {
    const int position = chromosome(i, kPosition);
    const int size = chromosome(i, kSize);
    const int lo = clip_interior(position);
    const int hi = clip_interior(position + size - 1);
    if (chromosome(i, kWallType) == 0) {
      for (int col = lo; col <= hi; ++col)
        grid.cells(static_cast<int>(i), col) = true;
    } else {
      for (int row = lo; row <= hi; ++row)
        grid.cells(row, static_cast<int>(i)) = true;
    }
  }

  grid.cells(grid.start.row, grid.start.col) = false;
  grid.cells(grid.goal.row, grid.goal.col) = false;
  return grid;
}

ValidityReport validate(const Chromosome& chromosome, bool strict) {
  ValidityReport report;
  const OccupancyGrid grid = decode_grid(chromosome);

  if (strict) {
    for (Eigen::Index i = 0; i < chromosome.rows(); ++i) {
      const int end = chromosome(i, kPosition) + chromosome(i, kSize) - 1;
      if (end > kGridSize - 2) {
        report.flag("wall-out-of-bounds");
        break;
      }
    }
  }

  // BFS reachability over the same moves A* uses.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> seen =
      Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>::Constant(
          kGridSize, kGridSize, false);
  std::queue<Cell> frontier;
  frontier.push(grid.start);
  seen(grid.start.row, grid.start.col) = true;
  bool reached = false;
  while (!frontier.empty() && !reached) {
    const Cell cur = frontier.front();
    frontier.pop();
    for (const auto& off : kNeighborOffsets) {
      if (!step_allowed(grid, cur.row, cur.col, off[0], off[1])) continue;
      const Cell next{cur.row + off[0], cur.col + off[1]};
      if (seen(next.row, next.col)) continue;
      seen(next.row, next.col) = true;
      if (next == grid.goal) {
        reached = true;
        break;
      }
      frontier.push(next);
    }
  }
  if (!reached) report.flag("no-path");
  return report;
}

PathResult shortest_path(const OccupancyGrid& grid) {
  PathResult result;
  if (grid.blocked(grid.start.row, grid.start.col) ||
      grid.blocked(grid.goal.row, grid.goal.col))
    return result;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  Eigen::MatrixXd dist = Eigen::MatrixXd::Constant(kGridSize, kGridSize, kInf);
  Eigen::MatrixXi parent = Eigen::MatrixXi::Constant(kGridSize, kGridSize, -1);

  struct Node {
    double f;
    double g;
    int row;
    int col;
    bool operator>(const Node& o) const {
      if (f != o.f) return f > o.f;
      if (row != o.row) return row > o.row;
      return col > o.col;
    }
  };
  std::priority_queue<Node, std::vector<Node>, std::greater<Node>> open;

  dist(grid.start.row, grid.start.col) = 0.0;
  open.push({octile(grid.start, grid.goal), 0.0, grid.start.row,
             grid.start.col});

  while (!open.empty()) {
    const Node cur = open.top();
    open.pop();
    if (cur.g > dist(cur.row, cur.col)) continue;
    if (cur.row == grid.goal.row && cur.col == grid.goal.col) break;

    for (int k = 0; k < 8; ++k) {
      const int dr = kNeighborOffsets[k][0];
      const int dc = kNeighborOffsets[k][1];
      if (!step_allowed(grid, cur.row, cur.col, dr, dc)) continue;
      const double step = (dr != 0 && dc != 0) ? kSqrt2 : 1.0;
      const double g = cur.g + step;
      if (g < dist(cur.row + dr, cur.col + dc)) {
        dist(cur.row + dr, cur.col + dc) = g;
        parent(cur.row + dr, cur.col + dc) = k;
        open.push({g + octile({cur.row + dr, cur.col + dc}, grid.goal), g,
                   cur.row + dr, cur.col + dc});
      }
    }
  }

  if (!std::isfinite(dist(grid.goal.row, grid.goal.col))) return result;

  result.found = true;
  result.length = dist(grid.goal.row, grid.goal.col);
  Cell cur = grid.goal;
  result.waypoints.push_back(cur);
  while (!(cur == grid.start)) {
    const auto& off = kNeighborOffsets[parent(cur.row, cur.col)];
    cur = {cur.row - off[0], cur.col - off[1]};
    result.waypoints.push_back(cur);
  }
  std::reverse(result.waypoints.begin(), result.waypoints.end());
  return result;
}

double surrogate_fitness(const Chromosome& chromosome) {
  const ValidityReport report = validate(chromosome);
  if (!report.valid)
    throw InvalidScenario("maze scenario violates: " +
                          report.violated_constraints.front());
  return shortest_path(decode_grid(chromosome)).length;
}

std::string ascii_dump(const OccupancyGrid& grid) {
  std::string out;
  out.reserve((kGridSize + 1) * kGridSize);
  for (int row = kGridSize - 1; row >= 0; --row) {
    for (int col = 0; col < kGridSize; ++col) {
      const Cell here{row, col};
      if (here == grid.start)
        out += 'S';
      else if (here == grid.goal)
        out += 'G';
      else
        out += grid.blocked(row, col) ? '#' : '.';
    }
    out += '\n';
  }
  return out;
}

std::optional<double> MazeDomain::prefix_fitness(
    const Eigen::MatrixXi& elements, Eigen::Index count) const {
  // Unfilled elements are treated as obstacle-free: decode only the first
  // `count` walls on an otherwise empty grid.
  OccupancyGrid grid;
  grid.cells.setConstant(kGridSize, kGridSize, false);
  for (int i = 0; i < kGridSize; ++i) {
    grid.cells(0, i) = grid.cells(kGridSize - 1, i) = true;
    grid.cells(i, 0) = grid.cells(i, kGridSize - 1) = true;
  }
  for (Eigen::Index i = 0; i < count; ++i) {
    const int lo = clip_interior(elements(i, kPosition));
    const int hi =
        clip_interior(elements(i, kPosition) + elements(i, kSize) - 1);
    if (elements(i, kWallType) == 0) {
      for (int col = lo; col <= hi; ++col)
        grid.cells(static_cast<int>(i), col) = true;
    } else {
      for (int row = lo; row <= hi; ++row)
        grid.cells(row, static_cast<int>(i)) = true;
    }
  }
  grid.cells(grid.start.row, grid.start.col) = false;
  grid.cells(grid.goal.row, grid.goal.col) = false;

  const PathResult path = shortest_path(grid);
  if (!path.found) return std::nullopt;
  return path.length;
}

}  // namespace rigaa::maze
