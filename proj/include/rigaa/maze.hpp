// maze.hpp — maze scenarios: 40x40 occupancy grid, wall decoding, and the
// shortest-path surrogate fitness.
#ifndef RIGAA_MAZE_HPP_
#define RIGAA_MAZE_HPP_

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "rigaa/scenario.hpp"

namespace rigaa::maze {

inline constexpr int kGridSize = 40;
inline constexpr int kElementCount = 40;

// Attribute columns of a maze chromosome.
inline constexpr Eigen::Index kWallType = 0;  // 0 horizontal, 1 vertical
inline constexpr Eigen::Index kPosition = 1;  // [2, 38]
inline constexpr Eigen::Index kSize = 2;      // [5, 15]

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Row 0 is the bottom of the room; the border ring is always obstacle.
struct OccupancyGrid {
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> cells;
  Cell start{1, 1};
  Cell goal{kGridSize - 2, kGridSize - 2};

  bool blocked(int row, int col) const { return cells(row, col); }
};

struct PathResult {
  bool found = false;
  double length = 0.0;  // meters, unit cells
  std::vector<Cell> waypoints;
};

const ScenarioSchema& maze_schema();

// Element i places a wall of `size` cells: horizontal walls occupy row i
// starting at column `position`; vertical walls occupy column i starting at
// row `position`. Extents are clipped to the interior [1, 38]; start and
// goal cells are force-cleared after all walls are placed.
OccupancyGrid decode_grid(const Chromosome& chromosome);

// Path-existence check on the decoded grid. In strict mode the pre-clipping
// wall extents are also checked and flagged as "wall-out-of-bounds".
ValidityReport validate(const Chromosome& chromosome, bool strict = false);

// A* over free cells, 8-connected, octile heuristic. Step cost 1 for
// orthogonal moves and sqrt(2) for diagonal; a diagonal move is forbidden
// when both adjacent orthogonal cells are blocked. Never throws: found=false
// when no path exists.
PathResult shortest_path(const OccupancyGrid& grid);

// Shortest-path length of the decoded grid; throws InvalidScenario when the
// chromosome fails validate().
double surrogate_fitness(const Chromosome& chromosome);

// '#' obstacle, '.' free, 'S', 'G'; row 0 printed last (bottom).
std::string ascii_dump(const OccupancyGrid& grid);

class MazeDomain final : public Domain {
 public:
  const ScenarioSchema& schema() const override { return maze_schema(); }
  ValidityReport validate(const Chromosome& c) const override {
    return maze::validate(c);
  }
  double surrogate_fitness(const Chromosome& c) const override {
    return maze::surrogate_fitness(c);
  }
  std::optional<double> prefix_fitness(const Eigen::MatrixXi& elements,
                                       Eigen::Index count) const override;
  std::vector<int> similarity_thresholds() const override { return {0, 2, 2}; }
};

}  // namespace rigaa::maze

#endif  // RIGAA_MAZE_HPP_
