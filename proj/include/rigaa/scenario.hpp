// scenario.hpp — problem-agnostic scenario representation.
//
// A scenario is an integer matrix with one row per scenario element and one
// column per attribute. Attribute ranges come from a ScenarioSchema; the
// semantics of a decoded scenario (grids, polylines, fitness) live in the
// domain modules.
#ifndef RIGAA_SCENARIO_HPP_
#define RIGAA_SCENARIO_HPP_

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "rigaa/rng.hpp"

namespace rigaa {

// rows = elements, cols = attributes
using Chromosome = Eigen::MatrixXi;

struct AttributeSpec {
  enum class Kind { categorical, integer };

  std::string name;
  Kind kind = Kind::integer;
  int lo = 0;
  int hi = 0;  // inclusive
  int category_count = 0;  // categorical only

  static AttributeSpec categorical(std::string name, int count) {
    return {std::move(name), Kind::categorical, 0, count - 1, count};
  }
  static AttributeSpec integer(std::string name, int lo, int hi) {
    return {std::move(name), Kind::integer, lo, hi, 0};
  }
  bool contains(int value) const { return value >= lo && value <= hi; }
};

struct ScenarioSchema {
  std::string id;  // "maze-v1", "road-v1"
  std::vector<AttributeSpec> attributes;
  Eigen::Index min_elements = 1;
  Eigen::Index max_elements = 1;
  bool fixed_length = true;

  Eigen::Index attribute_count() const {
    return static_cast<Eigen::Index>(attributes.size());
  }
};

struct ValidityReport {
  bool valid = true;
  std::vector<std::string> violated_constraints;

  static ValidityReport ok() { return {}; }
  void flag(std::string constraint) {
    valid = false;
    violated_constraints.push_back(std::move(constraint));
  }
};

enum class Origin { rl, random, offspring };

// A chromosome plus its search bookkeeping. Objectives are minimized:
// obj[0] = -(surrogate fitness), obj[1] = -F2 with F2 in [0,1].
struct Individual {
  Chromosome chromosome;
  Eigen::Vector2d obj = Eigen::Vector2d::Zero();
  int rank = 0;
  double density = 0.0;
  Origin origin = Origin::offspring;

  double fitness() const { return -obj[0]; }   // |F1|, the surrogate reward
  double novelty() const { return -obj[1]; }   // F2
};

// Interface every test-generation problem implements.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual const ScenarioSchema& schema() const = 0;
  virtual ValidityReport validate(const Chromosome& chromosome) const = 0;
  // Surrogate fitness R_s; throws InvalidScenario if validate() fails.
  virtual double surrogate_fitness(const Chromosome& chromosome) const = 0;
  // Validity + fitness of the first `count` elements of a partially built
  // scenario; nullopt when the prefix violates the constraints. Used by the
  // generation MDP, which needs a per-step reward.
  virtual std::optional<double> prefix_fitness(const Eigen::MatrixXi& elements,
                                               Eigen::Index count) const = 0;
  // Per-attribute tolerances for the Jaccard element matching.
  virtual std::vector<int> similarity_thresholds() const = 0;
};

// Uniform sampling within the schema's ranges; element count uniform in
// [min_elements, max_elements] unless the schema is fixed-length.
Chromosome random_chromosome(const ScenarioSchema& schema, Rng& rng);

// Resamples until domain.validate passes; throws GenerationExhausted after
// max_attempts invalid samples.
Chromosome random_valid_scenario(const Domain& domain, Rng& rng,
                                 int max_attempts = 200);

// Scenario record JSON: {"schema_id": ..., "elements": [[int,...],...]}.
std::string serialize_scenario(const Chromosome& chromosome,
                               const ScenarioSchema& schema, int indent = -1);
Chromosome deserialize_scenario(const std::string& record,
                                const ScenarioSchema& schema);

// Range check of every cell against the schema (no domain semantics).
bool matches_schema(const Chromosome& chromosome, const ScenarioSchema& schema);

}  // namespace rigaa

#endif  // RIGAA_SCENARIO_HPP_
