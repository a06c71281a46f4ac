// errors.hpp — exception types shared across the workbench.
#ifndef RIGAA_ERRORS_HPP_
#define RIGAA_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace rigaa {

struct SchemaMismatch : std::runtime_error {
  explicit SchemaMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidScenario : std::runtime_error {
  explicit InvalidScenario(const std::string& what) : std::runtime_error(what) {}
};

struct GenerationExhausted : std::runtime_error {
  explicit GenerationExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateGeometry : std::runtime_error {
  explicit DegenerateGeometry(const std::string& what) : std::runtime_error(what) {}
};

struct ParentTooShort : std::runtime_error {
  explicit ParentTooShort(const std::string& what) : std::runtime_error(what) {}
};

struct BudgetTooSmall : std::runtime_error {
  explicit BudgetTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct SuiteTooSmall : std::runtime_error {
  explicit SuiteTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct SampleTooSmall : std::runtime_error {
  explicit SampleTooSmall(const std::string& what) : std::runtime_error(what) {}
};

struct EpisodeFinished : std::runtime_error {
  explicit EpisodeFinished(const std::string& what) : std::runtime_error(what) {}
};

struct NonFiniteLoss : std::runtime_error {
  explicit NonFiniteLoss(const std::string& what) : std::runtime_error(what) {}
};

struct CorruptPolicyFile : std::runtime_error {
  explicit CorruptPolicyFile(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace rigaa

#endif  // RIGAA_ERRORS_HPP_
