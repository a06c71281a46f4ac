#include "rigaa/diversity.hpp"

#include <cmath>
#include <cstdlib>

#include "rigaa/errors.hpp"

namespace rigaa::diversity {
namespace {

bool elements_similar(const Chromosome& a, Eigen::Index ea, const Chromosome& b,
                      Eigen::Index eb, const SimilarityThresholds& th) {
  for (Eigen::Index k = 0; k < a.cols(); ++k)
    if (std::abs(a(ea, k) - b(eb, k)) > th[static_cast<std::size_t>(k)])
      return false;
  return true;
}

}  // namespace

double jaccard_distance(const Chromosome& ts1, const Chromosome& ts2,
                        const SimilarityThresholds& th) {
  if (ts1.cols() != ts2.cols() ||
      static_cast<Eigen::Index>(th.size()) != ts1.cols())
    throw SchemaMismatch("jaccard_distance: mismatched attribute counts");

  std::vector<bool> taken(static_cast<std::size_t>(ts2.rows()), false);
  Eigen::Index matched = 0;
  for (Eigen::Index i = 0; i < ts1.rows(); ++i) {
    for (Eigen::Index j = 0; j < ts2.rows(); ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (elements_similar(ts1, i, ts2, j, th)) {
        taken[static_cast<std::size_t>(j)] = true;
        ++matched;
        break;
      }
    }
  }
  const auto unions = static_cast<double>(ts1.rows() + ts2.rows() - matched);
  return 1.0 - static_cast<double>(matched) / unions;
}

double novelty_objective(const Chromosome& candidate,
                         const std::vector<const Chromosome*>& elite,
                         const SimilarityThresholds& th) {
  if (elite.empty()) return 1.0;
  double sum = 0.0;
  for (const Chromosome* member : elite)
    sum += jaccard_distance(candidate, *member, th);
  return sum / static_cast<double>(elite.size());
}

std::vector<Individual> dedupe(const std::vector<Individual>& population,
                               double threshold,
                               const SimilarityThresholds& th) {
  std::vector<Individual> retained;
  retained.reserve(population.size());
  for (const Individual& candidate : population) {
    bool duplicate = false;
    for (const Individual& keeper : retained) {
      if (jaccard_distance(keeper.chromosome, candidate.chromosome, th) <
          threshold) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) retained.push_back(candidate);
  }
  return retained;
}

double suite_diversity(const std::vector<const Chromosome*>& suite,
                       const SimilarityThresholds& th) {
  const std::size_t n = suite.size();
  if (n < 2) throw SuiteTooSmall("suite_diversity needs at least 2 scenarios");
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      sum += jaccard_distance(*suite[i], *suite[j], th);
  return 2.0 * sum / (static_cast<double>(n) * static_cast<double>(n - 1));
}

}  // namespace rigaa::diversity
