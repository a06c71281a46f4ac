// diversity.hpp — Jaccard distance between scenarios, the novelty objective,
// duplicate removal, and suite-level diversity.
#ifndef RIGAA_DIVERSITY_HPP_
#define RIGAA_DIVERSITY_HPP_

#include <vector>

#include "rigaa/scenario.hpp"

namespace rigaa::diversity {

// One integer tolerance per schema attribute; 0 requires exact match.
using SimilarityThresholds = std::vector<int>;

// D = 1 - |intersection| / |union|. The intersection is built by greedy
// one-to-one matching: elements of ts1 in order, each taken by the first
// unmatched element of ts2 whose every attribute differs by at most the
// corresponding threshold.
double jaccard_distance(const Chromosome& ts1, const Chromosome& ts2,
                        const SimilarityThresholds& th);

// F2: mean Jaccard distance of the candidate to the elite scenarios
// (at most 5). Empty elite gives 1 by convention.
double novelty_objective(const Chromosome& candidate,
                         const std::vector<const Chromosome*>& elite,
                         const SimilarityThresholds& th);

// Scan in order; drop an individual whose distance to any retained earlier
// individual is below the threshold. Retained order is preserved.
std::vector<Individual> dedupe(const std::vector<Individual>& population,
                               double threshold,
                               const SimilarityThresholds& th);

// D_av: mean pairwise distance over all unordered pairs; throws
// SuiteTooSmall for fewer than two scenarios.
double suite_diversity(const std::vector<const Chromosome*>& suite,
                       const SimilarityThresholds& th);

}  // namespace rigaa::diversity

#endif  // RIGAA_DIVERSITY_HPP_
