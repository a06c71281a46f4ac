#include "rigaa/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "rigaa/errors.hpp"

namespace rigaa::stats {
namespace {

// Midranks of the pooled sample (ties share the average rank).
std::vector<double> midranks(const std::vector<double>& pooled) {
  const std::size_t n = pooled.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

double u_from_rank_sum(double rank_sum_a, std::size_t n1) {
  return rank_sum_a - 0.5 * static_cast<double>(n1) *
                          static_cast<double>(n1 + 1);
}

double comb_count(std::size_t n, std::size_t k) {
  double c = 1.0;
  for (std::size_t i = 0; i < k; ++i)
    c = c * static_cast<double>(n - i) / static_cast<double>(i + 1);
  return c;
}

double exact_p_value(const std::vector<double>& ranks, std::size_t n1) {
  const std::size_t n = ranks.size();
  const std::size_t n2 = n - n1;
  const double mu = 0.5 * static_cast<double>(n1) * static_cast<double>(n2);
  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < n1; ++i) rank_sum_a += ranks[i];
  const double t_obs = std::abs(u_from_rank_sum(rank_sum_a, n1) - mu);

  // All C(n, n1) assignments of pooled ranks to group a.
  std::vector<std::size_t> subset(n1);
  std::iota(subset.begin(), subset.end(), 0u);
  long long extreme = 0;
  long long total = 0;
  while (true) {
    double sum = 0.0;
    for (const std::size_t idx : subset) sum += ranks[idx];
    if (std::abs(u_from_rank_sum(sum, n1) - mu) >= t_obs - 1e-9) ++extreme;
    ++total;
    // next combination
    std::size_t i = n1;
    while (i > 0 && subset[i - 1] == n - n1 + i - 1) --i;
    if (i == 0) break;
    ++subset[i - 1];
    for (std::size_t j = i; j < n1; ++j) subset[j] = subset[j - 1] + 1;
  }
  return static_cast<double>(extreme) / static_cast<double>(total);
}

double approx_p_value(const std::vector<double>& pooled,
                      const std::vector<double>& ranks, std::size_t n1) {
  const std::size_t n = pooled.size();
  const auto n2 = n - n1;
  const double dn1 = static_cast<double>(n1);
  const double dn2 = static_cast<double>(n2);
  const double dn = static_cast<double>(n);

  double rank_sum_a = 0.0;
  for (std::size_t i = 0; i < n1; ++i) rank_sum_a += ranks[i];
  const double u = u_from_rank_sum(rank_sum_a, n1);
  const double mu = 0.5 * dn1 * dn2;

  std::map<double, int> tie_counts;
  for (const double v : pooled) ++tie_counts[v];
  double tie_term = 0.0;
  for (const auto& [value, count] : tie_counts) {
    const double t = count;
    tie_term += t * t * t - t;
  }
  const double sigma2 =
      dn1 * dn2 / 12.0 * ((dn + 1.0) - tie_term / (dn * (dn - 1.0)));
  if (sigma2 <= 0.0) return 1.0;

  const double z =
      std::max(0.0, std::abs(u - mu) - 0.5) / std::sqrt(sigma2);
  return std::erfc(z / std::sqrt(2.0));
}

}  // namespace

SuiteMetrics suite_metrics(const std::vector<Individual>& suite,
                           const diversity::SimilarityThresholds& th) {
  if (suite.size() < 2) throw SuiteTooSmall("suite_metrics needs >= 2");
  SuiteMetrics m;
  std::vector<const Chromosome*> chromosomes;
  chromosomes.reserve(suite.size());
  for (const Individual& ind : suite) {
    m.f_avs += std::abs(ind.obj[0]);
    m.best_f1 = std::max(m.best_f1, std::abs(ind.obj[0]));
    chromosomes.push_back(&ind.chromosome);
  }
  m.f_avs /= static_cast<double>(suite.size());
  m.f_av = m.f_avs;
  m.d_av = diversity::suite_diversity(chromosomes, th);
  return m;
}

double mann_whitney_u(const std::vector<double>& a,
                      const std::vector<double>& b) {
  if (a.size() < 3 || b.size() < 3)
    throw SampleTooSmall("mann_whitney_u needs >= 3 per sample");

  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::vector<double> ranks = midranks(pooled);

  const std::size_t small = std::min(a.size(), b.size());
  if (small < 8 && comb_count(pooled.size(), small) <= 1e6) {
    if (a.size() <= b.size()) return exact_p_value(ranks, a.size());
    // enumerate over the smaller group; swap roles
    std::vector<double> swapped_ranks(ranks.begin() + a.size(), ranks.end());
    swapped_ranks.insert(swapped_ranks.end(), ranks.begin(),
                         ranks.begin() + a.size());
    return exact_p_value(swapped_ranks, b.size());
  }
  return approx_p_value(pooled, ranks, a.size());
}

double cliffs_delta(const std::vector<double>& a,
                    const std::vector<double>& b) {
  long long greater = 0;
  long long less = 0;
  for (const double x : a)
    for (const double y : b) {
      if (x > y) ++greater;
      if (x < y) ++less;
    }
  return static_cast<double>(greater - less) /
         (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

EffectMagnitude delta_magnitude(double delta) {
  const double d = std::abs(delta);
  if (d < 0.147) return EffectMagnitude::negligible;
  if (d < 0.33) return EffectMagnitude::small;
  if (d < 0.474) return EffectMagnitude::medium;
  return EffectMagnitude::large;
}

char magnitude_label(EffectMagnitude magnitude) {
  switch (magnitude) {
    case EffectMagnitude::negligible: return 'N';
    case EffectMagnitude::small: return 'S';
    case EffectMagnitude::medium: return 'M';
    case EffectMagnitude::large: return 'L';
  }
  return '?';
}

TestResult compare_samples(const std::vector<double>& a,
                           const std::vector<double>& b) {
  TestResult result;
  result.p_value = mann_whitney_u(a, b);
  result.delta = cliffs_delta(a, b);
  result.magnitude = delta_magnitude(result.delta);
  return result;
}

}  // namespace rigaa::stats
