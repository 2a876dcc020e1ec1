#include "scoring/rank_tests.hpp"

#include "scoring/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace scoring {

namespace {

// Midranks of the pooled sample, plus the tie counts needed for the
// variance correction.
struct PooledRanks {
  std::vector<double> ranks; // pooled order, first n1 belong to sample a
  double tie_term = 0.0;     // sum of t^3 - t over tie groups
  bool has_ties = false;
};

PooledRanks pooled_midranks(const Eigen::Ref<const Eigen::VectorXd> &a,
                            const Eigen::Ref<const Eigen::VectorXd> &b) {
  const auto n1 = static_cast<std::size_t>(a.size());
  const auto n2 = static_cast<std::size_t>(b.size());
  std::vector<std::pair<double, std::size_t>> pooled;
  pooled.reserve(n1 + n2);
  for (std::size_t i = 0; i < n1; ++i) {
    pooled.emplace_back(a[static_cast<Eigen::Index>(i)], i);
  }
  for (std::size_t i = 0; i < n2; ++i) {
    pooled.emplace_back(b[static_cast<Eigen::Index>(i)], n1 + i);
  }
  std::sort(pooled.begin(), pooled.end());

  PooledRanks out;
  out.ranks.assign(n1 + n2, 0.0);
  std::size_t i = 0;
  while (i < pooled.size()) {
    std::size_t j = i;
    while (j < pooled.size() && pooled[j].first == pooled[i].first) {
      ++j;
    }
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      out.ranks[pooled[k].second] = midrank;
    }
    const auto t = static_cast<double>(j - i);
    if (j - i > 1) {
      out.has_ties = true;
      out.tie_term += t * t * t - t;
    }
    i = j;
  }
  return out;
}

// P(rank sum of the first sample <= w) by exact enumeration over all
// C(n1+n2, n1) equally likely rank assignments (tie-free case).
double exact_ranksum_cdf(int n1, int n2, double w) {
  const int total = n1 + n2;
  const int max_sum = total * (total + 1) / 2;
  // count[k][s]: number of k-subsets of {1..N} with rank sum s.
  std::vector<std::vector<double>> count(
      static_cast<std::size_t>(n1) + 1,
      std::vector<double>(static_cast<std::size_t>(max_sum) + 1, 0.0));
  count[0][0] = 1.0;
  for (int rank = 1; rank <= total; ++rank) {
    for (int k = std::min(rank, n1); k >= 1; --k) {
      for (int s = max_sum; s >= rank; --s) {
        count[static_cast<std::size_t>(k)][static_cast<std::size_t>(s)] +=
            count[static_cast<std::size_t>(k - 1)]
                 [static_cast<std::size_t>(s - rank)];
      }
    }
  }
  double below = 0.0;
  double all = 0.0;
  for (int s = 0; s <= max_sum; ++s) {
    const double c = count[static_cast<std::size_t>(n1)]
                          [static_cast<std::size_t>(s)];
    all += c;
    if (static_cast<double>(s) <= w + 1e-9) {
      below += c;
    }
  }
  return below / all;
}

} // namespace

double wilcoxon_rank_sum_pvalue(const Eigen::Ref<const Eigen::VectorXd> &a,
                                const Eigen::Ref<const Eigen::VectorXd> &b) {
  const auto n1 = static_cast<int>(a.size());
  const auto n2 = static_cast<int>(b.size());
  if (n1 < 1 || n2 < 1) {
    throw ComputeError("rank-sum test needs nonempty samples");
  }
  const PooledRanks pooled = pooled_midranks(a, b);
  double w = 0.0;
  for (int i = 0; i < n1; ++i) {
    w += pooled.ranks[static_cast<std::size_t>(i)];
  }

  if (n1 <= 20 && n2 <= 20 && !pooled.has_ties) {
    const double lower = exact_ranksum_cdf(n1, n2, w);
    const double upper =
        1.0 - exact_ranksum_cdf(n1, n2, w - 1.0); // P(W >= w), integer sums
    return std::min(1.0, 2.0 * std::min(lower, upper));
  }

  const double nd1 = n1, nd2 = n2, total = nd1 + nd2;
  const double mean = nd1 * (total + 1.0) / 2.0;
  const double var =
      nd1 * nd2 / 12.0 *
      (total + 1.0 - pooled.tie_term / (total * (total - 1.0)));
  if (var <= 0.0) {
    return 1.0; // all pooled values identical
  }
  // Continuity correction toward the mean.
  double z = w - mean;
  z -= std::copysign(std::min(0.5, std::abs(z)), z);
  z /= std::sqrt(var);
  return std::min(1.0, 2.0 * (1.0 - normal_cdf(std::abs(z))));
}

double permutation_pvalue(const Eigen::Ref<const Eigen::VectorXd> &a,
                          const Eigen::Ref<const Eigen::VectorXd> &b,
                          int n_resamples, std::uint64_t seed) {
  const auto n = a.size();
  if (n != b.size() || n < 1) {
    throw ComputeError("permutation test needs paired samples");
  }
  if (n_resamples < 1) {
    throw ComputeError("permutation test needs at least one resample");
  }
  const double sum_a = a.sum();
  const double sum_b = b.sum();
  if (sum_a <= 0.0 || sum_b <= 0.0) {
    throw ComputeError("permutation test on mean ratios needs positive sums");
  }
  const double observed = std::abs(std::log(sum_a / sum_b));

  std::mt19937_64 rng(seed);
  int extreme = 0;
  for (int r = 0; r < n_resamples; ++r) {
    double sa = 0.0, sb = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (rng() & 1ULL) {
        sa += b[i];
        sb += a[i];
      } else {
        sa += a[i];
        sb += b[i];
      }
    }
    if (std::abs(std::log(sa / sb)) >= observed - 1e-12) {
      ++extreme;
    }
  }
  return (1.0 + extreme) / (1.0 + n_resamples);
}

std::vector<double> holm_adjust(const std::vector<double> &pvalues) {
  const std::size_t m = pvalues.size();
  std::vector<std::size_t> order(m);
  for (std::size_t i = 0; i < m; ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t l, std::size_t r) {
    return pvalues[l] < pvalues[r];
  });
  std::vector<double> adjusted(m, 0.0);
  double running_max = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double scaled = static_cast<double>(m - i) * pvalues[order[i]];
    running_max = std::max(running_max, std::min(1.0, scaled));
    adjusted[order[i]] = running_max;
  }
  return adjusted;
}

} // namespace scoring
