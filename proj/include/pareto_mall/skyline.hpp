#pragma once

// Skyline kernels over dense point matrices.
//
// Every kernel works in minimize-everything form: row i of the matrix is one
// point whose values have already been oriented (MAX dimensions negated), so
// a dominates b iff a <= b componentwise and a < b somewhere. Results are row
// indices in ascending order.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pareto_mall/error.hpp"

namespace pareto_mall::skyline {

template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <typename Scalar>
using ScoreVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

inline constexpr std::size_t kDefaultWindowCapacity = 64;
inline constexpr std::size_t kDefaultDncBaseCase = 32;

/// Work counters. One pairwise comparison counts as one dominance test,
/// whether it is checked in one direction or both.
struct Stats {
  std::uint64_t dominance_tests = 0;
  std::size_t passes = 0;
};

enum class Relation { Incomparable, Dominates, DominatedBy, Equal };

template <typename DerivedA, typename DerivedB>
bool dominates(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  eigen_assert(a.size() == b.size());
  bool strict = false;
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k) > b(k)) return false;
    if (a(k) < b(k)) strict = true;
  }
  return strict;
}

/// Both directions of the dominance test in a single sweep.
template <typename DerivedA, typename DerivedB>
Relation compare(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  eigen_assert(a.size() == b.size());
  bool a_better = false;
  bool b_better = false;
  for (Index k = 0; k < a.size(); ++k) {
    if (a(k) < b(k)) {
      a_better = true;
    } else if (b(k) < a(k)) {
      b_better = true;
    }
    if (a_better && b_better) return Relation::Incomparable;
  }
  if (a_better) return Relation::Dominates;
  if (b_better) return Relation::DominatedBy;
  return Relation::Equal;
}

namespace detail {

inline void count(Stats* stats) {
  if (stats != nullptr) ++stats->dominance_tests;
}

template <typename Derived>
std::vector<Index> brute_force(const Eigen::MatrixBase<Derived>& points,
                               std::span<const Index> subset, Stats* stats) {
  std::vector<Index> kept;
  for (Index i : subset) {
    bool dominated = false;
    for (Index j : subset) {
      if (i == j) continue;
      count(stats);
      if (dominates(points.row(j), points.row(i))) {
        dominated = true;
        break;
      }
    }
    if (!dominated) kept.push_back(i);
  }
  return kept;
}

template <typename Derived>
std::vector<Index> dnc_recurse(const Eigen::MatrixBase<Derived>& points, std::vector<Index> group,
                               std::size_t base_case, Stats* stats) {
  if (group.size() <= base_case) return brute_force(points, group, stats);

  const auto mid = group.begin() + static_cast<std::ptrdiff_t>(group.size() / 2);
  std::nth_element(group.begin(), mid, group.end(), [&](Index a, Index b) {
    const auto va = points(a, 0);
    const auto vb = points(b, 0);
    return va < vb || (va == vb && a < b);
  });
  std::vector<Index> left(group.begin(), mid);
  std::vector<Index> right(mid, group.end());

  const std::vector<Index> left_sky = dnc_recurse(points, std::move(left), base_case, stats);
  const std::vector<Index> right_sky = dnc_recurse(points, std::move(right), base_case, stats);

  // Ties on the split value mean either half can dominate the other.
  auto survivors = [&](const std::vector<Index>& from, const std::vector<Index>& against,
                       std::vector<Index>& out) {
    for (Index i : from) {
      bool dominated = false;
      for (Index j : against) {
        count(stats);
        if (dominates(points.row(j), points.row(i))) {
          dominated = true;
          break;
        }
      }
      if (!dominated) out.push_back(i);
    }
  };
  std::vector<Index> merged;
  merged.reserve(left_sky.size() + right_sky.size());
  survivors(left_sky, right_sky, merged);
  survivors(right_sky, left_sky, merged);
  return merged;
}

}  // namespace detail

/// Exhaustive pairwise check; the reference every other kernel must match.
template <typename Derived>
std::vector<Index> oracle(const Eigen::MatrixBase<Derived>& points, Stats* stats = nullptr) {
  std::vector<Index> all(static_cast<std::size_t>(points.rows()));
  std::iota(all.begin(), all.end(), Index{0});
  if (stats != nullptr) ++stats->passes;
  return detail::brute_force(points, all, stats);
}

/// Block-nested-loops with a bounded window and overflow passes.
///
/// Every window insertion and every spill draws a stamp from one clock. A
/// window entry is final once no spilled point older than it remains
/// unread: at the end of a pass that holds for entries older than the
/// first spill, and during a pass for entries older than the point being
/// read.
template <typename Derived>
std::vector<Index> bnl(const Eigen::MatrixBase<Derived>& points,
                       std::size_t window_capacity = kDefaultWindowCapacity,
                       Stats* stats = nullptr) {
  if (window_capacity == 0) {
    throw Error(ErrorKind::InvalidArgument, "BNL window capacity must be at least 1");
  }
  struct Entry {
    Index index;
    std::uint64_t stamp;
  };

  std::vector<Entry> pending;
  pending.reserve(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) pending.push_back({i, 0});

  std::vector<Entry> window;
  window.reserve(window_capacity);
  std::vector<Index> out;
  std::uint64_t clock = 1;

  auto emit_older_than = [&](std::uint64_t stamp) {
    auto keep = std::stable_partition(window.begin(), window.end(),
                                      [stamp](const Entry& w) { return w.stamp >= stamp; });
    for (auto it = keep; it != window.end(); ++it) out.push_back(it->index);
    window.erase(keep, window.end());
  };

  while (!pending.empty()) {
    if (stats != nullptr) ++stats->passes;
    std::vector<Entry> spill;
    for (const Entry& incoming : pending) {
      emit_older_than(incoming.stamp);
      const auto row = points.row(incoming.index);
      bool dominated = false;
      for (auto it = window.begin(); it != window.end();) {
        detail::count(stats);
        const Relation rel = compare(points.row(it->index), row);
        if (rel == Relation::Dominates) {
          dominated = true;
          break;
        }
        if (rel == Relation::DominatedBy) {
          it = window.erase(it);
        } else {
          ++it;
        }
      }
      if (dominated) continue;
      if (window.size() < window_capacity) {
        window.push_back({incoming.index, clock++});
      } else {
        spill.push_back({incoming.index, clock++});
      }
    }
    if (spill.empty()) {
      for (const Entry& w : window) out.push_back(w.index);
      window.clear();
    } else {
      emit_older_than(spill.front().stamp);
    }
    pending = std::move(spill);
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Sum of per-column min-max scaled values; a degenerate column adds 0.
template <typename Derived>
ScoreVector<typename Derived::Scalar> monotone_scores(const Eigen::MatrixBase<Derived>& points) {
  using Scalar = typename Derived::Scalar;
  ScoreVector<Scalar> scores = ScoreVector<Scalar>::Zero(points.rows());
  if (points.rows() == 0) return scores;
  for (Index j = 0; j < points.cols(); ++j) {
    const Scalar lo = points.col(j).minCoeff();
    const Scalar hi = points.col(j).maxCoeff();
    const Scalar range = hi - lo;
    if (!(range > Scalar(0))) continue;
    scores.array() += (points.col(j).array() - lo) / range;
  }
  return scores;
}

/// Sort-filter-skyline. Points are visited in ascending monotone score
/// (then lexicographic on values, then `tie_rank`, then row), so a point
/// can only be dominated by one visited earlier and accepted points are
/// never revisited. An empty `tie_rank` means row order.
template <typename Derived>
std::vector<Index> sfs(const Eigen::MatrixBase<Derived>& points,
                       std::span<const std::size_t> tie_rank = {}, Stats* stats = nullptr) {
  const Index n = points.rows();
  eigen_assert(tie_rank.empty() || tie_rank.size() == static_cast<std::size_t>(n));
  const auto scores = monotone_scores(points);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::sort(order.begin(), order.end(), [&](Index a, Index b) {
    if (scores(a) != scores(b)) return scores(a) < scores(b);
    for (Index k = 0; k < points.cols(); ++k) {
      if (points(a, k) != points(b, k)) return points(a, k) < points(b, k);
    }
    if (!tie_rank.empty()) {
      const auto ra = tie_rank[static_cast<std::size_t>(a)];
      const auto rb = tie_rank[static_cast<std::size_t>(b)];
      if (ra != rb) return ra < rb;
    }
    return a < b;
  });

  if (stats != nullptr) ++stats->passes;
  std::vector<Index> accepted;
  for (Index i : order) {
    bool dominated = false;
    for (Index j : accepted) {
      detail::count(stats);
      if (dominates(points.row(j), points.row(i))) {
        dominated = true;
        break;
      }
    }
    if (!dominated) accepted.push_back(i);
  }
  std::sort(accepted.begin(), accepted.end());
  return accepted;
}

/// Divide and conquer: median split on the first column down to
/// `base_case` rows, brute force at the leaves, cross elimination on merge.
template <typename Derived>
std::vector<Index> dnc(const Eigen::MatrixBase<Derived>& points,
                       std::size_t base_case = kDefaultDncBaseCase, Stats* stats = nullptr) {
  if (base_case == 0) {
    throw Error(ErrorKind::InvalidArgument, "D&C base case must be at least 1");
  }
  std::vector<Index> all(static_cast<std::size_t>(points.rows()));
  std::iota(all.begin(), all.end(), Index{0});
  if (stats != nullptr) ++stats->passes;
  if (points.cols() == 0) return detail::brute_force(points, all, stats);
  std::vector<Index> out = detail::dnc_recurse(points, std::move(all), base_case, stats);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace pareto_mall::skyline
