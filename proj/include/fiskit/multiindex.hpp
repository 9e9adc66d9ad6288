#pragma once

#include <vector>

#include "fiskit/errors.hpp"

namespace fiskit {

/// Strictly increasing multi-index over 0-based positions. Enumeration order
/// is lexicographic; all wedge/contraction signs come from counting the
/// transpositions that sort a concatenated index list.
namespace mi {

using Index = std::vector<int>;

long long choose(int n, int k);

/// All increasing multi-indices of size k in {0,..,n-1}, lexicographic.
std::vector<Index> all(int n, int k);

/// Position of idx in the lexicographic enumeration all(n, k).
long long rank(const Index& idx, int n);

/// Inverse of rank.
Index unrank(long long r, int n, int k);

/// Merge a single element j into increasing I. Returns {sign, merged};
/// sign = 0 when j already occurs in I.
std::pair<int, Index> insert(int j, const Index& I);

/// Merge two increasing multi-indices. sign = 0 on overlap.
std::pair<int, Index> merge(const Index& I, const Index& J);

/// Remove element j from I. Returns {(-1)^{position of j}, remainder};
/// sign = 0 when j is absent.
std::pair<int, Index> remove(int j, const Index& I);

bool contains(const Index& I, int j);

} // namespace mi
} // namespace fiskit
