#pragma once

#include <vector>

namespace testsupport {

// Brute-force enumeration of all length-n integer tuples with parts
// >= min_part summing to total, in ascending lexicographic order. Serves
// as the independent oracle for the composition machinery.
inline void brute_tuples_rec(int remaining, int positions, int min_part,
                             std::vector<int>& current,
                             std::vector<std::vector<int>>& out) {
  if (positions == 1) {
    if (remaining >= min_part) {
      current.push_back(remaining);
      out.push_back(current);
      current.pop_back();
    }
    return;
  }
  for (int v = min_part; v <= remaining - min_part * (positions - 1); ++v) {
    current.push_back(v);
    brute_tuples_rec(remaining - v, positions - 1, min_part, current, out);
    current.pop_back();
  }
}

inline std::vector<std::vector<int>> brute_tuples(int total, int positions,
                                                  int min_part) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  if (positions >= 1) brute_tuples_rec(total, positions, min_part, current, out);
  return out;
}

}  // namespace testsupport
