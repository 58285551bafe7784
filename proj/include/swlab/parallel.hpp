#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace swlab {

// Worker count used by parallel_for; 1 runs inline. Results never depend on it.
void set_thread_count(int n);
int thread_count();

// Calls body(begin, end) on disjoint contiguous chunks covering [0, n).
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

// Sum with a fixed binary tree over the index range, independent of thread count.
double pairwise_sum(const double* x, std::size_t n);
inline double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

}  // namespace swlab
