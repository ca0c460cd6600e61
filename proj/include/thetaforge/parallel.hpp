#pragma once

#include <cstddef>
#include <functional>

namespace thetaforge::par {

// Worker-count control: 0 means "hardware default".  Thread count never
// changes results: all reductions run over a fixed block decomposition and
// block partials are combined in index order.
void set_threads(int t);
int threads();

// Invokes fn(block_index, begin, end) for a fixed partition of [0, n) into
// nblocks contiguous ranges, possibly in parallel.  fn must only write to
// block-local state.
void for_blocks(std::size_t n, std::size_t nblocks,
                const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

bool openmp_enabled();

}  // namespace thetaforge::par
