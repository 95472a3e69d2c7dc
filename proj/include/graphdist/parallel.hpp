// Copyright 2026 The graphdist Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRAPHDIST_PARALLEL_HPP
#define GRAPHDIST_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace graphdist {

// Worker count: GRAPHDIST_THREADS when set, else the hardware concurrency.
int thread_count();

// Runs fn(i) for i in [0, n). Work is split statically, so callers that write
// results into slot i get output independent of the thread count. The first
// exception thrown by any worker is rethrown. Calls made from inside a worker
// run serially.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace graphdist

#endif  // GRAPHDIST_PARALLEL_HPP
