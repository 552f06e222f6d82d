// Copyright 2026 The ArchLens Authors.
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

#ifndef ARCHLENS_PARALLEL_H_
#define ARCHLENS_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace archlens {

// Worker count from ARCHLENS_THREADS (0 or unset = hardware concurrency).
std::size_t default_thread_count();

// Runs task(i) for i in [0, n) on up to `threads` workers (0 = default).
// Tasks must write only to their own output slot; callers reduce the slots
// in index order, which keeps results independent of scheduling. The first
// exception thrown by any task is rethrown after all workers join.
void parallel_for(std::size_t n, const std::function<void(std::size_t)> &task,
                  std::size_t threads = 0);

}  // namespace archlens

#endif  // ARCHLENS_PARALLEL_H_
