// Copyright 2026 The cvxadp Authors
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

#pragma once

#include <cstddef>
#include <functional>

namespace cvxadp {

/// Process-wide worker cap used by parallel_for. 0 means hardware
/// concurrency. Results never depend on this value.
void set_worker_count(unsigned workers);
unsigned worker_count();

/// Runs body(i) for i in [0, count). Tasks must write only to their own
/// output slot; the first exception thrown by any task is rethrown after all
/// workers have joined (lowest task index wins, so the error is
/// deterministic).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace cvxadp
