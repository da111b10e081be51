// Copyright 2026 The invsim Authors
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

#include <functional>

namespace invsim {

// Worker count: $INVSIM_THREADS when set to a positive integer, otherwise
// the hardware concurrency.
int worker_count();

// Calls fn(k) for k in [0, n) across worker_count() threads. Calls must not
// share mutable state. The first exception thrown is rethrown here.
void parallel_for(int n, const std::function<void(int)>& fn);

}  // namespace invsim
