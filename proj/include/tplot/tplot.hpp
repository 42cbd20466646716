// Copyright 2026 The tplot Authors
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

#include "tplot/alloc.hpp"
#include "tplot/assignment.hpp"
#include "tplot/bounds.hpp"
#include "tplot/complexity.hpp"
#include "tplot/error.hpp"
#include "tplot/fixtures.hpp"
#include "tplot/io.hpp"
#include "tplot/matrix.hpp"
#include "tplot/moments.hpp"
#include "tplot/net.hpp"
#include "tplot/normal.hpp"
#include "tplot/normality.hpp"
#include "tplot/rng.hpp"
#include "tplot/stats.hpp"
#include "tplot/tset.hpp"

namespace tplot {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tplot
