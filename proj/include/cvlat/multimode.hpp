// Copyright 2026 <project authors>
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVLAT_MULTIMODE_HPP
#define CVLAT_MULTIMODE_HPP

#include <cstdint>
#include <span>

#include "cvlat/modespace.hpp"

namespace cvlat {

// Joint amplitude vectors over n modes use index sum_k label_k M^k.

std::int64_t mode_stride(int m, int mode);

/// Applies a single-mode matrix to one mode of a joint vector.
Vec apply_on_mode(const Vec& state, int m, int modes, int mode, const Mat& op);

/// Multiplies one mode by a diagonal.
Vec scale_mode(const Vec& state, int m, int modes, int mode, const Vec& diag);

/// Contracts a bra against one mode; the result has modes - 1 modes with
/// the remaining modes keeping their relative order.
Vec contract_mode(const Vec& state, int m, int modes, int mode, const Vec& bra);

/// Decodes a joint index into labels.
void decode_labels(std::int64_t index, int m, std::span<int> labels);

}  // namespace cvlat

#endif
