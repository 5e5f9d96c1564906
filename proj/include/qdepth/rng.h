// Copyright 2026 The qdepth Authors
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


#ifndef QDEPTH_RNG_H
#define QDEPTH_RNG_H

#include <cstdint>
#include <random>

#include "qdepth/linalg.h"

namespace qdepth {

using Rng = std::mt19937_64;

/// Sub-seed for trial `index` of a sweep rooted at `root`: splitmix64(root + (index+1)·φ64).
/// Every trial is re-runnable in isolation from (root, index).
std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index);

double uniform01(Rng &rng);

/// Haar-random d×d unitary (QR of a complex Ginibre matrix with the phase fix).
Matrix random_unitary(std::size_t dim, Rng &rng);
/// Uniformly random unit vector in C^dim.
Vector random_unit_vector(std::size_t dim, Rng &rng);
/// Random Hermitian matrix with i.i.d. Gaussian entries (GUE-like, unnormalized).
Matrix random_hermitian(std::size_t dim, Rng &rng);
/// Random full-rank density matrix G G† / tr(G G†).
Matrix random_density_matrix(std::size_t dim, Rng &rng);

}  // namespace qdepth

#endif
