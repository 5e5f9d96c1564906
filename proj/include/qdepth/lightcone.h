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


#ifndef QDEPTH_LIGHTCONE_H
#define QDEPTH_LIGHTCONE_H

#include <cstdint>
#include <optional>
#include <vector>

#include "json.hpp"
#include "qdepth/network.h"
#include "qdepth/state.h"

namespace qdepth {

class AveragingObservable;

/// Subset of the sites {1..n}.
class SupportSet {
  public:
    explicit SupportSet(int n);
    SupportSet(int n, std::initializer_list<int> sites);

    int universe() const { return static_cast<int>(bits_.size()); }
    bool contains(int site) const;
    void insert(int site);
    int size() const;
    bool empty() const { return size() == 0; }
    bool intersects(const SupportSet &other) const;
    bool is_subset_of(const SupportSet &other) const;
    /// Sites in ascending order.
    std::vector<int> sites() const;

    bool operator==(const SupportSet &) const = default;

  private:
    std::vector<bool> bits_;
};

/// Over-approximation of the support of A*(a) for any a supported on `seed`: every channel
/// touching the running set (scanning steps backwards) joins its support into it.
SupportSet dual_support(const Network &net, const SupportSet &seed);

struct LightconeReport {
    int n = 0;
    int depth = 0;
    std::vector<SupportSet> supports;
    int max_support_size = 0;
    /// site_multiplicity[y-1] = #{i : y ∈ X_i}.
    std::vector<int> site_multiplicity;
    /// Ordered pairs (i, j), including i = j, with X_i ∩ X_j ≠ ∅.
    std::int64_t intersecting_pairs = 0;
    /// max over i of #{j : X_i ∩ X_j ≠ ∅}.
    int max_pairs_per_observable = 0;

    std::int64_t support_bound() const;
    std::int64_t multiplicity_bound() const;
    std::int64_t pairs_per_observable_bound() const;
    /// All three combinatorial bounds hold.
    bool within_bounds() const;
};

LightconeReport lightcone_report(const Network &net);

nlohmann::json to_json(const LightconeReport &report);

/// Minimum depth for a separable state to cross H_{ā,b,r}: (ln r - ln √(2/n)) / ln 2.
/// May be negative. Throws std::invalid_argument for r <= 0 or n < 1.
double depth_lower_bound(std::int64_t n, double r);

/// Returns depth_lower_bound(n, r) when the input and output lie on different sides of the
/// hypersurface H_{ā,b,r}, nothing otherwise. The input is certified separable by construction.
std::optional<double> crossing_requires_depth(const SeparableInput &input, const DensityState &output,
                                              const AveragingObservable &abar, const Matrix &b, double r);

}  // namespace qdepth

#endif
