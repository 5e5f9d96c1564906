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


#include "qdepth/lightcone.h"

#include <algorithm>
#include <cmath>

#include "qdepth/macro_uncertainty.h"

namespace qdepth {

SupportSet::SupportSet(int n) : bits_(static_cast<std::size_t>(std::max(n, 0)), false) {}

SupportSet::SupportSet(int n, std::initializer_list<int> sites) : SupportSet(n) {
    for (int s : sites) {
        insert(s);
    }
}

bool SupportSet::contains(int site) const {
    return site >= 1 && site <= universe() && bits_[static_cast<std::size_t>(site - 1)];
}

void SupportSet::insert(int site) {
    if (site < 1 || site > universe()) {
        throw DimensionError("support site " + std::to_string(site) + " out of range 1.." + std::to_string(universe()));
    }
    bits_[static_cast<std::size_t>(site - 1)] = true;
}

int SupportSet::size() const { return static_cast<int>(std::count(bits_.begin(), bits_.end(), true)); }

bool SupportSet::intersects(const SupportSet &other) const {
    const std::size_t m = std::min(bits_.size(), other.bits_.size());
    for (std::size_t i = 0; i < m; ++i) {
        if (bits_[i] && other.bits_[i]) {
            return true;
        }
    }
    return false;
}

bool SupportSet::is_subset_of(const SupportSet &other) const {
    for (int s : sites()) {
        if (!other.contains(s)) {
            return false;
        }
    }
    return true;
}

std::vector<int> SupportSet::sites() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < bits_.size(); ++i) {
        if (bits_[i]) {
            out.push_back(static_cast<int>(i) + 1);
        }
    }
    return out;
}

SupportSet dual_support(const Network &net, const SupportSet &seed) {
    if (seed.universe() != net.n()) {
        throw DimensionError("dual_support: seed universe does not match the network");
    }
    if (seed.empty()) {
        throw std::invalid_argument("dual_support: seed must be nonempty");
    }
    SupportSet cur = seed;
    for (auto step = net.steps().rbegin(); step != net.steps().rend(); ++step) {
        // Supports within a step are disjoint, so growing `cur` in place cannot change which
        // other channels of the same step it meets.
        for (const auto &ch : step->channels) {
            const bool hit = std::any_of(ch.support().begin(), ch.support().end(),
                                         [&](int s) { return cur.contains(s); });
            if (hit) {
                for (int s : ch.support()) {
                    cur.insert(s);
                }
            }
        }
    }
    return cur;
}

std::int64_t LightconeReport::support_bound() const { return std::int64_t{1} << depth; }
std::int64_t LightconeReport::multiplicity_bound() const { return std::int64_t{1} << depth; }
std::int64_t LightconeReport::pairs_per_observable_bound() const { return std::int64_t{1} << (2 * depth); }

bool LightconeReport::within_bounds() const {
    if (max_support_size > support_bound() || max_pairs_per_observable > pairs_per_observable_bound()) {
        return false;
    }
    if (intersecting_pairs > static_cast<std::int64_t>(n) * pairs_per_observable_bound()) {
        return false;
    }
    return std::all_of(site_multiplicity.begin(), site_multiplicity.end(),
                       [&](int m) { return m <= multiplicity_bound(); });
}

LightconeReport lightcone_report(const Network &net) {
    if (net.depth() > 30) {
        throw std::invalid_argument("lightcone_report: depth too large for the 4^k bound column");
    }
    const int n = net.n();
    LightconeReport rep;
    rep.n = n;
    rep.depth = net.depth();
    rep.site_multiplicity.assign(static_cast<std::size_t>(n), 0);
    for (int i = 1; i <= n; ++i) {
        SupportSet x = dual_support(net, SupportSet(n, {i}));
        rep.max_support_size = std::max(rep.max_support_size, x.size());
        for (int y : x.sites()) {
            ++rep.site_multiplicity[static_cast<std::size_t>(y - 1)];
        }
        rep.supports.push_back(std::move(x));
    }
    for (int i = 0; i < n; ++i) {
        int per = 0;
        for (int j = 0; j < n; ++j) {
            if (rep.supports[i].intersects(rep.supports[j])) {
                ++per;
            }
        }
        rep.intersecting_pairs += per;
        rep.max_pairs_per_observable = std::max(rep.max_pairs_per_observable, per);
    }
    return rep;
}

nlohmann::json to_json(const LightconeReport &report) {
    auto supports = nlohmann::json::array();
    for (const auto &s : report.supports) {
        supports.push_back(s.sites());
    }
    return {{"n", report.n},
            {"depth", report.depth},
            {"supports", supports},
            {"max_support_size", report.max_support_size},
            {"site_multiplicity", report.site_multiplicity},
            {"intersecting_pairs", report.intersecting_pairs},
            {"max_pairs_per_observable", report.max_pairs_per_observable},
            {"bounds",
             {{"support", report.support_bound()},
              {"multiplicity", report.multiplicity_bound()},
              {"pairs_per_obs", report.pairs_per_observable_bound()}}},
            {"within_bounds", report.within_bounds()}};
}

double depth_lower_bound(std::int64_t n, double r) {
    if (n < 1) {
        throw std::invalid_argument("depth_lower_bound: n must be >= 1");
    }
    if (!(r > 0.0)) {
        throw std::invalid_argument("depth_lower_bound: r must be > 0");
    }
    return (std::log(r) - std::log(std::sqrt(2.0 / static_cast<double>(n)))) / std::log(2.0);
}

std::optional<double> crossing_requires_depth(const SeparableInput &input, const DensityState &output,
                                              const AveragingObservable &abar, const Matrix &b, double r) {
    const DensityState rho_in = mix(input);
    const Hypersurface h(abar, b, r);
    const double before = hypersurface_value(rho_in, h);
    const double after = hypersurface_value(output, h);
    auto side = [r](double v) { return (v > r) - (v < r); };
    if (side(before) == side(after)) {
        return std::nullopt;
    }
    return depth_lower_bound(rho_in.n(), r);
}

}  // namespace qdepth
