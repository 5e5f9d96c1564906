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


#ifndef QDEPTH_MACRO_UNCERTAINTY_H
#define QDEPTH_MACRO_UNCERTAINTY_H

#include <array>
#include <cstdint>
#include <optional>

#include "json.hpp"
#include "qdepth/linalg.h"
#include "qdepth/network.h"
#include "qdepth/state.h"

namespace qdepth {

/// Single-site observable c, stored traceless. Only the spectral spread matters for
/// commutators and variances, and the feasible set is spread ≤ 1 (for qubits, the Bloch
/// ball c = v·σ/2 with |v| ≤ 1).
class SiteObservable {
  public:
    /// Throws DimensionError for non-Hermitian input, std::invalid_argument for spread > 1 + 1e-10.
    static SiteObservable from_matrix(const Matrix &c);
    /// c = v·σ/2; requires |v| ≤ 1 + 1e-10.
    static SiteObservable from_bloch(const Eigen::Vector3d &v);

    int l() const { return static_cast<int>(traceless_.rows()); }
    const Matrix &traceless() const { return traceless_; }
    /// Representative c - ((λmax + λmin)/2)·I, whose operator norm is spread/2 ≤ 1/2.
    Matrix centered() const;
    double spread() const;

  private:
    explicit SiteObservable(Matrix c) : traceless_(std::move(c)) {}
    Matrix traceless_;
};

/// ā = (1/n) Σ_i embed(c, i), materialized once.
class AveragingObservable {
  public:
    AveragingObservable(SiteObservable site, int n);

    const SiteObservable &site() const { return site_; }
    int n() const { return n_; }
    int l() const { return site_.l(); }
    const Matrix &matrix() const { return matrix_; }

  private:
    SiteObservable site_;
    int n_;
    Matrix matrix_;
};

Matrix averaging_matrix(const SiteObservable &c, int n);

/// Level set {ρ : Im tr(ρ[ā, b]) = r}; b Hermitian with ‖b‖ ≤ 1, r ∈ [-1, 1].
struct Hypersurface {
    Hypersurface(AveragingObservable abar, Matrix b, double r);

    AveragingObservable abar;
    Matrix b;
    double r;
};

/// tr(ā²ρ) - tr(āρ)², clamped at 0 when the deficit is within 1e-12.
double variance(const Matrix &abar, const DensityState &rho);

struct CommutatorNorm {
    double value = 0.0;
    /// Hermitian b with ‖b‖ ≤ 1 and Im tr(ρ[ā, b]) = value.
    Matrix witness;
};
CommutatorNorm commutator_trace_norm(const Matrix &abar, const DensityState &rho);

struct MaxVariance {
    double value = 0.0;
    Eigen::Vector3d direction = Eigen::Vector3d::UnitZ();
};
/// Exact max over unit Bloch vectors of Var(ā(v·σ/2)); qubits only.
MaxVariance max_variance_qubit(const DensityState &rho);

struct EstimateOptions {
    int restarts = 8;
    int grid_size = 144;
    int max_iter = 20;
    double tol = 1e-9;
    std::uint64_t seed = 0;
};

struct MacroUncertaintyReport {
    /// Achieved ‖[ā*, ρ]‖_tr; a certified lower bound on e_ρ.
    double e_lower = 0.0;
    SiteObservable maximizer = SiteObservable::from_bloch(Eigen::Vector3d::UnitZ());
    Matrix dual_b;
    /// 2·sqrt(max variance) for pure qubit states.
    std::optional<double> variance_bound;
    int restarts_used = 0;
    int iterations = 0;
};

MacroUncertaintyReport estimate_e(const DensityState &rho, const EstimateOptions &options = {});

/// Im tr(ρ[ā, b]); tr(ρ[ā, b]) itself is purely imaginary for Hermitian ā, b.
double hypersurface_value(const DensityState &rho, const Hypersurface &h);

struct Theorem1Result {
    int n = 0;
    int depth = 0;
    double e_lower = 0.0;
    double bound = 0.0;
    bool pass = false;
};
/// e_lower(A(ρ)) against √(2/n)·2^k with k the raw depth; pass iff e_lower ≤ bound + 1e-8.
Theorem1Result theorem1_check(const Network &net, const SeparableInput &input, const EstimateOptions &options = {});

/// Fibonacci-sphere directions (unit vectors).
std::vector<Eigen::Vector3d> fibonacci_sphere(int count);

nlohmann::json to_json(const MacroUncertaintyReport &report);

}  // namespace qdepth

#endif
