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


#ifndef QDEPTH_MEASUREMENT_H
#define QDEPTH_MEASUREMENT_H

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "qdepth/linalg.h"
#include "qdepth/macro_uncertainty.h"
#include "qdepth/network.h"
#include "qdepth/rng.h"
#include "qdepth/state.h"

namespace qdepth {

/// a = Σ λ_i P_i with distinct eigenvalues (ascending) and orthogonal projectors.
struct SpectralDecomposition {
    std::vector<double> eigenvalues;
    std::vector<Matrix> projectors;

    std::size_t dim() const { return projectors.empty() ? 0 : static_cast<std::size_t>(projectors.front().rows()); }
    Matrix reconstruct() const;
};

/// Eigenvalues closer than `cluster_tol` (to the running cluster's first member) share a projector.
SpectralDecomposition spectral_decompose(const Matrix &a, double cluster_tol = 1e-8);

/// P = ⊗_j Q_j with one-site orthogonal projections Q_j.
struct ProductProjection {
    std::vector<Matrix> factors;

    /// Throws std::invalid_argument unless every factor is a Hermitian idempotent within 1e-10
    /// and all factors share one dimension.
    void validate() const;
    Matrix matrix() const;
};

/// Per-site factors when P factorizes (residual ≤ 1e-8), nothing otherwise. Throws
/// std::invalid_argument when P is not a Hermitian idempotent.
std::optional<ProductProjection> is_product_projection(const Matrix &p, int l);

struct MeasurementOutcome {
    std::size_t index = 0;
    double value = 0.0;
    double probability = 0.0;
    DensityState post_state;
};

/// Every outcome with probability > 1e-12, with post state P_i ρ P_i / tr(ρ P_i).
std::vector<MeasurementOutcome> strong_distribution(const DensityState &rho, const SpectralDecomposition &dec);
MeasurementOutcome strong_measure(const DensityState &rho, const SpectralDecomposition &dec, Rng &rng);

/// Joint record of measuring every site in the eigenbasis of its own observable.
struct WeakRecord {
    std::vector<double> site_outcomes;
    double product = 1.0;
    double combined_value = 1.0;
    double probability = 0.0;
    DensityState post_state;
};

using PostFn = std::function<double(double)>;

/// Sequential single-site projective measurements; combined_value = post_fn(Π outcomes).
WeakRecord weak_measure_product(const DensityState &rho, std::span<const Matrix> site_observables,
                                const PostFn &post_fn, Rng &rng);
/// All joint outcomes with probability > 1e-12.
std::vector<WeakRecord> weak_distribution(const DensityState &rho, std::span<const Matrix> site_observables,
                                          const PostFn &post_fn = {});

/// Collapses records to (value, probability) pairs, merging values within 1e-9, sorted by value.
std::vector<std::pair<double, double>> value_distribution(const std::vector<WeakRecord> &records);
std::vector<std::pair<double, double>> value_distribution(const std::vector<MeasurementOutcome> &outcomes);

/// Σ p_i · post_i over a weak distribution.
DensityState ensemble_average(const std::vector<WeakRecord> &records);

/// ⊗_i σ_x on n qubits.
Matrix parity_x(int n);

/// CNOT chain U with U†(⊗σ_x)U = 1⊗…⊗1⊗σ_x; step r is CNOT(control n-r+1 → target n-r).
Network build_parity_conjugator(int n);

/// Apply U† (the inverse network), measure σ_x on site n, apply U. For U from
/// build_parity_conjugator this is a von Neumann measurement of ⊗σ_x.
std::vector<MeasurementOutcome> conjugated_strong_distribution(const DensityState &rho, const Network &u);
MeasurementOutcome conjugated_strong_measure(const DensityState &rho, const Network &u, Rng &rng);

/// ‖ab - ba‖.
double commutator_opnorm(const Matrix &a, const Matrix &b);

struct Theorem2Result {
    int n = 0;
    int depth = 0;
    double lhs = 0.0;
    double bound = 0.0;
    bool pass = false;
};
/// ‖[ā, A*(P)]‖ against 2^k/√(2n); unitary networks only.
Theorem2Result theorem2_check(const Network &net, const ProductProjection &p, const SiteObservable &c);

}  // namespace qdepth

#endif
