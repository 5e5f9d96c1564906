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


#ifndef QDEPTH_STATE_H
#define QDEPTH_STATE_H

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "qdepth/linalg.h"

namespace qdepth {

/// Raised when a state or separable decomposition violates its invariants.
struct StateError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Normalized vector on n sites of local dimension l.
class PureState {
  public:
    /// Throws StateError unless ‖amplitudes‖ = 1 within 1e-10 and the length is l^n.
    static PureState from_amplitudes(int n, int l, Vector amplitudes);

    int n() const { return n_; }
    int l() const { return l_; }
    std::size_t dim() const { return static_cast<std::size_t>(amps_.size()); }
    const Vector &amplitudes() const { return amps_; }

  private:
    PureState(int n, int l, Vector amps) : n_(n), l_(l), amps_(std::move(amps)) {}
    int n_;
    int l_;
    Vector amps_;
};

/// Density matrix: Hermitian within 1e-12, unit trace within 1e-10, spectrum ≥ -1e-10.
class DensityState {
  public:
    static DensityState from_matrix(int n, int l, Matrix matrix);

    int n() const { return n_; }
    int l() const { return l_; }
    std::size_t dim() const { return static_cast<std::size_t>(m_.rows()); }
    const Matrix &matrix() const { return m_; }

    double purity() const;
    double min_eigenvalue() const;

  private:
    DensityState(int n, int l, Matrix m) : n_(n), l_(l), m_(std::move(m)) {}
    int n_;
    int l_;
    Matrix m_;
};

/// One product term Σ-weighted in a separable state; factors are single-site density matrices.
struct SeparableTerm {
    double weight = 0.0;
    std::vector<Matrix> factors;
};

struct SeparableInput {
    std::vector<SeparableTerm> terms;

    int n() const;
    int l() const;
    /// Throws StateError on negative weights, weights not summing to 1 within 1e-12,
    /// ragged factor lists or invalid 1-site density matrices.
    void validate() const;
};

PureState product_state(std::span<const Vector> factors);
PureState cat_state(int n);
PureState basis_state(int n, int l, std::size_t index);
PureState zeros_state(int n, int l = 2);

DensityState to_density(const PureState &psi);
DensityState maximally_mixed(int n, int l = 2);
DensityState mix(const SeparableInput &input);

/// Single-term separable input built from single-site kets.
SeparableInput product_input(std::span<const Vector> kets);

double fidelity(const PureState &a, const PureState &b);
/// ⟨ψ|ρ|ψ⟩.
double fidelity(const PureState &psi, const DensityState &rho);

/// Single-qubit ket from a label: 0, 1, + or -.
Vector qubit_ket(char label);

nlohmann::json to_json(const PureState &psi);
nlohmann::json to_json(const DensityState &rho);
/// Parses {n, l, kind: "pure"|"density", data: [[re, im], ...]}; pure documents are
/// returned as density matrices.
DensityState density_from_json(const nlohmann::json &doc);

}  // namespace qdepth

#endif
