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


#ifndef QDEPTH_NETWORK_H
#define QDEPTH_NETWORK_H

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdepth/linalg.h"
#include "qdepth/rng.h"
#include "qdepth/state.h"

namespace qdepth {

/// Raised for channels and networks that violate their invariants.
struct NetworkError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Name of a built-in gate (plus parameters for DEPOL) that produced a channel.
struct GateLabel {
    std::string name;
    std::vector<double> params;

    bool operator==(const GateLabel &) const = default;
};

/// A completely positive trace-preserving map on one or two sites, in Kraus form.
class LocalChannel {
  public:
    /// Validates arity (1 or 2), distinct sites, Kraus shapes l^k × l^k and Σ K†K = I within 1e-10.
    LocalChannel(std::vector<int> support, std::vector<Matrix> kraus, int l, std::optional<GateLabel> label = {});

    const std::vector<int> &support() const { return support_; }
    const std::vector<Matrix> &kraus() const { return kraus_; }
    int arity() const { return static_cast<int>(support_.size()); }
    int local_dim() const { return l_; }
    bool is_unitary() const { return unitary_; }
    const std::optional<GateLabel> &label() const { return label_; }
    int min_site() const;
    bool touches(int site) const;

    bool operator==(const LocalChannel &other) const;

  private:
    std::vector<int> support_;
    std::vector<Matrix> kraus_;
    int l_;
    bool unitary_;
    std::optional<GateLabel> label_;
};

/// Channels with pairwise disjoint supports.
struct Step {
    std::vector<LocalChannel> channels;

    bool local_only() const;
    bool has_bilocal() const;
    bool operator==(const Step &) const = default;
};

/// Depth-k sequence of steps on n sites of local dimension l.
class Network {
  public:
    Network(int n, int l, std::vector<Step> steps = {});

    int n() const { return n_; }
    int l() const { return l_; }
    /// Raw step count.
    int depth() const { return static_cast<int>(steps_.size()); }
    const std::vector<Step> &steps() const { return steps_; }
    bool all_unitary() const;

    /// Validates and appends; channels are kept sorted by their smallest site.
    void add_step(Step step);

    bool operator==(const Network &other) const = default;

  private:
    int n_;
    int l_;
    std::vector<Step> steps_;
};

// Built-in gate library. Qubit gates: H X Y Z S T (1 site), CNOT CZ SWAP (2 sites).
std::optional<Matrix> library_unitary(const std::string &name);
/// Kraus family of the depolarizing channel ρ ↦ (1-p)ρ + p·tr(ρ)·I/d on d = l^arity.
std::vector<Matrix> depolarizing_kraus(double p, int arity, int l);
/// Library gate on `sites`; `name` may be DEPOL with params {p}. Throws NetworkError if unknown.
LocalChannel make_gate(const std::string &name, const std::vector<double> &params, std::vector<int> sites, int l);

/// Schrödinger picture: steps in order, channels within a step in storage order.
DensityState apply(const Network &net, const DensityState &rho);
/// Pure-state fast path; requires every channel to be unitary.
PureState apply_pure(const Network &net, const PureState &psi);
/// Heisenberg picture a ↦ A*(a): steps in reverse order, each channel as a ↦ Σ K† a K.
Matrix apply_dual(const Network &net, const Matrix &a);

/// Reverse network of a unitary network (each gate replaced by its adjoint).
Network inverse(const Network &net);

/// The k-step CNOT ladder on n = 2^k qubits; step r pairs control j with target 2^(r-1)+j.
/// With the prologue, a Hadamard on site 1 is composed into the first CNOT.
Network cat_ladder(int k, bool include_prologue);

struct RandomNetworkOptions {
    int n = 4;
    int l = 2;
    int depth = 1;
    std::uint64_t seed = 0;
    /// Library names plus HAAR1 / HAAR2 (Haar-random unitaries on one / two sites).
    std::vector<std::string> gate_pool = {"HAAR2", "CNOT", "CZ", "SWAP"};
    /// Depolarizing strength composed after every channel; 0 keeps channels unitary.
    double noise = 0.0;
};

/// Every step is a random maximal pairing of the sites; each pair gets a gate drawn from the
/// pool (one-site gates are placed on both sites of the pair).
Network random_shallow(const RandomNetworkOptions &options);

/// Merges every step consisting only of one-site channels into a neighbouring step, composing
/// Kraus families where supports overlap. The result acts identically to `net`.
Network contract_local_steps(const Network &net);
int canonical_depth(const Network &net);

}  // namespace qdepth

#endif
