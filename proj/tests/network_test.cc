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

#include "qdepth/network.h"

#include <algorithm>

#include "gtest/gtest.h"
#include "oracles.h"

using namespace qdepth;

namespace {

Step step_of(std::vector<LocalChannel> channels) { return Step{std::move(channels)}; }

DensityState random_state(int n, Rng &rng) {
    return DensityState::from_matrix(n, 2, random_density_matrix(ipow(2, static_cast<std::size_t>(n)), rng));
}

}  // namespace

TEST(network, channel_validation) {
    EXPECT_THROW(LocalChannel({1, 2, 3}, {identity(8)}, 2), NetworkError);
    EXPECT_THROW(LocalChannel({1, 1}, {identity(4)}, 2), NetworkError);
    EXPECT_THROW(LocalChannel({1}, {identity(4)}, 2), NetworkError);
    EXPECT_THROW(LocalChannel({1}, {identity(2) * 0.9}, 2), NetworkError);
    LocalChannel ok({2}, {hadamard()}, 2);
    EXPECT_TRUE(ok.is_unitary());
    LocalChannel dep({1, 2}, depolarizing_kraus(0.3, 2, 2), 2);
    EXPECT_FALSE(dep.is_unitary());
}

TEST(network, step_overlap_rejected) {
    Network net(3, 2);
    EXPECT_THROW(net.add_step(step_of({make_gate("H", {}, {1}, 2), make_gate("CNOT", {}, {1, 2}, 2)})), NetworkError);
    EXPECT_THROW(net.add_step(step_of({make_gate("H", {}, {4}, 2)})), NetworkError);
    EXPECT_THROW(Network(2, 3, {step_of({make_gate("H", {}, {1}, 2)})}), NetworkError);
}

TEST(network, empty_network_is_identity) {
    Rng rng(1);
    DensityState rho = random_state(3, rng);
    EXPECT_EQ(max_abs_diff(apply(Network(3, 2), rho).matrix(), rho.matrix()), 0.0);
    Matrix a = random_hermitian(8, rng);
    EXPECT_EQ(max_abs_diff(apply_dual(Network(3, 2), a), a), 0.0);
}

TEST(network, cat_ladder_prepares_cat) {
    Network net = cat_ladder(3, true);
    EXPECT_EQ(net.n(), 8);
    EXPECT_EQ(net.depth(), 3);
    EXPECT_NEAR(fidelity(cat_state(8), apply(net, to_density(zeros_state(8)))), 1.0, 1e-10);
    EXPECT_NEAR(fidelity(cat_state(8), apply_pure(net, zeros_state(8))), 1.0, 1e-10);

    std::vector<Vector> kets(8, qubit_ket('0'));
    kets[0] = qubit_ket('+');
    EXPECT_NEAR(fidelity(cat_state(8), apply_pure(cat_ladder(3, false), product_state(kets))), 1.0, 1e-10);
}

TEST(network, cat_ladder_structure) {
    Network one = cat_ladder(1, false);
    ASSERT_EQ(one.depth(), 1);
    ASSERT_EQ(one.steps()[0].channels.size(), 1u);
    EXPECT_EQ(one.steps()[0].channels[0].support(), (std::vector<int>{1, 2}));
    EXPECT_EQ(one.steps()[0].channels[0].kraus()[0], cnot());

    Network two = cat_ladder(2, false);
    ASSERT_EQ(two.steps()[1].channels.size(), 2u);
    EXPECT_EQ(two.steps()[1].channels[0].support(), (std::vector<int>{1, 3}));
    EXPECT_EQ(two.steps()[1].channels[1].support(), (std::vector<int>{2, 4}));
}

TEST(network, full_depolarizing_gives_maximally_mixed) {
    Rng rng(2);
    std::vector<LocalChannel> chans;
    for (int s = 1; s <= 3; ++s) {
        chans.emplace_back(std::vector<int>{s}, depolarizing_kraus(1.0, 1, 2), 2);
    }
    Network net(3, 2, {step_of(chans)});
    EXPECT_LT(max_abs_diff(apply(net, random_state(3, rng)).matrix(), maximally_mixed(3).matrix()), 1e-14);
}

TEST(network, depolarizing_kraus_acts_as_formula) {
    Rng rng(3);
    const double p = 0.37;
    for (int l : {2, 3}) {
        Matrix rho = random_density_matrix(static_cast<std::size_t>(l * l), rng);
        Matrix out = Matrix::Zero(l * l, l * l);
        for (const auto &k : depolarizing_kraus(p, 2, l)) {
            out += k * rho * k.adjoint();
        }
        Matrix want = (1 - p) * rho + p * identity(static_cast<std::size_t>(l * l)) / static_cast<double>(l * l);
        EXPECT_LT(max_abs_diff(out, want), 1e-13);
    }
}

TEST(network, dual_of_cnot_on_target_z) {
    Network net(2, 2, {step_of({make_gate("CNOT", {}, {1, 2}, 2)})});
    Matrix zt = tensor(identity(2), pauli_z());
    Matrix want = oracle::conjugate(zt, cnot());
    EXPECT_LT(max_abs_diff(apply_dual(net, zt), want), 1e-15);
    EXPECT_LT(max_abs_diff(want, tensor(pauli_z(), pauli_z())), 1e-15);
}

TEST(network, duality_unital_contractive) {
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
        RandomNetworkOptions o;
        o.n = 4;
        o.depth = 1 + t % 3;
        o.seed = 100 + t;
        o.noise = t % 2 ? 0.1 : 0.0;
        Network net = random_shallow(o);
        DensityState rho = random_state(4, rng);
        Matrix a = random_hermitian(16, rng);
        const cplx lhs = (apply_dual(net, a) * rho.matrix()).trace();
        const cplx rhs = (a * apply(net, rho).matrix()).trace();
        EXPECT_LT(std::abs(lhs - rhs), 1e-9);
        EXPECT_LT(max_abs_diff(apply_dual(net, identity(16)), identity(16)), 1e-12);
        EXPECT_LE(operator_norm(apply_dual(net, a)), operator_norm(a) + 1e-10);
    }
}

TEST(network, random_shallow_properties) {
    RandomNetworkOptions o;
    o.n = 6;
    o.depth = 2;
    o.seed = 9;
    Network a = random_shallow(o);
    Network b = random_shallow(o);
    EXPECT_EQ(a, b);
    EXPECT_TRUE(a.all_unitary());
    EXPECT_EQ(a.depth(), 2);
    for (const auto &s : a.steps()) {
        int bilocal = 0;
        for (const auto &c : s.channels) {
            bilocal += c.arity() == 2;
        }
        EXPECT_LE(bilocal, 3);
    }
    o.seed = 10;
    EXPECT_FALSE(random_shallow(o) == a);
    o.noise = 0.05;
    EXPECT_FALSE(random_shallow(o).all_unitary());
}

TEST(network, step_order_independent) {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        RandomNetworkOptions o;
        o.n = 4;
        o.depth = 1;
        o.seed = 50 + t;
        o.noise = 0.2;
        Network net = random_shallow(o);
        DensityState rho = random_state(4, rng);
        Matrix forward = apply(net, rho).matrix();
        // Apply the channels of the single step in reverse order by hand.
        Matrix m = rho.matrix();
        auto chans = net.steps()[0].channels;
        std::reverse(chans.begin(), chans.end());
        for (const auto &c : chans) {
            Matrix next = Matrix::Zero(16, 16);
            for (const auto &k : c.kraus()) {
                Matrix e = embed(k, c.support(), 4, 2);
                next += e * m * e.adjoint();
            }
            m = next;
        }
        EXPECT_LT(max_abs_diff(forward, m), 1e-12);
    }
}

TEST(network, inverse_undoes_unitary_network) {
    Rng rng(6);
    RandomNetworkOptions o;
    o.n = 5;
    o.depth = 3;
    o.seed = 77;
    Network net = random_shallow(o);
    DensityState rho = random_state(5, rng);
    EXPECT_LT(max_abs_diff(apply(inverse(net), apply(net, rho)).matrix(), rho.matrix()), 1e-12);
    o.noise = 0.1;
    EXPECT_THROW(inverse(random_shallow(o)), NetworkError);
}

TEST(network, canonical_depth) {
    EXPECT_EQ(canonical_depth(cat_ladder(3, false)), 3);
    Network net(2, 2);
    net.add_step(step_of({make_gate("CNOT", {}, {1, 2}, 2)}));
    net.add_step(step_of({make_gate("H", {}, {1}, 2), make_gate("T", {}, {2}, 2)}));
    EXPECT_EQ(net.depth(), 2);
    EXPECT_EQ(canonical_depth(net), 1);
}

TEST(network, local_only_network_contracts_to_one_step) {
    Rng rng(7);
    Network net(3, 2);
    for (int r = 0; r < 5; ++r) {
        net.add_step(step_of({LocalChannel({1}, {random_unitary(2, rng)}, 2),
                              LocalChannel({3}, depolarizing_kraus(0.2, 1, 2), 2)}));
        net.add_step(step_of({LocalChannel({2}, {random_unitary(2, rng)}, 2)}));
    }
    Network merged = contract_local_steps(net);
    EXPECT_EQ(merged.depth(), 1);
    EXPECT_EQ(canonical_depth(net), 1);
    for (int t = 0; t < 3; ++t) {
        DensityState rho = random_state(3, rng);
        EXPECT_LT(max_abs_diff(apply(merged, rho).matrix(), apply(net, rho).matrix()), 1e-9);
    }
}

TEST(network, contraction_preserves_action_on_mixed_networks) {
    Rng rng(8);
    Network net(4, 2);
    net.add_step(step_of({LocalChannel({2}, {random_unitary(2, rng)}, 2)}));
    net.add_step(step_of({make_gate("CNOT", {}, {1, 2}, 2), make_gate("CZ", {}, {3, 4}, 2)}));
    net.add_step(step_of({LocalChannel({1}, depolarizing_kraus(0.3, 1, 2), 2),
                          LocalChannel({4}, {random_unitary(2, rng)}, 2)}));
    net.add_step(step_of({make_gate("SWAP", {}, {2, 3}, 2)}));
    Network merged = contract_local_steps(net);
    EXPECT_EQ(merged.depth(), 2);
    DensityState rho = random_state(4, rng);
    EXPECT_LT(max_abs_diff(apply(merged, rho).matrix(), apply(net, rho).matrix()), 1e-9);
}

TEST(network, apply_pure_matches_density) {
    RandomNetworkOptions o;
    o.n = 4;
    o.depth = 2;
    o.seed = 3;
    Network net = random_shallow(o);
    Rng rng(9);
    PureState psi = PureState::from_amplitudes(4, 2, random_unit_vector(16, rng));
    Vector out = apply_pure(net, psi).amplitudes();
    EXPECT_LT(max_abs_diff(out * out.adjoint(), apply(net, to_density(psi)).matrix()), 1e-12);
}

TEST(network, make_gate_errors) {
    EXPECT_THROW(make_gate("FOO", {}, {1}, 2), NetworkError);
    EXPECT_THROW(make_gate("H", {}, {1}, 3), NetworkError);
    EXPECT_THROW(make_gate("CNOT", {}, {1}, 2), NetworkError);
    EXPECT_THROW(make_gate("DEPOL", {1.5}, {1}, 2), NetworkError);
    LocalChannel d = make_gate("DEPOL", {0.1}, {1}, 2);
    ASSERT_TRUE(d.label().has_value());
    EXPECT_EQ(d.label()->name, "DEPOL");
}
