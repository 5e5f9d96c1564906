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

#include "qdepth/linalg.h"

#include "gtest/gtest.h"
#include "oracles.h"
#include "qdepth/rng.h"

using namespace qdepth;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST(linalg, tensor_basic_cases) {
    Matrix expected = Matrix::Zero(4, 4);
    expected(0, 2) = expected(1, 3) = expected(2, 0) = expected(3, 1) = 1.0;
    EXPECT_EQ(max_abs_diff(tensor(pauli_x(), identity(2)), expected), 0.0);
    EXPECT_EQ(max_abs_diff(tensor(identity(2), identity(2)), identity(4)), 0.0);

    Matrix d = tensor(diag2(1, 2), diag2(3, 4));
    Matrix want = Matrix::Zero(4, 4);
    want.diagonal() << 3, 4, 6, 8;
    EXPECT_EQ(max_abs_diff(d, want), 0.0);
}

TEST(linalg, tensor_matches_loop_kron) {
    Rng rng(11);
    for (int t = 0; t < 5; ++t) {
        Matrix a = random_hermitian(3, rng);
        Matrix b = random_unitary(2, rng);
        EXPECT_LT(max_abs_diff(tensor(a, b), oracle::kron(a, b)), 1e-14);
    }
}

TEST(linalg, embed) {
    EXPECT_EQ(max_abs_diff(embed(pauli_x(), std::vector<int>{1}, 2, 2), tensor(pauli_x(), identity(2))), 0.0);
    EXPECT_LT(max_abs_diff(embed(cnot(), std::vector<int>{2, 1}, 2, 2), oracle::reversed_cnot()), 1e-15);
    EXPECT_LT(max_abs_diff(embed(pauli_z(), std::vector<int>{3}, 4, 2), oracle::on_site(pauli_z(), 3, 4)), 1e-15);
}

TEST(linalg, embed_rejects_bad_sites) {
    EXPECT_THROW(embed(pauli_x(), std::vector<int>{0}, 2, 2), DimensionError);
    EXPECT_THROW(embed(pauli_x(), std::vector<int>{3}, 2, 2), DimensionError);
    EXPECT_THROW(embed(cnot(), std::vector<int>{1, 1}, 2, 2), DimensionError);
    EXPECT_THROW(embed(cnot(), std::vector<int>{1}, 2, 2), DimensionError);
}

TEST(linalg, apply_left_right_match_embed) {
    Rng rng(5);
    SiteIndexer ix(4, 2);
    Matrix m = random_hermitian(16, rng);
    Matrix u = random_unitary(4, rng);
    std::vector<int> sites{4, 2};
    Matrix full = embed(u, sites, 4, 2);
    Matrix left = m;
    apply_left(u, sites, ix, left);
    EXPECT_LT(max_abs_diff(left, full * m), 1e-12);
    Matrix right = m;
    apply_right(u, sites, ix, right);
    EXPECT_LT(max_abs_diff(right, m * full), 1e-12);
    Vector v = random_unit_vector(16, rng);
    Vector w = v;
    apply_left(u, sites, ix, w);
    EXPECT_LT((w - full * v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(linalg, operator_norm) {
    EXPECT_NEAR(operator_norm(pauli_x()), 1.0, 1e-14);
    EXPECT_NEAR(operator_norm(diag2(3, -4)), 4.0, 1e-14);
    Rng rng(2);
    for (int t = 0; t < 5; ++t) {
        Matrix h = random_hermitian(8, rng);
        EXPECT_NEAR(operator_norm(h), oracle::power_iteration_norm(h), 1e-8);
        Matrix g = random_unitary(8, rng) * h;
        EXPECT_NEAR(operator_norm(g), oracle::power_iteration_norm(g), 1e-8);
    }
}

TEST(linalg, trace_norm) {
    EXPECT_NEAR(trace_norm(diag2(3, -4)), 7.0, 1e-14);
    Matrix j = Matrix::Zero(2, 2);
    j(0, 1) = 1.0;
    j(1, 0) = -1.0;
    EXPECT_NEAR(trace_norm(j), 2.0, 1e-14);
}

TEST(linalg, trace_norm_duality_oracle) {
    Rng rng(3);
    for (int t = 0; t < 3; ++t) {
        Matrix a = random_unitary(8, rng) * random_hermitian(8, rng) + random_hermitian(8, rng) * cplx(0, 0.3);
        const double tn = trace_norm(a);
        for (int s = 0; s < 200; ++s) {
            EXPECT_LE(std::abs((a * random_unitary(8, rng)).trace()), tn + 1e-9);
        }
        Matrix polar;
        const double gram = oracle::trace_norm_via_gram(a, &polar);
        EXPECT_NEAR(tn, gram, 1e-6);
        EXPECT_NEAR(std::abs((a * polar).trace()), tn, 1e-6);
    }
}

TEST(linalg, commutator) {
    EXPECT_EQ(commutator(pauli_x(), pauli_x()).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT(max_abs_diff(commutator(pauli_z(), pauli_x()), cplx(0, 2) * pauli_y()), 1e-15);
    Rng rng(4);
    Matrix a = random_hermitian(8, rng);
    EXPECT_EQ(commutator(a, identity(8)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(linalg, hermitian_sign) {
    Matrix s = hermitian_sign(diag2(2.0, -0.5));
    EXPECT_LT(max_abs_diff(s, pauli_z()), 1e-15);
    EXPECT_LT(max_abs_diff(hermitian_sign(diag2(1e-14, 1.0), 1e-12), diag2(0, 1)), 1e-15);
    Rng rng(6);
    Matrix h = random_hermitian(6, rng);
    Matrix sh = hermitian_sign(h);
    EXPECT_NEAR((sh * h).trace().real(), trace_norm(h), 1e-10);
    EXPECT_LE(operator_norm(sh), 1.0 + 1e-12);
}

TEST(linalg, predicates) {
    EXPECT_TRUE(is_hermitian(pauli_y()));
    EXPECT_TRUE(is_anti_hermitian(cplx(0, 1) * pauli_y()));
    EXPECT_TRUE(is_unitary(hadamard()));
    EXPECT_FALSE(is_unitary(diag2(1, 2)));
    EXPECT_FALSE(is_square(Matrix::Zero(2, 3)));
    EXPECT_THROW(require_square(Matrix::Zero(2, 3), "a"), DimensionError);
    Matrix nh = pauli_x();
    nh(0, 1) = 2.0;
    EXPECT_THROW(require_hermitian(nh, "a"), DimensionError);
    EXPECT_THROW(hermitian_eigen(nh), DimensionError);
}

TEST(linalg, ipow_and_indexer) {
    EXPECT_EQ(ipow(2, 10), 1024u);
    EXPECT_EQ(ipow(3, 0), 1u);
    EXPECT_THROW(ipow(2, 40), DimensionError);
    SiteIndexer ix(3, 3);
    EXPECT_EQ(ix.dim(), 27u);
    EXPECT_EQ(ix.stride(1), 9u);
    EXPECT_EQ(ix.stride(3), 1u);
    EXPECT_EQ(ix.digit(5, 2), 1u);
    EXPECT_EQ(ix.digit(5, 3), 2u);
}
