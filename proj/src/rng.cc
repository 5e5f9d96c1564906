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


#include "qdepth/rng.h"

#include <cmath>

#include <Eigen/QR>

namespace qdepth {

std::uint64_t sub_seed(std::uint64_t root, std::uint64_t index) {
    std::uint64_t z = root + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double uniform01(Rng &rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

namespace {

Matrix ginibre(std::size_t rows, std::size_t cols, Rng &rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
        for (Eigen::Index j = 0; j < g.cols(); ++j) {
            const double re = normal(rng);
            const double im = normal(rng);
            g(i, j) = cplx(re, im);
        }
    }
    return g;
}

}  // namespace

Matrix random_unitary(std::size_t dim, Rng &rng) {
    Matrix g = ginibre(dim, dim, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < q.cols(); ++i) {
        const cplx d = r(i, i);
        const double mag = std::abs(d);
        q.col(i) *= mag > 0 ? d / mag : cplx(1.0);
    }
    return q;
}

Vector random_unit_vector(std::size_t dim, Rng &rng) {
    Vector v = ginibre(dim, 1, rng).col(0);
    return v / v.norm();
}

Matrix random_hermitian(std::size_t dim, Rng &rng) {
    Matrix g = ginibre(dim, dim, rng);
    return (g + g.adjoint()) * 0.5;
}

Matrix random_density_matrix(std::size_t dim, Rng &rng) {
    Matrix g = ginibre(dim, dim, rng);
    Matrix rho = g * g.adjoint();
    rho = (rho + rho.adjoint()).eval() * 0.5;
    return rho / rho.trace().real();
}

}  // namespace qdepth
