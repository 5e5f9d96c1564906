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

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qdepth {

namespace {

constexpr std::size_t kMaxDim = std::size_t{1} << 26;

const cplx kI{0.0, 1.0};

}  // namespace

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0, -kI, kI, 0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

Matrix hadamard() {
    Matrix m(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    m << s, s, s, -s;
    return m;
}

Matrix cnot() {
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1;
    m(1, 1) = 1;
    m(2, 3) = 1;
    m(3, 2) = 1;
    return m;
}

Matrix identity(std::size_t dim) {
    return Matrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

std::size_t ipow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        r *= base;
        if (r > kMaxDim) {
            throw DimensionError("dimension " + std::to_string(base) + "^" + std::to_string(exp) +
                                 " exceeds the dense-matrix limit");
        }
    }
    return r;
}

Matrix tensor(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Matrix tensor_all(std::span<const Matrix> factors) {
    Matrix out = Matrix::Identity(1, 1);
    for (const auto &f : factors) {
        out = tensor(out, f);
    }
    return out;
}

void check_sites(std::span<const int> sites, int n) {
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (sites[i] < 1 || sites[i] > n) {
            throw DimensionError("site " + std::to_string(sites[i]) + " out of range 1.." + std::to_string(n));
        }
        for (std::size_t j = 0; j < i; ++j) {
            if (sites[i] == sites[j]) {
                throw DimensionError("duplicate site " + std::to_string(sites[i]));
            }
        }
    }
}

SiteIndexer::SiteIndexer(int n, int l) : n_(n), l_(l) {
    if (n < 0 || l < 1) {
        throw DimensionError("invalid system shape n=" + std::to_string(n) + " l=" + std::to_string(l));
    }
    dim_ = ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n));
    strides_.resize(static_cast<std::size_t>(n));
    std::size_t s = 1;
    for (int site = n; site >= 1; --site) {
        strides_[site - 1] = s;
        s *= static_cast<std::size_t>(l);
    }
}

SiteIndexer::Groups SiteIndexer::groups(std::span<const int> sites) const {
    check_sites(sites, n_);
    Groups g;
    const std::size_t k = sites.size();
    const std::size_t local = ipow(static_cast<std::size_t>(l_), k);
    g.offsets.resize(local);
    for (std::size_t j = 0; j < local; ++j) {
        std::size_t rem = j;
        std::size_t off = 0;
        for (std::size_t p = k; p-- > 0;) {
            off += (rem % l_) * stride(sites[p]);
            rem /= l_;
        }
        g.offsets[j] = off;
    }
    g.bases.reserve(dim_ / local);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
        bool zero = true;
        for (int s : sites) {
            if (digit(idx, s) != 0) {
                zero = false;
                break;
            }
        }
        if (zero) {
            g.bases.push_back(idx);
        }
    }
    return g;
}

Matrix embed(const Matrix &op, std::span<const int> sites, int n, int l) {
    SiteIndexer ix(n, l);
    const std::size_t local = ipow(static_cast<std::size_t>(l), sites.size());
    if (static_cast<std::size_t>(op.rows()) != local || static_cast<std::size_t>(op.cols()) != local) {
        throw DimensionError("embed: operator is " + std::to_string(op.rows()) + "x" + std::to_string(op.cols()) +
                             ", expected " + std::to_string(local) + "x" + std::to_string(local));
    }
    auto g = ix.groups(sites);
    const auto dim = static_cast<Eigen::Index>(ix.dim());
    Matrix out = Matrix::Zero(dim, dim);
    for (std::size_t base : g.bases) {
        for (std::size_t i = 0; i < local; ++i) {
            for (std::size_t j = 0; j < local; ++j) {
                out(static_cast<Eigen::Index>(base + g.offsets[i]), static_cast<Eigen::Index>(base + g.offsets[j])) =
                    op(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    return out;
}

bool is_square(const Matrix &a) { return a.rows() == a.cols(); }

bool is_hermitian(const Matrix &a, double tol) {
    if (!is_square(a)) {
        return false;
    }
    return a.rows() == 0 || max_abs_diff(a, a.adjoint()) <= tol;
}

bool is_anti_hermitian(const Matrix &a, double tol) {
    if (!is_square(a)) {
        return false;
    }
    return a.rows() == 0 || (a + a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_unitary(const Matrix &a, double tol) {
    if (!is_square(a)) {
        return false;
    }
    return max_abs_diff(a.adjoint() * a, identity(static_cast<std::size_t>(a.rows()))) <= tol;
}

void require_square(const Matrix &a, const char *what) {
    if (!is_square(a)) {
        throw DimensionError(std::string(what) + ": expected a square matrix, got " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()));
    }
}

void require_hermitian(const Matrix &a, const char *what) {
    require_square(a, what);
    if (!is_hermitian(a)) {
        throw DimensionError(std::string(what) + ": matrix is not Hermitian within 1e-12");
    }
}

HermitianEigen hermitian_eigen(const Matrix &a) {
    require_hermitian(a, "hermitian_eigen");
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("hermitian_eigen: eigensolver failed to converge");
    }
    return {es.eigenvalues(), es.eigenvectors()};
}

namespace {

// Singular values of `a`, using the eigen-route for normal Hermitian/anti-Hermitian input.
RealVector singular_values(const Matrix &a) {
    if (a.rows() == 0) {
        return RealVector();
    }
    if (is_hermitian(a)) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(a, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs();
    }
    if (is_anti_hermitian(a)) {
        Matrix h = (-kI) * a;
        h = (h + h.adjoint()).eval() * 0.5;
        Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs();
    }
    Eigen::BDCSVD<Matrix> svd(a);
    return svd.singularValues();
}

}  // namespace

double operator_norm(const Matrix &a) {
    require_square(a, "operator_norm");
    auto s = singular_values(a);
    return s.size() == 0 ? 0.0 : s.maxCoeff();
}

double trace_norm(const Matrix &a) {
    require_square(a, "trace_norm");
    return singular_values(a).sum();
}

Matrix commutator(const Matrix &a, const Matrix &b) {
    require_square(a, "commutator");
    require_square(b, "commutator");
    if (a.rows() != b.rows()) {
        throw DimensionError("commutator: dimension mismatch " + std::to_string(a.rows()) + " vs " +
                             std::to_string(b.rows()));
    }
    return a * b - b * a;
}

Matrix hermitian_sign(const Matrix &h, double zero_tol) {
    auto eig = hermitian_eigen(h);
    RealVector s(eig.values.size());
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double v = eig.values(i);
        s(i) = v > zero_tol ? 1.0 : (v < -zero_tol ? -1.0 : 0.0);
    }
    return eig.vectors * s.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
}

double max_abs_diff(const Matrix &a, const Matrix &b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("max_abs_diff: shape mismatch");
    }
    if (a.size() == 0) {
        return 0.0;
    }
    return (a - b).cwiseAbs().maxCoeff();
}

namespace {

void check_local_op(const Matrix &op, std::size_t local, const char *what) {
    if (static_cast<std::size_t>(op.rows()) != local || static_cast<std::size_t>(op.cols()) != local) {
        throw DimensionError(std::string(what) + ": local operator has wrong dimension");
    }
}

}  // namespace

void apply_left(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Matrix &m) {
    if (static_cast<std::size_t>(m.rows()) != ix.dim()) {
        throw DimensionError("apply_left: matrix dimension does not match system");
    }
    auto g = ix.groups(sites);
    const auto local = static_cast<Eigen::Index>(g.offsets.size());
    check_local_op(op, g.offsets.size(), "apply_left");
    Matrix block(local, m.cols());
    for (std::size_t base : g.bases) {
        for (Eigen::Index j = 0; j < local; ++j) {
            block.row(j) = m.row(static_cast<Eigen::Index>(base + g.offsets[j]));
        }
        Matrix out = op * block;
        for (Eigen::Index j = 0; j < local; ++j) {
            m.row(static_cast<Eigen::Index>(base + g.offsets[j])) = out.row(j);
        }
    }
}

void apply_right(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Matrix &m) {
    if (static_cast<std::size_t>(m.cols()) != ix.dim()) {
        throw DimensionError("apply_right: matrix dimension does not match system");
    }
    auto g = ix.groups(sites);
    const auto local = static_cast<Eigen::Index>(g.offsets.size());
    check_local_op(op, g.offsets.size(), "apply_right");
    Matrix block(m.rows(), local);
    for (std::size_t base : g.bases) {
        for (Eigen::Index j = 0; j < local; ++j) {
            block.col(j) = m.col(static_cast<Eigen::Index>(base + g.offsets[j]));
        }
        Matrix out = block * op;
        for (Eigen::Index j = 0; j < local; ++j) {
            m.col(static_cast<Eigen::Index>(base + g.offsets[j])) = out.col(j);
        }
    }
}

void apply_left(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Vector &v) {
    if (static_cast<std::size_t>(v.size()) != ix.dim()) {
        throw DimensionError("apply_left: vector dimension does not match system");
    }
    auto g = ix.groups(sites);
    const auto local = static_cast<Eigen::Index>(g.offsets.size());
    check_local_op(op, g.offsets.size(), "apply_left");
    Vector block(local);
    for (std::size_t base : g.bases) {
        for (Eigen::Index j = 0; j < local; ++j) {
            block(j) = v(static_cast<Eigen::Index>(base + g.offsets[j]));
        }
        Vector out = op * block;
        for (Eigen::Index j = 0; j < local; ++j) {
            v(static_cast<Eigen::Index>(base + g.offsets[j])) = out(j);
        }
    }
}

}  // namespace qdepth
