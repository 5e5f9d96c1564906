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

#include "oracles.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qdepth::oracle {

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            for (Eigen::Index k = 0; k < b.rows(); ++k) {
                for (Eigen::Index m = 0; m < b.cols(); ++m) {
                    out(i * b.rows() + k, j * b.cols() + m) = a(i, j) * b(k, m);
                }
            }
        }
    }
    return out;
}

Matrix on_site(const Matrix &a, int site, int n) {
    const Eigen::Index l = a.rows();
    Matrix out = Matrix::Identity(1, 1);
    for (int s = 1; s <= n; ++s) {
        out = kron(out, s == site ? a : Matrix(Matrix::Identity(l, l)));
    }
    return out;
}

Matrix average(const Matrix &c, int n) {
    Matrix sum = on_site(c, 1, n);
    for (int s = 2; s <= n; ++s) {
        sum += on_site(c, s, n);
    }
    return sum / static_cast<double>(n);
}

double power_iteration_norm(const Matrix &a, int iterations) {
    const Matrix g = a.adjoint() * a;
    Vector v = Vector::Ones(g.cols());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        v(i) += cplx(0.01 * static_cast<double>(i), 0.003 * static_cast<double>(i * i));
    }
    v.normalize();
    for (int it = 0; it < iterations; ++it) {
        v = g * v;
        v.normalize();
    }
    return std::sqrt(std::abs(v.dot(g * v)));
}

double trace_norm_via_gram(const Matrix &a, Matrix *polar) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.adjoint() * a);
    double total = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        total += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
    }
    if (polar != nullptr) {
        // a = w |a| with |a| = sqrt(a†a); then tr(a w†) = tr|a|. Assumes a invertible.
        RealVector inv_sqrt = es.eigenvalues().cwiseSqrt().cwiseInverse();
        const Matrix abs_inv = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().adjoint();
        *polar = (a * abs_inv).adjoint();
    }
    return total;
}

namespace {

std::size_t pow_int(int base, int exp) {
    std::size_t out = 1;
    for (int i = 0; i < exp; ++i) {
        out *= static_cast<std::size_t>(base);
    }
    return out;
}

}  // namespace

Matrix partial_trace(const Matrix &a, int site, int n, int l) {
    const std::size_t left = pow_int(l, site - 1);
    const std::size_t right = pow_int(l, n - site);
    const auto d = static_cast<Eigen::Index>(left * right);
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t li = 0; li < left; ++li) {
        for (std::size_t ri = 0; ri < right; ++ri) {
            for (std::size_t lj = 0; lj < left; ++lj) {
                for (std::size_t rj = 0; rj < right; ++rj) {
                    cplx sum = 0.0;
                    for (int y = 0; y < l; ++y) {
                        const auto row = static_cast<Eigen::Index>((li * l + y) * right + ri);
                        const auto col = static_cast<Eigen::Index>((lj * l + y) * right + rj);
                        sum += a(row, col);
                    }
                    out(static_cast<Eigen::Index>(li * right + ri), static_cast<Eigen::Index>(lj * right + rj)) = sum;
                }
            }
        }
    }
    return out;
}

Matrix trivialize_site(const Matrix &a, int site, int n, int l) {
    const Matrix reduced = partial_trace(a, site, n, l) / static_cast<double>(l);
    const std::size_t left = pow_int(l, site - 1);
    const std::size_t right = pow_int(l, n - site);
    Matrix out = Matrix::Zero(a.rows(), a.cols());
    for (std::size_t li = 0; li < left; ++li) {
        for (std::size_t ri = 0; ri < right; ++ri) {
            for (std::size_t lj = 0; lj < left; ++lj) {
                for (std::size_t rj = 0; rj < right; ++rj) {
                    const cplx v = reduced(static_cast<Eigen::Index>(li * right + ri),
                                           static_cast<Eigen::Index>(lj * right + rj));
                    for (int y = 0; y < l; ++y) {
                        out(static_cast<Eigen::Index>((li * l + y) * right + ri),
                            static_cast<Eigen::Index>((lj * l + y) * right + rj)) = v;
                    }
                }
            }
        }
    }
    return out;
}

std::set<int> exact_support(const Matrix &a, int n, int l, double tol) {
    std::set<int> out;
    for (int y = 1; y <= n; ++y) {
        if ((a - trivialize_site(a, y, n, l)).cwiseAbs().maxCoeff() > tol) {
            out.insert(y);
        }
    }
    return out;
}

double bloch_variance(const Matrix &rho, int n, double vx, double vy, double vz) {
    Matrix c(2, 2);
    c << cplx(vz, 0), cplx(vx, -vy), cplx(vx, vy), cplx(-vz, 0);
    const Matrix a = average(0.5 * c, n);
    const cplx m1 = (a * rho).trace();
    const cplx m2 = (a * a * rho).trace();
    return m2.real() - m1.real() * m1.real();
}

double grid_max_variance(const Matrix &rho, int n, int lat, int lon) {
    const double pi = std::acos(-1.0);
    double best = 0.0;
    for (int i = 0; i < lat; ++i) {
        // Odd lat counts would miss the equator; include it explicitly via i == lat / 2.
        const double theta = pi * i / (lat - 1);
        const double t = i == lat / 2 ? pi / 2 : theta;
        for (int j = 0; j < lon; ++j) {
            const double phi = 2 * pi * j / lon;
            best = std::max(best, bloch_variance(rho, n, std::sin(t) * std::cos(phi), std::sin(t) * std::sin(phi),
                                                 std::cos(t)));
        }
    }
    return best;
}

Matrix reversed_cnot() {
    Matrix swap = Matrix::Zero(4, 4);
    swap(0, 0) = swap(1, 2) = swap(2, 1) = swap(3, 3) = 1.0;
    Matrix cx = Matrix::Zero(4, 4);
    cx(0, 0) = cx(1, 1) = cx(2, 3) = cx(3, 2) = 1.0;
    return swap * cx * swap;
}

Matrix conjugate(const Matrix &a, const Matrix &u) { return u.adjoint() * a * u; }

}  // namespace qdepth::oracle
