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

#ifndef QDEPTH_LINALG_H
#define QDEPTH_LINALG_H

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qdepth {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Entrywise tolerance used for every Hermiticity check in the library.
inline constexpr double kHermitianTol = 1e-12;

/// Raised for shape errors and malformed arguments (bad sites, non-square input, ...).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Pauli and common single-qubit matrices.
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
Matrix hadamard();
Matrix cnot();
Matrix identity(std::size_t dim);

/// Integer power l^k; throws DimensionError on overflow of the addressable size.
std::size_t ipow(std::size_t base, std::size_t exp);

Matrix tensor(const Matrix &a, const Matrix &b);
Matrix tensor_all(std::span<const Matrix> factors);

/// Acts as `op` on `sites` (1-based, in listed order; the first listed site is the most
/// significant local index of `op`) and as identity elsewhere. Site 1 is the leftmost
/// tensor factor.
Matrix embed(const Matrix &op, std::span<const int> sites, int n, int l);

bool is_square(const Matrix &a);
bool is_hermitian(const Matrix &a, double tol = kHermitianTol);
bool is_anti_hermitian(const Matrix &a, double tol = kHermitianTol);
bool is_unitary(const Matrix &a, double tol = 1e-10);

/// Throws DimensionError unless `a` is square.
void require_square(const Matrix &a, const char *what);
/// Throws DimensionError unless `a` is Hermitian within kHermitianTol.
void require_hermitian(const Matrix &a, const char *what);

/// Eigenvalues ascending, eigenvectors in columns. Input must be Hermitian.
struct HermitianEigen {
    RealVector values;
    Matrix vectors;
};
HermitianEigen hermitian_eigen(const Matrix &a);

double operator_norm(const Matrix &a);
double trace_norm(const Matrix &a);

Matrix commutator(const Matrix &a, const Matrix &b);

/// Hermitian sign(h) = Σ sign(λ) |v⟩⟨v| with sign(λ) = 0 for |λ| ≤ zero_tol.
Matrix hermitian_sign(const Matrix &h, double zero_tol = 0.0);

/// Maximum entrywise modulus |a - b|.
double max_abs_diff(const Matrix &a, const Matrix &b);

/// Maps a row-major digit tuple (site 1 first) to a flat basis index and back.
class SiteIndexer {
  public:
    SiteIndexer(int n, int l);

    int n() const { return n_; }
    int l() const { return l_; }
    std::size_t dim() const { return dim_; }

    /// Stride of a 1-based site in the flat index.
    std::size_t stride(int site) const { return strides_[site - 1]; }
    std::size_t digit(std::size_t index, int site) const { return (index / stride(site)) % l_; }

    /// For an operator on `sites`, offsets[j] is the flat offset of local index j, and bases
    /// lists the flat indices whose digits on `sites` are all zero.
    struct Groups {
        std::vector<std::size_t> offsets;
        std::vector<std::size_t> bases;
    };
    Groups groups(std::span<const int> sites) const;

  private:
    int n_;
    int l_;
    std::size_t dim_;
    std::vector<std::size_t> strides_;
};

/// In-place m ← embed(op, sites)·m, without materializing the embedding.
void apply_left(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Matrix &m);
/// In-place m ← m·embed(op, sites).
void apply_right(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Matrix &m);
/// In-place v ← embed(op, sites)·v.
void apply_left(const Matrix &op, std::span<const int> sites, const SiteIndexer &ix, Vector &v);

/// Validates a 1-based site list against n: in range and pairwise distinct.
void check_sites(std::span<const int> sites, int n);

}  // namespace qdepth

#endif
