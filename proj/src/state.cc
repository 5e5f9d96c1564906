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


#include "qdepth/state.h"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qdepth {

namespace {

void check_shape(int n, int l, std::size_t len, const char *what) {
    if (n < 1 || l < 2) {
        throw StateError(std::string(what) + ": need n >= 1 and l >= 2");
    }
    if (ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n)) != len) {
        throw StateError(std::string(what) + ": data length does not equal l^n");
    }
}

}  // namespace

PureState PureState::from_amplitudes(int n, int l, Vector amplitudes) {
    check_shape(n, l, static_cast<std::size_t>(amplitudes.size()), "PureState");
    if (std::abs(amplitudes.norm() - 1.0) > 1e-10) {
        throw StateError("PureState: amplitudes are not normalized (norm " + std::to_string(amplitudes.norm()) + ")");
    }
    return PureState(n, l, std::move(amplitudes));
}

DensityState DensityState::from_matrix(int n, int l, Matrix matrix) {
    if (!is_square(matrix)) {
        throw StateError("DensityState: matrix is not square");
    }
    check_shape(n, l, static_cast<std::size_t>(matrix.rows()), "DensityState");
    if (!is_hermitian(matrix)) {
        throw StateError("DensityState: matrix is not Hermitian within 1e-12");
    }
    const cplx tr = matrix.trace();
    if (std::abs(tr.real() - 1.0) > 1e-10 || std::abs(tr.imag()) > 1e-10) {
        throw StateError("DensityState: trace is not 1 within 1e-10");
    }
    DensityState rho(n, l, std::move(matrix));
    if (rho.min_eigenvalue() < -1e-10) {
        throw StateError("DensityState: matrix has a negative eigenvalue");
    }
    return rho;
}

double DensityState::purity() const { return (m_ * m_).trace().real(); }

double DensityState::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

int SeparableInput::n() const {
    return terms.empty() ? 0 : static_cast<int>(terms.front().factors.size());
}

int SeparableInput::l() const {
    if (terms.empty() || terms.front().factors.empty()) {
        return 0;
    }
    return static_cast<int>(terms.front().factors.front().rows());
}

void SeparableInput::validate() const {
    if (terms.empty()) {
        throw StateError("SeparableInput: no terms");
    }
    const int sites = n();
    const int ldim = l();
    if (sites < 1 || ldim < 2) {
        throw StateError("SeparableInput: empty factor list or local dimension < 2");
    }
    double total = 0.0;
    for (const auto &t : terms) {
        if (t.weight < 0.0) {
            throw StateError("SeparableInput: negative weight");
        }
        total += t.weight;
        if (static_cast<int>(t.factors.size()) != sites) {
            throw StateError("SeparableInput: terms have different site counts");
        }
        for (const auto &f : t.factors) {
            if (f.rows() != ldim) {
                throw StateError("SeparableInput: factors have different local dimensions");
            }
            DensityState::from_matrix(1, ldim, f);
        }
    }
    if (std::abs(total - 1.0) > 1e-12) {
        throw StateError("SeparableInput: weights do not sum to 1 within 1e-12");
    }
}

PureState product_state(std::span<const Vector> factors) {
    if (factors.empty()) {
        throw StateError("product_state: no factors");
    }
    const auto l = factors.front().size();
    Vector v = Vector::Ones(1);
    for (const auto &f : factors) {
        if (f.size() != l) {
            throw StateError("product_state: factors have different dimensions");
        }
        if (std::abs(f.norm() - 1.0) > 1e-10) {
            throw StateError("product_state: factor is not normalized");
        }
        Vector next(v.size() * l);
        for (Eigen::Index i = 0; i < v.size(); ++i) {
            next.segment(i * l, l) = v(i) * f;
        }
        v = std::move(next);
    }
    return PureState::from_amplitudes(static_cast<int>(factors.size()), static_cast<int>(l), v / v.norm());
}

PureState cat_state(int n) {
    if (n < 1) {
        throw StateError("cat_state: n must be >= 1");
    }
    const std::size_t dim = ipow(2, static_cast<std::size_t>(n));
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    const double s = 1.0 / std::sqrt(2.0);
    v(0) = s;
    v(static_cast<Eigen::Index>(dim - 1)) = s;
    return PureState::from_amplitudes(n, 2, std::move(v));
}

PureState basis_state(int n, int l, std::size_t index) {
    if (n < 1 || l < 2) {
        throw StateError("basis_state: need n >= 1 and l >= 2");
    }
    const std::size_t dim = ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n));
    if (index >= dim) {
        throw StateError("basis_state: index out of range");
    }
    Vector v = Vector::Zero(static_cast<Eigen::Index>(dim));
    v(static_cast<Eigen::Index>(index)) = 1.0;
    return PureState::from_amplitudes(n, l, std::move(v));
}

PureState zeros_state(int n, int l) { return basis_state(n, l, 0); }

DensityState to_density(const PureState &psi) {
    Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
    return DensityState::from_matrix(psi.n(), psi.l(), std::move(m));
}

DensityState maximally_mixed(int n, int l) {
    const std::size_t dim = ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n));
    return DensityState::from_matrix(n, l, identity(dim) / static_cast<double>(dim));
}

DensityState mix(const SeparableInput &input) {
    input.validate();
    const int n = input.n();
    const int l = input.l();
    const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n)));
    Matrix out = Matrix::Zero(dim, dim);
    for (const auto &t : input.terms) {
        if (t.weight == 0.0) {
            continue;
        }
        out += t.weight * tensor_all(t.factors);
    }
    return DensityState::from_matrix(n, l, std::move(out));
}

SeparableInput product_input(std::span<const Vector> kets) {
    SeparableTerm term;
    term.weight = 1.0;
    for (const auto &k : kets) {
        if (std::abs(k.norm() - 1.0) > 1e-10) {
            throw StateError("product_input: ket is not normalized");
        }
        term.factors.push_back(k * k.adjoint());
    }
    SeparableInput in;
    in.terms.push_back(std::move(term));
    return in;
}

double fidelity(const PureState &a, const PureState &b) {
    if (a.dim() != b.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    return std::norm(a.amplitudes().dot(b.amplitudes()));
}

double fidelity(const PureState &psi, const DensityState &rho) {
    if (psi.dim() != rho.dim()) {
        throw DimensionError("fidelity: dimension mismatch");
    }
    return psi.amplitudes().dot(rho.matrix() * psi.amplitudes()).real();
}

Vector qubit_ket(char label) {
    const double s = 1.0 / std::sqrt(2.0);
    Vector v(2);
    switch (label) {
        case '0': v << 1, 0; break;
        case '1': v << 0, 1; break;
        case '+': v << s, s; break;
        case '-': v << s, -s; break;
        default: throw StateError(std::string("unknown qubit ket label '") + label + "'");
    }
    return v;
}

namespace {

nlohmann::json encode_entries(const cplx *data, std::size_t count) {
    auto arr = nlohmann::json::array();
    for (std::size_t i = 0; i < count; ++i) {
        arr.push_back({data[i].real(), data[i].imag()});
    }
    return arr;
}

}  // namespace

nlohmann::json to_json(const PureState &psi) {
    return {{"n", psi.n()},
            {"l", psi.l()},
            {"kind", "pure"},
            {"data", encode_entries(psi.amplitudes().data(), psi.dim())}};
}

nlohmann::json to_json(const DensityState &rho) {
    // Eigen stores column-major; the document is row-major.
    Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = rho.matrix();
    return {{"n", rho.n()},
            {"l", rho.l()},
            {"kind", "density"},
            {"data", encode_entries(rm.data(), static_cast<std::size_t>(rm.size()))}};
}

DensityState density_from_json(const nlohmann::json &doc) {
    try {
        const int n = doc.at("n").get<int>();
        const int l = doc.at("l").get<int>();
        const auto kind = doc.at("kind").get<std::string>();
        const auto &data = doc.at("data");
        std::vector<cplx> entries;
        entries.reserve(data.size());
        for (const auto &e : data) {
            if (!e.is_array() || e.size() != 2) {
                throw StateError("state document: entries must be [re, im] pairs");
            }
            entries.emplace_back(e[0].get<double>(), e[1].get<double>());
        }
        if (n < 1 || l < 2) {
            throw StateError("state document: need n >= 1 and l >= 2");
        }
        const auto dim = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(l), static_cast<std::size_t>(n)));
        if (kind == "pure") {
            if (static_cast<Eigen::Index>(entries.size()) != dim) {
                throw StateError("state document: pure data length must be l^n");
            }
            Vector v = Eigen::Map<Vector>(entries.data(), dim);
            return to_density(PureState::from_amplitudes(n, l, std::move(v)));
        }
        if (kind == "density") {
            if (static_cast<Eigen::Index>(entries.size()) != dim * dim) {
                throw StateError("state document: density data length must be l^(2n)");
            }
            Matrix m = Eigen::Map<Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                entries.data(), dim, dim);
            return DensityState::from_matrix(n, l, std::move(m));
        }
        throw StateError("state document: kind must be \"pure\" or \"density\"");
    } catch (const nlohmann::json::exception &e) {
        throw StateError(std::string("state document: ") + e.what());
    }
}

}  // namespace qdepth
