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


#include "qdepth/measurement.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace qdepth {

namespace {

Matrix hermitian_part(const Matrix &m) { return (m + m.adjoint()) * 0.5; }

int site_count(std::size_t dim, int l) {
    int n = 0;
    std::size_t d = 1;
    while (d < dim) {
        d *= static_cast<std::size_t>(l);
        ++n;
    }
    if (d != dim) {
        throw DimensionError("dimension " + std::to_string(dim) + " is not a power of " + std::to_string(l));
    }
    return n;
}

double trace_real(const Matrix &m) { return m.trace().real(); }

std::size_t sample_index(const std::vector<double> &probs, Rng &rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < probs.size(); ++i) {
        acc += probs[i];
        if (u < acc) {
            return i;
        }
    }
    // Rounding left u above the final cumulative sum: take the last outcome with mass.
    for (std::size_t i = probs.size(); i-- > 0;) {
        if (probs[i] > 0.0) {
            return i;
        }
    }
    return probs.size() - 1;
}

}  // namespace

Matrix SpectralDecomposition::reconstruct() const {
    const auto d = static_cast<Eigen::Index>(dim());
    Matrix out = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < projectors.size(); ++i) {
        out += eigenvalues[i] * projectors[i];
    }
    return out;
}

SpectralDecomposition spectral_decompose(const Matrix &a, double cluster_tol) {
    auto eig = hermitian_eigen(a);
    SpectralDecomposition dec;
    const auto d = eig.values.size();
    Eigen::Index start = 0;
    while (start < d) {
        Eigen::Index end = start + 1;
        while (end < d && eig.values(end) - eig.values(start) <= cluster_tol) {
            ++end;
        }
        const Matrix v = eig.vectors.middleCols(start, end - start);
        dec.eigenvalues.push_back(eig.values.segment(start, end - start).mean());
        dec.projectors.push_back(hermitian_part(v * v.adjoint()));
        start = end;
    }
    return dec;
}

void ProductProjection::validate() const {
    if (factors.empty()) {
        throw std::invalid_argument("ProductProjection: no factors");
    }
    const auto l = factors.front().rows();
    for (const auto &q : factors) {
        if (q.rows() != l || q.cols() != l) {
            throw std::invalid_argument("ProductProjection: factors must all be l x l");
        }
        if (!is_hermitian(q, 1e-10) || max_abs_diff(q * q, q) > 1e-10) {
            throw std::invalid_argument("ProductProjection: factor is not an orthogonal projection");
        }
    }
}

Matrix ProductProjection::matrix() const { return tensor_all(factors); }

std::optional<ProductProjection> is_product_projection(const Matrix &p, int l) {
    if (!is_square(p) || !is_hermitian(p, 1e-10) || max_abs_diff(p * p, p) > 1e-10) {
        throw std::invalid_argument("is_product_projection: input is not an orthogonal projection");
    }
    const int n = site_count(static_cast<std::size_t>(p.rows()), l);
    SiteIndexer ix(n, l);
    ProductProjection out;
    for (int site = 1; site <= n; ++site) {
        // For P = ⊗Q_j the reduced operator on `site` is Q_site times a positive constant.
        const std::array<int, 1> sites{site};
        auto g = ix.groups(sites);
        Matrix red = Matrix::Zero(l, l);
        for (std::size_t base : g.bases) {
            for (int a = 0; a < l; ++a) {
                for (int b = 0; b < l; ++b) {
                    red(a, b) += p(static_cast<Eigen::Index>(base + g.offsets[a]),
                                   static_cast<Eigen::Index>(base + g.offsets[b]));
                }
            }
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(red));
        const double top = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
        Matrix q = Matrix::Zero(l, l);
        for (Eigen::Index k = 0; k < l; ++k) {
            if (es.eigenvalues()(k) > 1e-8 * top) {
                q += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            }
        }
        out.factors.push_back(hermitian_part(q));
    }
    if (max_abs_diff(out.matrix(), p) > 1e-8) {
        return std::nullopt;
    }
    return out;
}

std::vector<MeasurementOutcome> strong_distribution(const DensityState &rho, const SpectralDecomposition &dec) {
    if (dec.dim() != rho.dim()) {
        throw DimensionError("strong_measure: decomposition dimension does not match the state");
    }
    std::vector<MeasurementOutcome> out;
    for (std::size_t i = 0; i < dec.projectors.size(); ++i) {
        const Matrix &p = dec.projectors[i];
        const Matrix prp = p * rho.matrix() * p;
        const double prob = trace_real(prp);
        if (prob <= 1e-12) {
            continue;
        }
        out.push_back({i, dec.eigenvalues[i], prob,
                       DensityState::from_matrix(rho.n(), rho.l(), hermitian_part(prp / prob))});
    }
    if (out.empty()) {
        throw std::invalid_argument("strong_measure: every outcome has probability below 1e-12");
    }
    return out;
}

MeasurementOutcome strong_measure(const DensityState &rho, const SpectralDecomposition &dec, Rng &rng) {
    auto dist = strong_distribution(rho, dec);
    std::vector<double> probs;
    for (const auto &o : dist) {
        probs.push_back(o.probability);
    }
    return dist[sample_index(probs, rng)];
}

namespace {

struct SiteBasis {
    std::vector<double> values;
    std::vector<Matrix> projectors;
};

std::vector<SiteBasis> site_bases(const DensityState &rho, std::span<const Matrix> obs) {
    if (static_cast<int>(obs.size()) != rho.n()) {
        throw DimensionError("weak measurement needs one observable per site");
    }
    std::vector<SiteBasis> out;
    for (const auto &a : obs) {
        if (a.rows() != rho.l()) {
            throw DimensionError("site observable dimension does not match l");
        }
        auto dec = spectral_decompose(a);
        out.push_back({dec.eigenvalues, dec.projectors});
    }
    return out;
}

// Projects site `site` of m with q on both sides: (1⊗q⊗1) m (1⊗q⊗1).
Matrix project_site(const Matrix &m, const Matrix &q, int site, const SiteIndexer &ix) {
    Matrix out = m;
    const std::array<int, 1> sites{site};
    apply_left(q, sites, ix, out);
    apply_right(q, sites, ix, out);
    return out;
}

}  // namespace

WeakRecord weak_measure_product(const DensityState &rho, std::span<const Matrix> site_observables,
                                const PostFn &post_fn, Rng &rng) {
    const auto bases = site_bases(rho, site_observables);
    SiteIndexer ix(rho.n(), rho.l());
    Matrix cur = rho.matrix();
    WeakRecord rec{{}, 1.0, 1.0, 1.0, rho};
    for (int site = 1; site <= rho.n(); ++site) {
        const auto &b = bases[static_cast<std::size_t>(site - 1)];
        std::vector<Matrix> branches;
        std::vector<double> probs;
        for (const auto &q : b.projectors) {
            branches.push_back(project_site(cur, q, site, ix));
            probs.push_back(std::max(0.0, trace_real(branches.back())));
        }
        const std::size_t k = sample_index(probs, rng);
        rec.site_outcomes.push_back(b.values[k]);
        rec.product *= b.values[k];
        rec.probability *= probs[k];
        cur = branches[k] / probs[k];
    }
    rec.combined_value = post_fn ? post_fn(rec.product) : rec.product;
    rec.post_state = DensityState::from_matrix(rho.n(), rho.l(), hermitian_part(cur));
    return rec;
}

std::vector<WeakRecord> weak_distribution(const DensityState &rho, std::span<const Matrix> site_observables,
                                          const PostFn &post_fn) {
    const auto bases = site_bases(rho, site_observables);
    SiteIndexer ix(rho.n(), rho.l());
    std::vector<WeakRecord> out;
    // Depth-first over joint outcomes; branches carry the unnormalized P ρ P.
    struct Frame {
        int site;
        Matrix m;
        std::vector<double> outcomes;
    };
    std::vector<Frame> stack;
    stack.push_back({1, rho.matrix(), {}});
    while (!stack.empty()) {
        Frame f = std::move(stack.back());
        stack.pop_back();
        const double mass = trace_real(f.m);
        if (mass <= 1e-12) {
            continue;
        }
        if (f.site > rho.n()) {
            double prod = 1.0;
            for (double v : f.outcomes) {
                prod *= v;
            }
            out.push_back({f.outcomes, prod, post_fn ? post_fn(prod) : prod, mass,
                           DensityState::from_matrix(rho.n(), rho.l(), hermitian_part(f.m / mass))});
            continue;
        }
        const auto &b = bases[static_cast<std::size_t>(f.site - 1)];
        for (std::size_t k = b.projectors.size(); k-- > 0;) {
            auto outcomes = f.outcomes;
            outcomes.push_back(b.values[k]);
            stack.push_back({f.site + 1, project_site(f.m, b.projectors[k], f.site, ix), std::move(outcomes)});
        }
    }
    return out;
}

namespace {

std::vector<std::pair<double, double>> collapse(std::vector<std::pair<double, double>> vp) {
    std::sort(vp.begin(), vp.end());
    std::vector<std::pair<double, double>> out;
    for (const auto &[v, p] : vp) {
        if (!out.empty() && std::abs(out.back().first - v) <= 1e-9) {
            out.back().second += p;
        } else {
            out.emplace_back(v, p);
        }
    }
    return out;
}

}  // namespace

std::vector<std::pair<double, double>> value_distribution(const std::vector<WeakRecord> &records) {
    std::vector<std::pair<double, double>> vp;
    for (const auto &r : records) {
        vp.emplace_back(r.combined_value, r.probability);
    }
    return collapse(std::move(vp));
}

std::vector<std::pair<double, double>> value_distribution(const std::vector<MeasurementOutcome> &outcomes) {
    std::vector<std::pair<double, double>> vp;
    for (const auto &o : outcomes) {
        vp.emplace_back(o.value, o.probability);
    }
    return collapse(std::move(vp));
}

DensityState ensemble_average(const std::vector<WeakRecord> &records) {
    if (records.empty()) {
        throw std::invalid_argument("ensemble_average: no records");
    }
    const auto &first = records.front().post_state;
    Matrix acc = Matrix::Zero(first.matrix().rows(), first.matrix().cols());
    double total = 0.0;
    for (const auto &r : records) {
        acc += r.probability * r.post_state.matrix();
        total += r.probability;
    }
    return DensityState::from_matrix(first.n(), first.l(), hermitian_part(acc / total));
}

Matrix parity_x(int n) {
    if (n < 1) {
        throw DimensionError("parity_x: n must be >= 1");
    }
    std::vector<Matrix> xs(static_cast<std::size_t>(n), pauli_x());
    return tensor_all(xs);
}

Network build_parity_conjugator(int n) {
    if (n < 1) {
        throw NetworkError("build_parity_conjugator: n must be >= 1");
    }
    Network net(n, 2);
    for (int r = 1; r <= n - 1; ++r) {
        Step s;
        s.channels.push_back(make_gate("CNOT", {}, {n - r + 1, n - r}, 2));
        net.add_step(std::move(s));
    }
    return net;
}

std::vector<MeasurementOutcome> conjugated_strong_distribution(const DensityState &rho, const Network &u) {
    if (!u.all_unitary()) {
        throw NetworkError("conjugated_strong_measure: network must be unitary");
    }
    if (u.n() != rho.n() || u.l() != rho.l() || rho.l() != 2) {
        throw DimensionError("conjugated_strong_measure: network and qubit state shapes differ");
    }
    const DensityState rotated = apply(inverse(u), rho);
    const std::array<int, 1> last{rho.n()};
    const auto dec = spectral_decompose(embed(pauli_x(), last, rho.n(), 2));
    auto dist = strong_distribution(rotated, dec);
    for (auto &o : dist) {
        o.post_state = apply(u, o.post_state);
    }
    return dist;
}

MeasurementOutcome conjugated_strong_measure(const DensityState &rho, const Network &u, Rng &rng) {
    auto dist = conjugated_strong_distribution(rho, u);
    std::vector<double> probs;
    for (const auto &o : dist) {
        probs.push_back(o.probability);
    }
    return dist[sample_index(probs, rng)];
}

double commutator_opnorm(const Matrix &a, const Matrix &b) { return operator_norm(commutator(a, b)); }

Theorem2Result theorem2_check(const Network &net, const ProductProjection &p, const SiteObservable &c) {
    if (!net.all_unitary()) {
        throw NetworkError("theorem2_check: network must consist of unitary channels");
    }
    p.validate();
    if (static_cast<int>(p.factors.size()) != net.n() || p.factors.front().rows() != net.l() || c.l() != net.l()) {
        throw DimensionError("theorem2_check: projection, observable and network shapes differ");
    }
    Theorem2Result res;
    res.n = net.n();
    res.depth = net.depth();
    const Matrix dual = apply_dual(net, p.matrix());
    res.lhs = commutator_opnorm(averaging_matrix(c, net.n()), dual);
    res.bound = std::ldexp(1.0, net.depth()) / std::sqrt(2.0 * net.n());
    res.pass = res.lhs <= res.bound + 1e-8;
    return res;
}

}  // namespace qdepth
