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
#include <cmath>
#include <numeric>

namespace qdepth {

namespace {

bool exactly_equal(const Matrix &a, const Matrix &b) {
    return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

const cplx kI{0.0, 1.0};

}  // namespace

LocalChannel::LocalChannel(std::vector<int> support, std::vector<Matrix> kraus, int l,
                           std::optional<GateLabel> label)
    : support_(std::move(support)), kraus_(std::move(kraus)), l_(l), unitary_(false), label_(std::move(label)) {
    if (support_.empty() || support_.size() > 2) {
        throw NetworkError("channel support must contain one or two sites");
    }
    if (support_.size() == 2 && support_[0] == support_[1]) {
        throw NetworkError("channel support sites must be distinct");
    }
    for (int s : support_) {
        if (s < 1) {
            throw NetworkError("channel site " + std::to_string(s) + " is not a 1-based index");
        }
    }
    if (l_ < 2) {
        throw NetworkError("local dimension must be >= 2");
    }
    if (kraus_.empty()) {
        throw NetworkError("channel has no Kraus operators");
    }
    const auto d = static_cast<Eigen::Index>(ipow(static_cast<std::size_t>(l_), support_.size()));
    Matrix sum = Matrix::Zero(d, d);
    for (const auto &k : kraus_) {
        if (k.rows() != d || k.cols() != d) {
            throw NetworkError("Kraus operator is " + std::to_string(k.rows()) + "x" + std::to_string(k.cols()) +
                               ", expected " + std::to_string(d) + "x" + std::to_string(d));
        }
        sum += k.adjoint() * k;
    }
    if (max_abs_diff(sum, identity(static_cast<std::size_t>(d))) > 1e-10) {
        throw NetworkError("Kraus family is not trace preserving (sum K^dag K != I within 1e-10)");
    }
    unitary_ = kraus_.size() == 1 && qdepth::is_unitary(kraus_.front());
}

int LocalChannel::min_site() const { return *std::min_element(support_.begin(), support_.end()); }

bool LocalChannel::touches(int site) const {
    return std::find(support_.begin(), support_.end(), site) != support_.end();
}

bool LocalChannel::operator==(const LocalChannel &other) const {
    if (support_ != other.support_ || l_ != other.l_ || kraus_.size() != other.kraus_.size()) {
        return false;
    }
    for (std::size_t i = 0; i < kraus_.size(); ++i) {
        if (!exactly_equal(kraus_[i], other.kraus_[i])) {
            return false;
        }
    }
    return true;
}

bool Step::local_only() const {
    return std::all_of(channels.begin(), channels.end(), [](const LocalChannel &c) { return c.arity() == 1; });
}

bool Step::has_bilocal() const { return !local_only(); }

Network::Network(int n, int l, std::vector<Step> steps) : n_(n), l_(l) {
    if (n < 1) {
        throw NetworkError("network needs at least one site");
    }
    if (l < 2) {
        throw NetworkError("local dimension must be >= 2");
    }
    for (auto &s : steps) {
        add_step(std::move(s));
    }
}

void Network::add_step(Step step) {
    std::vector<int> owner(static_cast<std::size_t>(n_) + 1, -1);
    for (std::size_t c = 0; c < step.channels.size(); ++c) {
        const auto &ch = step.channels[c];
        if (ch.local_dim() != l_) {
            throw NetworkError("channel local dimension does not match the network");
        }
        for (int s : ch.support()) {
            if (s > n_) {
                throw NetworkError("channel site " + std::to_string(s) + " out of range 1.." + std::to_string(n_));
            }
            if (owner[s] >= 0) {
                throw NetworkError("channels in one step overlap on site " + std::to_string(s));
            }
            owner[s] = static_cast<int>(c);
        }
    }
    std::stable_sort(step.channels.begin(), step.channels.end(),
                     [](const LocalChannel &a, const LocalChannel &b) { return a.min_site() < b.min_site(); });
    steps_.push_back(std::move(step));
}

bool Network::all_unitary() const {
    for (const auto &s : steps_) {
        for (const auto &c : s.channels) {
            if (!c.is_unitary()) {
                return false;
            }
        }
    }
    return true;
}

std::optional<Matrix> library_unitary(const std::string &name) {
    if (name == "H") return hadamard();
    if (name == "X") return pauli_x();
    if (name == "Y") return pauli_y();
    if (name == "Z") return pauli_z();
    if (name == "S") {
        Matrix m(2, 2);
        m << 1, 0, 0, kI;
        return m;
    }
    if (name == "T") {
        Matrix m(2, 2);
        m << 1, 0, 0, std::polar(1.0, M_PI / 4);
        return m;
    }
    if (name == "CNOT") return cnot();
    if (name == "CZ") {
        Matrix m = identity(4);
        m(3, 3) = -1;
        return m;
    }
    if (name == "SWAP") {
        Matrix m = Matrix::Zero(4, 4);
        m(0, 0) = 1;
        m(1, 2) = 1;
        m(2, 1) = 1;
        m(3, 3) = 1;
        return m;
    }
    return std::nullopt;
}

std::vector<Matrix> depolarizing_kraus(double p, int arity, int l) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw NetworkError("depolarizing strength must lie in [0, 1]");
    }
    if (arity < 1 || arity > 2) {
        throw NetworkError("depolarizing channel acts on one or two sites");
    }
    // Weyl operators X^a Z^b on C^l; their tensor products form a unitary error basis on C^d.
    const auto ul = static_cast<Eigen::Index>(l);
    std::vector<Matrix> weyl;
    const cplx omega = std::polar(1.0, 2.0 * M_PI / static_cast<double>(l));
    for (Eigen::Index a = 0; a < ul; ++a) {
        for (Eigen::Index b = 0; b < ul; ++b) {
            Matrix w = Matrix::Zero(ul, ul);
            for (Eigen::Index j = 0; j < ul; ++j) {
                w((j + a) % ul, j) = std::pow(omega, static_cast<double>(b * j));
            }
            weyl.push_back(std::move(w));
        }
    }
    std::vector<Matrix> basis = weyl;
    if (arity == 2) {
        basis.clear();
        for (const auto &w1 : weyl) {
            for (const auto &w2 : weyl) {
                basis.push_back(tensor(w1, w2));
            }
        }
    }
    const double d2 = static_cast<double>(basis.size());
    std::vector<Matrix> kraus;
    kraus.push_back(std::sqrt(1.0 - p + p / d2) * basis.front());
    if (p > 0.0) {
        for (std::size_t i = 1; i < basis.size(); ++i) {
            kraus.push_back(std::sqrt(p / d2) * basis[i]);
        }
    }
    return kraus;
}

LocalChannel make_gate(const std::string &name, const std::vector<double> &params, std::vector<int> sites, int l) {
    if (name == "DEPOL") {
        if (params.size() != 1) {
            throw NetworkError("DEPOL takes exactly one parameter");
        }
        const int arity = static_cast<int>(sites.size());
        return LocalChannel(std::move(sites), depolarizing_kraus(params[0], arity, l), l, GateLabel{name, params});
    }
    auto u = library_unitary(name);
    if (!u) {
        throw NetworkError("unknown gate " + name);
    }
    if (!params.empty()) {
        throw NetworkError("gate " + name + " takes no parameters");
    }
    if (l != 2) {
        throw NetworkError("library gate " + name + " is defined for qubits only");
    }
    const int arity = u->rows() == 2 ? 1 : 2;
    if (static_cast<int>(sites.size()) != arity) {
        throw NetworkError("gate " + name + " expects " + std::to_string(arity) + " site(s)");
    }
    return LocalChannel(std::move(sites), {*u}, l, GateLabel{name, {}});
}

namespace {

Matrix apply_kraus_family(const LocalChannel &ch, const SiteIndexer &ix, const Matrix &m, bool dual) {
    if (ch.is_unitary()) {
        Matrix out = m;
        const auto &u = ch.kraus().front();
        if (dual) {
            apply_left(u.adjoint(), ch.support(), ix, out);
            apply_right(u, ch.support(), ix, out);
        } else {
            apply_left(u, ch.support(), ix, out);
            apply_right(u.adjoint(), ch.support(), ix, out);
        }
        return out;
    }
    Matrix acc = Matrix::Zero(m.rows(), m.cols());
    for (const auto &k : ch.kraus()) {
        Matrix t = m;
        if (dual) {
            apply_left(k.adjoint(), ch.support(), ix, t);
            apply_right(k, ch.support(), ix, t);
        } else {
            apply_left(k, ch.support(), ix, t);
            apply_right(k.adjoint(), ch.support(), ix, t);
        }
        acc += t;
    }
    return acc;
}

void check_system(const Network &net, int n, int l, const char *what) {
    if (n != net.n() || l != net.l()) {
        throw DimensionError(std::string(what) + ": state shape does not match the network");
    }
}

}  // namespace

DensityState apply(const Network &net, const DensityState &rho) {
    check_system(net, rho.n(), rho.l(), "apply");
    SiteIndexer ix(net.n(), net.l());
    Matrix m = rho.matrix();
    for (const auto &step : net.steps()) {
        for (const auto &ch : step.channels) {
            m = apply_kraus_family(ch, ix, m, false);
        }
    }
    // Rounding drift across many conjugations stays far below the 1e-12 Hermiticity budget,
    // but the output is re-validated as a state.
    return DensityState::from_matrix(net.n(), net.l(), std::move(m));
}

PureState apply_pure(const Network &net, const PureState &psi) {
    check_system(net, psi.n(), psi.l(), "apply_pure");
    if (!net.all_unitary()) {
        throw NetworkError("apply_pure: network contains non-unitary channels");
    }
    SiteIndexer ix(net.n(), net.l());
    Vector v = psi.amplitudes();
    for (const auto &step : net.steps()) {
        for (const auto &ch : step.channels) {
            apply_left(ch.kraus().front(), ch.support(), ix, v);
        }
    }
    v /= v.norm();
    return PureState::from_amplitudes(net.n(), net.l(), std::move(v));
}

Matrix apply_dual(const Network &net, const Matrix &a) {
    SiteIndexer ix(net.n(), net.l());
    if (!is_square(a) || static_cast<std::size_t>(a.rows()) != ix.dim()) {
        throw DimensionError("apply_dual: observable must be l^n x l^n");
    }
    Matrix m = a;
    for (auto step = net.steps().rbegin(); step != net.steps().rend(); ++step) {
        for (auto ch = step->channels.rbegin(); ch != step->channels.rend(); ++ch) {
            m = apply_kraus_family(*ch, ix, m, true);
        }
    }
    return m;
}

Network inverse(const Network &net) {
    if (!net.all_unitary()) {
        throw NetworkError("inverse: network contains non-unitary channels");
    }
    Network out(net.n(), net.l());
    for (auto step = net.steps().rbegin(); step != net.steps().rend(); ++step) {
        Step s;
        for (const auto &ch : step->channels) {
            s.channels.emplace_back(ch.support(), std::vector<Matrix>{ch.kraus().front().adjoint()}, ch.local_dim());
        }
        out.add_step(std::move(s));
    }
    return out;
}

Network cat_ladder(int k, bool include_prologue) {
    if (k < 1) {
        throw NetworkError("cat_ladder: k must be >= 1");
    }
    if (k > 20) {
        throw NetworkError("cat_ladder: k too large");
    }
    const int n = 1 << k;
    Network net(n, 2);
    for (int r = 1; r <= k; ++r) {
        const int half = 1 << (r - 1);
        Step step;
        for (int j = 1; j <= half; ++j) {
            if (r == 1 && include_prologue) {
                Matrix u = cnot() * tensor(hadamard(), identity(2));
                step.channels.emplace_back(std::vector<int>{j, half + j}, std::vector<Matrix>{u}, 2);
            } else {
                step.channels.push_back(make_gate("CNOT", {}, {j, half + j}, 2));
            }
        }
        net.add_step(std::move(step));
    }
    return net;
}

Network random_shallow(const RandomNetworkOptions &options) {
    if (options.gate_pool.empty()) {
        throw NetworkError("random_shallow: empty gate pool");
    }
    if (options.depth < 0) {
        throw NetworkError("random_shallow: depth must be >= 0");
    }
    if (!(options.noise >= 0.0 && options.noise <= 1.0)) {
        throw NetworkError("random_shallow: noise must lie in [0, 1]");
    }
    const int n = options.n;
    const int l = options.l;
    for (const auto &g : options.gate_pool) {
        if (g != "HAAR1" && g != "HAAR2") {
            if (!library_unitary(g)) {
                throw NetworkError("random_shallow: unknown gate " + g + " in pool");
            }
            if (l != 2) {
                throw NetworkError("random_shallow: library gate " + g + " needs l = 2");
            }
        }
    }
    Rng rng(options.seed);
    Network net(n, l);
    std::vector<int> sites(static_cast<std::size_t>(n));
    std::iota(sites.begin(), sites.end(), 1);

    auto finish = [&](std::vector<int> support, Matrix u, std::optional<GateLabel> label) {
        if (options.noise == 0.0) {
            return LocalChannel(std::move(support), {std::move(u)}, l, std::move(label));
        }
        auto depol = depolarizing_kraus(options.noise, static_cast<int>(support.size()), l);
        std::vector<Matrix> kraus;
        for (const auto &e : depol) {
            kraus.push_back(e * u);
        }
        return LocalChannel(std::move(support), std::move(kraus), l);
    };

    for (int r = 0; r < options.depth; ++r) {
        std::shuffle(sites.begin(), sites.end(), rng);
        Step step;
        for (int p = 0; p + 1 < n; p += 2) {
            const int a = sites[p];
            const int b = sites[p + 1];
            std::uniform_int_distribution<std::size_t> pick(0, options.gate_pool.size() - 1);
            const auto &name = options.gate_pool[pick(rng)];
            const std::size_t l2 = static_cast<std::size_t>(l) * static_cast<std::size_t>(l);
            if (name == "HAAR2") {
                step.channels.push_back(finish({a, b}, random_unitary(l2, rng), std::nullopt));
            } else if (name == "HAAR1") {
                step.channels.push_back(finish({a}, random_unitary(static_cast<std::size_t>(l), rng), std::nullopt));
                step.channels.push_back(finish({b}, random_unitary(static_cast<std::size_t>(l), rng), std::nullopt));
            } else {
                Matrix u = *library_unitary(name);
                if (u.rows() == 4) {
                    step.channels.push_back(finish({a, b}, u, GateLabel{name, {}}));
                } else {
                    step.channels.push_back(finish({a}, u, GateLabel{name, {}}));
                    step.channels.push_back(finish({b}, u, GateLabel{name, {}}));
                }
            }
        }
        net.add_step(std::move(step));
    }
    return net;
}

namespace {

// Lifts a one-site Kraus operator into the local space of `target` at the position of `site`.
Matrix lift(const Matrix &k, const LocalChannel &target, int site, int l) {
    if (target.arity() == 1) {
        return k;
    }
    return target.support()[0] == site ? tensor(k, identity(static_cast<std::size_t>(l)))
                                       : tensor(identity(static_cast<std::size_t>(l)), k);
}

// Composes the one-site channel `local` with the channel of `step` that touches its site.
// `after` selects local∘existing; otherwise existing∘local.
void merge_local(Step &step, const LocalChannel &local, bool after, int l) {
    const int site = local.support().front();
    for (auto &ch : step.channels) {
        if (!ch.touches(site)) {
            continue;
        }
        std::vector<Matrix> kraus;
        for (const auto &a : local.kraus()) {
            const Matrix la = lift(a, ch, site, l);
            for (const auto &b : ch.kraus()) {
                kraus.push_back(after ? Matrix(la * b) : Matrix(b * la));
            }
        }
        ch = LocalChannel(ch.support(), std::move(kraus), l);
        return;
    }
    step.channels.push_back(local);
}

}  // namespace

Network contract_local_steps(const Network &net) {
    const int l = net.l();
    std::vector<Step> out;
    std::vector<Step> pending;
    for (const auto &step : net.steps()) {
        if (step.local_only()) {
            if (!out.empty()) {
                for (const auto &ch : step.channels) {
                    merge_local(out.back(), ch, true, l);
                }
            } else {
                pending.push_back(step);
            }
            continue;
        }
        Step merged = step;
        for (auto p = pending.rbegin(); p != pending.rend(); ++p) {
            for (const auto &ch : p->channels) {
                merge_local(merged, ch, false, l);
            }
        }
        pending.clear();
        out.push_back(std::move(merged));
    }
    if (out.empty() && !pending.empty()) {
        Step merged = pending.front();
        for (std::size_t i = 1; i < pending.size(); ++i) {
            for (const auto &ch : pending[i].channels) {
                merge_local(merged, ch, true, l);
            }
        }
        out.push_back(std::move(merged));
    }
    return Network(net.n(), net.l(), std::move(out));
}

int canonical_depth(const Network &net) { return contract_local_steps(net).depth(); }

}  // namespace qdepth
