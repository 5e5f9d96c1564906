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


#include "qdepth/macro_uncertainty.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "qdepth/rng.h"

namespace qdepth {

namespace {

const cplx kI{0.0, 1.0};

Matrix hermitian_part(const Matrix &m) { return (m + m.adjoint()) * 0.5; }

std::pair<double, double> spectral_range(const Matrix &c) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()(0), es.eigenvalues()(es.eigenvalues().size() - 1)};
}

// Σ_i embed(c, i) for a one-site c; n·dim·l work instead of n dense embeddings.
Matrix site_sum(const Matrix &c, int n, int l) {
    SiteIndexer ix(n, l);
    const auto dim = static_cast<Eigen::Index>(ix.dim());
    Matrix out = Matrix::Zero(dim, dim);
    for (int site = 1; site <= n; ++site) {
        const std::size_t stride = ix.stride(site);
        for (std::size_t row = 0; row < ix.dim(); ++row) {
            const std::size_t d = ix.digit(row, site);
            const std::size_t base = row - d * stride;
            for (int e = 0; e < l; ++e) {
                out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(base + e * stride)) +=
                    c(static_cast<Eigen::Index>(d), e);
            }
        }
    }
    return out;
}

// Reduced operator on one site: (M_site)_{ab} = Σ_rest M[(a, rest), (b, rest)].
Matrix reduce_to_site(const Matrix &m, int site, const SiteIndexer &ix) {
    const int l = ix.l();
    const std::array<int, 1> sites{site};
    auto g = ix.groups(sites);
    Matrix out = Matrix::Zero(l, l);
    for (std::size_t base : g.bases) {
        for (int a = 0; a < l; ++a) {
            for (int b = 0; b < l; ++b) {
                out(a, b) += m(static_cast<Eigen::Index>(base + g.offsets[a]),
                               static_cast<Eigen::Index>(base + g.offsets[b]));
            }
        }
    }
    return out;
}

void require_matching(const Matrix &abar, const DensityState &rho, const char *what) {
    if (!is_square(abar) || static_cast<std::size_t>(abar.rows()) != rho.dim()) {
        throw DimensionError(std::string(what) + ": observable and state dimensions differ");
    }
}

std::array<Matrix, 3> paulis() { return {pauli_x(), pauli_y(), pauli_z()}; }

}  // namespace

SiteObservable SiteObservable::from_matrix(const Matrix &c) {
    require_hermitian(c, "SiteObservable");
    if (c.rows() < 2) {
        throw DimensionError("SiteObservable: local dimension must be >= 2");
    }
    const auto l = static_cast<double>(c.rows());
    Matrix t = hermitian_part(c);
    t -= (t.trace() / l) * identity(static_cast<std::size_t>(c.rows()));
    auto [lo, hi] = spectral_range(t);
    if (hi - lo > 1.0 + 1e-10) {
        throw std::invalid_argument("SiteObservable: spectral spread " + std::to_string(hi - lo) + " exceeds 1");
    }
    return SiteObservable(std::move(t));
}

SiteObservable SiteObservable::from_bloch(const Eigen::Vector3d &v) {
    if (v.norm() > 1.0 + 1e-10) {
        throw std::invalid_argument("SiteObservable: Bloch vector longer than 1");
    }
    auto p = paulis();
    Matrix c = 0.5 * (v(0) * p[0] + v(1) * p[1] + v(2) * p[2]);
    return SiteObservable(std::move(c));
}

Matrix SiteObservable::centered() const {
    auto [lo, hi] = spectral_range(traceless_);
    return traceless_ - (0.5 * (lo + hi)) * identity(static_cast<std::size_t>(traceless_.rows()));
}

double SiteObservable::spread() const {
    auto [lo, hi] = spectral_range(traceless_);
    return hi - lo;
}

Matrix averaging_matrix(const SiteObservable &c, int n) {
    if (n < 1) {
        throw DimensionError("averaging_matrix: n must be >= 1");
    }
    return site_sum(c.centered(), n, c.l()) / static_cast<double>(n);
}

AveragingObservable::AveragingObservable(SiteObservable site, int n)
    : site_(std::move(site)), n_(n), matrix_(averaging_matrix(site_, n)) {}

Hypersurface::Hypersurface(AveragingObservable abar_in, Matrix b_in, double r_in)
    : abar(std::move(abar_in)), b(std::move(b_in)), r(r_in) {
    require_hermitian(b, "Hypersurface");
    if (b.rows() != abar.matrix().rows()) {
        throw DimensionError("Hypersurface: b and ā have different dimensions");
    }
    if (operator_norm(b) > 1.0 + 1e-10) {
        throw std::invalid_argument("Hypersurface: ‖b‖ exceeds 1");
    }
    if (!(r >= -1.0 && r <= 1.0)) {
        throw std::invalid_argument("Hypersurface: r must lie in [-1, 1]");
    }
}

double variance(const Matrix &abar, const DensityState &rho) {
    require_matching(abar, rho, "variance");
    const Matrix ar = abar * rho.matrix();
    const double mean = ar.trace().real();
    const double second = (abar * ar).trace().real();
    const double v = second - mean * mean;
    if (v < 0.0 && v > -1e-12) {
        return 0.0;
    }
    return v;
}

CommutatorNorm commutator_trace_norm(const Matrix &abar, const DensityState &rho) {
    require_matching(abar, rho, "commutator_trace_norm");
    const Matrix h = hermitian_part(kI * commutator(abar, rho.matrix()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const RealVector &lam = es.eigenvalues();
    RealVector s(lam.size());
    for (Eigen::Index i = 0; i < lam.size(); ++i) {
        s(i) = lam(i) > 0 ? 1.0 : (lam(i) < 0 ? -1.0 : 0.0);
    }
    CommutatorNorm out;
    out.value = lam.cwiseAbs().sum();
    out.witness = hermitian_part(es.eigenvectors() * s.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint());
    return out;
}

double hypersurface_value(const DensityState &rho, const Hypersurface &h) {
    require_matching(h.b, rho, "hypersurface_value");
    require_matching(h.abar.matrix(), rho, "hypersurface_value");
    return (rho.matrix() * commutator(h.abar.matrix(), h.b)).trace().imag();
}

MaxVariance max_variance_qubit(const DensityState &rho) {
    if (rho.l() != 2) {
        throw std::invalid_argument("max_variance_qubit: requires l = 2");
    }
    const auto p = paulis();
    std::array<Matrix, 3> s;
    std::array<Matrix, 3> s_rho;
    Eigen::Vector3d mean;
    for (int i = 0; i < 3; ++i) {
        s[i] = site_sum(0.5 * p[i], rho.n(), 2) / static_cast<double>(rho.n());
        s_rho[i] = s[i] * rho.matrix();
        mean(i) = s_rho[i].trace().real();
    }
    Eigen::Matrix3d m;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            // tr(S_i S_j ρ) = Σ (S_i)_{ab} (S_j ρ)_{ba}
            const double second = s[i].cwiseProduct(s_rho[j].transpose()).sum().real();
            m(i, j) = second - mean(i) * mean(j);
        }
    }
    m = (0.5 * (m + m.transpose())).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(m);
    MaxVariance out;
    out.value = std::max(0.0, es.eigenvalues()(2));
    out.direction = es.eigenvectors().col(2).normalized();
    return out;
}

std::vector<Eigen::Vector3d> fibonacci_sphere(int count) {
    std::vector<Eigen::Vector3d> pts;
    if (count <= 0) {
        return pts;
    }
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    pts.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        pts.emplace_back(r * std::cos(phi), r * std::sin(phi), z);
    }
    return pts;
}

namespace {

constexpr int kQubitAscentStarts = 3;

// ‖i[ā(v), ρ]‖_tr for qubits, restricted to the subspace that contains the commutator's range
// for every v: span(R, S_x R, S_y R, S_z R) with R the support of ρ.
class QubitObjective {
  public:
    explicit QubitObjective(const DensityState &rho) {
        const auto p = paulis();
        std::array<Matrix, 3> s;
        for (int i = 0; i < 3; ++i) {
            s[i] = site_sum(0.5 * p[i], rho.n(), 2) / static_cast<double>(rho.n());
        }
        const Matrix &r = rho.matrix();
        Eigen::SelfAdjointEigenSolver<Matrix> es(r);
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
            if (es.eigenvalues()(i) > 1e-13) {
                keep.push_back(i);
            }
        }
        const auto dim = r.rows();
        const auto rank = static_cast<Eigen::Index>(keep.size());
        Matrix basis;
        if (4 * rank < dim) {
            Matrix range(dim, rank);
            for (Eigen::Index j = 0; j < rank; ++j) {
                range.col(j) = es.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
            }
            Matrix span(dim, 4 * rank);
            span << range, s[0] * range, s[1] * range, s[2] * range;
            Eigen::ColPivHouseholderQR<Matrix> qr(span);
            qr.setThreshold(1e-12);
            const auto k = qr.rank();
            Matrix q = qr.householderQ();
            basis = q.leftCols(k);
        }
        for (int i = 0; i < 3; ++i) {
            Matrix h = hermitian_part(kI * commutator(s[i], r));
            h_[i] = basis.size() > 0 ? hermitian_part(basis.adjoint() * h * basis) : h;
        }
    }

    struct Eval {
        double value = 0.0;
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    };

    // Objective only; skips the eigenvectors, which dominate the cost at 256 dimensions.
    double value(const Eigen::Vector3d &v) const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(v(0) * h_[0] + v(1) * h_[1] + v(2) * h_[2], Eigen::EigenvaluesOnly);
        return es.eigenvalues().cwiseAbs().sum();
    }

    Eval operator()(const Eigen::Vector3d &v) const {
        Matrix h = v(0) * h_[0] + v(1) * h_[1] + v(2) * h_[2];
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const RealVector &lam = es.eigenvalues();
        const Matrix &u = es.eigenvectors();
        Eval e;
        e.value = lam.cwiseAbs().sum();
        RealVector sgn(lam.size());
        for (Eigen::Index k = 0; k < lam.size(); ++k) {
            sgn(k) = lam(k) > 0 ? 1.0 : (lam(k) < 0 ? -1.0 : 0.0);
        }
        for (int p = 0; p < 3; ++p) {
            // tr(sign(H) H_p) = Σ_k sign(λ_k) ⟨u_k|H_p|u_k⟩
            const Matrix hu = h_[p] * u;
            double g = 0.0;
            for (Eigen::Index k = 0; k < lam.size(); ++k) {
                g += sgn(k) * u.col(k).dot(hu.col(k)).real();
            }
            e.grad(p) = g;
        }
        return e;
    }

  private:
    std::array<Matrix, 3> h_;
};

struct AscentResult {
    double value;
    int iterations;
};

template <class Point, class Eval, class Value, class Step>
AscentResult ascend(Point &x, double fx, const Eval &eval, const Value &value, const Step &step,
                    const EstimateOptions &opt) {
    int it = 0;
    for (; it < opt.max_iter; ++it) {
        auto next = step(eval(x), x);
        if (!next) {
            break;
        }
        const double trial = value(*next);
        if (trial <= fx + opt.tol) {
            // Stalled. At a degenerate point the subgradient is set-valued; the best point seen,
            // grid included, stands.
            if (trial > fx) {
                x = *next;
                fx = trial;
            }
            ++it;
            break;
        }
        x = *next;
        fx = trial;
    }
    return {fx, it};
}

MacroUncertaintyReport estimate_qubit(const DensityState &rho, const EstimateOptions &opt) {
    QubitObjective f(rho);
    std::vector<Eigen::Vector3d> cands = fibonacci_sphere(opt.grid_size);
    const bool pure = std::abs(rho.purity() - 1.0) <= 1e-10;
    std::optional<MaxVariance> mv;
    if (pure) {
        mv = max_variance_qubit(rho);
        cands.push_back(mv->direction);
    }
    if (cands.empty()) {
        cands.push_back(Eigen::Vector3d::UnitZ());
    }
    std::vector<std::pair<double, std::size_t>> scored;
    for (std::size_t i = 0; i < cands.size(); ++i) {
        scored.emplace_back(f.value(cands[i]), i);
    }
    std::stable_sort(scored.begin(), scored.end(), [](auto &a, auto &b) { return a.first > b.first; });

    auto step = [](const QubitObjective::Eval &cur, const Eigen::Vector3d &) -> std::optional<Eigen::Vector3d> {
        const double gn = cur.grad.norm();
        if (gn < 1e-14) {
            return std::nullopt;
        }
        return Eigen::Vector3d(cur.grad / gn);
    };

    MacroUncertaintyReport rep;
    double best = -1.0;
    Eigen::Vector3d best_v = cands[scored.front().second];
    const int starts = std::min<int>(kQubitAscentStarts, static_cast<int>(scored.size()));
    for (int s = 0; s < starts; ++s) {
        Eigen::Vector3d v = cands[scored[static_cast<std::size_t>(s)].second];
        auto res = ascend(
            v, scored[static_cast<std::size_t>(s)].first, f, [&f](const Eigen::Vector3d &p) { return f.value(p); }, step,
            opt);
        rep.iterations += res.iterations;
        ++rep.restarts_used;
        if (res.value > best) {
            best = res.value;
            best_v = v;
        }
    }
    rep.maximizer = SiteObservable::from_bloch(best_v.normalized());
    auto cn = commutator_trace_norm(averaging_matrix(rep.maximizer, rho.n()), rho);
    rep.e_lower = cn.value;
    rep.dual_b = std::move(cn.witness);
    if (mv) {
        rep.variance_bound = 2.0 * std::sqrt(mv->value);
        if (rep.e_lower > *rep.variance_bound + 1e-8) {
            throw std::logic_error("estimate_e: achieved value exceeds the pure-state variance bound");
        }
    }
    return rep;
}

// General l: conditional-gradient ascent over traceless Hermitian c with spread ≤ 1.
MacroUncertaintyReport estimate_general(const DensityState &rho, const EstimateOptions &opt) {
    const int n = rho.n();
    const int l = rho.l();
    const SiteIndexer ix(n, l);
    const Matrix &r = rho.matrix();

    struct Eval {
        double value = 0.0;
        Matrix grad;
    };
    auto eval = [&](const Matrix &c) {
        const Matrix a = site_sum(c, n, l) / static_cast<double>(n);
        const Matrix h = hermitian_part(kI * commutator(a, r));
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const RealVector &lam = es.eigenvalues();
        RealVector sgn(lam.size());
        for (Eigen::Index k = 0; k < lam.size(); ++k) {
            sgn(k) = lam(k) > 0 ? 1.0 : (lam(k) < 0 ? -1.0 : 0.0);
        }
        const Matrix s = es.eigenvectors() * sgn.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
        const Matrix rs = kI * commutator(r, s);
        Matrix g = Matrix::Zero(l, l);
        for (int site = 1; site <= n; ++site) {
            g += reduce_to_site(rs, site, ix);
        }
        g = hermitian_part(g / static_cast<double>(n));
        g -= (g.trace() / static_cast<double>(l)) * identity(static_cast<std::size_t>(l));
        return Eval{lam.cwiseAbs().sum(), std::move(g)};
    };
    // argmax over the feasible set of tr(G c): the projector onto G's positive eigenspace.
    auto step = [l](const Eval &cur, const Matrix &) -> std::optional<Matrix> {
        if (cur.grad.cwiseAbs().maxCoeff() < 1e-14) {
            return std::nullopt;
        }
        Eigen::SelfAdjointEigenSolver<Matrix> es(cur.grad);
        Matrix p = Matrix::Zero(l, l);
        for (Eigen::Index k = 0; k < l; ++k) {
            if (es.eigenvalues()(k) > 0) {
                p += es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
            }
        }
        p -= (p.trace() / static_cast<double>(l)) * identity(static_cast<std::size_t>(l));
        return hermitian_part(p);
    };

    Rng rng(opt.seed);
    MacroUncertaintyReport rep;
    double best = -1.0;
    Matrix best_c;
    const int starts = std::max(1, opt.restarts);
    for (int s = 0; s < starts; ++s) {
        Matrix c = random_hermitian(static_cast<std::size_t>(l), rng);
        c -= (c.trace() / static_cast<double>(l)) * identity(static_cast<std::size_t>(l));
        auto [lo, hi] = spectral_range(c);
        c /= (hi - lo);
        double fc = eval(c).value;
        auto res = ascend(c, fc, eval, [&](const Matrix &p) { return eval(p).value; }, step, opt);
        rep.iterations += res.iterations;
        ++rep.restarts_used;
        if (res.value > best) {
            best = res.value;
            best_c = c;
        }
    }
    rep.maximizer = SiteObservable::from_matrix(hermitian_part(best_c));
    auto cn = commutator_trace_norm(averaging_matrix(rep.maximizer, n), rho);
    rep.e_lower = cn.value;
    rep.dual_b = std::move(cn.witness);
    return rep;
}

}  // namespace

MacroUncertaintyReport estimate_e(const DensityState &rho, const EstimateOptions &options) {
    if (rho.l() == 2) {
        return estimate_qubit(rho, options);
    }
    return estimate_general(rho, options);
}

Theorem1Result theorem1_check(const Network &net, const SeparableInput &input, const EstimateOptions &options) {
    const DensityState out = apply(net, mix(input));
    auto rep = estimate_e(out, options);
    Theorem1Result res;
    res.n = net.n();
    res.depth = net.depth();
    res.e_lower = rep.e_lower;
    res.bound = std::sqrt(2.0 / net.n()) * std::ldexp(1.0, net.depth());
    res.pass = res.e_lower <= res.bound + 1e-8;
    return res;
}

namespace {

nlohmann::json matrix_json(const Matrix &m) {
    auto rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        auto row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back({m(i, j).real(), m(i, j).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

nlohmann::json to_json(const MacroUncertaintyReport &report) {
    nlohmann::json j{{"e_lower", report.e_lower},
                     {"maximizer", {{"l", report.maximizer.l()}, {"matrix", matrix_json(report.maximizer.traceless())}}},
                     {"dual_b", matrix_json(report.dual_b)},
                     {"variance_bound", nullptr},
                     {"restarts_used", report.restarts_used},
                     {"iterations", report.iterations}};
    if (report.variance_bound) {
        j["variance_bound"] = *report.variance_bound;
    }
    if (report.maximizer.l() == 2) {
        const Matrix &c = report.maximizer.traceless();
        // c = v·σ/2  ⇒  v = (2 Re c01, -2 Im c01, 2 c00)
        j["maximizer"]["bloch"] = {2.0 * c(0, 1).real(), -2.0 * c(0, 1).imag(), 2.0 * c(0, 0).real()};
    }
    return j;
}

}  // namespace qdepth
