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

#include "qdepth/cli.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdepth/circuit_dsl.h"
#include "qdepth/lightcone.h"
#include "qdepth/macro_uncertainty.h"
#include "qdepth/measurement.h"
#include "qdepth/network.h"
#include "qdepth/rng.h"
#include "qdepth/state.h"

#ifndef QDEPTH_VERSION
#define QDEPTH_VERSION "dev"
#endif

namespace qdepth {

namespace {

using nlohmann::json;

/// Bad flags, unreadable or invalid input files; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string format = "json";
    double tol = 1e-8;
};

struct Source {
    std::string circuit;
    std::string input = "zeros";
    std::string state;
    int sites = 0;
    int ldim = 2;
};

struct OptimizerFlags {
    int restarts = 8;
    int grid = 144;
    int max_iter = 20;
    double opt_tol = 1e-9;
};

json common_json(const Common &c) {
    return {{"seed", c.seed}, {"out", c.out}, {"format", c.format}, {"tol", c.tol}};
}

json source_json(const Source &s) {
    return {{"circuit", s.circuit}, {"input", s.input}, {"state", s.state}, {"sites", s.sites}, {"ldim", s.ldim}};
}

json header(const std::string &command, json config) {
    return {{"tool", "qdepth"}, {"version", QDEPTH_VERSION}, {"command", command}, {"config", std::move(config)}};
}

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

json read_json(const std::string &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error &e) {
        throw UsageError("'" + path + "' is not valid JSON: " + e.what());
    }
}

// Ket for one site: qubits take 0 1 + -, larger l a basis digit.
Vector site_ket(char c, int l) {
    if (l == 2) {
        return qubit_ket(c);
    }
    if (c < '0' || c - '0' >= l) {
        throw UsageError(std::string("ket label '") + c + "' is not a basis digit for l = " + std::to_string(l));
    }
    Vector v = Vector::Zero(l);
    v(c - '0') = 1.0;
    return v;
}

SeparableInput kets_input(const std::string &labels, int n, int l) {
    if (static_cast<int>(labels.size()) != n) {
        throw UsageError("product input needs " + std::to_string(n) + " ket labels, got '" + labels + "'");
    }
    std::vector<Vector> kets;
    for (char c : labels) {
        kets.push_back(site_ket(c, l));
    }
    return product_input(kets);
}

// {"terms": [{"weight": w, "kets": "0+1-"} | {"weight": w, "factors": [state documents]}]}
SeparableInput mixture_input(const std::string &path, int n, int l) {
    const json doc = read_json(path);
    SeparableInput in;
    try {
        for (const auto &t : doc.at("terms")) {
            SeparableTerm term;
            term.weight = t.at("weight").get<double>();
            if (t.contains("kets")) {
                auto single = kets_input(t.at("kets").get<std::string>(), n, l);
                term.factors = std::move(single.terms.front().factors);
            } else {
                for (const auto &f : t.at("factors")) {
                    term.factors.push_back(density_from_json(f).matrix());
                }
            }
            in.terms.push_back(std::move(term));
        }
    } catch (const json::exception &e) {
        throw UsageError("mixture file '" + path + "': " + e.what());
    }
    in.validate();
    if (in.n() != n || in.l() != l) {
        throw UsageError("mixture file '" + path + "' does not match the system shape");
    }
    return in;
}

struct Prepared {
    Network net;
    DensityState input;
    std::optional<SeparableInput> separable;
    DensityState output;
};

Prepared prepare(const Source &src) {
    std::optional<Network> net;
    if (!src.circuit.empty()) {
        net = load_network(src.circuit);
    } else {
        if (src.sites < 1) {
            throw UsageError("give --circuit or --sites");
        }
        net = Network(src.sites, src.ldim);
    }
    const int n = net->n();
    const int l = net->l();
    std::optional<SeparableInput> sep;
    std::optional<DensityState> rho;
    if (src.input == "zeros") {
        sep = kets_input(std::string(static_cast<std::size_t>(n), '0'), n, l);
    } else if (src.input == "cat") {
        if (l != 2) {
            throw UsageError("the cat input is defined for qubits");
        }
        rho = to_density(cat_state(n));
    } else if (src.input.rfind("product:", 0) == 0) {
        sep = kets_input(src.input.substr(8), n, l);
    } else if (src.input.rfind("mixture:", 0) == 0) {
        sep = mixture_input(src.input.substr(8), n, l);
    } else {
        throw UsageError("unknown input spec '" + src.input + "' (zeros | cat | product:<kets> | mixture:<file>)");
    }
    if (sep) {
        rho = mix(*sep);
    }
    DensityState out = apply(*net, *rho);
    return Prepared{std::move(*net), std::move(*rho), std::move(sep), std::move(out)};
}

DensityState load_state_or_prepare(const Source &src) {
    if (!src.state.empty()) {
        return density_from_json(read_json(src.state));
    }
    return prepare(src).output;
}

EstimateOptions estimate_options(const OptimizerFlags &f, std::uint64_t seed) {
    EstimateOptions o;
    o.restarts = f.restarts;
    o.grid_size = f.grid;
    o.max_iter = f.max_iter;
    o.tol = f.opt_tol;
    o.seed = seed;
    return o;
}

json optimizer_json(const OptimizerFlags &f) {
    return {{"restarts", f.restarts}, {"grid", f.grid}, {"max_iter", f.max_iter}, {"opt_tol", f.opt_tol}};
}

std::string format_double(double v) {
    std::ostringstream s;
    s.precision(17);
    s << v;
    return s.str();
}

std::string scalar_csv(const json &v) {
    if (v.is_number_float()) {
        return format_double(v.get<double>());
    }
    if (v.is_string()) {
        return v.get<std::string>();
    }
    return v.dump();
}

void flatten(const json &j, const std::string &prefix, std::ostringstream &out) {
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
        }
    } else if (j.is_array()) {
        std::string joined;
        for (std::size_t i = 0; i < j.size(); ++i) {
            joined += (i ? ";" : "") + (j[i].is_primitive() ? scalar_csv(j[i]) : j[i].dump());
        }
        out << prefix << ',' << joined << '\n';
    } else {
        out << prefix << ',' << scalar_csv(j) << '\n';
    }
}

// key,value rows for scalar reports.
std::string kv_csv(const json &j) {
    std::ostringstream out;
    out << "key,value\n";
    flatten(j, "", out);
    return out.str();
}

void emit(const Common &c, const std::string &payload, std::ostream &out) {
    if (c.out.empty()) {
        out << payload;
        return;
    }
    std::ofstream f(c.out, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + c.out + "'");
    }
    f << payload;
}

void emit_json_or_csv(const Common &c, const json &j, std::ostream &out) {
    emit(c, c.format == "csv" ? kv_csv(j) : j.dump(2) + "\n", out);
}

// --- simulate ----------------------------------------------------------------------------

int cmd_simulate(const Common &c, const Source &src, const OptimizerFlags &opt, bool emit_state, std::ostream &out) {
    Prepared p = prepare(src);
    const DensityState &rho = p.output;
    json j = header("simulate", {{"common", common_json(c)}, {"source", source_json(src)},
                                 {"optimizer", optimizer_json(opt)}, {"emit_state", emit_state}});
    const double tr = rho.matrix().trace().real();
    j["n"] = rho.n();
    j["l"] = rho.l();
    j["depth"] = p.net.depth();
    j["canonical_depth"] = canonical_depth(p.net);
    j["trace"] = tr;
    j["purity"] = rho.purity();
    j["input_separable"] = p.separable.has_value();
    j["e_lower"] = estimate_e(rho, estimate_options(opt, c.seed)).e_lower;
    if (rho.l() == 2) {
        j["fidelity_to_cat"] = fidelity(cat_state(rho.n()), rho);
        json table = json::array();
        const char *names[] = {"x", "y", "z"};
        const Matrix ps[] = {pauli_x(), pauli_y(), pauli_z()};
        for (int i = 0; i < 3; ++i) {
            const auto a = averaging_matrix(SiteObservable::from_matrix(0.5 * ps[i]), rho.n());
            table.push_back({{"observable", names[i]}, {"variance", variance(a, rho)}});
        }
        const auto mv = max_variance_qubit(rho);
        table.push_back({{"observable", "max"},
                         {"variance", mv.value},
                         {"direction", {mv.direction(0), mv.direction(1), mv.direction(2)}}});
        j["variance_table"] = table;
    }
    if (emit_state) {
        j["state"] = to_json(rho);
    }
    emit_json_or_csv(c, j, out);
    return kExitOk;
}

// --- erho --------------------------------------------------------------------------------

int cmd_erho(const Common &c, const Source &src, const OptimizerFlags &opt, bool emit_witness, std::ostream &out) {
    const DensityState rho = load_state_or_prepare(src);
    auto rep = estimate_e(rho, estimate_options(opt, c.seed));
    json j = header("erho", {{"common", common_json(c)},
                             {"source", source_json(src)},
                             {"optimizer", optimizer_json(opt)},
                             {"emit_witness", emit_witness}});
    j["n"] = rho.n();
    j["l"] = rho.l();
    j["report"] = to_json(rep);
    if (!emit_witness) {
        // l^n x l^n; only on request.
        j["report"].erase("dual_b");
    }
    emit_json_or_csv(c, j, out);
    return kExitOk;
}

// --- verify ------------------------------------------------------------------------------

struct SweepFlags {
    int theorem = 1;
    int trials = 200;
    std::vector<int> n_list = {4, 6, 8};
    std::vector<int> k_list = {0, 1, 2};
    double noise = 0.05;
};

json sweep_json(const SweepFlags &s) {
    return {{"theorem", s.theorem}, {"trials", s.trials}, {"n_list", s.n_list}, {"k_list", s.k_list}, {"noise", s.noise}};
}

// Trial i runs n = n_list[i mod |N|], k = k_list[(i div |N|) mod |K|], so every (n, k) pair
// recurs; all randomness of trial i derives from sub_seed(seed, i).
json theorem1_trial(const SweepFlags &s, const OptimizerFlags &opt, std::uint64_t root, int i, double tol) {
    const std::uint64_t seed = sub_seed(root, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const int n = s.n_list[static_cast<std::size_t>(i) % s.n_list.size()];
    const int k = s.k_list[(static_cast<std::size_t>(i) / s.n_list.size()) % s.k_list.size()];
    const bool noisy = s.noise > 0.0 && i % 2 == 1;
    RandomNetworkOptions ro;
    ro.n = n;
    ro.depth = k;
    ro.seed = rng();
    ro.noise = noisy ? s.noise : 0.0;
    const Network net = random_shallow(ro);
    std::vector<Vector> kets;
    for (int q = 0; q < n; ++q) {
        kets.push_back(random_unit_vector(2, rng));
    }
    auto res = theorem1_check(net, product_input(kets), estimate_options(opt, rng()));
    const double required = res.e_lower > 0.0 ? std::max(0.0, depth_lower_bound(n, res.e_lower)) : 0.0;
    const bool pass = res.e_lower <= res.bound + tol;
    return {{"trial", i},     {"seed", seed},   {"n", n},         {"k", k},
            {"noisy", noisy}, {"lhs", res.e_lower}, {"bound", res.bound}, {"required_depth", required},
            {"pass", pass}};
}

json theorem2_trial(const SweepFlags &s, std::uint64_t root, int i, double tol) {
    const std::uint64_t seed = sub_seed(root, static_cast<std::uint64_t>(i));
    Rng rng(seed);
    const int n = s.n_list[static_cast<std::size_t>(i) % s.n_list.size()];
    const int k = s.k_list[(static_cast<std::size_t>(i) / s.n_list.size()) % s.k_list.size()];
    RandomNetworkOptions ro;
    ro.n = n;
    ro.depth = k;
    ro.seed = rng();
    const Network net = random_shallow(ro);
    ProductProjection p;
    for (int q = 0; q < n; ++q) {
        const Vector v = random_unit_vector(2, rng);
        p.factors.push_back(v * v.adjoint());
    }
    const Vector dir = random_unit_vector(2, rng);
    // Bloch vector of a random pure qubit state: a uniformly random unit direction.
    const Eigen::Vector3d bloch(2.0 * (std::conj(dir(0)) * dir(1)).real(), 2.0 * (std::conj(dir(0)) * dir(1)).imag(),
                                std::norm(dir(0)) - std::norm(dir(1)));
    auto res = theorem2_check(net, p, SiteObservable::from_bloch(bloch.normalized()));
    const bool pass = res.lhs <= res.bound + tol;
    return {{"trial", i}, {"seed", seed}, {"n", n}, {"k", k}, {"lhs", res.lhs}, {"bound", res.bound}, {"pass", pass}};
}

int cmd_verify(const Common &c, const SweepFlags &s, const OptimizerFlags &opt, std::ostream &out, std::ostream &err) {
    if (s.theorem != 1 && s.theorem != 2) {
        throw UsageError("--theorem must be 1 or 2");
    }
    if (s.trials < 0) {
        throw UsageError("--trials must be >= 0");
    }
    if (s.n_list.empty() || s.k_list.empty()) {
        throw UsageError("--n-list and --k-list must be nonempty");
    }
    for (int n : s.n_list) {
        if (n < 1 || n > 10) {
            throw UsageError("--n-list entries must lie in 1..10");
        }
    }
    for (int k : s.k_list) {
        if (k < 0 || k > 16) {
            throw UsageError("--k-list entries must lie in 0..16");
        }
    }
    json rows = json::array();
    bool all_pass = true;
    for (int i = 0; i < s.trials; ++i) {
        json row = s.theorem == 1 ? theorem1_trial(s, opt, c.seed, i, c.tol) : theorem2_trial(s, c.seed, i, c.tol);
        if (!row["pass"].get<bool>()) {
            all_pass = false;
            err << "COUNTEREXAMPLE: theorem " << s.theorem << " violated in trial " << i << " (seed "
                << row["seed"].get<std::uint64_t>() << "): lhs " << format_double(row["lhs"].get<double>())
                << " > bound " << format_double(row["bound"].get<double>()) << "\n";
        }
        rows.push_back(std::move(row));
    }
    if (c.format == "csv") {
        std::ostringstream csv;
        csv << "# tool=qdepth version=" << QDEPTH_VERSION << " command=verify config="
            << json{{"common", common_json(c)}, {"sweep", sweep_json(s)}, {"optimizer", optimizer_json(opt)}}.dump()
            << "\n";
        csv << (s.theorem == 1 ? "trial,seed,n,k,noisy,lhs,bound,required_depth,pass\n" : "trial,seed,n,k,lhs,bound,pass\n");
        for (const auto &r : rows) {
            csv << r["trial"].get<int>() << ',' << r["seed"].get<std::uint64_t>() << ',' << r["n"].get<int>() << ','
                << r["k"].get<int>() << ',';
            if (s.theorem == 1) {
                csv << (r["noisy"].get<bool>() ? "true" : "false") << ',';
            }
            csv << format_double(r["lhs"].get<double>()) << ',' << format_double(r["bound"].get<double>()) << ',';
            if (s.theorem == 1) {
                csv << format_double(r["required_depth"].get<double>()) << ',';
            }
            csv << (r["pass"].get<bool>() ? "true" : "false") << '\n';
        }
        emit(c, csv.str(), out);
    } else {
        json j = header("verify", {{"common", common_json(c)}, {"sweep", sweep_json(s)}, {"optimizer", optimizer_json(opt)}});
        j["rows"] = std::move(rows);
        j["all_pass"] = all_pass;
        emit(c, j.dump(2) + "\n", out);
    }
    return all_pass ? kExitOk : kExitViolation;
}

// --- lightcone ---------------------------------------------------------------------------

int cmd_lightcone(const Common &c, const std::string &circuit, const std::vector<int> &seed_sites, std::ostream &out) {
    if (circuit.empty()) {
        throw UsageError("lightcone needs --circuit");
    }
    const Network net = load_network(circuit);
    const auto rep = lightcone_report(net);
    json j = header("lightcone", {{"common", common_json(c)}, {"circuit", circuit}, {"seed_sites", seed_sites}});
    j["report"] = to_json(rep);
    if (!seed_sites.empty()) {
        SupportSet seed(net.n());
        for (int s : seed_sites) {
            if (s < 1 || s > net.n()) {
                throw UsageError("--seed-sites entry " + std::to_string(s) + " out of range");
            }
            seed.insert(s);
        }
        const auto grown = dual_support(net, seed);
        j["seed_support"] = {{"seed", seed.sites()},
                             {"support", grown.sites()},
                             {"bound", static_cast<std::int64_t>(seed.size()) << net.depth()}};
    }
    emit_json_or_csv(c, j, out);
    return kExitOk;
}

// --- depthbound --------------------------------------------------------------------------

int cmd_depthbound(const Common &c, std::int64_t n, double r, bool clamp, std::ostream &out) {
    if (n < 1) {
        throw UsageError("--sites must be >= 1");
    }
    if (!(r > 0.0)) {
        throw UsageError("--r must be > 0");
    }
    const double raw = depth_lower_bound(n, r);
    const double value = clamp ? std::max(0.0, raw) : raw;
    json j = header("depthbound", {{"common", common_json(c)}, {"sites", n}, {"r", r}, {"clamp", clamp}});
    j["raw"] = raw;
    j["bound"] = value;
    j["min_integer_depth"] = static_cast<std::int64_t>(std::ceil(std::max(0.0, raw) - 1e-12));
    emit_json_or_csv(c, j, out);
    return kExitOk;
}

// --- measure -----------------------------------------------------------------------------

struct MeasureFlags {
    std::string mode = "strong";
    std::string observable = "parity-x";
    int shots = 1;
    bool exact = false;
    std::string post_states;
};

std::vector<Matrix> site_observables(const std::string &obs, int n) {
    std::string letters = obs == "parity-x" ? std::string(static_cast<std::size_t>(n), 'X') : obs;
    if (static_cast<int>(letters.size()) != n) {
        throw UsageError("observable '" + obs + "' needs one Pauli letter per site (" + std::to_string(n) + ")");
    }
    std::vector<Matrix> out;
    for (char ch : letters) {
        switch (ch) {
            case 'X': out.push_back(pauli_x()); break;
            case 'Y': out.push_back(pauli_y()); break;
            case 'Z': out.push_back(pauli_z()); break;
            case 'I': out.push_back(identity(2)); break;
            default: throw UsageError(std::string("unknown Pauli letter '") + ch + "' in observable");
        }
    }
    return out;
}

void write_post_state(const MeasureFlags &m, const std::string &ref, const DensityState &rho) {
    if (m.post_states.empty()) {
        return;
    }
    const std::string path = m.post_states + "/" + ref + ".json";
    std::ofstream f(path, std::ios::binary);
    if (!f) {
        throw UsageError("cannot write '" + path + "'");
    }
    f << to_json(rho).dump() << "\n";
}

json outcome_line(double value, double probability, std::uint64_t seed, const std::string &ref,
                  const DensityState &post) {
    return {{"value", value}, {"probability", probability}, {"seed", seed}, {"post_state_ref", ref},
            {"post_state_purity", post.purity()}};
}

int cmd_measure(const Common &c, const Source &src, const MeasureFlags &m, std::ostream &out) {
    if (m.mode != "weak" && m.mode != "strong" && m.mode != "conjugated") {
        throw UsageError("--mode must be weak, strong or conjugated");
    }
    if (m.shots < 0) {
        throw UsageError("--shots must be >= 0");
    }
    const DensityState rho = load_state_or_prepare(src);
    if (rho.l() != 2) {
        throw UsageError("measure supports qubit systems only");
    }
    const int n = rho.n();
    const auto obs = site_observables(m.observable, n);
    if (m.mode == "conjugated" && m.observable != "parity-x" &&
        m.observable != std::string(static_cast<std::size_t>(n), 'X')) {
        throw UsageError("conjugated mode measures the parity observable ⊗σ_x only");
    }
    std::vector<json> lines;
    if (m.exact) {
        if (m.mode == "weak") {
            const auto recs = weak_distribution(rho, obs);
            for (std::size_t i = 0; i < recs.size(); ++i) {
                const std::string ref = "outcome-" + std::to_string(i);
                json line = outcome_line(recs[i].combined_value, recs[i].probability, c.seed, ref, recs[i].post_state);
                line["site_outcomes"] = recs[i].site_outcomes;
                lines.push_back(std::move(line));
                write_post_state(m, ref, recs[i].post_state);
            }
        } else {
            const auto dist = m.mode == "strong"
                                  ? strong_distribution(rho, spectral_decompose(tensor_all(obs)))
                                  : conjugated_strong_distribution(rho, build_parity_conjugator(n));
            for (const auto &o : dist) {
                const std::string ref = "outcome-" + std::to_string(o.index);
                lines.push_back(outcome_line(o.value, o.probability, c.seed, ref, o.post_state));
                write_post_state(m, ref, o.post_state);
            }
        }
    } else {
        std::optional<SpectralDecomposition> dec;
        std::optional<Network> conj;
        if (m.mode == "strong") {
            dec = spectral_decompose(tensor_all(obs));
        } else if (m.mode == "conjugated") {
            conj = build_parity_conjugator(n);
        }
        for (int s = 0; s < m.shots; ++s) {
            const std::uint64_t seed = sub_seed(c.seed, static_cast<std::uint64_t>(s));
            Rng rng(seed);
            const std::string ref = "shot-" + std::to_string(s);
            if (m.mode == "weak") {
                auto rec = weak_measure_product(rho, obs, {}, rng);
                json line = outcome_line(rec.combined_value, rec.probability, seed, ref, rec.post_state);
                line["site_outcomes"] = rec.site_outcomes;
                lines.push_back(std::move(line));
                write_post_state(m, ref, rec.post_state);
            } else {
                auto o = m.mode == "strong" ? strong_measure(rho, *dec, rng) : conjugated_strong_measure(rho, *conj, rng);
                lines.push_back(outcome_line(o.value, o.probability, seed, ref, o.post_state));
                write_post_state(m, ref, o.post_state);
            }
        }
    }
    std::ostringstream payload;
    if (c.format == "csv") {
        payload << "value,probability,seed,post_state_ref\n";
        for (const auto &l : lines) {
            payload << format_double(l["value"].get<double>()) << ',' << format_double(l["probability"].get<double>())
                    << ',' << l["seed"].get<std::uint64_t>() << ',' << l["post_state_ref"].get<std::string>() << '\n';
        }
    } else {
        for (const auto &l : lines) {
            payload << l.dump() << '\n';
        }
    }
    emit(c, payload.str(), out);
    return kExitOk;
}

// Inserts `--key=value` tokens from a flat key=value file right after the subcommand name, so
// flags given on the command line (which come later) take precedence.
std::vector<std::string> expand_config(const std::vector<std::string> &args) {
    std::optional<std::string> path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        }
    }
    if (!path || args.empty()) {
        return args;
    }
    std::vector<std::string> injected;
    std::istringstream in(read_file(*path));
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError(*path + ":" + std::to_string(lineno) + ": expected key=value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "config") {
            continue;
        }
        injected.push_back("--" + key + "=" + value);
    }
    std::vector<std::string> out;
    out.push_back(args.front());
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), args.begin() + 1, args.end());
    return out;
}

void add_common(CLI::App *cmd, Common &c) {
    cmd->add_option("--seed", c.seed, "Root random seed");
    cmd->add_option("--out", c.out, "Write the report to this path instead of stdout");
    cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--tol", c.tol, "Pass tolerance for bound checks");
    cmd->add_option("--config", "Flat key=value file mirroring the flags; flags override it");
}

void add_source(CLI::App *cmd, Source &s, bool with_state) {
    cmd->add_option("--circuit", s.circuit, "Circuit file (.qnet)");
    cmd->add_option("--input", s.input, "Input state: zeros | cat | product:<kets> | mixture:<file>");
    cmd->add_option("--sites", s.sites, "Site count when no circuit is given");
    cmd->add_option("--ldim", s.ldim, "Local dimension when no circuit is given");
    if (with_state) {
        cmd->add_option("--state", s.state, "State document (JSON) instead of circuit + input");
    }
}

void add_optimizer(CLI::App *cmd, OptimizerFlags &o) {
    cmd->add_option("--restarts", o.restarts, "Ascent restarts (l > 2)");
    cmd->add_option("--grid", o.grid, "Fibonacci-sphere grid size (qubits)");
    cmd->add_option("--max-iter", o.max_iter, "Ascent iterations per start");
    cmd->add_option("--opt-tol", o.opt_tol, "Ascent improvement tolerance");
}

}  // namespace

int run_cli(const std::vector<std::string> &raw_args, std::ostream &out, std::ostream &err) {
    CLI::App app{"qdepth: shallow quantum networks, macroscopic uncertainty and depth bounds"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.set_version_flag("--version", QDEPTH_VERSION);

    Common common;
    Source source;
    OptimizerFlags optimizer;
    SweepFlags sweep;
    MeasureFlags measure;
    bool emit_state = false;
    bool emit_witness = false;
    std::string lc_circuit;
    std::vector<int> seed_sites;
    std::int64_t db_sites = 0;
    double db_r = 0.0;
    bool db_clamp = false;

    auto *sim = app.add_subcommand("simulate", "Apply a circuit to an input state and summarize the result");
    add_common(sim, common);
    add_source(sim, source, false);
    add_optimizer(sim, optimizer);
    sim->add_flag("--emit-state", emit_state, "Include the full output density matrix");

    auto *erho = app.add_subcommand("erho", "Estimate the macroscopic uncertainty e_rho");
    add_common(erho, common);
    add_source(erho, source, true);
    add_optimizer(erho, optimizer);
    erho->add_flag("--emit-witness", emit_witness, "Include the dual witness b (a full l^n x l^n matrix)");

    auto *verify = app.add_subcommand("verify", "Seeded sweep checking a depth bound on random shallow networks");
    add_common(verify, common);
    add_optimizer(verify, optimizer);
    verify->add_option("--theorem", sweep.theorem, "1: e bound for separable inputs; 2: commutator bound");
    verify->add_option("--trials", sweep.trials, "Number of trials");
    verify->add_option("--n-list", sweep.n_list, "Site counts")->delimiter(',');
    verify->add_option("--k-list", sweep.k_list, "Depths")->delimiter(',');
    verify->add_option("--noise", sweep.noise, "Depolarizing strength used on odd trials (theorem 1); 0 disables");

    auto *lc = app.add_subcommand("lightcone", "Combinatorial light-cone report of a circuit");
    add_common(lc, common);
    lc->add_option("--circuit", lc_circuit, "Circuit file (.qnet)");
    lc->add_option("--seed-sites", seed_sites, "Extra seed support to propagate")->delimiter(',');

    auto *db = app.add_subcommand("depthbound", "Minimum depth to cross a hypersurface from a separable state");
    add_common(db, common);
    db->add_option("--sites", db_sites, "Site count n")->required();
    db->add_option("--r", db_r, "Hypersurface level r > 0")->required();
    db->add_flag("--clamp", db_clamp, "Clamp negative bounds to 0");

    auto *meas = app.add_subcommand("measure", "Weak, strong or conjugated measurement of a product observable");
    add_common(meas, common);
    add_source(meas, source, true);
    meas->add_option("--mode", measure.mode, "weak | strong | conjugated");
    meas->add_option("--observable", measure.observable, "parity-x or a Pauli string such as XXZI");
    meas->add_option("--shots", measure.shots, "Number of sampled shots");
    meas->add_flag("--exact", measure.exact, "Emit the exact outcome distribution instead of samples");
    meas->add_option("--post-states", measure.post_states, "Directory receiving post-state JSON files");

    try {
        std::vector<std::string> args = expand_config(raw_args);
        std::vector<const char *> argv{"qdepth"};
        for (const auto &a : args) {
            argv.push_back(a.c_str());
        }
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp &e) {
            out << app.help();
            return kExitOk;
        } catch (const CLI::CallForVersion &e) {
            out << QDEPTH_VERSION << "\n";
            return kExitOk;
        } catch (const CLI::ParseError &e) {
            err << "usage error: " << e.what() << "\n";
            return kExitUsage;
        }

        if (sim->parsed()) {
            return cmd_simulate(common, source, optimizer, emit_state, out);
        }
        if (erho->parsed()) {
            return cmd_erho(common, source, optimizer, emit_witness, out);
        }
        if (verify->parsed()) {
            return cmd_verify(common, sweep, optimizer, out, err);
        }
        if (lc->parsed()) {
            return cmd_lightcone(common, lc_circuit, seed_sites, out);
        }
        if (db->parsed()) {
            return cmd_depthbound(common, db_sites, db_r, db_clamp, out);
        }
        if (meas->parsed()) {
            return cmd_measure(common, source, measure, out);
        }
        err << app.help();
        return kExitUsage;
    } catch (const ParseError &e) {
        err << "parse error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::runtime_error &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
}

}  // namespace qdepth
