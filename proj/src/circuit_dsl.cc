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


#include "qdepth/circuit_dsl.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace qdepth {

const char *to_string(ParseErrorKind kind) {
    switch (kind) {
        case ParseErrorKind::syntax: return "syntax";
        case ParseErrorKind::unknown_gate: return "unknown_gate";
        case ParseErrorKind::arity: return "arity";
        case ParseErrorKind::site_range: return "site_range";
        case ParseErrorKind::overlap: return "overlap";
        case ParseErrorKind::local_dimension: return "local_dimension";
        case ParseErrorKind::invalid_channel: return "invalid_channel";
    }
    return "unknown";
}

ParseError::ParseError(ParseErrorKind kind, int line, int column, const std::string &message, int related_line)
    : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + to_string(kind) + ": " +
                         message),
      kind_(kind),
      line_(line),
      column_(column),
      related_line_(related_line) {}

namespace {

struct Token {
    std::string_view text;
    int column;
};

std::vector<Token> tokenize(std::string_view line) {
    if (auto hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
    }
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
        }
    }
    return out;
}

std::optional<long> parse_int(std::string_view s) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

std::optional<double> parse_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

int library_arity(const std::string &name) {
    auto u = library_unitary(name);
    if (!u) {
        return 0;
    }
    return u->rows() == 2 ? 1 : 2;
}

class Parser {
  public:
    explicit Parser(std::string_view text) {
        std::size_t pos = 0;
        while (pos <= text.size()) {
            auto nl = text.find('\n', pos);
            if (nl == std::string_view::npos) {
                lines_.push_back(text.substr(pos));
                break;
            }
            lines_.push_back(text.substr(pos, nl - pos));
            pos = nl + 1;
        }
    }

    Network run() {
        while (next_ < lines_.size()) {
            const int lineno = static_cast<int>(next_) + 1;
            auto toks = tokenize(lines_[next_++]);
            if (toks.empty()) {
                continue;
            }
            const auto kw = toks[0].text;
            if (kw == "qubits" || kw == "ldim") {
                header(kw, toks, lineno);
            } else if (kw == "step") {
                if (toks.size() != 1) {
                    fail(ParseErrorKind::syntax, lineno, toks[1].column, "unexpected token after 'step'");
                }
                steps_.emplace_back();
                owners_.clear();
            } else if (kw == "gate" || kw == "channel") {
                instruction(toks, lineno);
            } else {
                fail(ParseErrorKind::syntax, lineno, toks[0].column, "unknown keyword '" + std::string(kw) + "'");
            }
        }
        if (!n_) {
            fail(ParseErrorKind::syntax, 1, 1, "missing 'qubits' header");
        }
        try {
            return Network(*n_, l_, std::move(steps_));
        } catch (const NetworkError &e) {
            fail(ParseErrorKind::invalid_channel, 1, 1, e.what());
        }
    }

  private:
    [[noreturn]] static void fail(ParseErrorKind kind, int line, int col, const std::string &msg, int related = 0) {
        throw ParseError(kind, line, col, msg, related);
    }

    void header(std::string_view kw, const std::vector<Token> &toks, int lineno) {
        if (!steps_.empty()) {
            fail(ParseErrorKind::syntax, lineno, toks[0].column, "'" + std::string(kw) + "' must precede the first step");
        }
        if (toks.size() != 2) {
            fail(ParseErrorKind::syntax, lineno, toks[0].column, "'" + std::string(kw) + "' takes one integer");
        }
        auto v = parse_int(toks[1].text);
        if (kw == "qubits") {
            if (n_) {
                fail(ParseErrorKind::syntax, lineno, toks[0].column, "duplicate 'qubits' header");
            }
            if (!v || *v < 1 || *v > 4096) {
                fail(ParseErrorKind::syntax, lineno, toks[1].column, "site count must be a positive integer");
            }
            n_ = static_cast<int>(*v);
        } else {
            if (!v || *v < 2 || *v > 64) {
                fail(ParseErrorKind::syntax, lineno, toks[1].column, "ldim must be an integer >= 2");
            }
            l_ = static_cast<int>(*v);
        }
    }

    std::vector<int> sites(const std::vector<Token> &toks, std::size_t first, int lineno) {
        std::vector<int> out;
        for (std::size_t i = first; i < toks.size(); ++i) {
            auto v = parse_int(toks[i].text);
            if (!v) {
                fail(ParseErrorKind::syntax, lineno, toks[i].column,
                     "expected a site index, got '" + std::string(toks[i].text) + "'");
            }
            if (*v < 1 || (n_ && *v > *n_)) {
                fail(ParseErrorKind::site_range, lineno, toks[i].column,
                     "site " + std::to_string(*v) + " out of range 1.." + (n_ ? std::to_string(*n_) : "n"));
            }
            for (int s : out) {
                if (s == *v) {
                    fail(ParseErrorKind::site_range, lineno, toks[i].column, "site " + std::to_string(s) + " listed twice");
                }
            }
            out.push_back(static_cast<int>(*v));
        }
        return out;
    }

    void check_arity(const std::vector<int> &s, int expected_lo, int expected_hi, const std::string &name,
                     int lineno, int col) {
        const int k = static_cast<int>(s.size());
        if (k < expected_lo || k > expected_hi) {
            const std::string want = expected_lo == expected_hi ? std::to_string(expected_lo)
                                                                : std::to_string(expected_lo) + " or " +
                                                                      std::to_string(expected_hi);
            fail(ParseErrorKind::arity, lineno, col,
                 name + " acts on " + want + " site(s), got " + std::to_string(k));
        }
    }

    // Reads `count` rows of `d` complex entries from the lines after the instruction.
    Matrix matrix_rows(std::size_t d, int instr_line) {
        Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
        std::size_t row = 0;
        while (row < d) {
            if (next_ >= lines_.size()) {
                fail(ParseErrorKind::syntax, instr_line, 1,
                     "expected " + std::to_string(d) + " matrix rows, found " + std::to_string(row));
            }
            const int lineno = static_cast<int>(next_) + 1;
            auto toks = tokenize(lines_[next_++]);
            if (toks.empty()) {
                continue;
            }
            if (!toks[0].text.empty() && std::isalpha(static_cast<unsigned char>(toks[0].text[0]))) {
                fail(ParseErrorKind::syntax, lineno, toks[0].column,
                     "expected a matrix row, found '" + std::string(toks[0].text) + "'");
            }
            if (toks.size() != d) {
                fail(ParseErrorKind::local_dimension, lineno, toks[0].column,
                     "matrix row has " + std::to_string(toks.size()) + " entries, expected " + std::to_string(d));
            }
            for (std::size_t c = 0; c < d; ++c) {
                const auto t = toks[c].text;
                const auto comma = t.find(',');
                std::optional<double> re;
                std::optional<double> im;
                if (comma != std::string_view::npos) {
                    re = parse_double(t.substr(0, comma));
                    im = parse_double(t.substr(comma + 1));
                }
                if (!re || !im) {
                    fail(ParseErrorKind::syntax, lineno, toks[c].column,
                         "expected a complex entry 're,im', got '" + std::string(t) + "'");
                }
                m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(c)) = cplx(*re, *im);
            }
            ++row;
        }
        return m;
    }

    void instruction(const std::vector<Token> &toks, int lineno) {
        if (steps_.empty()) {
            fail(ParseErrorKind::syntax, lineno, toks[0].column, "instruction outside a 'step' block");
        }
        if (toks.size() < 2) {
            fail(ParseErrorKind::syntax, lineno, toks[0].column, "incomplete instruction");
        }
        std::optional<LocalChannel> ch;
        const int name_col = toks[1].column;
        try {
            if (toks[0].text == "gate") {
                ch = gate(toks, lineno);
            } else {
                ch = channel(toks, lineno);
            }
        } catch (const NetworkError &e) {
            fail(ParseErrorKind::invalid_channel, lineno, name_col, e.what());
        }
        for (int s : ch->support()) {
            auto it = owners_.find(s);
            if (it != owners_.end()) {
                fail(ParseErrorKind::overlap, lineno, toks[0].column,
                     "site " + std::to_string(s) + " is already used in this step by the instruction on line " +
                         std::to_string(it->second),
                     it->second);
            }
        }
        for (int s : ch->support()) {
            owners_[s] = lineno;
        }
        steps_.back().channels.push_back(std::move(*ch));
    }

    LocalChannel gate(const std::vector<Token> &toks, int lineno) {
        std::string name(toks[1].text);
        std::vector<double> params;
        if (auto open = name.find('('); open != std::string::npos) {
            if (name.back() != ')') {
                fail(ParseErrorKind::syntax, lineno, toks[1].column, "unterminated parameter list");
            }
            std::string_view inner(name);
            inner = inner.substr(open + 1, inner.size() - open - 2);
            std::size_t pos = 0;
            while (pos <= inner.size()) {
                auto comma = inner.find(',', pos);
                auto piece = inner.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
                auto v = parse_double(piece);
                if (!v) {
                    fail(ParseErrorKind::syntax, lineno, toks[1].column, "bad gate parameter '" + std::string(piece) + "'");
                }
                params.push_back(*v);
                if (comma == std::string_view::npos) {
                    break;
                }
                pos = comma + 1;
            }
            name = name.substr(0, open);
        }
        auto s = sites(toks, 2, lineno);
        if (name == "UNITARY") {
            if (!params.empty()) {
                fail(ParseErrorKind::syntax, lineno, toks[1].column, "UNITARY takes no parameters");
            }
            check_arity(s, 1, 2, name, lineno, toks[1].column);
            Matrix u = matrix_rows(ipow(static_cast<std::size_t>(l_), s.size()), lineno);
            if (!is_unitary(u)) {
                fail(ParseErrorKind::invalid_channel, lineno, toks[1].column, "UNITARY block is not unitary");
            }
            return LocalChannel(std::move(s), {std::move(u)}, l_);
        }
        if (name == "DEPOL") {
            if (params.size() != 1) {
                fail(ParseErrorKind::syntax, lineno, toks[1].column, "DEPOL takes exactly one parameter, DEPOL(p)");
            }
            check_arity(s, 1, 2, name, lineno, toks[1].column);
            return make_gate(name, params, std::move(s), l_);
        }
        const int arity = library_arity(name);
        if (arity == 0) {
            fail(ParseErrorKind::unknown_gate, lineno, toks[1].column, "unknown gate '" + name + "'");
        }
        if (!params.empty()) {
            fail(ParseErrorKind::syntax, lineno, toks[1].column, "gate " + name + " takes no parameters");
        }
        check_arity(s, arity, arity, name, lineno, toks[1].column);
        if (l_ != 2) {
            fail(ParseErrorKind::local_dimension, lineno, toks[1].column,
                 "library gate " + name + " is a qubit gate but ldim is " + std::to_string(l_));
        }
        return make_gate(name, {}, std::move(s), l_);
    }

    LocalChannel channel(const std::vector<Token> &toks, int lineno) {
        if (toks[1].text != "kraus") {
            fail(ParseErrorKind::syntax, lineno, toks[1].column, "expected 'channel kraus K sites...'");
        }
        if (toks.size() < 3) {
            fail(ParseErrorKind::syntax, lineno, toks[1].column, "missing Kraus operator count");
        }
        auto count = parse_int(toks[2].text);
        if (!count || *count < 1 || *count > 4096) {
            fail(ParseErrorKind::syntax, lineno, toks[2].column, "Kraus operator count must be a positive integer");
        }
        auto s = sites(toks, 3, lineno);
        check_arity(s, 1, 2, "channel", lineno, toks[1].column);
        const std::size_t d = ipow(static_cast<std::size_t>(l_), s.size());
        std::vector<Matrix> kraus;
        for (long i = 0; i < *count; ++i) {
            kraus.push_back(matrix_rows(d, lineno));
        }
        return LocalChannel(std::move(s), std::move(kraus), l_);
    }

    std::vector<std::string_view> lines_;
    std::size_t next_ = 0;
    std::optional<int> n_;
    int l_ = 2;
    std::vector<Step> steps_;
    std::map<int, int> owners_;
};

bool close_entries(const std::vector<Matrix> &a, const std::vector<Matrix> &b) {
    if (a.size() != b.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].rows() != b[i].rows() || max_abs_diff(a[i], b[i]) > 1e-15) {
            return false;
        }
    }
    return true;
}

// Library spelling of a channel, if one reproduces its Kraus family within 1e-15.
std::optional<std::string> library_spelling(const LocalChannel &ch) {
    if (const auto &label = ch.label()) {
        try {
            auto regen = make_gate(label->name, label->params, ch.support(), ch.local_dim());
            if (close_entries(regen.kraus(), ch.kraus())) {
                if (label->params.empty()) {
                    return label->name;
                }
                std::string s = label->name + "(";
                for (std::size_t i = 0; i < label->params.size(); ++i) {
                    char buf[40];
                    std::snprintf(buf, sizeof buf, "%.17g", label->params[i]);
                    s += (i ? "," : "") + std::string(buf);
                }
                return s + ")";
            }
        } catch (const NetworkError &) {
        }
    }
    if (ch.local_dim() != 2 || ch.kraus().size() != 1) {
        return std::nullopt;
    }
    for (const char *name : {"H", "X", "Y", "Z", "S", "T", "CNOT", "CZ", "SWAP"}) {
        auto u = library_unitary(name);
        if (u->rows() == ch.kraus().front().rows() && max_abs_diff(*u, ch.kraus().front()) <= 1e-15) {
            return std::string(name);
        }
    }
    return std::nullopt;
}

void write_rows(std::ostringstream &out, const Matrix &m) {
    char buf[96];
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        out << "   ";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            std::snprintf(buf, sizeof buf, " %.17g,%.17g", m(i, j).real(), m(i, j).imag());
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace

Network parse_network(std::string_view text) { return Parser(text).run(); }

std::string serialize_network(const Network &net) {
    std::ostringstream out;
    out << "qubits " << net.n() << '\n';
    if (net.l() != 2) {
        out << "ldim " << net.l() << '\n';
    }
    for (const auto &step : net.steps()) {
        out << "step\n";
        for (const auto &ch : step.channels) {
            std::string sites;
            for (int s : ch.support()) {
                sites += ' ' + std::to_string(s);
            }
            if (auto name = library_spelling(ch)) {
                out << "  gate " << *name << sites << '\n';
            } else if (ch.kraus().size() == 1 && ch.is_unitary()) {
                out << "  gate UNITARY" << sites << '\n';
                write_rows(out, ch.kraus().front());
            } else {
                out << "  channel kraus " << ch.kraus().size() << sites << '\n';
                for (const auto &k : ch.kraus()) {
                    write_rows(out, k);
                }
            }
        }
    }
    return out.str();
}

Network load_network(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open circuit file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_network(buf.str());
}

}  // namespace qdepth
