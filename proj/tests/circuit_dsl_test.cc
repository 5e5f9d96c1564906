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

#include <filesystem>

#include "gtest/gtest.h"

using namespace qdepth;

namespace {

ParseError parse_failure(std::string_view text) {
    try {
        parse_network(text);
    } catch (const ParseError &e) {
        return e;
    }
    ADD_FAILURE() << "expected a parse error for:\n" << text;
    return ParseError(ParseErrorKind::syntax, 0, 0, "none");
}

std::string data(const std::string &rel) { return std::string(QDEPTH_TEST_DATA) + "/" + rel; }

}  // namespace

TEST(circuit_dsl, minimal_document) {
    Network net = parse_network("qubits 2\nstep\n  gate CNOT 1 2\n");
    EXPECT_EQ(net.n(), 2);
    EXPECT_EQ(net.depth(), 1);
    ASSERT_EQ(net.steps()[0].channels.size(), 1u);
    EXPECT_EQ(net.steps()[0].channels[0].arity(), 2);
    EXPECT_EQ(net.steps()[0].channels[0].kraus()[0], cnot());
}

TEST(circuit_dsl, ladder_file_prepares_cat) {
    Network net = load_network(data("circuits/ladder_k3.qnet"));
    EXPECT_EQ(net.depth(), 4);
    EXPECT_EQ(canonical_depth(net), 3);
    EXPECT_NEAR(fidelity(cat_state(8), apply(net, to_density(zeros_state(8)))), 1.0, 1e-10);

    Network from_text = parse_network(serialize_network(cat_ladder(3, true)));
    EXPECT_EQ(from_text.depth(), 3);
    EXPECT_NEAR(fidelity(cat_state(8), apply(from_text, to_density(zeros_state(8)))), 1.0, 1e-10);
}

TEST(circuit_dsl, serialize_ladder) {
    std::string text = serialize_network(cat_ladder(2, false));
    EXPECT_EQ(text, "qubits 4\nstep\n  gate CNOT 1 2\nstep\n  gate CNOT 1 3\n  gate CNOT 2 4\n");
}

TEST(circuit_dsl, comments_blank_lines_and_params) {
    Network net = parse_network(
        "# header\n\nqubits 3   # three sites\nstep\n\n  gate DEPOL(0.25) 2\n  gate H 1 # trailing\nstep\n  gate SWAP 3 1\n");
    EXPECT_EQ(net.depth(), 2);
    const auto &c = net.steps()[0].channels;
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].support(), std::vector<int>{1});
    EXPECT_EQ(c[1].label()->name, "DEPOL");
    EXPECT_EQ(c[1].label()->params, std::vector<double>{0.25});
    EXPECT_EQ(net.steps()[1].channels[0].support(), (std::vector<int>{3, 1}));
}

TEST(circuit_dsl, explicit_unitary_and_kraus_blocks) {
    Network net = parse_network(
        "qubits 2\n"
        "step\n"
        "  gate UNITARY 2\n"
        "   0,0 1,0\n"
        "   1,0 0,0\n"
        "  channel kraus 2 1\n"
        "   0.8,0 0,0\n"
        "   0,0 0.8,0\n"
        "   0,0 0.6,0\n"
        "   0.6,0 0,0\n");
    const auto &c = net.steps()[0].channels;
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].kraus().size(), 2u);
    EXPECT_TRUE(c[1].is_unitary());
    EXPECT_EQ(c[1].kraus()[0], pauli_x());
    EXPECT_EQ(parse_network(serialize_network(net)), net);
}

TEST(circuit_dsl, qutrit_document) {
    Network net = parse_network("qubits 2\nldim 3\nstep\n  gate DEPOL(0.5) 1 2\n");
    EXPECT_EQ(net.l(), 3);
    EXPECT_EQ(parse_network(serialize_network(net)), net);
    ParseError e = parse_failure("qubits 2\nldim 3\nstep\n  gate H 1\n");
    EXPECT_EQ(e.kind(), ParseErrorKind::local_dimension);
    EXPECT_EQ(e.line(), 4);
}

TEST(circuit_dsl, round_trip_random_networks) {
    for (int t = 0; t < 30; ++t) {
        RandomNetworkOptions o;
        o.n = 2 + t % 6;
        o.depth = t % 4;
        o.seed = 900 + t;
        o.noise = t % 3 == 0 ? 0.07 : 0.0;
        o.gate_pool = {"HAAR2", "HAAR1", "CNOT", "CZ", "SWAP", "H", "T"};
        Network net = random_shallow(o);
        const std::string text = serialize_network(net);
        Network back = parse_network(text);
        EXPECT_EQ(back, net) << text;
        EXPECT_EQ(serialize_network(back), text);
    }
}

TEST(circuit_dsl, overlap_names_both_lines) {
    ParseError e = parse_failure("step\n gate H 1\n gate H 1");
    EXPECT_EQ(e.kind(), ParseErrorKind::overlap);
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.related_line(), 2);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
}

TEST(circuit_dsl, error_categories) {
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate FOO 1\n").kind(), ParseErrorKind::unknown_gate);
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate CNOT 1\n").kind(), ParseErrorKind::arity);
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate H 3\n").kind(), ParseErrorKind::site_range);
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate CNOT 1 1\n").kind(), ParseErrorKind::site_range);
    EXPECT_EQ(parse_failure("step\n  gate H 1\n").kind(), ParseErrorKind::syntax);
    EXPECT_EQ(parse_failure("qubits 2\nstep\nqubits 3\n").kind(), ParseErrorKind::syntax);
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate DEPOL(x) 1\n").kind(), ParseErrorKind::syntax);
    EXPECT_EQ(parse_failure("qubits 2\nstep\n  gate DEPOL(1.5) 1\n").kind(), ParseErrorKind::invalid_channel);
    EXPECT_EQ(parse_failure("qubits 1\nstep\n  gate UNITARY 1\n   1,0 0,0\n   0,0 2,0\n").kind(),
              ParseErrorKind::invalid_channel);
    EXPECT_EQ(parse_failure("qubits 1\nstep\n  gate UNITARY 1\n   1,0 0,0\n").kind(), ParseErrorKind::syntax);
    EXPECT_EQ(parse_failure("qubits 1\nstep\n  channel kraus 1 1\n   0.5,0 0,0\n   0,0 0.5,0\n").kind(),
              ParseErrorKind::invalid_channel);
}

TEST(circuit_dsl, malformed_corpus_is_located) {
    struct Case {
        const char *file;
        ParseErrorKind kind;
        int line;
        int column;
    };
    const Case cases[] = {
        {"malformed/syntax_bad_keyword.qnet", ParseErrorKind::syntax, 4, 3},
        {"malformed/syntax_bad_site.qnet", ParseErrorKind::syntax, 3, 15},
        {"malformed/syntax_outside_step.qnet", ParseErrorKind::syntax, 2, 1},
        {"malformed/unknown_gate.qnet", ParseErrorKind::unknown_gate, 4, 8},
        {"malformed/unknown_gate_lowercase.qnet", ParseErrorKind::unknown_gate, 3, 8},
        {"malformed/overlap.qnet", ParseErrorKind::overlap, 4, 3},
        {"malformed/overlap_bilocal.qnet", ParseErrorKind::overlap, 7, 3},
    };
    for (const auto &c : cases) {
        try {
            load_network(data(c.file));
            ADD_FAILURE() << c.file << " parsed";
        } catch (const ParseError &e) {
            EXPECT_EQ(e.kind(), c.kind) << c.file;
            EXPECT_EQ(e.line(), c.line) << c.file;
            EXPECT_EQ(e.column(), c.column) << c.file;
            EXPECT_EQ(std::string(e.what()).rfind(std::to_string(c.line) + ":" + std::to_string(c.column) + ": ", 0),
                      0u)
                << e.what();
        }
    }
}

TEST(circuit_dsl, missing_file) { EXPECT_THROW(load_network(data("no_such_file.qnet")), std::runtime_error); }
