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


#ifndef QDEPTH_CIRCUIT_DSL_H
#define QDEPTH_CIRCUIT_DSL_H

#include <stdexcept>
#include <string>
#include <string_view>

#include "qdepth/network.h"

namespace qdepth {

// Line-oriented `.qnet` format:
//
//   # comment
//   qubits 4            sites (required, before the first step)
//   ldim 2              local dimension (optional, default 2)
//   step
//     gate CNOT 1 2
//     gate DEPOL(0.05) 3
//     gate UNITARY 3 4  followed by d rows of d entries `re,im`
//     channel kraus 2 1 followed by 2·d rows (each Kraus operator as d rows)
//
// d = ldim^arity. Numbers are locale-free decimals with optional exponent.

enum class ParseErrorKind {
    syntax,
    unknown_gate,
    arity,
    site_range,
    overlap,
    local_dimension,
    invalid_channel,
};

const char *to_string(ParseErrorKind kind);

class ParseError : public std::runtime_error {
  public:
    ParseError(ParseErrorKind kind, int line, int column, const std::string &message, int related_line = 0);

    ParseErrorKind kind() const { return kind_; }
    int line() const { return line_; }
    int column() const { return column_; }
    /// For overlap errors, the line of the earlier instruction; 0 otherwise.
    int related_line() const { return related_line_; }

  private:
    ParseErrorKind kind_;
    int line_;
    int column_;
    int related_line_;
};

Network parse_network(std::string_view text);
/// Canonical text: one instruction per line, instructions ordered by smallest site, library
/// names preferred when all Kraus entries match within 1e-15, numbers with 17 significant digits.
std::string serialize_network(const Network &net);

/// Reads and parses a file; I/O failures throw std::runtime_error.
Network load_network(const std::string &path);

}  // namespace qdepth

#endif
