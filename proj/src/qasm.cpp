// Copyright 2026 natopo contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "natopo/qasm.hpp"

#include <cctype>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <string>
#include <vector>

namespace natopo {

namespace {

// Minimal expression evaluator for gate parameters: numbers, pi, + - * /,
// unary minus, parentheses. Enough for qelib-style angle expressions.
class ExprParser {
public:
  explicit ExprParser(const std::string& text) : text_(text) {}

  double parse() {
    const double v = expr();
    skipWs();
    if (pos_ != text_.size()) {
      throw ParseError("trailing characters in expression '" + text_ + "'");
    }
    return v;
  }

private:
  double expr() {
    double v = term();
    for (;;) {
      skipWs();
      if (consume('+')) {
        v += term();
      } else if (consume('-')) {
        v -= term();
      } else {
        return v;
      }
    }
  }

  double term() {
    double v = factor();
    for (;;) {
      skipWs();
      if (consume('*')) {
        v *= factor();
      } else if (consume('/')) {
        v /= factor();
      } else {
        return v;
      }
    }
  }

  double factor() {
    skipWs();
    if (consume('-')) {
      return -factor();
    }
    if (consume('+')) {
      return factor();
    }
    if (consume('(')) {
      const double v = expr();
      skipWs();
      if (!consume(')')) {
        throw ParseError("unbalanced parentheses in '" + text_ + "'");
      }
      return v;
    }
    if (pos_ + 1 < text_.size() && text_.compare(pos_, 2, "pi") == 0) {
      pos_ += 2;
      return std::numbers::pi;
    }
    std::size_t end = pos_;
    while (end < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[end])) ||
            text_[end] == '.' || text_[end] == 'e' || text_[end] == 'E' ||
            ((text_[end] == '+' || text_[end] == '-') && end > pos_ &&
             (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
      ++end;
    }
    if (end == pos_) {
      throw ParseError("cannot parse expression '" + text_ + "'");
    }
    const double v = std::stod(text_.substr(pos_, end - pos_));
    pos_ = end;
    return v;
  }

  void skipWs() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

std::string stripComments(const std::string& line) {
  const auto pos = line.find("//");
  return pos == std::string::npos ? line : line.substr(0, pos);
}

std::string trim(const std::string& s) {
  std::size_t a = 0;
  std::size_t b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) {
    ++a;
  }
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) {
    --b;
  }
  return s.substr(a, b - a);
}

std::vector<std::string> splitTopLevel(const std::string& s, char sep) {
  std::vector<std::string> parts;
  int depth = 0;
  std::string cur;
  for (const char c : s) {
    if (c == '(') {
      ++depth;
    } else if (c == ')') {
      --depth;
    }
    if (c == sep && depth == 0) {
      parts.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!trim(cur).empty()) {
    parts.push_back(trim(cur));
  }
  return parts;
}

} // namespace

QasmResult parseQasmSubset(const std::string& text) {
  QasmResult result;
  std::string qregName;
  int lineNo = 0;
  int instrId = 0;

  // statements end with ';' but may span lines; scan line by line and
  // accumulate until a ';' is seen.
  std::string pending;
  std::vector<std::pair<int, std::string>> statements;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = text.find('\n', start);
    const std::string raw =
        text.substr(start, eol == std::string::npos ? std::string::npos
                                                    : eol - start);
    ++lineNo;
    std::string line = stripComments(raw);
    for (const char c : line) {
      if (c == ';') {
        statements.emplace_back(lineNo, trim(pending));
        pending.clear();
      } else {
        pending += c;
      }
    }
    if (eol == std::string::npos) {
      break;
    }
    start = eol + 1;
  }
  if (!trim(pending).empty()) {
    throw ParseError("line " + std::to_string(lineNo) +
                     ": statement missing ';'");
  }

  for (const auto& [line, stmt] : statements) {
    const std::string at = "line " + std::to_string(line) + ": ";
    if (stmt.empty()) {
      continue;
    }
    const std::size_t sp = stmt.find_first_of(" \t(");
    const std::string head = stmt.substr(0, sp);
    if (head == "OPENQASM" || head == "include") {
      continue;
    }
    if (head == "qreg") {
      if (!qregName.empty()) {
        throw ParseError(at + "multiple qreg declarations are not supported");
      }
      const auto open = stmt.find('[');
      const auto close = stmt.find(']');
      if (open == std::string::npos || close == std::string::npos) {
        throw ParseError(at + "malformed qreg declaration");
      }
      qregName = trim(stmt.substr(4, open - 4));
      result.circuit.numQubits = std::stoi(stmt.substr(open + 1, close - open - 1));
      continue;
    }
    if (head == "creg" || head == "measure" || head == "barrier" ||
        head == "reset") {
      ++result.skippedStatements;
      continue;
    }

    const auto kind = gateFromName(head);
    if (!kind) {
      throw ParseError(at + "unsupported gate '" + head + "'");
    }
    if (qregName.empty()) {
      throw ParseError(at + "gate before qreg declaration");
    }

    Instruction instr;
    instr.id = instrId;
    instr.kind = *kind;

    std::string rest = stmt.substr(head.size());
    rest = trim(rest);
    if (!rest.empty() && rest.front() == '(') {
      const auto close = rest.find(')');
      if (close == std::string::npos) {
        throw ParseError(at + "unbalanced '(' in gate parameters");
      }
      for (const auto& p : splitTopLevel(rest.substr(1, close - 1), ',')) {
        instr.params.push_back(ExprParser(p).parse());
      }
      rest = trim(rest.substr(close + 1));
    }
    if (gateTakesParams(*kind) != !instr.params.empty()) {
      throw ParseError(at + "wrong parameter count for '" + head + "'");
    }

    for (const auto& arg : splitTopLevel(rest, ',')) {
      const auto open = arg.find('[');
      const auto close = arg.find(']');
      if (open == std::string::npos || close == std::string::npos) {
        throw ParseError(at + "operands must be indexed ('" + qregName +
                         "[i]'); whole-register broadcast is not supported");
      }
      if (trim(arg.substr(0, open)) != qregName) {
        throw ParseError(at + "unknown register '" + arg.substr(0, open) + "'");
      }
      instr.qubits.push_back(std::stoi(arg.substr(open + 1, close - open - 1)));
    }
    if (static_cast<int>(instr.qubits.size()) != gateArity(*kind)) {
      throw ParseError(at + "gate '" + head + "' expects " +
                       std::to_string(gateArity(*kind)) + " operands");
    }
    for (std::size_t i = 0; i < instr.qubits.size(); ++i) {
      const int q = instr.qubits[i];
      if (q < 0 || q >= result.circuit.numQubits) {
        throw ParseError(at + "qubit index out of range");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (instr.qubits[j] == q) {
          throw ParseError(at + "duplicate qubit " + std::to_string(q));
        }
      }
    }
    instr.id = instrId++;
    result.circuit.instructions.push_back(std::move(instr));
  }
  if (qregName.empty()) {
    throw ParseError("no qreg declaration found");
  }
  return result;
}

} // namespace natopo
