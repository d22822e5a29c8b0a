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

#pragma once

#include "natopo/circuit.hpp"

namespace natopo {

struct QasmResult {
  Circuit circuit;
  int skippedStatements = 0; ///< measure/barrier/creg statements dropped
};

/// Best-effort OpenQASM 2.0 ingestion for benchmark files: one qreg, gates
/// from the supported set (h x y z s t rx ry rz cx cz swap ccx). measure,
/// barrier and creg statements are skipped and counted; anything else is a
/// ParseError carrying the line number.
QasmResult parseQasmSubset(const std::string& text);

} // namespace natopo
