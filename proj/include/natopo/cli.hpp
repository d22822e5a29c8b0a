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

#include <ostream>
#include <string>
#include <vector>

namespace natopo {

/// Entry point behind the natopo binary; also driven directly by tests.
/// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal
/// invariant breach.
int runCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

} // namespace natopo
