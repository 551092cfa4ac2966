/*
 * Copyright 2026 The qgauss Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <vector>

namespace qgauss::cli {

/// Entry point shared by the executable and the in-process tests.
/// Returns 0 on success, 2 on validation errors, 3 on numeric failures.
int run_cli(int argc, char** argv);

/// Convenience wrapper: argv[0] is supplied.
int run_cli(const std::vector<std::string>& args);

/// `start:end:count` (linear, inclusive), `log:start:end:count`
/// (geometric) or a comma-separated list.
std::vector<double> parse_range(const std::string& text);

}  // namespace qgauss::cli
