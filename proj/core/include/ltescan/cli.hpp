/*
 Copyright 2026 The ltescan authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ltescan/tx_oracle.hpp"

namespace ltescan::cli {

/// Parse a `key = value` downlink description into a DownlinkConfig.
DownlinkConfig parse_downlink_config(const std::string& path);

/// Entry point behind the `ltescan` binary. Commands: scan, decode-mib,
/// decode-sib1, analyze, generate, gps-parse.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

} // namespace ltescan::cli
