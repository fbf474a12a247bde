//
// Copyright 2026 The lcgd Authors
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
//

#ifndef LCGD_SERIALIZE_HPP_
#define LCGD_SERIALIZE_HPP_

#include <iosfwd>
#include <string>

#include "lcgd/trainer.hpp"

namespace lcgd {

// Shortest decimal form that parses back to the same double; keeps CSV
// and JSON output byte-deterministic.
std::string format_double(double x);

TrainConfig train_config_from_json(const std::string& text);
std::string train_config_to_json(const TrainConfig& config);

// JSON-lines trace: a config header line, one record per step
// (clipped sum, injected noise, iterate hash), and a footer with the
// final iterate and run metrics.
void write_trace(std::ostream& out, const TrainConfig& config,
                 const TrainResult& result);

}  // namespace lcgd

#endif  // LCGD_SERIALIZE_HPP_
