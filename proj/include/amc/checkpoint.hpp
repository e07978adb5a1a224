// Copyright 2026 The amcspec Authors
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

#ifndef AMC_CHECKPOINT_HPP_
#define AMC_CHECKPOINT_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include "amc/dnn.hpp"

namespace amc {

/*
 * Checkpoint layout:
 *
 *   AMCNET 1\n
 *   netspec <single-line JSON>\n
 *   classes <JSON array of class names>\n
 *   params <count>\n
 *   end\n
 *   then per parameter: rows u32 LE, cols u32 LE, rows*cols f32 LE (column-major)
 */

struct Checkpoint {
    Network net;
    std::vector<std::string> class_names;
};

void save_checkpoint(const std::filesystem::path& path, const Network& net,
                     const std::vector<std::string>& class_names);

Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace amc

#endif /* AMC_CHECKPOINT_HPP_ */
