// Copyright 2026 The ocseg Authors.
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

#include "ocseg/prediction.hpp"

#include <algorithm>

namespace ocseg {

float InstancePrediction::confidence() const {
  if (class_probs.empty()) return 0.0f;
  return *std::max_element(class_probs.begin(), class_probs.end());
}

int InstancePrediction::class_id() const {
  if (class_probs.empty()) return -1;
  return static_cast<int>(
      std::max_element(class_probs.begin(), class_probs.end()) -
      class_probs.begin());
}

}  // namespace ocseg
