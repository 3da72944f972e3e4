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

#pragma once

#include <vector>

#include "ocseg/geometry.hpp"
#include "ocseg/rasters.hpp"

namespace ocseg {

// One query's decoded outputs. Class probabilities are independent sigmoids
// indexed by class id. The mask is a probability grid whose stride relates it
// to the image (4 straight out of the decoder, 1 at image resolution).
struct InstancePrediction {
  std::vector<float> class_probs;
  Box box{0.0, 0.0, 0.0, 0.0, Units::kNormalized};
  ScalarMap mask;
  bool is_thing = true;

  float confidence() const;
  // Argmax class; the lowest id wins ties. -1 when there are no classes.
  int class_id() const;
};

}  // namespace ocseg
