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

// Panoptic quality with the usual void rules, thing/stuff splits, a
// class-agnostic thing score, and detection rate binned by object size.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ocseg/rasters.hpp"

namespace ocseg {

struct ClassCounts {
  double iou_sum = 0.0;
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  bool is_thing = false;

  ClassCounts& operator+=(const ClassCounts& other);
  bool empty() const { return tp + fp + fn == 0; }
  bool operator==(const ClassCounts&) const = default;
};

// Per-class counts plus the counts of all things merged into one class.
// Merging is commutative and associative.
struct PqCounts {
  std::map<int, ClassCounts> classes;
  ClassCounts agnostic_things;

  PqCounts& operator+=(const PqCounts& other);
  bool operator==(const PqCounts&) const = default;
};

// Segments of equal class match when IoU > 0.5, with void (GT id 0) pixels
// left out of the union. Unmatched predictions that are more than half void
// are not counted as false positives. Throws kShapeMismatch on a size
// mismatch.
PqCounts pq_evaluate(const PanopticMap& pred, const PanopticMap& gt);

// Copy of `map` with every thing segment relabeled to `class_id`.
PanopticMap relabel_things(const PanopticMap& map, int class_id);

struct Scores {
  double pq = 0.0;
  double rq = 0.0;
  double sq = 0.0;
  int n = 0;  // classes averaged
};

Scores class_scores(const ClassCounts& c);

struct ClassReport {
  ClassCounts counts;
  Scores scores;
};

struct PqReport {
  std::map<int, ClassReport> per_class;  // classes with any TP, FP or FN
  std::optional<Scores> all;
  std::optional<Scores> things;
  std::optional<Scores> stuff;
  std::optional<Scores> things_agnostic;
};

// Groups are unweighted class means. A class is left out when it has no TP,
// FP or FN anywhere in the dataset; an empty group is absent.
PqReport aggregate(const PqCounts& counts);

// Th_a for a single image pair; absent without thing segments.
std::optional<Scores> class_agnostic(const PanopticMap& pred, const PanopticMap& gt);

// Edges in pixels of box diagonal; bin i is [edges[i], edges[i + 1]).
std::vector<double> default_size_bins();

struct BinCounts {
  std::int64_t detected = 0;
  std::int64_t total = 0;

  bool operator==(const BinCounts&) const = default;
};

struct DetectionCounts {
  std::vector<double> edges;
  std::vector<BinCounts> bins;

  explicit DetectionCounts(std::vector<double> edges = default_size_bins());
  DetectionCounts& operator+=(const DetectionCounts& other);
  // nullopt for a bin without GT objects.
  std::vector<std::optional<double>> rates() const;
};

// A GT thing is detected when a predicted segment of its class overlaps it
// with mask IoU > 0.5. Throws kInvalidArgument unless edges increase
// strictly.
DetectionCounts detection_rate_by_size(const PanopticMap& pred,
                                       const PanopticMap& gt,
                                       std::vector<double> edges = default_size_bins());

// Aligned PQ/RQ/SQ table with All, Th, Th_a and St columns.
std::string format_table(const PqReport& report);

}  // namespace ocseg
