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

#include "ocseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "ocseg/error.hpp"
#include "ocseg/kernels.hpp"

namespace ocseg {
namespace {

constexpr int kAgnosticClass = -1;

// Segments without pixels are invisible to the evaluation, as they would be
// in a PNG-encoded panoptic map.
std::map<int, ClassCounts> evaluate_classes(const PanopticMap& pred,
                                            const PanopticMap& gt) {
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw Error(ErrorCode::kShapeMismatch,
                "prediction and GT panoptic maps differ in size");
  }
  const auto hist = kernels::omp::pair_histogram(gt.ids(), pred.ids());
  std::map<std::int32_t, std::int64_t> gt_area, pred_area, pred_void;
  for (const auto& h : hist) {
    if (h.gt != 0) gt_area[h.gt] += h.count;
    if (h.pred != 0) pred_area[h.pred] += h.count;
    if (h.gt == 0 && h.pred != 0) pred_void[h.pred] += h.count;
  }

  std::map<int, ClassCounts> out;
  std::map<std::int32_t, bool> gt_matched, pred_matched;
  for (const auto& h : hist) {
    if (h.gt == 0 || h.pred == 0) continue;
    const SegmentInfo& g = gt.segments().at(h.gt);
    const SegmentInfo& p = pred.segments().at(h.pred);
    if (g.class_id != p.class_id) continue;
    const std::int64_t uni =
        pred_area[h.pred] + gt_area[h.gt] - h.count - pred_void[h.pred];
    const double iou = static_cast<double>(h.count) / static_cast<double>(uni);
    if (iou <= 0.5) continue;
    ClassCounts& c = out[g.class_id];
    c.is_thing = g.is_thing;
    c.iou_sum += iou;
    ++c.tp;
    gt_matched[h.gt] = true;
    pred_matched[h.pred] = true;
  }
  for (const auto& [id, area] : gt_area) {
    if (gt_matched.contains(id)) continue;
    const SegmentInfo& g = gt.segments().at(id);
    ClassCounts& c = out[g.class_id];
    c.is_thing = g.is_thing;
    ++c.fn;
  }
  for (const auto& [id, area] : pred_area) {
    if (pred_matched.contains(id)) continue;
    // Mostly-void predictions are not penalized.
    if (static_cast<double>(pred_void[id]) / static_cast<double>(area) > 0.5) continue;
    const SegmentInfo& p = pred.segments().at(id);
    ClassCounts& c = out[p.class_id];
    c.is_thing = p.is_thing;
    ++c.fp;
  }
  return out;
}

bool has_things(const PanopticMap& map) {
  return std::any_of(map.segments().begin(), map.segments().end(),
                     [](const auto& kv) { return kv.second.is_thing; });
}

Scores mean_scores(const std::vector<Scores>& items) {
  Scores out;
  for (const Scores& s : items) {
    out.pq += s.pq;
    out.rq += s.rq;
    out.sq += s.sq;
  }
  const double n = static_cast<double>(items.size());
  out.pq /= n;
  out.rq /= n;
  out.sq /= n;
  out.n = static_cast<int>(items.size());
  return out;
}

}  // namespace

ClassCounts& ClassCounts::operator+=(const ClassCounts& other) {
  iou_sum += other.iou_sum;
  tp += other.tp;
  fp += other.fp;
  fn += other.fn;
  is_thing = is_thing || other.is_thing;
  return *this;
}

PqCounts& PqCounts::operator+=(const PqCounts& other) {
  for (const auto& [cls, c] : other.classes) classes[cls] += c;
  agnostic_things += other.agnostic_things;
  return *this;
}

PanopticMap relabel_things(const PanopticMap& map, int class_id) {
  auto segments = map.segments();
  for (auto& [id, info] : segments) {
    if (info.is_thing) info.class_id = class_id;
  }
  return PanopticMap(map.height(), map.width(),
                     std::vector<std::int32_t>(map.ids().begin(), map.ids().end()),
                     std::move(segments));
}

PqCounts pq_evaluate(const PanopticMap& pred, const PanopticMap& gt) {
  PqCounts out;
  out.classes = evaluate_classes(pred, gt);
  if (has_things(pred) || has_things(gt)) {
    const auto merged = evaluate_classes(relabel_things(pred, kAgnosticClass),
                                         relabel_things(gt, kAgnosticClass));
    if (const auto it = merged.find(kAgnosticClass); it != merged.end()) {
      out.agnostic_things = it->second;
    }
  }
  return out;
}

Scores class_scores(const ClassCounts& c) {
  Scores s;
  if (c.empty()) return s;
  const double denom = static_cast<double>(c.tp) + 0.5 * static_cast<double>(c.fp) +
                       0.5 * static_cast<double>(c.fn);
  s.pq = c.iou_sum / denom;
  s.rq = static_cast<double>(c.tp) / denom;
  s.sq = c.tp > 0 ? c.iou_sum / static_cast<double>(c.tp) : 0.0;
  s.n = 1;
  return s;
}

PqReport aggregate(const PqCounts& counts) {
  PqReport report;
  std::vector<Scores> all, things, stuff;
  for (const auto& [cls, c] : counts.classes) {
    if (c.empty()) continue;
    const Scores s = class_scores(c);
    report.per_class[cls] = {c, s};
    all.push_back(s);
    (c.is_thing ? things : stuff).push_back(s);
  }
  if (!all.empty()) report.all = mean_scores(all);
  if (!things.empty()) report.things = mean_scores(things);
  if (!stuff.empty()) report.stuff = mean_scores(stuff);
  if (!counts.agnostic_things.empty()) {
    report.things_agnostic = class_scores(counts.agnostic_things);
  }
  return report;
}

std::optional<Scores> class_agnostic(const PanopticMap& pred,
                                     const PanopticMap& gt) {
  const PqCounts c = pq_evaluate(pred, gt);
  if (c.agnostic_things.empty()) return std::nullopt;
  return class_scores(c.agnostic_things);
}

std::vector<double> default_size_bins() {
  return {0.0, 32.0, 64.0, 128.0, 256.0, 512.0,
          std::numeric_limits<double>::infinity()};
}

DetectionCounts::DetectionCounts(std::vector<double> e) : edges(std::move(e)) {
  if (edges.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "size bins need at least two edges");
  }
  for (std::size_t i = 1; i < edges.size(); ++i) {
    if (!(edges[i] > edges[i - 1])) {
      throw Error(ErrorCode::kInvalidArgument, "size bin edges must increase strictly");
    }
  }
  bins.assign(edges.size() - 1, {});
}

DetectionCounts& DetectionCounts::operator+=(const DetectionCounts& other) {
  if (other.edges != edges) {
    throw Error(ErrorCode::kInvalidArgument, "merging different size bins");
  }
  for (std::size_t i = 0; i < bins.size(); ++i) {
    bins[i].detected += other.bins[i].detected;
    bins[i].total += other.bins[i].total;
  }
  return *this;
}

std::vector<std::optional<double>> DetectionCounts::rates() const {
  std::vector<std::optional<double>> out;
  for (const auto& b : bins) {
    if (b.total == 0) {
      out.push_back(std::nullopt);
    } else {
      out.push_back(static_cast<double>(b.detected) / static_cast<double>(b.total));
    }
  }
  return out;
}

DetectionCounts detection_rate_by_size(const PanopticMap& pred,
                                       const PanopticMap& gt,
                                       std::vector<double> edges) {
  DetectionCounts out(std::move(edges));
  if (pred.height() != gt.height() || pred.width() != gt.width()) {
    throw Error(ErrorCode::kShapeMismatch,
                "prediction and GT panoptic maps differ in size");
  }
  struct Extent {
    int x0 = std::numeric_limits<int>::max(), y0 = std::numeric_limits<int>::max();
    int x1 = -1, y1 = -1;
  };
  std::map<std::int32_t, Extent> extents;
  for (int y = 0; y < gt.height(); ++y) {
    for (int x = 0; x < gt.width(); ++x) {
      const std::int32_t id = gt.at(y, x);
      if (id == 0 || !gt.segments().at(id).is_thing) continue;
      Extent& e = extents[id];
      e.x0 = std::min(e.x0, x);
      e.y0 = std::min(e.y0, y);
      e.x1 = std::max(e.x1, x);
      e.y1 = std::max(e.y1, y);
    }
  }
  const auto hist = kernels::omp::pair_histogram(gt.ids(), pred.ids());
  std::map<std::int32_t, std::int64_t> gt_area, pred_area;
  for (const auto& h : hist) {
    gt_area[h.gt] += h.count;
    pred_area[h.pred] += h.count;
  }
  std::map<std::int32_t, bool> detected;
  for (const auto& h : hist) {
    if (h.gt == 0 || h.pred == 0 || !extents.contains(h.gt)) continue;
    if (gt.segments().at(h.gt).class_id != pred.segments().at(h.pred).class_id) {
      continue;
    }
    const std::int64_t uni = gt_area[h.gt] + pred_area[h.pred] - h.count;
    if (static_cast<double>(h.count) / static_cast<double>(uni) > 0.5) {
      detected[h.gt] = true;
    }
  }
  for (const auto& [id, e] : extents) {
    const double d = std::hypot(e.x1 + 1 - e.x0, e.y1 + 1 - e.y0);
    for (std::size_t b = 0; b < out.bins.size(); ++b) {
      if (d >= out.edges[b] && d < out.edges[b + 1]) {
        ++out.bins[b].total;
        if (detected.contains(id)) ++out.bins[b].detected;
        break;
      }
    }
  }
  return out;
}

std::string format_table(const PqReport& report) {
  const std::optional<Scores>* columns[] = {&report.all, &report.things,
                                            &report.things_agnostic, &report.stuff};
  std::string out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%-4s%8s%8s%8s%8s\n", "", "All", "Th", "Th_a", "St");
  out += buf;
  const char* names[] = {"PQ", "RQ", "SQ"};
  for (int row = 0; row < 3; ++row) {
    std::snprintf(buf, sizeof buf, "%-4s", names[row]);
    out += buf;
    for (const auto* col : columns) {
      if (!col->has_value()) {
        std::snprintf(buf, sizeof buf, "%8s", "-");
      } else {
        const Scores& s = **col;
        const double v = row == 0 ? s.pq : row == 1 ? s.rq : s.sq;
        std::snprintf(buf, sizeof buf, "%8.1f", 100.0 * v);
      }
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace ocseg
