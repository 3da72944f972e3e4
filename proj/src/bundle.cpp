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

#include "ocseg/bundle.hpp"

#include <cmath>
#include <fstream>

#include "ocseg/error.hpp"
#include "ocseg/tensor_io.hpp"

namespace ocseg {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void malformed(const std::string& what) {
  throw Error(ErrorCode::kMalformedManifest, what);
}

// Runs `fn`, turning JSON access errors into kMalformedManifest.
template <typename Fn>
auto guarded(const std::string& what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    malformed(what + ": " + e.what());
  }
}

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    malformed(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

int int_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) malformed(std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

void check_dims(int h, int w) {
  if (h < 0 || w < 0) malformed("negative dimensions");
}

std::vector<float> floats_from_json(const json& j) {
  if (!j.is_array()) malformed("expected an array of numbers");
  std::vector<float> out;
  out.reserve(j.size());
  for (const json& v : j) {
    if (!v.is_number()) malformed("expected an array of numbers");
    out.push_back(v.get<float>());
  }
  return out;
}

std::string tensor_name(const fs::path& manifest, const std::string& suffix) {
  std::string stem = manifest.filename().string();
  if (const auto dot = stem.find('.'); dot != std::string::npos) stem.resize(dot);
  return stem + "." + suffix + ".tensor";
}

FeatureMap load_checked(const fs::path& dir, const json& level, const char* key,
                        int stride, int h, int w, int c) {
  const json& ref = field(level, key);
  if (!ref.is_string()) malformed(std::string("'") + key + "' must be a path");
  FeatureMap t = read_tensor_file(dir / ref.get<std::string>());
  if (t.stride() != stride || t.height() != h || t.width() != w ||
      (c >= 0 && t.channels() != c)) {
    throw Error(ErrorCode::kShapeMismatch,
                std::string("tensor '") + ref.get<std::string>() +
                    "' does not match the declared level shape");
  }
  return t;
}

ScalarMap scalar_from_json(const json& m, const fs::path& dir) {
  if (m.contains("tensor")) {
    const FeatureMap t = read_tensor_file(dir / field(m, "tensor").get<std::string>());
    if (t.channels() != 1) {
      throw Error(ErrorCode::kShapeMismatch, "mask tensor must have one channel");
    }
    return ScalarMap::from_feature_map(t);
  }
  const int stride = int_field(m, "stride");
  if (stride < 1) malformed("mask stride must be positive");
  if (m.contains("rle")) {
    const MaskGrid g = rle_decode(mask_from_json(field(m, "rle")));
    std::vector<float> v(g.data().begin(), g.data().end());
    return ScalarMap(stride, g.height(), g.width(), std::move(v));
  }
  const int h = int_field(m, "height"), w = int_field(m, "width");
  check_dims(h, w);
  auto values = floats_from_json(field(m, "values"));
  if (values.size() != static_cast<std::size_t>(h) * w) {
    throw Error(ErrorCode::kShapeMismatch, "mask values do not match its size");
  }
  return ScalarMap(stride, h, w, std::move(values));
}

}  // namespace

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    malformed(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  write_file_atomic(path, j.dump(2) + "\n");
}

void check_format_version(const json& j) {
  if (!j.is_object() || !j.contains("format_version") ||
      !j.at("format_version").is_number_integer() ||
      j.at("format_version").get<int>() != kFormatVersion) {
    malformed("unsupported or missing format_version");
  }
}

json mask_to_json(const BinaryMask& mask) {
  json runs = json::array();
  for (const Run& r : mask.runs()) runs.push_back({r.start, r.length});
  return {{"height", mask.height()}, {"width", mask.width()}, {"runs", runs}};
}

BinaryMask mask_from_json(const json& j) {
  return guarded("mask", [&] {
    const int h = int_field(j, "height"), w = int_field(j, "width");
    check_dims(h, w);
    std::vector<Run> runs;
    for (const json& r : field(j, "runs")) {
      if (!r.is_array() || r.size() != 2) malformed("a run is [start, length]");
      runs.push_back({r.at(0).get<std::int64_t>(), r.at(1).get<std::int64_t>()});
    }
    try {
      return BinaryMask(h, w, std::move(runs));
    } catch (const Error& e) {
      malformed(std::string("bad run-length mask: ") + e.what());
    }
  });
}

json box_to_json(const Box& box) { return {box.cx, box.cy, box.w, box.h}; }

Box box_from_json(const json& j, Units units) {
  if (!j.is_array() || j.size() != 4) malformed("a box is [cx, cy, w, h]");
  for (const json& v : j) {
    if (!v.is_number()) malformed("box entries must be numbers");
  }
  Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
        j[3].get<double>(), units};
  try {
    validate(b);
  } catch (const Error& e) {
    malformed(std::string("bad box: ") + e.what());
  }
  return b;
}

json panoptic_to_json(const PanopticRecord& r) {
  json segments = json::array();
  for (const auto& [id, info] : r.map.segments()) {
    segments.push_back({{"id", id},
                        {"class_id", info.class_id},
                        {"is_thing", info.is_thing},
                        {"mask", mask_to_json(rle_encode(r.map.segment_mask(id)))}});
  }
  return {{"format_version", kFormatVersion},
          {"image_id", r.image_id},
          {"height", r.map.height()},
          {"width", r.map.width()},
          {"segments", segments}};
}

PanopticRecord panoptic_from_json(const json& j) {
  return guarded("panoptic map", [&] {
    check_format_version(j);
    PanopticRecord r;
    r.image_id = field(j, "image_id").get<std::string>();
    const int h = int_field(j, "height"), w = int_field(j, "width");
    check_dims(h, w);
    std::vector<std::int32_t> ids(static_cast<std::size_t>(h) * w, 0);
    std::map<std::int32_t, SegmentInfo> table;
    for (const json& s : field(j, "segments")) {
      const int id = int_field(s, "id");
      if (id <= 0) malformed("segment ids must be positive");
      if (table.contains(id)) malformed("duplicate segment id " + std::to_string(id));
      const BinaryMask m = mask_from_json(field(s, "mask"));
      if (m.height() != h || m.width() != w) {
        throw Error(ErrorCode::kShapeMismatch,
                    "segment " + std::to_string(id) + " mask does not match the map");
      }
      for (const Run& run : m.runs()) {
        for (std::int64_t k = run.start; k < run.start + run.length; ++k) {
          if (ids[k] != 0) malformed("segments overlap");
          ids[k] = id;
        }
      }
      table[id] = {int_field(s, "class_id"), field(s, "is_thing").get<bool>()};
    }
    r.map = PanopticMap(h, w, std::move(ids), std::move(table));
    return r;
  });
}

HeadsBundle read_heads_bundle(const fs::path& manifest) {
  const json j = read_json_file(manifest);
  const fs::path dir = manifest.parent_path();
  return guarded(manifest.string(), [&] {
    check_format_version(j);
    HeadsBundle b;
    b.image_id = field(j, "image_id").get<std::string>();
    b.height = int_field(j, "height");
    b.width = int_field(j, "width");
    check_dims(b.height, b.width);
    for (const json& level : field(j, "levels")) {
      const int s = int_field(level, "stride");
      const int h = int_field(level, "height"), w = int_field(level, "width");
      const int c = int_field(level, "channels");
      check_dims(h, w);
      OcpLevelHeads l;
      l.stride = s;
      l.center = ScalarMap::from_feature_map(load_checked(dir, level, "center", s, h, w, 1));
      l.regression = RegressionMap(load_checked(dir, level, "regression", s, h, w, 4));
      l.objectness =
          ScalarMap::from_feature_map(load_checked(dir, level, "objectness", s, h, w, 1));
      l.features = load_checked(dir, level, "features", s, h, w, c);
      b.levels.push_back(std::move(l));
    }
    if (j.contains("stuff_queries")) {
      const FeatureMap q =
          read_tensor_file(dir / field(j, "stuff_queries").get<std::string>());
      if (q.channels() != 1) {
        throw Error(ErrorCode::kShapeMismatch,
                    "stuff query tensor must be (n, dim, 1)");
      }
      for (int r = 0; r < q.height(); ++r) {
        const auto row = q.data().subspan(static_cast<std::size_t>(r) * q.width(),
                                          q.width());
        b.stuff_queries.emplace_back(row.begin(), row.end());
      }
    }
    return b;
  });
}

void write_heads_bundle(const fs::path& manifest, const HeadsBundle& b) {
  const fs::path dir = manifest.parent_path();
  json levels = json::array();
  for (const OcpLevelHeads& l : b.levels) {
    const std::string p = "p" + std::to_string(l.stride);
    const auto put = [&](const std::string& what, const FeatureMap& t) {
      const std::string name = tensor_name(manifest, p + "_" + what);
      write_tensor_file(dir / name, t);
      return name;
    };
    levels.push_back({{"stride", l.stride},
                      {"height", l.center.height()},
                      {"width", l.center.width()},
                      {"channels", l.features.channels()},
                      {"center", put("center", l.center.as_feature_map())},
                      {"regression", put("regression", l.regression.raw())},
                      {"objectness", put("objectness", l.objectness.as_feature_map())},
                      {"features", put("features", l.features)}});
  }
  json j = {{"format_version", kFormatVersion},
            {"image_id", b.image_id},
            {"height", b.height},
            {"width", b.width},
            {"levels", levels}};
  if (!b.stuff_queries.empty()) {
    const int n = static_cast<int>(b.stuff_queries.size());
    const int dim = static_cast<int>(b.stuff_queries.front().size());
    FeatureMap q(1, n, dim, 1);
    for (int r = 0; r < n; ++r) {
      if (static_cast<int>(b.stuff_queries[r].size()) != dim) {
        throw Error(ErrorCode::kShapeMismatch, "stuff queries differ in length");
      }
      for (int c = 0; c < dim; ++c) q.at(r, c, 0) = b.stuff_queries[r][c];
    }
    const std::string name = tensor_name(manifest, "stuff_queries");
    write_tensor_file(dir / name, q);
    j["stuff_queries"] = name;
  }
  write_json_file(manifest, j);
}

json proposals_to_json(const std::string& image_id, int height, int width,
                       const QuerySet& queries) {
  json things = json::array();
  for (const Proposal& p : queries.things) {
    things.push_back({{"stride", p.stride},
                      {"cell", {p.cell.y, p.cell.x}},
                      {"probability", p.probability},
                      {"box", box_to_json(p.box)},
                      {"size_clamped", p.size_clamped},
                      {"empty_pool", p.empty_pool},
                      {"content", p.content},
                      {"voted_mask", mask_to_json(p.approx_mask)}});
  }
  return {{"format_version", kFormatVersion},
          {"image_id", image_id},
          {"height", height},
          {"width", width},
          {"stuff", queries.stuff},
          {"things", things}};
}

PredictionBundle read_prediction_bundle(const fs::path& path) {
  const json j = read_json_file(path);
  const fs::path dir = path.parent_path();
  return guarded(path.string(), [&] {
    check_format_version(j);
    PredictionBundle b;
    b.image_id = field(j, "image_id").get<std::string>();
    b.height = int_field(j, "height");
    b.width = int_field(j, "width");
    check_dims(b.height, b.width);
    for (const json& p : field(j, "predictions")) {
      InstancePrediction pred;
      pred.class_probs = floats_from_json(field(p, "class_probs"));
      for (const float v : pred.class_probs) {
        if (!(v >= 0.0f && v <= 1.0f)) malformed("class probabilities must be in [0, 1]");
      }
      pred.is_thing = field(p, "is_thing").get<bool>();
      if (p.contains("box")) pred.box = box_from_json(p.at("box"), Units::kNormalized);
      pred.mask = scalar_from_json(field(p, "mask"), dir);
      if (!pred.mask.is_probability()) malformed("mask values must be in [0, 1]");
      b.predictions.push_back(std::move(pred));
    }
    return b;
  });
}

json prediction_bundle_to_json(const PredictionBundle& b) {
  json preds = json::array();
  for (const InstancePrediction& p : b.predictions) {
    preds.push_back({{"class_probs", p.class_probs},
                     {"is_thing", p.is_thing},
                     {"box", box_to_json(p.box)},
                     {"mask",
                      {{"stride", p.mask.stride()},
                       {"height", p.mask.height()},
                       {"width", p.mask.width()},
                       {"values", std::vector<float>(p.mask.data().begin(),
                                                     p.mask.data().end())}}}});
  }
  return {{"format_version", kFormatVersion},
          {"image_id", b.image_id},
          {"height", b.height},
          {"width", b.width},
          {"predictions", preds}};
}

json match_set_to_json(const std::string& image_id, bool refined,
                       const MatchSet& set) {
  json matches = json::array();
  for (const Match& m : set.matches) {
    matches.push_back({{"query", m.query},
                       {"gt", m.gt},
                       {"iou", m.iou},
                       {"stage", stage_name(m.stage)}});
  }
  return {{"format_version", kFormatVersion},
          {"image_id", image_id},
          {"refined", refined},
          {"matches", matches},
          {"unmatched_queries", set.unmatched_queries},
          {"unmatched_gts", set.unmatched_gts}};
}

const ClassInfo* ClassTable::find(int id) const {
  for (const ClassInfo& c : classes) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

ClassTable read_class_table(const fs::path& path) {
  const json j = read_json_file(path);
  return guarded(path.string(), [&] {
    check_format_version(j);
    ClassTable t;
    for (const json& c : field(j, "classes")) {
      const int id = int_field(c, "id");
      if (t.find(id) != nullptr) malformed("duplicate class id " + std::to_string(id));
      t.classes.push_back(
          {id, field(c, "name").get<std::string>(), field(c, "is_thing").get<bool>()});
    }
    return t;
  });
}

namespace {

json scores_to_json(const std::optional<Scores>& s) {
  if (!s) return nullptr;
  return {{"pq", s->pq}, {"rq", s->rq}, {"sq", s->sq}, {"n", s->n}};
}

}  // namespace

json report_to_json(const PqReport& report, const ClassTable* classes) {
  json per_class = json::array();
  for (const auto& [id, r] : report.per_class) {
    json entry = {{"class_id", id},
                  {"is_thing", r.counts.is_thing},
                  {"iou_sum", r.counts.iou_sum},
                  {"tp", r.counts.tp},
                  {"fp", r.counts.fp},
                  {"fn", r.counts.fn},
                  {"pq", r.scores.pq},
                  {"rq", r.scores.rq},
                  {"sq", r.scores.sq}};
    if (classes != nullptr) {
      if (const ClassInfo* info = classes->find(id)) entry["name"] = info->name;
    }
    per_class.push_back(entry);
  }
  return {{"format_version", kFormatVersion},
          {"all", scores_to_json(report.all)},
          {"things", scores_to_json(report.things)},
          {"things_agnostic", scores_to_json(report.things_agnostic)},
          {"stuff", scores_to_json(report.stuff)},
          {"per_class", per_class}};
}

json detection_to_json(const DetectionCounts& counts) {
  json bins = json::array();
  const auto rates = counts.rates();
  for (std::size_t i = 0; i < counts.bins.size(); ++i) {
    const double hi = counts.edges[i + 1];
    bins.push_back({{"min_diagonal", counts.edges[i]},
                    {"max_diagonal", std::isinf(hi) ? json(nullptr) : json(hi)},
                    {"detected", counts.bins[i].detected},
                    {"total", counts.bins[i].total},
                    {"rate", rates[i] ? json(*rates[i]) : json(nullptr)}});
  }
  return {{"format_version", kFormatVersion}, {"bins", bins}};
}

void write_targets(const fs::path& manifest, const std::string& image_id,
                   const std::vector<OcpLevelTargets>& levels) {
  const fs::path dir = manifest.parent_path();
  json out = json::array();
  for (const OcpLevelTargets& l : levels) {
    const std::string p = "p" + std::to_string(l.stride);
    const auto put = [&](const std::string& what, const FeatureMap& t) {
      const std::string name = tensor_name(manifest, p + "_" + what);
      write_tensor_file(dir / name, t);
      return name;
    };
    const MaskGrid ignore = rle_decode(l.ignore);
    std::vector<float> ignore_values(ignore.data().begin(), ignore.data().end());
    const ScalarMap ignore_map(l.stride, ignore.height(), ignore.width(),
                               std::move(ignore_values));
    out.push_back({{"stride", l.stride},
                   {"height", l.center.height()},
                   {"width", l.center.width()},
                   {"center", put("center", l.center.as_feature_map())},
                   {"regression", put("regression", l.regression.raw())},
                   {"objectness", put("objectness", l.objectness.as_feature_map())},
                   {"ignore", put("ignore", ignore_map.as_feature_map())}});
  }
  write_json_file(manifest, {{"format_version", kFormatVersion},
                             {"image_id", image_id},
                             {"levels", out}});
}

}  // namespace ocseg
