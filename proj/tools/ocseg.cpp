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

// Command-line front end: each subcommand reads bundles, runs one pipeline
// stage per image and writes bundles or reports.

#include <omp.h>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ocseg/augment.hpp"
#include "ocseg/bundle.hpp"
#include "ocseg/config.hpp"
#include "ocseg/error.hpp"
#include "ocseg/fusion.hpp"
#include "ocseg/matching.hpp"
#include "ocseg/metrics.hpp"
#include "ocseg/ocp_decode.hpp"
#include "ocseg/rng.hpp"
#include "ocseg/targets.hpp"
#include "ocseg/tensor_io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace ocseg {
namespace {

constexpr const char* kHeadsSuffix = ".heads.json";
constexpr const char* kPanopticSuffix = ".panoptic.json";
constexpr const char* kPredsSuffix = ".preds.json";
constexpr const char* kProposalsSuffix = ".proposals.json";
constexpr const char* kMatchesSuffix = ".matches.json";
constexpr const char* kTargetsSuffix = ".targets.json";

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Name of an input without its suffix; pairs files across directories.
std::string stem_of(const fs::path& p, const std::string& suffix) {
  std::string name = p.filename().string();
  if (ends_with(name, suffix)) name.resize(name.size() - suffix.size());
  return name;
}

struct Inputs {
  bool is_dir = false;
  std::vector<fs::path> files;  // sorted by name
};

Inputs resolve(const fs::path& path, const std::string& suffix) {
  Inputs in;
  if (fs::is_directory(path)) {
    in.is_dir = true;
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && ends_with(entry.path().filename().string(), suffix)) {
        in.files.push_back(entry.path());
      }
    }
    std::sort(in.files.begin(), in.files.end());
  } else if (fs::exists(path)) {
    in.files.push_back(path);
  } else {
    throw Error(ErrorCode::kMissingFile, "no such file or directory: " + path.string());
  }
  return in;
}

// Output path for input `file`: inside `output` for directory inputs,
// `output` itself otherwise.
fs::path output_for(const Inputs& in, const fs::path& file, const fs::path& output,
                    const std::string& in_suffix, const std::string& out_suffix) {
  if (!in.is_dir) return output;
  return output / (stem_of(file, in_suffix) + out_suffix);
}

void prepare_output(const Inputs& in, const fs::path& output) {
  if (in.is_dir) {
    fs::create_directories(output);
  } else if (output.has_parent_path()) {
    fs::create_directories(output.parent_path());
  }
}

// Pairs files of two inputs by stem. Both must be directories or both files.
std::vector<std::pair<fs::path, fs::path>> pair_inputs(const Inputs& a,
                                                       const std::string& a_suffix,
                                                       const Inputs& b,
                                                       const std::string& b_suffix) {
  if (a.is_dir != b.is_dir) {
    throw Error(ErrorCode::kInvalidArgument,
                "inputs must both be files or both be directories");
  }
  if (!a.is_dir) return {{a.files.at(0), b.files.at(0)}};
  std::map<std::string, fs::path> by_stem;
  for (const auto& f : b.files) by_stem[stem_of(f, b_suffix)] = f;
  std::vector<std::pair<fs::path, fs::path>> out;
  for (const auto& f : a.files) {
    const auto it = by_stem.find(stem_of(f, a_suffix));
    if (it == by_stem.end()) {
      throw Error(ErrorCode::kMissingFile, "no counterpart for " + f.string());
    }
    out.emplace_back(f, it->second);
    by_stem.erase(it);
  }
  if (!by_stem.empty()) {
    throw Error(ErrorCode::kMissingFile,
                "no counterpart for " + by_stem.begin()->second.string());
  }
  return out;
}

// Runs body(i) for i in [0, n) on `jobs` threads. The error of the lowest
// failing index is rethrown, so failures do not depend on scheduling.
void parallel_for(int n, int jobs, const std::function<void(int)>& body) {
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
  for (int i = 0; i < n; ++i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

void warn(const std::string& image_id, const std::string& message) {
  const json record = {{"warning", message}, {"image_id", image_id}};
#pragma omp critical(ocseg_stderr)
  std::cerr << record.dump() << '\n';
}

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  int jobs = 0;
  Config config;
};

void cmd_gen_targets(const Globals& g, const fs::path& input, const fs::path& output) {
  const Inputs in = resolve(input, kPanopticSuffix);
  prepare_output(in, output);
  parallel_for(static_cast<int>(in.files.size()), g.jobs, [&](int i) {
    const PanopticRecord r = panoptic_from_json(read_json_file(in.files[i]));
    const GtScene scene = GtScene::from_panoptic(r.map);
    const auto levels =
        ocp_targets(scene.instances, scene.height, scene.width, g.config.centers);
    write_targets(output_for(in, in.files[i], output, kPanopticSuffix, kTargetsSuffix),
                  r.image_id, levels);
  });
}

void cmd_decode(const Globals& g, const fs::path& input, const fs::path& output) {
  const Inputs in = resolve(input, kHeadsSuffix);
  prepare_output(in, output);
  parallel_for(static_cast<int>(in.files.size()), g.jobs, [&](int i) {
    HeadsBundle b = read_heads_bundle(in.files[i]);
    auto stuff = std::move(b.stuff_queries);
    if (static_cast<int>(stuff.size()) > g.config.ocp.n_stuff) {
      stuff.resize(g.config.ocp.n_stuff);
    }
    const QuerySet q =
        decode_all(b.levels, std::move(stuff), b.height, b.width, g.config.ocp);
    for (const Proposal& p : q.things) {
      if (p.empty_pool) {
        warn(b.image_id, "proposal at stride " + std::to_string(p.stride) +
                             " pooled no objectness weight");
      }
    }
    write_json_file(output_for(in, in.files[i], output, kHeadsSuffix, kProposalsSuffix),
                    proposals_to_json(b.image_id, b.height, b.width, q));
  });
}

void cmd_match(const Globals& g, const fs::path& preds, const fs::path& gt,
               bool refine, const fs::path& output) {
  const Inputs pin = resolve(preds, kPredsSuffix);
  const Inputs gin = resolve(gt, kPanopticSuffix);
  const auto pairs = pair_inputs(pin, kPredsSuffix, gin, kPanopticSuffix);
  prepare_output(pin, output);
  parallel_for(static_cast<int>(pairs.size()), g.jobs, [&](int i) {
    const PredictionBundle p = read_prediction_bundle(pairs[i].first);
    const PanopticRecord r = panoptic_from_json(read_json_file(pairs[i].second));
    if (p.height != r.map.height() || p.width != r.map.width()) {
      throw Error(ErrorCode::kShapeMismatch,
                  "prediction and GT image sizes differ for " + p.image_id);
    }
    const GtScene scene = GtScene::from_panoptic(r.map);
    MatchSet set = base_match(p.predictions, scene.instances, g.config.loss_weights);
    if (refine) {
      set = refine_matches(set, p.predictions, scene.instances, g.config.refinement,
                           g.config.stage2_overlap);
    }
    write_json_file(output_for(pin, pairs[i].first, output, kPredsSuffix, kMatchesSuffix),
                    match_set_to_json(p.image_id, refine, set));
  });
}

void cmd_fuse(const Globals& g, const fs::path& preds, const fs::path& output) {
  const Inputs in = resolve(preds, kPredsSuffix);
  prepare_output(in, output);
  parallel_for(static_cast<int>(in.files.size()), g.jobs, [&](int i) {
    const PredictionBundle p = read_prediction_bundle(in.files[i]);
    std::vector<InstancePrediction> things, stuffs;
    for (const auto& pred : p.predictions) {
      (pred.is_thing ? things : stuffs).push_back(pred);
    }
    std::vector<InstancePrediction> kept;
    for (const int k : test_time_nms(things, g.config.nms_iou)) kept.push_back(things[k]);
    PanopticRecord r{p.image_id, fuse(kept, stuffs, p.height, p.width, g.config.fusion)};
    write_json_file(output_for(in, in.files[i], output, kPredsSuffix, kPanopticSuffix),
                    panoptic_to_json(r));
  });
}

void cmd_eval(const Globals& g, const fs::path& pred, const fs::path& gt,
              const std::string& classes_path, const fs::path& output) {
  const Inputs pin = resolve(pred, kPanopticSuffix);
  const Inputs gin = resolve(gt, kPanopticSuffix);
  const auto files = pair_inputs(pin, kPanopticSuffix, gin, kPanopticSuffix);
  std::optional<ClassTable> classes;
  if (!classes_path.empty()) classes = read_class_table(classes_path);

  std::vector<PqCounts> per_image(files.size());
  parallel_for(static_cast<int>(files.size()), g.jobs, [&](int i) {
    const PanopticRecord p = panoptic_from_json(read_json_file(files[i].first));
    const PanopticRecord t = panoptic_from_json(read_json_file(files[i].second));
    per_image[i] = pq_evaluate(p.map, t.map);
  });
  PqCounts total;
  for (const auto& c : per_image) total += c;
  const PqReport report = aggregate(total);
  const std::string table = format_table(report);

  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  json j = report_to_json(report, classes ? &*classes : nullptr);
  j["images"] = files.size();
  write_json_file(output, j);
  fs::path table_path = output;
  table_path.replace_extension(".txt");
  write_file_atomic(table_path, table);
  std::cout << table;
}

void cmd_detect_rate(const Globals& g, const fs::path& pred, const fs::path& gt,
                     const fs::path& output) {
  const Inputs pin = resolve(pred, kPanopticSuffix);
  const Inputs gin = resolve(gt, kPanopticSuffix);
  const auto files = pair_inputs(pin, kPanopticSuffix, gin, kPanopticSuffix);
  std::vector<DetectionCounts> per_image(files.size(),
                                         DetectionCounts(g.config.size_bins));
  parallel_for(static_cast<int>(files.size()), g.jobs, [&](int i) {
    const PanopticRecord p = panoptic_from_json(read_json_file(files[i].first));
    const PanopticRecord t = panoptic_from_json(read_json_file(files[i].second));
    per_image[i] = detection_rate_by_size(p.map, t.map, g.config.size_bins);
  });
  DetectionCounts total(g.config.size_bins);
  for (const auto& c : per_image) total += c;
  if (output.has_parent_path()) fs::create_directories(output.parent_path());
  write_json_file(output, detection_to_json(total));
}

void cmd_augment(const Globals& g, const fs::path& input, const fs::path& donors_path,
                 std::optional<int> region_class, int n, const fs::path& output) {
  if (!g.seed) {
    throw Error(ErrorCode::kInvalidArgument, "augment requires an explicit --seed");
  }
  const Inputs in = resolve(input, kPanopticSuffix);
  const Inputs donor_files = resolve(donors_path, kPanopticSuffix);
  std::vector<GtInstance> donors;
  for (const auto& f : donor_files.files) {
    const PanopticRecord r = panoptic_from_json(read_json_file(f));
    for (auto& inst : GtScene::from_panoptic(r.map).instances) {
      if (inst.is_thing) donors.push_back(std::move(inst));
    }
  }
  prepare_output(in, output);
  const Rng root(*g.seed);
  parallel_for(static_cast<int>(in.files.size()), g.jobs, [&](int i) {
    const PanopticRecord r = panoptic_from_json(read_json_file(in.files[i]));
    const GtScene scene = GtScene::from_panoptic(r.map);
    BinaryMask region;
    if (region_class) {
      MaskGrid grid(scene.height, scene.width);
      for (const auto& inst : scene.instances) {
        if (inst.class_id != *region_class) continue;
        for (const Run& run : inst.mask.runs()) {
          std::fill_n(grid.data().begin() + run.start, run.length, 1);
        }
      }
      region = rle_encode(grid);
    }
    PanopticRecord out{r.image_id, r.map};
    if (region_class && region.empty()) {
      warn(r.image_id, "no pixels of the region class; image left unchanged");
    } else {
      Rng rng = root.split(static_cast<std::uint64_t>(i));
      const CopyPasteResult result =
          copy_paste(scene, donors, region, n, rng, g.config.copy_paste);
      for (const auto& w : result.warnings) warn(r.image_id, w);
      out.map = result.scene.to_panoptic();
    }
    write_json_file(output_for(in, in.files[i], output, kPanopticSuffix, kPanopticSuffix),
                    panoptic_to_json(out));
  });
}

void print_error(ErrorCode code, const std::string& message) {
  const json record = {{"error", std::string(error_code_name(code))},
                       {"message", message},
                       {"exit_code", error_exit_status(code)}};
  std::cerr << record.dump() << '\n';
}

int run(int argc, char** argv) {
  CLI::App app{"Proposal decoding, matching, fusion and panoptic evaluation"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config_path, "JSON file overriding default constants");
  auto* seed_opt = app.add_option("--seed", seed, "Seed for randomized commands");
  app.add_option("--jobs", g.jobs, "Worker threads (default: all cores)")
      ->check(CLI::PositiveNumber);
  std::string output;

  auto* gen = app.add_subcommand("gen-targets", "Synthesize per-level OCP targets");
  std::string gen_in;
  gen->add_option("input", gen_in, "GT panoptic map or directory")->required();
  gen->add_option("--output", output, "Output manifest or directory")->required();

  auto* dec = app.add_subcommand("decode", "Decode proposals from head outputs");
  std::string dec_in;
  dec->add_option("input", dec_in, "Heads manifest or directory")->required();
  dec->add_option("--output", output, "Output file or directory")->required();

  auto* mat = app.add_subcommand("match", "Match predictions to GT instances");
  std::string mat_preds, mat_gt;
  bool refine = true;
  mat->add_option("--preds", mat_preds, "Prediction bundle or directory")->required();
  mat->add_option("--gt", mat_gt, "GT panoptic map or directory")->required();
  mat->add_flag("--refine,!--no-refine", refine, "Apply the two-stage refinement");
  mat->add_option("--output", output, "Output file or directory")->required();

  auto* fus = app.add_subcommand("fuse", "Fuse predictions into a panoptic map");
  std::string fus_in;
  fus->add_option("--preds", fus_in, "Prediction bundle or directory")->required();
  fus->add_option("--output", output, "Output file or directory")->required();

  auto* ev = app.add_subcommand("eval", "Panoptic quality report");
  std::string ev_pred, ev_gt, ev_classes;
  ev->add_option("--pred", ev_pred, "Predicted panoptic map or directory")->required();
  ev->add_option("--gt", ev_gt, "GT panoptic map or directory")->required();
  ev->add_option("--classes", ev_classes, "Class table JSON");
  ev->add_option("--output", output, "Report JSON; the table goes next to it")->required();

  auto* aug = app.add_subcommand("augment", "Copy-paste augmentation");
  std::string aug_in, aug_donors;
  std::optional<int> region_class;
  int paste_n = 1;
  aug->add_option("input", aug_in, "GT panoptic map or directory")->required();
  aug->add_option("--donors", aug_donors, "Donor panoptic map or directory")->required();
  aug->add_option("--region-class", region_class, "Paste only where this class is");
  aug->add_option("-n,--count", paste_n, "Objects pasted per image")
      ->check(CLI::NonNegativeNumber);
  aug->add_option("--output", output, "Output file or directory")->required();

  auto* det = app.add_subcommand("detect-rate", "Detection rate by object size");
  std::string det_pred, det_gt;
  det->add_option("--pred", det_pred, "Predicted panoptic map or directory")->required();
  det->add_option("--gt", det_gt, "GT panoptic map or directory")->required();
  det->add_option("--output", output, "Report JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error(ErrorCode::kInvalidArgument, e.what());
    return error_exit_status(ErrorCode::kInvalidArgument);
  }

  try {
    if (*seed_opt) g.seed = seed;
    if (g.jobs == 0) g.jobs = omp_get_max_threads();
    if (!g.config_path.empty()) g.config = load_config(g.config_path);

    if (*gen) cmd_gen_targets(g, gen_in, output);
    if (*dec) cmd_decode(g, dec_in, output);
    if (*mat) cmd_match(g, mat_preds, mat_gt, refine, output);
    if (*fus) cmd_fuse(g, fus_in, output);
    if (*ev) cmd_eval(g, ev_pred, ev_gt, ev_classes, output);
    if (*aug) cmd_augment(g, aug_in, aug_donors, region_class, paste_n, output);
    if (*det) cmd_detect_rate(g, det_pred, det_gt, output);
  } catch (const Error& e) {
    print_error(e.code(), e.what());
    return error_exit_status(e.code());
  } catch (const fs::filesystem_error& e) {
    print_error(ErrorCode::kIo, e.what());
    return error_exit_status(ErrorCode::kIo);
  }
  return 0;
}

}  // namespace
}  // namespace ocseg

int main(int argc, char** argv) { return ocseg::run(argc, argv); }
