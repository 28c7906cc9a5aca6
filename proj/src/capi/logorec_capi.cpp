// Copyright 2026 The logorec Authors
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
#include "logorec/logorec.h"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <new>
#include <string>
#include <vector>

#include "app/run_config.hpp"
#include "common/error.hpp"
#include "common/image.hpp"
#include "common/log.hpp"
#include "datamodel/dataset.hpp"
#include "dedup/dedup.hpp"
#include "evalkit/evalkit.hpp"
#include "inference/inference.hpp"
#include "logonet/model.hpp"
#include "proposals/selective_search.hpp"
#include "synthbench/synth.hpp"
#include "trainer/trainer.hpp"

namespace fs = std::filesystem;
using namespace logorec;

struct lr_config {
  RunConfig run;
};

struct lr_model {
  Model model;
};

namespace {

thread_local std::string g_last_error;

lr_status to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return LR_ERR_USAGE;
    case ErrorCode::kInvalidArgument: return LR_ERR_INVALID_ARGUMENT;
    case ErrorCode::kIo: return LR_ERR_IO;
    case ErrorCode::kData: return LR_ERR_DATA;
    case ErrorCode::kFormat: return LR_ERR_FORMAT;
    case ErrorCode::kVersion: return LR_ERR_VERSION;
    case ErrorCode::kTruncated: return LR_ERR_TRUNCATED;
    case ErrorCode::kShape: return LR_ERR_SHAPE;
    case ErrorCode::kInternal: return LR_ERR_INTERNAL;
  }
  return LR_ERR_INTERNAL;
}

// Runs body, translating exceptions into a status plus lr_last_error().
template <class Body>
lr_status guarded(Body&& body) {
  g_last_error.clear();
  try {
    body();
    return LR_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown error";
  }
  return LR_ERR_INTERNAL;
}

void need(const void* p, const char* what) {
  if (!p) fail(ErrorCode::kInvalidArgument, std::string(what) + " must not be NULL");
}

class Emitter {
 public:
  Emitter(lr_line_fn fn, void* user) : fn_(fn), user_(user) {}
  void line(const std::string& s) const {
    if (fn_) fn_(user_, s.c_str());
  }
  // Splits multi-line text.
  void text(const std::string& s) const {
    std::size_t start = 0;
    while (start < s.size()) {
      auto end = s.find('\n', start);
      if (end == std::string::npos) end = s.size();
      line(s.substr(start, end - start));
      start = end + 1;
    }
  }

 private:
  lr_line_fn fn_;
  void* user_;
};

std::string format(const char* fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

// Files are taken as given; directories contribute their image files,
// recursively, in sorted order.
std::vector<fs::path> expand_paths(const char* const* paths, std::size_t count) {
  if (count > 0) need(paths, "paths");
  std::vector<fs::path> out;
  for (std::size_t i = 0; i < count; ++i) {
    need(paths[i], "path");
    const fs::path p(paths[i]);
    std::error_code ec;
    if (fs::is_directory(p, ec)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::recursive_directory_iterator(p, ec))
        if (entry.is_regular_file() && is_image_file(entry.path())) found.push_back(entry.path());
      if (ec) fail(ErrorCode::kIo, "cannot list directory: " + p.string());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else if (fs::exists(p, ec)) {
      out.push_back(p);
    } else {
      fail(ErrorCode::kIo, "no such file or directory: " + p.string());
    }
  }
  return out;
}

DatasetIndex open_dataset(const char* dir) {
  need(dir, "data directory");
  auto ds = load_dataset(dir);
  for (const auto& w : ds.warnings) log_warning(w);
  return ds;
}

std::vector<std::string> split_list(const char* text) {
  std::vector<std::string> out;
  if (!text) return out;
  std::string item;
  for (const char* p = text;; ++p) {
    if (*p == ',' || *p == '\0') {
      const auto b = item.find_first_not_of(' ');
      const auto e = item.find_last_not_of(' ');
      if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
      item.clear();
      if (*p == '\0') break;
    } else {
      item += *p;
    }
  }
  return out;
}

void write_file(const char* path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(ErrorCode::kIo, std::string("cannot write ") + path);
}

std::string class_label(const Model& m, std::size_t index) {
  return index == m.background_index() ? std::string("NO-LOGO") : m.class_names[index];
}

std::string label_name(const DatasetIndex& ds, std::size_t index) {
  return index == ds.background_index() ? std::string("NO-LOGO") : ds.class_names[index];
}

void emit_eval(const Emitter& out, const EvalResult& r, const std::vector<std::string>& names) {
  out.line(format("precision %.4f", r.precision));
  out.line(format("recall %.4f", r.recall));
  out.line(format("f1 %.4f", r.f1));
  out.line(format("accuracy %.4f", r.accuracy));
  out.line(format("tp %zu fp %zu fn %zu images %zu", r.tp, r.fp, r.fn, r.images));
  std::string header = "confusion label\\decision";
  for (const auto& n : names) header += " " + n;
  out.line(header);
  for (std::size_t i = 0; i < r.confusion.size(); ++i) {
    std::string row = "confusion " + names[i];
    for (auto v : r.confusion[i]) row += " " + std::to_string(v);
    out.line(row);
  }
}

std::mutex g_log_mutex;
lr_line_fn g_log_fn = nullptr;
void* g_log_user = nullptr;

}  // namespace

extern "C" {

const char* lr_version(void) { return "0.1.0"; }

const char* lr_status_name(lr_status status) {
  switch (status) {
    case LR_OK: return "ok";
    case LR_ERR_USAGE: return "usage";
    case LR_ERR_INVALID_ARGUMENT: return "invalid-argument";
    case LR_ERR_IO: return "io";
    case LR_ERR_DATA: return "data";
    case LR_ERR_FORMAT: return "format";
    case LR_ERR_VERSION: return "version";
    case LR_ERR_TRUNCATED: return "truncated";
    case LR_ERR_SHAPE: return "shape";
    case LR_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* lr_last_error(void) { return g_last_error.c_str(); }

void lr_set_log_callback(lr_line_fn fn, void* user) {
  {
    std::lock_guard lock(g_log_mutex);
    g_log_fn = fn;
    g_log_user = user;
  }
  if (!fn) {
    set_log_sink(nullptr);
    return;
  }
  set_log_sink([fn, user](LogLevel level, std::string_view message) {
    std::string line = level == LogLevel::kWarning ? "warning: " : "";
    line.append(message);
    fn(user, line.c_str());
  });
}

lr_status lr_config_create(lr_config** out) {
  return guarded([&] {
    need(out, "out");
    *out = new lr_config{};
  });
}

void lr_config_destroy(lr_config* config) { delete config; }

lr_status lr_config_set(lr_config* config, const char* key, const char* value) {
  return guarded([&] {
    need(config, "config");
    need(key, "key");
    need(value, "value");
    if (std::string_view(key) == "preset")
      apply_preset(config->run, value);
    else
      apply_setting(config->run, key, value);
  });
}

lr_status lr_config_apply_preset(lr_config* config, const char* preset) {
  return guarded([&] {
    need(config, "config");
    need(preset, "preset");
    apply_preset(config->run, preset);
  });
}

lr_status lr_config_load_file(lr_config* config, const char* path) {
  return guarded([&] {
    need(config, "config");
    need(path, "path");
    load_config_file(config->run, path);
  });
}

lr_status lr_config_dump(const lr_config* config, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    Emitter(fn, user).text(dump_config(config->run));
  });
}

size_t lr_setting_count(void) { return setting_catalog().size(); }

const char* lr_setting_key(size_t index) {
  return index < setting_catalog().size() ? setting_catalog()[index].key.c_str() : nullptr;
}

const char* lr_setting_help(size_t index) {
  return index < setting_catalog().size() ? setting_catalog()[index].help.c_str() : nullptr;
}

size_t lr_preset_count(void) { return preset_names().size(); }

const char* lr_preset_name(size_t index) {
  return index < preset_names().size() ? preset_names()[index].c_str() : nullptr;
}

lr_status lr_model_load(const char* path, lr_model** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new lr_model{load_model(path)};
  });
}

lr_status lr_model_save(const lr_model* model, const char* path) {
  return guarded([&] {
    need(model, "model");
    need(path, "path");
    save_model(model->model, path);
  });
}

void lr_model_destroy(lr_model* model) { delete model; }

size_t lr_model_class_count(const lr_model* model) { return model ? model->model.class_names.size() : 0; }

const char* lr_model_class_name(const lr_model* model, size_t index) {
  if (!model || index >= model->model.class_names.size()) return nullptr;
  return model->model.class_names[index].c_str();
}

double lr_model_threshold(const lr_model* model) { return model ? model->model.threshold : 0.0; }

size_t lr_model_parameter_count(const lr_model* model) { return model ? model->model.net.parameter_count() : 0; }

lr_status lr_synth(const lr_config* config, const char* out_dir, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    need(out_dir, "output directory");
    const auto ds = generate(config->run.synth, out_dir);
    const Emitter out(fn, user);
    out.line("classes " + std::to_string(ds.num_classes()));
    for (auto split : kAllSplits) {
      std::size_t logos = 0;
      for (const auto& r : ds.split(split)) logos += r.label ? 1 : 0;
      out.line(format("%s images %zu logo %zu no-logo %zu", split_name(split), ds.split(split).size(), logos,
                      ds.split(split).size() - logos));
    }
  });
}

lr_status lr_propose(const lr_config* config, const char* const* paths, size_t count, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    const Emitter out(fn, user);
    for (const auto& path : expand_paths(paths, count)) {
      const auto image = read_image(path);
      for (const auto& sb : propose(image, config->run.proposals))
        out.line(format("%s %d %d %d %d %.6f", path.string().c_str(), sb.box.x, sb.box.y, sb.box.w, sb.box.h,
                        sb.score));
    }
  });
}

lr_status lr_train(const lr_config* config, const char* data_dir, lr_model** out_model, lr_line_fn fn,
                   void* user) {
  return guarded([&] {
    need(config, "config");
    need(out_model, "out");
    const auto& run = config->run;
    validate(run.train);
    const auto ds = open_dataset(data_dir);
    const SelectiveSearchProposer search(run.proposals);
    const CachingProposer proposer(search);
    auto result = train(run.train, ds, proposer, {run.threads, [](const std::string& s) { log_info(s); }});
    const Emitter out(fn, user);
    const auto& rep = result.report;
    out.line("samples " + std::to_string(rep.sample_count));
    for (std::size_t o = 0; o < kOriginCount; ++o)
      out.line(format("origin %s %zu", sample_origin_name(static_cast<SampleOrigin>(o)), rep.origin_counts[o]));
    for (std::size_t c = 0; c < rep.class_counts.size(); ++c)
      out.line(format("class %s %zu", label_name(ds, c).c_str(), rep.class_counts[c]));
    for (std::size_t e = 0; e < rep.epochs.size(); ++e)
      out.line(format("epoch %zu loss %.6f accuracy %.4f lr %g", e + 1, rep.epochs[e].loss, rep.epochs[e].accuracy,
                      rep.epochs[e].lr));
    out.line(format("threshold %.17g", rep.threshold));
    out.line(format("calibration_accuracy %.4f", rep.calibration_accuracy));
    *out_model = new lr_model{std::move(result.model)};
  });
}

lr_status lr_calibrate(const lr_config* config, lr_model* model, const char* data_dir, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    need(model, "model");
    const auto ds = open_dataset(data_dir);
    std::vector<ImageRecord> images = ds.split(Split::kTrain);
    images.insert(images.end(), ds.split(Split::kVal).begin(), ds.split(Split::kVal).end());
    if (ds.class_names != model->model.class_names)
      fail(ErrorCode::kData, std::string("dataset classes do not match the model: ") + data_dir);
    const SelectiveSearchProposer proposer(config->run.proposals);
    const auto choice = calibrate_threshold(model->model, images, proposer, config->run.threads);
    model->model.threshold = choice.threshold;
    const Emitter out(fn, user);
    out.line(format("threshold %.17g", choice.threshold));
    out.line(format("calibration_accuracy %.4f", choice.accuracy));
    out.line("images " + std::to_string(images.size()));
  });
}

lr_status lr_predict(const lr_config* config, const lr_model* model, const char* const* paths, size_t count,
                     lr_line_fn fn, void* user) {
  bool any_failed = false;
  const lr_status status = guarded([&] {
    need(config, "config");
    need(model, "model");
    const auto files = expand_paths(paths, count);
    const SelectiveSearchProposer proposer(config->run.proposals);
    const auto results = classify_batch(files, model->model, proposer, config->run.threads);
    const Emitter out(fn, user);
    for (const auto& r : results) {
      if (!r.decision) {
        any_failed = true;
        log_warning(r.path.string() + ": " + r.error);
        out.line(r.path.string() + " ERROR " + r.error);
        continue;
      }
      const auto& d = *r.decision;
      out.line(format("%s %s %.6f %zu", r.path.string().c_str(), class_label(model->model, d.predicted).c_str(),
                      d.confidence, d.proposal_count));
    }
  });
  if (status == LR_OK && any_failed) {
    g_last_error = "some images could not be classified";
    return LR_ERR_DATA;
  }
  return status;
}

lr_status lr_evaluate(const lr_config* config, const lr_model* model, const char* data_dir, const char* split,
                      lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    need(model, "model");
    const auto which = parse_split(split ? split : "test");
    if (!which) fail(ErrorCode::kUsage, std::string("unknown split: ") + split + " (expected train, val or test)");
    const auto ds = open_dataset(data_dir);
    if (ds.class_names != model->model.class_names)
      fail(ErrorCode::kData, std::string("dataset classes do not match the model: ") + data_dir);
    const SelectiveSearchProposer proposer(config->run.proposals);
    const auto r = evaluate_split(model->model, ds, *which, proposer, config->run.threads);
    auto names = ds.class_names;
    names.push_back("NO-LOGO");
    emit_eval(Emitter(fn, user), r, names);
  });
}

lr_status lr_ablate(const lr_config* config, const char* data_dir, const char* presets, const char* seeds,
                    const char* csv_path, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    const auto ids = split_list(presets);
    if (ids.empty()) fail(ErrorCode::kUsage, "no presets given");
    std::vector<AblationEntry> entries;
    for (const auto& id : ids) {
      RunConfig run = config->run;
      apply_preset(run, id);
      validate(run.train);
      entries.push_back({id, run.train});
    }
    AblationOptions options;
    options.threads = config->run.threads;
    options.progress = [](const std::string& s) { log_info(s); };
    const auto seed_text = split_list(seeds);
    if (!seed_text.empty()) {
      options.seeds.clear();
      for (const auto& s : seed_text) {
        RunConfig scratch;
        apply_setting(scratch, "seed", s);
        options.seeds.push_back(scratch.train.hyper.seed);
      }
    } else {
      options.seeds = {config->run.train.hyper.seed};
    }
    const auto ds = open_dataset(data_dir);
    const SelectiveSearchProposer search(config->run.proposals);
    const CachingProposer proposer(search);
    const auto rows = ablation_table(entries, ds, proposer, options);
    Emitter(fn, user).text(format_ablation_text(rows));
    if (csv_path) write_file(csv_path, format_ablation_csv(rows));
  });
}

lr_status lr_dedup(const lr_config* config, const char* const* query, size_t query_count,
                   const char* const* reference, size_t reference_count, const lr_model* model, lr_line_fn fn,
                   void* user) {
  return guarded([&] {
    need(config, "config");
    const auto qs = expand_paths(query, query_count);
    const bool same_set = reference == nullptr;
    const auto rs = same_set ? qs : expand_paths(reference, reference_count);
    const std::size_t threads = config->run.threads;
    const double threshold = config->run.dup_threshold;

    std::vector<Image> q_images, r_images;
    for (const auto& p : qs) q_images.push_back(read_image(p));
    if (!same_set)
      for (const auto& p : rs) r_images.push_back(read_image(p));
    const auto& ref_images = same_set ? q_images : r_images;

    std::vector<GrayPlane> q_gray, r_gray;
    for (const auto& im : q_images) q_gray.push_back(to_gray(im));
    for (const auto& im : r_images) r_gray.push_back(to_gray(im));

    const Emitter out(fn, user);
    const auto pairs = same_set ? find_exact_duplicates(q_gray, threshold, {}, threads)
                                : find_exact_duplicates(q_gray, r_gray, threshold, {}, threads);
    for (const auto& p : pairs)
      out.line(format("%s %s %.6f", qs[p.a].string().c_str(), rs[p.b].string().c_str(), p.ssim));

    if (!model) return;
    std::vector<std::vector<double>> q_feat, r_feat;
    for (const auto& im : q_images) q_feat.push_back(image_features(model->model, im));
    if (same_set)
      r_feat = q_feat;
    else
      for (const auto& im : ref_images) r_feat.push_back(image_features(model->model, im));
    std::vector<std::string> ids;
    for (const auto& p : rs) ids.push_back(p.string());
    for (const auto& list : find_near_duplicates(q_feat, r_feat, ids, same_set)) {
      for (std::size_t rank = 0; rank < list.neighbors.size(); ++rank) {
        const auto& n = list.neighbors[rank];
        out.line(format("%s %s %zu %.6f", qs[list.query].string().c_str(), rs[n.index].string().c_str(), rank + 1,
                        n.distance));
      }
    }
  });
}

lr_status lr_bench(const lr_config* config, const lr_model* model, const char* const* paths, size_t count,
                   const char* csv_path, lr_line_fn fn, void* user) {
  return guarded([&] {
    need(config, "config");
    need(model, "model");
    auto files = expand_paths(paths, count);
    if (files.empty()) fail(ErrorCode::kUsage, "bench needs at least one image");
    if (files.size() > config->run.bench_runs) files.resize(config->run.bench_runs);
    const SelectiveSearchProposer proposer(config->run.proposals);
    // Sequential so stage times are not inflated by contention.
    const auto results = classify_batch(files, model->model, proposer, 1);
    std::vector<StageTimes> times;
    for (const auto& r : results) {
      if (!r.decision) fail(ErrorCode::kData, r.path.string() + ": " + r.error);
      times.push_back(r.times);
    }
    const std::vector<TimingRow> rows{timing_report(times, "CPU")};
    Emitter(fn, user).text(format_timing_text(rows));
    if (csv_path) write_file(csv_path, format_timing_csv(rows));
  });
}

}  // extern "C"
