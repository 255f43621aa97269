// Copyright 2026 The Lanewatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lanewatch/study/commands.hpp"

#include <algorithm>
#include <functional>
#include <mutex>
#include <numeric>
#include <ostream>

#include <json.hpp>
#include <tbb/parallel_for.h>
#include <tbb/task_arena.h>

#include "lanewatch/common/error.hpp"
#include "lanewatch/common/io.hpp"
#include "lanewatch/common/rng.hpp"
#include "lanewatch/monitor/calibration.hpp"
#include "lanewatch/monitor/windowing.hpp"
#include "lanewatch/nnet/model_io.hpp"
#include "lanewatch/sim/episode.hpp"
#include "lanewatch/sim/expert.hpp"
#include "lanewatch/sim/mutation.hpp"
#include "lanewatch/sim/solid.hpp"

namespace lanewatch::study {

namespace fs = std::filesystem;

namespace {

// Random stream tags.
enum Stream : std::uint64_t {
  kDemoStream = 1,
  kEpisodeStream = 2,
  kCalibrationStream = 3,
  kNominalStream = 4,
  kMutationStream = 5,
  kEstimatorStream = 6,
  kBenchStream = 7,
};

std::uint64_t stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  for (auto p : path) seed = Rng::derive(seed, p);
  return seed;
}

std::uint64_t base_seed(const StudyConfig& cfg, const RunOptions& opt) { return opt.seed.value_or(cfg.seed); }

class Logger {
 public:
  explicit Logger(std::ostream* os) : os_(os) {}
  void operator()(const std::string& line) const {
    if (os_ == nullptr) return;
    std::lock_guard<std::mutex> lock(mu_);
    *os_ << line << '\n';
    os_->flush();
  }

 private:
  std::ostream* os_;
  mutable std::mutex mu_;
};

void run_parallel(int jobs, std::size_t n, const std::function<void(std::size_t)>& task) {
  if (n == 0) return;
  if (jobs <= 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  tbb::task_arena arena(jobs);
  arena.execute([&] {
    tbb::parallel_for(std::size_t{0}, n, [&](std::size_t i) { task(i); });
  });
}

std::string rate_label(double rate) { return format_fixed(rate, 3); }

std::string rel_path(const fs::path& p, const fs::path& root) { return p.lexically_relative(root).generic_string(); }

void require_file(const fs::path& p, const std::string& what, const std::string& hint) {
  if (!fs::exists(p)) fail(ErrorKind::kIo, "missing " + what + " at " + p.string() + " (" + hint + ")");
}

template <typename Range, typename Pred>
auto selected(const Range& all, const std::optional<std::string>& only, Pred id_of) {
  std::vector<typename Range::value_type> out;
  for (const auto& x : all) {
    if (!only || id_of(x) == *only) out.push_back(x);
  }
  return out;
}

std::vector<EstimatorSpec> selected_estimators(const StudyConfig& cfg, const RunOptions& opt) {
  if (opt.estimator) cfg.estimator(*opt.estimator);
  return selected(cfg.estimators, opt.estimator, [](const EstimatorSpec& e) { return e.id; });
}

std::size_t estimator_index(const StudyConfig& cfg, const std::string& id) {
  for (std::size_t i = 0; i < cfg.estimators.size(); ++i) {
    if (cfg.estimators[i].id == id) return i;
  }
  fail(ErrorKind::kConfig, "unknown estimator " + id);
}

std::size_t benchmark_index(const StudyConfig& cfg, const std::string& id) {
  for (std::size_t i = 0; i < cfg.benchmarks.size(); ++i) {
    if (cfg.benchmarks[i].id == id) return i;
  }
  fail(ErrorKind::kConfig, "unknown benchmark " + id);
}

nnet::Dataset demonstrations(const StudyConfig& cfg, std::uint64_t seed, const sim::Track& track) {
  sim::DemonstrationConfig d = cfg.demonstrations;
  d.dt = cfg.dt;
  d.seed = stream(seed, {kDemoStream});
  return sim::collect_demonstrations(track, d);
}

nnet::TrainingConfig training_for(const nnet::TrainingConfig& base, std::uint64_t model_seed) {
  nnet::TrainingConfig t = base;
  t.seed = model_seed;
  return t;
}

/// The driving controller plus the monitor watching it.
struct System {
  sim::Controller controller;
  sim::Estimator estimator;
  std::vector<std::string> models;
};

/// Unmutated artifacts of one estimator and the shared driving controller.
struct Loaded {
  EstimatorSpec spec;
  nnet::Regressor driver;
  std::optional<nnet::Regressor> sampled;       // MCD
  std::optional<uq::Ensemble> ensemble;         // DE
  std::optional<uq::AutoencoderScorer> scorer;  // AE
  fs::path driver_file;
  fs::path monitor_file;
};

Loaded load_estimator(const StudyConfig& cfg, const Layout& layout, const EstimatorSpec& e) {
  const std::string hint = "run train first; models failing the solidity filter are not written";
  const auto driver_path = layout.mcd_model(cfg.driver_dropout_rate);
  require_file(driver_path, "driving controller", hint);
  Loaded l{e, nnet::load_regressor(driver_path), std::nullopt, std::nullopt, std::nullopt, driver_path, {}};
  switch (e.kind) {
    case EstimatorKind::kMcd:
      l.monitor_file = layout.mcd_model(e.dropout_rate);
      require_file(l.monitor_file, "controller for dropout rate " + rate_label(e.dropout_rate), hint);
      l.sampled = nnet::load_regressor(l.monitor_file);
      break;
    case EstimatorKind::kDe:
      l.monitor_file = layout.ensemble_manifest(e);
      require_file(l.monitor_file, "ensemble manifest for " + e.id, hint);
      l.ensemble = uq::load_ensemble(l.monitor_file);
      require(l.ensemble->size() == static_cast<std::size_t>(e.members), ErrorKind::kIntegrity,
              "manifest " + l.monitor_file.string() + " lists " + std::to_string(l.ensemble->size()) +
                  " members, config expects " + std::to_string(e.members));
      break;
    case EstimatorKind::kAe:
      l.monitor_file = layout.autoencoder_model();
      require_file(l.monitor_file, "autoencoder", hint);
      l.scorer.emplace(nnet::load_regressor(l.monitor_file));
      break;
  }
  return l;
}

uq::McdConfig mcd_config(const EstimatorSpec& e) {
  uq::McdConfig c;
  c.n_samples = e.samples;
  return c;
}

System assemble(const Loaded& l, const nnet::Regressor& driver, const std::optional<nnet::Regressor>& sampled,
                const std::optional<uq::Ensemble>& ensemble) {
  System s;
  s.controller = sim::model_controller(driver);
  switch (l.spec.kind) {
    case EstimatorKind::kMcd: s.estimator = sim::mcd_estimator(*sampled, mcd_config(l.spec)); break;
    case EstimatorKind::kDe: s.estimator = sim::de_estimator(*ensemble); break;
    case EstimatorKind::kAe: s.estimator = sim::ae_estimator(*l.scorer); break;
  }
  return s;
}

System nominal_system(const Loaded& l, const fs::path& out) {
  System s = assemble(l, l.driver, l.sampled, l.ensemble);
  s.models = {rel_path(l.driver_file, out), rel_path(l.monitor_file, out)};
  return s;
}

/// The driver and the estimator's own networks are mutated; the autoencoder
/// watches inputs only and stays as trained.
System mutant_system(const Loaded& l, const fs::path& out, const sim::MutationOp& recipe, std::uint64_t seed,
                     const nnet::Dataset* data, const nnet::TrainingConfig& training) {
  const nnet::Dataset empty;
  const nnet::Dataset& d = data ? *data : empty;
  const auto mutate_one = [&](const nnet::Regressor& m, std::uint64_t tag) {
    sim::MutationOp op = recipe;
    op.seed = Rng::derive(seed, tag);
    return sim::mutate(m, d, training, op);
  };
  const nnet::Regressor driver = mutate_one(l.driver, 0);
  std::optional<nnet::Regressor> sampled;
  if (l.sampled) sampled = *l.sampled == l.driver ? driver : mutate_one(*l.sampled, 0);
  std::optional<uq::Ensemble> ensemble;
  if (l.ensemble) {
    std::vector<nnet::Regressor> members;
    for (const auto& m : l.ensemble->members()) members.push_back(mutate_one(m, 1 + m.seed()));
    ensemble.emplace(std::move(members));
  }
  System s = assemble(l, driver, sampled, ensemble);
  const std::string tag = "+" + sim::to_string(recipe.kind) + "(" + format_short(recipe.magnitude) + ",seed " +
                          std::to_string(seed) + ")";
  s.models = {rel_path(l.driver_file, out) + tag,
              rel_path(l.monitor_file, out) + (l.spec.kind == EstimatorKind::kAe ? "" : tag)};
  return s;
}

sim::EpisodeConfig episode_config(const StudyConfig& cfg, const sim::Track& track, std::uint64_t placement,
                                  std::uint64_t estimator_seed, std::size_t steps) {
  sim::EpisodeConfig ec;
  ec.dt = cfg.dt;
  ec.max_steps = steps;
  Rng rng(placement);
  ec.start_arc = rng.uniform(0.0, track.length());
  ec.seed = estimator_seed;
  return ec;
}

std::string checksum_of(const fs::path& p) { return fnv1a_hex(read_file(p)); }

}  // namespace

Layout::Layout(const StudyConfig& cfg, fs::path out)
    : models_(out / cfg.paths.models),
      traces_(out / cfg.paths.traces),
      calibration_(out / cfg.paths.calibration),
      reports_(out / cfg.paths.reports),
      bench_(out / cfg.paths.bench) {}

fs::path Layout::mcd_model(double dropout_rate) const {
  return models_ / ("controller-dropout-" + rate_label(dropout_rate) + ".model");
}
fs::path Layout::member_model(std::uint64_t seed) const {
  return models_ / ("member-" + std::to_string(seed) + ".model");
}
fs::path Layout::ensemble_manifest(const EstimatorSpec& e) const { return models_ / (e.id + ".ensemble.json"); }
fs::path Layout::autoencoder_model() const { return models_ / "autoencoder.model"; }
fs::path Layout::solidity_log() const { return models_ / "solidity.json"; }
fs::path Layout::episode_trace(const std::string& e, const std::string& b, std::uint64_t seed) const {
  return traces_ / e / b / ("seed-" + std::to_string(seed) + ".jsonl");
}
fs::path Layout::calibration_trace(const std::string& e, const std::string& b) const {
  return traces_ / e / b / "calibration.jsonl";
}
fs::path Layout::nominal_trace(const std::string& e, std::uint64_t seed) const {
  return traces_ / e / "nominal" / ("seed-" + std::to_string(seed) + ".jsonl");
}
fs::path Layout::calibration(const std::string& e, const std::string& b) const {
  return calibration_ / e / (b + ".json");
}
fs::path Layout::report_dir() const { return reports_; }
fs::path Layout::bench_dir() const { return bench_; }

sim::Track study_track(const StudyConfig& cfg) {
  if (cfg.track == "oval") return sim::make_oval_track(120.0, 40.0);
  if (cfg.track == "circle") return sim::make_circle_track(40.0);
  return sim::make_default_track();
}

double table_confidence(const EstimatorSpec& e, const RunOptions& opt) { return opt.gamma.value_or(e.gamma); }

void cmd_train(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const sim::Track track = study_track(cfg);
  const std::uint64_t seed = base_seed(cfg, opt);
  const nnet::Dataset data = demonstrations(cfg, seed, track);
  log("train: " + std::to_string(data.size()) + " demonstration frames on track " + track.id());

  struct Job {
    std::string kind;
    fs::path path;
    std::vector<std::size_t> dims;
    double rate = 0.0;
    std::uint64_t seed = 0;
    bool controller = true;
  };
  std::vector<Job> jobs;
  for (double r : cfg.dropout_rates) jobs.push_back({"controller", layout.mcd_model(r), cfg.architecture, r, cfg.mcd_seed});
  for (auto s : cfg.member_seeds) {
    jobs.push_back({"member", layout.member_model(s), cfg.architecture, cfg.member_dropout_rate, s});
  }
  const bool need_ae = std::any_of(cfg.estimators.begin(), cfg.estimators.end(),
                                   [](const EstimatorSpec& e) { return e.kind == EstimatorKind::kAe; });
  if (need_ae) jobs.push_back({"autoencoder", layout.autoencoder_model(), cfg.autoencoder_dims, 0.0, cfg.mcd_seed, false});

  nnet::Dataset ae_data;
  ae_data.inputs = data.inputs;
  ae_data.targets = data.inputs;
  ae_data.provenance = nnet::Provenance::kObservations;

  struct Outcome {
    nnet::TrainingResult result;
    bool solid = true;
  };
  std::vector<std::optional<Outcome>> outcomes(jobs.size());
  run_parallel(opt.jobs, jobs.size(), [&](std::size_t i) {
    const Job& j = jobs[i];
    const bool ae = !j.controller;
    auto result = nnet::train(nnet::init_regressor(j.dims, j.rate, j.seed), ae ? ae_data : data,
                              training_for(ae ? cfg.autoencoder_training : cfg.training, j.seed));
    const bool solid = ae || sim::is_solid(result.model, track, cfg.solid_laps, cfg.dt);
    if (solid) {
      nnet::save_regressor(result.model, j.path);
    } else if (fs::exists(j.path)) {
      fs::remove(j.path);
    }
    log("train: " + rel_path(j.path, opt.out) + " epochs " + std::to_string(result.history.size()) +
        " best validation MSE " + format_short(result.best_validation_loss) + (solid ? "" : " NOT SOLID, skipped"));
    outcomes[i] = Outcome{std::move(result), solid};
  });

  nlohmann::ordered_json solidity = nlohmann::ordered_json::array();
  std::vector<std::uint64_t> solid_members;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& j = jobs[i];
    const auto& o = *outcomes[i];
    nlohmann::ordered_json row;
    row["model"] = rel_path(j.path, opt.out);
    row["kind"] = j.kind;
    row["seed"] = j.seed;
    row["dropout_rate"] = j.rate;
    row["epochs_run"] = o.result.history.size();
    row["best_epoch"] = o.result.best_epoch;
    row["best_validation_mse"] = o.result.best_validation_loss;
    row["stopped_early"] = o.result.stopped_early;
    row["solid"] = j.controller ? nlohmann::ordered_json(o.solid) : nlohmann::ordered_json(nullptr);
    solidity.push_back(row);
    if (j.kind == "member" && o.solid) solid_members.push_back(j.seed);
  }
  nlohmann::ordered_json log_json;
  log_json["track"] = track.id();
  log_json["laps"] = cfg.solid_laps;
  log_json["models"] = solidity;
  write_file_atomic(layout.solidity_log(), log_json.dump(2) + "\n");

  for (const auto& e : cfg.estimators) {
    if (e.kind != EstimatorKind::kDe) continue;
    const auto manifest_path = layout.ensemble_manifest(e);
    if (solid_members.size() < static_cast<std::size_t>(e.members)) {
      log("train: " + e.id + " skipped, only " + std::to_string(solid_members.size()) + " solid members");
      if (fs::exists(manifest_path)) fs::remove(manifest_path);
      continue;
    }
    uq::EnsembleManifest m;
    m.id = e.id;
    for (int k = 0; k < e.members; ++k) {
      const auto s = solid_members[static_cast<std::size_t>(k)];
      m.members.push_back({layout.member_model(s).filename().string(), s});
    }
    uq::save_manifest(m, manifest_path);
  }
}

void cmd_simulate(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const sim::Track track = study_track(cfg);
  const std::uint64_t seed = base_seed(cfg, opt);
  const auto estimators = selected_estimators(cfg, opt);
  const bool nominal_only = opt.benchmark && *opt.benchmark == "nominal";
  std::vector<BenchmarkRecipe> benchmarks;
  if (!nominal_only) {
    if (opt.benchmark) cfg.benchmark(*opt.benchmark);
    benchmarks = selected(cfg.benchmarks, opt.benchmark, [](const BenchmarkRecipe& b) { return b.id; });
  }
  const bool run_nominal = !opt.benchmark || nominal_only;

  std::vector<Loaded> loaded;
  for (const auto& e : estimators) loaded.push_back(load_estimator(cfg, layout, e));

  std::optional<nnet::Dataset> data;
  const bool retrain = std::any_of(benchmarks.begin(), benchmarks.end(), [](const BenchmarkRecipe& b) {
    return b.mutation && b.mutation->kind != sim::MutationKind::kWeightFuzz;
  });
  if (retrain) data = demonstrations(cfg, seed, track);

  struct Task {
    std::size_t est = 0;
    const BenchmarkRecipe* bench = nullptr;  // null: nominal negatives
    std::uint64_t episode_seed = 0;
    bool calibration = false;
  };
  std::vector<Task> tasks;
  for (std::size_t e = 0; e < loaded.size(); ++e) {
    for (const auto& b : benchmarks) {
      tasks.push_back({e, &b, 0, true});
      for (auto s : cfg.episode_seeds) tasks.push_back({e, &b, s, false});
    }
    if (run_nominal) {
      for (auto s : cfg.episode_seeds) tasks.push_back({e, nullptr, s, false});
    }
  }
  log("simulate: " + std::to_string(tasks.size()) + " episodes");

  run_parallel(opt.jobs, tasks.size(), [&](std::size_t i) {
    const Task& t = tasks[i];
    const Loaded& l = loaded[t.est];
    const std::uint64_t est_tag = estimator_index(cfg, l.spec.id);
    sim::PerturbationSpec spec = sim::PerturbationSpec::nominal();
    System system;
    sim::EpisodeConfig ec;
    fs::path path;
    bool mutant = false;
    if (t.bench == nullptr) {
      const std::uint64_t placement = stream(seed, {kNominalStream, t.episode_seed});
      ec = episode_config(cfg, track, placement, stream(placement, {kEstimatorStream, est_tag}), cfg.episode_steps);
      spec.seed = stream(placement, {kEpisodeStream});
      system = nominal_system(l, opt.out);
      ec.benchmark = "nominal";
      path = layout.nominal_trace(l.spec.id, t.episode_seed);
    } else if (t.calibration) {
      const std::uint64_t placement = stream(seed, {kCalibrationStream, benchmark_index(cfg, t.bench->id)});
      ec = episode_config(cfg, track, placement, stream(placement, {kEstimatorStream, est_tag}),
                          cfg.calibration_steps);
      spec.seed = stream(placement, {kEpisodeStream});
      system = nominal_system(l, opt.out);
      ec.benchmark = t.bench->id;
      path = layout.calibration_trace(l.spec.id, t.bench->id);
    } else {
      const std::uint64_t placement =
          stream(seed, {kEpisodeStream, benchmark_index(cfg, t.bench->id), t.episode_seed});
      ec = episode_config(cfg, track, placement, stream(placement, {kEstimatorStream, est_tag}), cfg.episode_steps);
      spec = sim::PerturbationSpec{t.bench->tier, t.bench->corruptions, stream(placement, {kEpisodeStream})};
      if (t.bench->mutation) {
        system = mutant_system(l, opt.out, *t.bench->mutation, stream(placement, {kMutationStream}),
                               data ? &*data : nullptr, cfg.training);
        mutant = true;
      } else {
        system = nominal_system(l, opt.out);
      }
      ec.benchmark = t.bench->id;
      path = layout.episode_trace(l.spec.id, t.bench->id, t.episode_seed);
    }
    ec.estimator_id = l.spec.id;
    ec.mutant = mutant;
    std::string model_id;
    for (const auto& m : system.models) model_id += (model_id.empty() ? "" : ";") + m;
    ec.model_id = model_id;
    const sim::SimTrace trace = sim::run_episode(system.controller, track, spec, &system.estimator, ec);
    sim::save_trace(trace, path);
    log("simulate: " + rel_path(path, opt.out) + " frames " + std::to_string(trace.records.size()) + " failures " +
        std::to_string(trace.failure_onsets().size()) +
        (trace.meta.termination == "completed" ? "" : " (" + trace.meta.termination + ")"));
  });
}

void cmd_calibrate(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const auto estimators = selected_estimators(cfg, opt);
  if (opt.benchmark) cfg.benchmark(*opt.benchmark);
  const auto benchmarks = selected(cfg.benchmarks, opt.benchmark, [](const BenchmarkRecipe& b) { return b.id; });
  for (const auto& e : estimators) {
    for (const auto& b : benchmarks) {
      const auto trace_path = layout.calibration_trace(e.id, b.id);
      require_file(trace_path, "nominal calibration trace for " + e.id + "/" + b.id, "run simulate first");
      const std::string text = read_file(trace_path);
      const sim::SimTrace trace = sim::parse_trace(text);
      const std::size_t w = sim::window_len_frames(sim::frame_rate(trace), cfg.eval.window_seconds);
      const auto scores = trace.scores();
      const auto windows = monitor::window_scores(scores, w);
      monitor::CalibrationArtifact art;
      try {
        art = monitor::calibrate(windows, cfg.eval.confidences);
      } catch (const Error& err) {
        const auto [lo, hi] = std::minmax_element(scores.begin(), scores.end());
        fail(err.kind(), "calibrating " + e.id + "/" + b.id + " on " + std::to_string(windows.size()) +
                             " windows (scores in [" + format_short(scores.empty() ? 0.0 : *lo) + ", " +
                             format_short(scores.empty() ? 0.0 : *hi) + "]): " + err.what());
      }
      art.estimator = e.id;
      art.benchmark = b.id;
      art.window_len_frames = w;
      art.nominal_trace = rel_path(trace_path, opt.out);
      art.nominal_trace_checksum = fnv1a_hex(text);
      const auto out = layout.calibration(e.id, b.id);
      monitor::save_calibration(art, out);
      log("calibrate: " + rel_path(out, opt.out) + " shape " + format_short(art.shape) + " scale " +
          format_short(art.scale) + " windows " + std::to_string(art.sample_count));
    }
  }
}

eval::EvalReport cmd_evaluate(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const auto estimators = selected_estimators(cfg, opt);
  const std::string sim_hint = "run simulate first";

  const auto check_window = [&](const eval::DetectionWindowSet& ws, const monitor::CalibrationArtifact& art,
                                const fs::path& trace) {
    if (ws.window_len != art.window_len_frames) {
      fail(ErrorKind::kConfig, "window length mismatch: " + trace.string() + " uses " +
                                   std::to_string(ws.window_len) + " frames per window, calibration " +
                                   art.nominal_trace + " used " + std::to_string(art.window_len_frames) +
                                   "; recalibrate with the same dt");
    }
  };

  eval::EvalReport report;
  for (const auto& e : estimators) {
    eval::DetectionWindowSet negatives;
    std::vector<std::string> negative_traces;
    for (auto s : cfg.episode_seeds) {
      const auto p = layout.nominal_trace(e.id, s);
      require_file(p, "nominal trace for " + e.id + " seed " + std::to_string(s), sim_hint);
      negatives.append(eval::label_windows(sim::load_trace(p), cfg.eval));
      negative_traces.push_back(rel_path(p, opt.out));
    }
    std::vector<eval::BenchmarkWindows> windows;
    std::vector<eval::RowSource> sources;
    for (const auto& b : cfg.benchmarks) {
      const auto cal_path = layout.calibration(e.id, b.id);
      require_file(cal_path, "calibration for " + e.id + "/" + b.id, "run calibrate first");
      const auto art = monitor::load_calibration(cal_path);
      const fs::path nominal = opt.out / art.nominal_trace;
      require_file(nominal, "calibration trace of " + e.id + "/" + b.id, sim_hint);
      if (checksum_of(nominal) != art.nominal_trace_checksum) {
        fail(ErrorKind::kIntegrity, "stale calibration " + cal_path.string() + ": nominal trace " +
                                        nominal.string() + " changed since calibration; rerun calibrate");
      }
      if (!negatives.negatives.empty()) check_window(negatives, art, layout.nominal_trace(e.id, cfg.episode_seeds.front()));

      eval::DetectionWindowSet positives;
      eval::RowSource src{e.id, b.id, {}, rel_path(cal_path, opt.out), negative_traces};
      for (auto s : cfg.episode_seeds) {
        const auto p = layout.episode_trace(e.id, b.id, s);
        require_file(p, "trace for " + e.id + "/" + b.id + " seed " + std::to_string(s), sim_hint);
        const auto trace = sim::load_trace(p);
        auto ws = eval::label_windows(trace, cfg.eval);
        check_window(ws, art, p);
        positives.append(ws);
        src.traces.push_back(rel_path(p, opt.out));
        if (std::find(src.models.begin(), src.models.end(), trace.meta.model_id) == src.models.end()) {
          src.models.push_back(trace.meta.model_id);
        }
      }
      windows.push_back({b.id, std::move(positives), negatives, art.thresholds});
      sources.push_back(std::move(src));
    }
    auto part = eval::evaluate(e.id, windows, cfg.eval);
    part.sources = std::move(sources);
    report.merge(part);
  }

  const auto dir = layout.report_dir();
  eval::save_report(report, dir / "report.json");
  write_file_atomic(dir / "report.csv", eval::to_csv(report));
  std::vector<std::pair<std::string, double>> methods;
  for (const auto& e : estimators) methods.emplace_back(e.id, table_confidence(e, opt));
  const std::string table = eval::to_table(report, methods);
  write_file_atomic(dir / "table.csv", table);
  log("evaluate: " + std::to_string(report.rows.size()) + " rows, " + std::to_string(report.warnings.size()) +
      " warnings -> " + rel_path(dir / "report.json", opt.out));
  log(table);
  return report;
}

std::vector<bench::BenchReport> cmd_bench(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const sim::Track track = study_track(cfg);
  const std::uint64_t seed = base_seed(cfg, opt);
  sim::DemonstrationConfig d = cfg.demonstrations;
  d.dt = cfg.dt;
  d.frames = cfg.bench.inputs;
  d.seed = stream(seed, {kBenchStream});
  const auto inputs = sim::collect_demonstrations(track, d).inputs;

  const auto repeat = [&](const std::string& id, std::size_t size, const std::string& mode,
                          const bench::FrameFn& fn, std::size_t bytes) {
    std::vector<double> means, medians, p95s;
    bench::BenchReport last;
    for (std::size_t r = 0; r < cfg.bench.repetitions; ++r) {
      last = bench::measure_latency(fn, inputs, cfg.bench.warmup);
      means.push_back(last.mean_ms);
      medians.push_back(last.median_ms);
      p95s.push_back(last.p95_ms);
    }
    last.estimator = id;
    last.size = size;
    last.mode = mode;
    last.mean_ms = bench::median(means);
    last.median_ms = bench::median(medians);
    last.p95_ms = bench::median(p95s);
    last.param_bytes = bytes;
    log("bench: " + id + " " + mode + " median " + format_fixed(last.median_ms, 4) + " ms");
    return last;
  };

  // Latency does not depend on the weights, so freshly initialized networks
  // stand in for trained ones and the grid can exceed the trained pool.
  const double mcd_rate = cfg.dropout_rates.front();
  std::vector<bench::BenchReport> out;
  const bool all = !opt.estimator;
  const auto wants = [&](EstimatorKind k) {
    return all || cfg.estimator(*opt.estimator).kind == k;
  };
  if (wants(EstimatorKind::kDe)) {
    for (auto n : cfg.bench.ensemble_sizes) {
      std::vector<nnet::Regressor> members;
      for (std::size_t k = 1; k <= n; ++k) {
        members.push_back(nnet::init_regressor(cfg.architecture, cfg.member_dropout_rate, k));
      }
      const uq::Ensemble ens(std::move(members));
      const auto bytes = bench::parameter_bytes(ens);
      const std::string id = "de-" + std::to_string(n);
      out.push_back(repeat(id, n, "serial", bench::de_frame(ens, false), bytes));
      out.push_back(repeat(id, n, "parallel", bench::de_frame(ens, true), bytes));
    }
  }
  if (wants(EstimatorKind::kMcd)) {
    const auto model = nnet::init_regressor(cfg.architecture, mcd_rate, cfg.mcd_seed);
    for (auto s : cfg.bench.mcd_samples) {
      out.push_back(repeat("mcd-" + rate_label(mcd_rate) + "-s" + std::to_string(s), s, "serial",
                           bench::mcd_frame(model, s, stream(seed, {kBenchStream, s})),
                           bench::parameter_bytes(model)));
    }
  }
  if (wants(EstimatorKind::kAe)) {
    const uq::AutoencoderScorer scorer(nnet::init_regressor(cfg.autoencoder_dims, 0.0, cfg.mcd_seed));
    out.push_back(repeat("ae", 1, "serial", bench::ae_frame(scorer), bench::parameter_bytes(scorer.model())));
  }
  bench::save_bench(out, layout.bench_dir() / "bench.json");
  write_file_atomic(layout.bench_dir() / "bench.csv", bench::to_csv(out));
  return out;
}

std::vector<Comparison> cmd_compare(const StudyConfig& cfg, const RunOptions& opt) {
  const Logger log(opt.log);
  const Layout layout(cfg, opt.out);
  const auto report_path = layout.report_dir() / "report.json";
  require_file(report_path, "evaluation report", "run evaluate first");
  const auto report = eval::load_report(report_path);

  std::vector<std::pair<std::string, std::string>> pairs;
  if (opt.estimator) {
    const auto comma = opt.estimator->find(',');
    require(comma != std::string::npos, ErrorKind::kConfig, "compare expects --estimator A,B");
    pairs.emplace_back(opt.estimator->substr(0, comma), opt.estimator->substr(comma + 1));
  } else {
    const auto present = report.estimators();
    for (std::size_t i = 0; i < present.size(); ++i) {
      for (std::size_t j = i + 1; j < present.size(); ++j) pairs.emplace_back(present[i], present[j]);
    }
  }

  std::vector<Comparison> out;
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& [a, b] : pairs) {
    Comparison c;
    c.first = a;
    c.second = b;
    c.first_confidence = table_confidence(cfg.estimator(a), opt);
    c.second_confidence = table_confidence(cfg.estimator(b), opt);
    const auto fa = report.f3_cells(a, c.first_confidence);
    const auto fb = report.f3_cells(b, c.second_confidence);
    if (fa.size() < 2 || fb.size() < 2) {
      log("compare: " + a + " vs " + b + " skipped, fewer than two F3 cells with failures");
      continue;
    }
    c.first_mean_f3 = std::accumulate(fa.begin(), fa.end(), 0.0) / static_cast<double>(fa.size());
    c.second_mean_f3 = std::accumulate(fb.begin(), fb.end(), 0.0) / static_cast<double>(fb.size());
    c.test = eval::mann_whitney_u(fa, fb);
    nlohmann::ordered_json row;
    row["first"] = a;
    row["first_confidence"] = c.first_confidence;
    row["first_mean_f3"] = c.first_mean_f3;
    row["second"] = b;
    row["second_confidence"] = c.second_confidence;
    row["second_mean_f3"] = c.second_mean_f3;
    row["u"] = c.test.u;
    row["p_value"] = c.test.p_value;
    row["exact"] = c.test.exact;
    row["cohens_d"] = c.test.cohens_d ? nlohmann::ordered_json(*c.test.cohens_d) : nlohmann::ordered_json(nullptr);
    row["significant"] = c.test.significant;
    j.push_back(row);
    log("compare: " + a + " (F3 " + format_fixed(c.first_mean_f3, 3) + ") vs " + b + " (F3 " +
        format_fixed(c.second_mean_f3, 3) + "): U " + format_short(c.test.u) + " p " +
        format_fixed(c.test.p_value, 4) + " d " +
        (c.test.cohens_d ? format_fixed(*c.test.cohens_d, 3) : std::string("NA")) +
        (c.test.significant ? " significant" : ""));
    out.push_back(c);
  }
  write_file_atomic(layout.report_dir() / "compare.json", j.dump(2) + "\n");
  return out;
}

void cmd_reproduce(const StudyConfig& cfg, const RunOptions& opt) {
  cmd_train(cfg, opt);
  cmd_simulate(cfg, opt);
  cmd_calibrate(cfg, opt);
  cmd_evaluate(cfg, opt);
  cmd_bench(cfg, opt);
  RunOptions all = opt;
  all.estimator.reset();
  if (!opt.estimator) cmd_compare(cfg, all);
}

}  // namespace lanewatch::study
