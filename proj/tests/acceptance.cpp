// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "oracles/oracles.hpp"
#include "test_util.hpp"
#include "vigil/assignment.hpp"
#include "vigil/classifier.hpp"
#include "vigil/config.hpp"
#include "vigil/features.hpp"
#include "vigil/geometry.hpp"
#include "vigil/kalman.hpp"
#include "vigil/nn.hpp"
#include "vigil/pipeline.hpp"
#include "vigil/report.hpp"
#include "vigil/scenario.hpp"
#include "vigil/sink.hpp"
#include "vigil/stream_io.hpp"
#include "vigil/track_log.hpp"
#include "vigil/window.hpp"

using namespace vigil;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %-28s %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---------------------------------------------------------------------------

Outcome assignment_oracle() {
  std::mt19937_64 rng(20240901);
  std::uniform_int_distribution<int> dim(1, 7);
  std::uniform_real_distribution<double> value(0.0, 100.0);
  const auto start = Clock::now();
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    // One dimension is at most 7; the other may be larger.
    int rows = dim(rng), cols = dim(rng) + (trial % 3 == 0 ? 3 : 0);
    if (trial % 2) std::swap(rows, cols);
    oracle::Grid g(rows, std::vector<double>(cols));
    Eigen::MatrixXd m(rows, cols);
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) m(r, c) = g[r][c] = trial % 4 == 0 ? std::floor(value(rng) / 20) : value(rng);
    const double brute = oracle::brute_assignment(g).cost;
    if (hungarian(m).cost != brute) ++mismatches;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 10.0,
          fmt("1000 matrices, %d cost mismatches, %.3f s (limit 10 s)", mismatches, elapsed)};
}

Outcome kalman() {
  const KalmanFilter<double> noiseless(1.0 / 20, 1.0 / 160, 0.0);
  Eigen::Vector4d z(320, 240, 0.45, 180);
  const Eigen::Vector4d v(6, -2.5, 0, 0);
  auto s = noiseless.initiate(z);
  for (int i = 0; i < 10; ++i) {
    z += v;
    s = noiseless.update(noiseless.predict(s), z);
  }
  const double err = (s.mean.head<2>() - z.head<2>()).norm();

  const KalmanFilter<double> kf;
  std::mt19937_64 rng(31337);
  std::uniform_real_distribution<double> pos(0, 1920), jitter(-20, 20), h(30, 600), a(0.2, 1.2);
  auto st = kf.initiate({pos(rng), pos(rng), a(rng), h(rng)});
  double min_eig = 0, max_asym = 0;
  for (int cycle = 0; cycle < 10000; ++cycle) {
    if (cycle % 250 == 0) st = kf.initiate({pos(rng), pos(rng), a(rng), h(rng)});
    st = kf.predict(st);
    if (cycle % 5 != 4) {
      st = kf.update(st, {st.mean(0) + jitter(rng), st.mean(1) + jitter(rng), a(rng),
                          std::max(10.0, st.mean(3) + jitter(rng))});
    }
    max_asym = std::max(max_asym, (st.covariance - st.covariance.transpose()).cwiseAbs().maxCoeff());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, 8, 8>> es(st.covariance, Eigen::EigenvaluesOnly);
    min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
  }
  return {err < 1e-6 && max_asym == 0.0 && min_eig >= -1e-9,
          fmt("position error %.3g (<1e-6); 10000 cycles: max asymmetry %.3g, min eigenvalue %.3g (>= -1e-9)",
              err, max_asym, min_eig)};
}

Outcome iou_raster() {
  std::mt19937_64 rng(500);
  std::uniform_int_distribution<int> p(-30, 60), e(1, 40);
  double worst = 0;
  bool symmetric = true, identity = true;
  for (int i = 0; i < 500; ++i) {
    const int ax = p(rng), ay = p(rng), aw = e(rng), ah = e(rng);
    const int bx = p(rng), by = p(rng), bw = e(rng), bh = e(rng);
    const BBox a{double(ax), double(ay), double(aw), double(ah)};
    const BBox b{double(bx), double(by), double(bw), double(bh)};
    worst = std::max(worst, std::abs(iou(a, b) - oracle::raster_iou(ax, ay, aw, ah, bx, by, bw, bh)));
    symmetric = symmetric && iou(a, b) == iou(b, a);
    identity = identity && iou(a, a) == 1.0;
  }
  return {worst < 1e-6 && symmetric && identity,
          fmt("500 box pairs, max |delta| %.3g (<1e-6), symmetric %s, identity %s", worst,
              symmetric ? "yes" : "no", identity ? "yes" : "no")};
}

Outcome feature_invariance() {
  std::mt19937_64 rng(1000);
  std::uniform_real_distribution<double> shift(-2000, 2000), scale(0.05, 20), angle(-std::numbers::pi, std::numbers::pi);
  const EngineConfig cfg;
  double dist_dev = 0, angle_dev = 0;
  bool lengths = true;
  for (int i = 0; i < 1000; ++i) {
    const Pose p = testing::random_pose(rng, shift(rng), shift(rng));
    const BBox box = testing::bounding_box(p);
    const double s = scale(rng), tx = shift(rng), ty = shift(rng), r = angle(rng);
    const double c = std::cos(r), sn = std::sin(r);
    Pose ts = p, tsr = p;
    for (std::size_t k = 0; k < kNumKeypoints; ++k) {
      ts[k].x = s * p[k].x + tx;
      ts[k].y = s * p[k].y + ty;
      tsr[k].x = s * (c * p[k].x - sn * p[k].y) + tx;
      tsr[k].y = s * (sn * p[k].x + c * p[k].y) + ty;
    }
    const BBox tbox{s * box.x + tx, s * box.y + ty, s * box.w, s * box.h};
    const FeatureVector d0 = distance_features(p, box, cfg), d1 = distance_features(ts, tbox, cfg);
    const FeatureVector a0 = angle_features(p, cfg), a1 = angle_features(tsr, cfg);
    lengths = lengths && d0.values.size() == 24 && d1.values.size() == 24 && a0.values.size() == 12 &&
              a1.values.size() == 12;
    dist_dev = std::max(dist_dev, (d0.values - d1.values).cwiseAbs().maxCoeff());
    angle_dev = std::max(angle_dev, (a0.values - a1.values).cwiseAbs().maxCoeff());
  }
  return {lengths && dist_dev <= 1e-9 && angle_dev <= 1e-9,
          fmt("1000 poses, distance max dev %.3g, angle max dev %.3g (tol 1e-9), lengths 24/12 %s",
              dist_dev, angle_dev, lengths ? "ok" : "wrong")};
}

Outcome classifier_oracle() {
  std::mt19937_64 rng(100);
  std::uniform_int_distribution<int> T(1, 20), D(1, 24), F(1, 16), H(1, 16);
  std::uniform_real_distribution<double> x(0, 3);
  double worst = 0;
  for (int i = 0; i < 100; ++i) {
    ModelDims dims{T(rng), D(rng), F(rng), H(rng), 3};
    if (i == 0) dims = {20, 24, 16, 16, 3};
    const ModelWeights w = init_test_weights(rng(), dims);
    Eigen::MatrixXd window(dims.window_len, dims.feature_dim);
    for (Eigen::Index k = 0; k < window.size(); ++k) window.data()[k] = x(rng);
    const ClassScores s = model_forward(window, w);
    const auto ref = oracle::reference_forward(window, w);
    for (int c = 0; c < 3; ++c) worst = std::max(worst, std::abs(s.probs[c] - ref[c]));
  }
  std::uniform_real_distribution<double> big(-1e4, 1e4);
  double worst_sum = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector3d logits(big(rng), big(rng), big(rng));
    worst_sum = std::max(worst_sum, std::abs(nn::softmax(logits).sum() - 1.0));
  }
  return {worst <= 1e-9 && worst_sum <= 1e-12,
          fmt("100 instances, max |delta| %.3g (tol 1e-9); softmax |sum-1| %.3g at |logit| 1e4 (tol 1e-12)",
              worst, worst_sum)};
}

Outcome dataset_shape() {
  // Six people, each labeled by behavior, observed at the processing rate.
  ScenarioSpec spec;
  spec.seed = 6;
  spec.duration_s = 12;
  spec.fps = 30;
  spec.noise_std = 1.0;
  const std::array<PoseTemplate, 3> templates{PoseTemplate::kStanding, PoseTemplate::kArmSwing,
                                              PoseTemplate::kWalking};
  const std::array<Label, 3> labels{Label::kNeutral, Label::kAggressor, Label::kVictim};
  for (int i = 0; i < 6; ++i) {
    PersonSpec p;
    p.start_x = 150.0 + 250.0 * i;
    p.start_y = 400;
    p.velocity_x = 5.0 * (i % 3);
    p.pose = templates[i % 3];
    p.enter_s = 0.5 * i;
    p.exit_s = 6.0 + i;
    spec.persons.push_back(p);
  }
  const EngineConfig cfg;
  std::vector<LabeledTrack> tracks(spec.persons.size());
  for (std::size_t i = 0; i < tracks.size(); ++i) tracks[i].track_id = static_cast<std::int64_t>(i + 1);
  for (const Frame& f : gen_scenario(spec)) {
    if (!decimate(f.frame_index, spec.fps, cfg.processing_fps)) continue;
    // Detections come in person order among those in view.
    std::size_t det = 0;
    const double t = static_cast<double>(f.frame_index) / spec.fps;
    for (std::size_t i = 0; i < spec.persons.size(); ++i) {
      const PersonSpec& p = spec.persons[i];
      if (t < p.enter_s || (p.exit_s >= 0 && t >= p.exit_s)) continue;
      const Detection& d = f.detections[det++];
      tracks[i].frames.push_back({f.frame_index, compute_features(d.pose, d.bbox, cfg), labels[i % 3]});
    }
  }
  const Dataset d10 = build_dataset(tracks, 10);
  const Dataset d20 = build_dataset(tracks, 20);
  const auto s10 = d10.shape(), s20 = d20.shape();
  const bool ok = s10[1] == 10 && s10[2] == 24 && s20[1] == 20 && s20[2] == 24 && s10[0] > s20[0] && s20[0] > 0;
  return {ok, fmt("(%zu, %zu, %zu) vs (%zu, %zu, %zu), N > M %s", s10[0], s10[1], s10[2], s20[0], s20[1],
                  s20[2], s10[0] > s20[0] ? "yes" : "no")};
}

class CountingSink final : public Sink {
 public:
  std::int64_t lines = 0;

 protected:
  Ack write_line(std::string_view) override {
    ++lines;
    return {};
  }
};

Outcome throughput() {
  ScenarioSpec spec;
  spec.seed = 8;
  spec.duration_s = 20;
  spec.fps = 30;
  spec.noise_std = 1.0;
  for (int i = 0; i < 8; ++i) {
    PersonSpec p;
    p.start_x = 120.0 + 230.0 * i;
    p.start_y = 300.0 + 350.0 * (i % 2);
    p.velocity_x = (i % 2 ? -1 : 1) * 8.0;
    p.pose = i % 3 == 0 ? PoseTemplate::kArmSwing : PoseTemplate::kWalking;
    p.frequency = 1.0 + 0.2 * i;
    spec.persons.push_back(p);
  }
  std::string input;
  for (const Frame& f : gen_scenario(spec)) input += serialize_frame(f) + "\n";

  EngineConfig cfg;  // 30 fps in, 10 fps processed, T = 10, distance features
  auto weights = std::make_shared<const ModelWeights>(init_test_weights(42, {10, 24, 64, 32, 3}));
  CountingSink sink;
  Engine engine(cfg, weights, sink);
  std::istringstream in(input);
  const RunSummary s = engine.run(in);
  const double fps = s.totals.frames_processed / s.wall_seconds;
  const double mean_ms = 1e3 * s.totals.classify_seconds_total / std::max<std::int64_t>(1, s.totals.windows_classified);
  const double max_ms = 1e3 * s.totals.classify_seconds_max;
  const bool ok = s.totals.windows_classified > 0 && fps >= 10.0 && max_ms <= 100.0;
  return {ok, fmt("8 persons, %lld frames in, %lld processed in %.3f s = %.1f processed fps (>= 10); "
                  "%lld windows, latency mean %.3f ms, max %.3f ms (<= 100)",
                  static_cast<long long>(s.lines), static_cast<long long>(s.totals.frames_processed),
                  s.wall_seconds, fps, static_cast<long long>(s.totals.windows_classified), mean_ms, max_ms)};
}

Outcome determinism_golden() {
  const std::string root = testing::source_dir();
  std::ifstream spec_file(root + "/tests/data/fight_scenario.json");
  std::ifstream cfg_file(root + "/tests/data/golden_config.json");
  std::ifstream golden_file(root + "/tests/golden/fight_events.jsonl");
  if (!spec_file || !cfg_file || !golden_file) return {false, "missing fixture files"};
  std::stringstream spec_doc, cfg_doc, golden;
  spec_doc << spec_file.rdbuf();
  cfg_doc << cfg_file.rdbuf();
  golden << golden_file.rdbuf();

  std::string input;
  for (const Frame& f : gen_scenario(parse_scenario_spec(spec_doc.str()))) input += serialize_frame(f) + "\n";
  const EngineConfig cfg = parse_config(cfg_doc.str());
  auto weights = std::make_shared<const ModelWeights>(init_test_weights(42, {10, 24, 64, 32, 3}));
  auto run = [&] {
    std::ostringstream out;
    StreamSink sink(out);
    Engine engine(cfg, weights, sink);
    std::istringstream in(input);
    engine.run(in);
    return out.str();
  };
  const std::string a = run(), b = run();
  const std::size_t n = static_cast<std::size_t>(std::count(a.begin(), a.end(), '\n'));
  return {a == b && a == golden.str(),
          fmt("%zu event lines; run-to-run %s, vs golden %s (IEEE binary64, no FMA contraction)", n,
              a == b ? "identical" : "DIFFERENT", a == golden.str() ? "identical" : "DIFFERENT")};
}

Outcome annotation_ops() {
  auto rec = [](std::int64_t f, std::int64_t id) {
    TrackRecord r;
    r.frame_index = f;
    r.track_id = id;
    r.payload = {{"frame", f}};
    return r;
  };
  // Ids 1..7 where 2 and 6 are spurious and 7 re-acquires person 3.
  std::vector<TrackRecord> log;
  for (std::int64_t f = 0; f < 30; ++f) {
    log.push_back(rec(f, 1));
    if (f == 4 || f == 5) log.push_back(rec(f, 2));
    if (f < 14) log.push_back(rec(f, 3));
    if (f >= 8 && f < 12) log.push_back(rec(f, 6));
    if (f >= 16) log.push_back(rec(f, 7));
  }
  const auto removed = remove_tracks(log, {2, 6});
  std::set<std::int64_t> ids;
  for (const auto& r : removed) ids.insert(r.track_id);
  bool order_kept = true;
  for (std::size_t i = 1; i < removed.size(); ++i)
    order_kept = order_kept && removed[i - 1].frame_index <= removed[i].frame_index;
  const bool fig3 = ids == std::set<std::int64_t>{1, 3, 7} && order_kept &&
                    removed.size() == log.size() - 6 && remove_tracks(log, {}) == log;

  const auto merged = merge_tracks(removed, 7, 3);
  std::size_t rows3 = 0;
  bool has7 = false;
  for (const auto& r : merged) {
    rows3 += r.track_id == 3;
    has7 = has7 || r.track_id == 7;
  }
  const bool fig5 = !has7 && rows3 == 14 + 14 && merge_tracks(removed, 99, 3) == removed;

  bool conflict = false;
  auto clash = removed;
  clash.push_back(rec(12, 7));
  try {
    merge_tracks(clash, 7, 3);
  } catch (const MergeConflictError& e) {
    conflict = e.frame_index() == 12;
  }
  return {fig3 && fig5 && conflict,
          fmt("remove {2,6} -> ids {1,3,7} %s; merge 7 into 3 %s; co-occurrence at frame 12 rejected %s",
              fig3 ? "ok" : "wrong", fig5 ? "ok" : "wrong", conflict ? "yes" : "no")};
}

Outcome evaluation_harness() {
  std::mt19937_64 rng(4242);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = rng() % 200;
    std::vector<Label> pred(n), truth(n);
    for (std::size_t i = 0; i < n; ++i) {
      pred[i] = kAllLabels[rng() % 3];
      truth[i] = kAllLabels[rng() % 3];
    }
    const Report r = evaluate(pred, truth);
    const auto m = oracle::count_metrics(pred, truth);
    for (int c = 0; c < 3; ++c) {
      if (r.per_class[c].precision != m.precision[c] || r.per_class[c].recall != m.recall[c] ||
          r.per_class[c].f1 != m.f1[c] || r.per_class[c].support != m.support[c])
        ++mismatches;
    }
  }
  std::vector<Label> all;
  for (int i = 0; i < 30; ++i) all.push_back(kAllLabels[rng() % 3]);
  all.push_back(Label::kNeutral);
  all.push_back(Label::kAggressor);
  all.push_back(Label::kVictim);
  const Report perfect = evaluate(all, all);
  bool ones = perfect.accuracy == 1.0 && perfect.macro.f1 == 1.0;
  for (const auto& m : perfect.per_class) ones = ones && m.precision == 1.0 && m.recall == 1.0 && m.f1 == 1.0;
  return {mismatches == 0 && ones,
          fmt("1000 sequences, %d metric mismatches vs counting oracle; perfect case all ones %s", mismatches,
              ones ? "yes" : "no")};
}

}  // namespace

int main() {
  std::printf("INFO Table I/II accuracies need the AIRTLab data and training; checked by the property criteria below\n");
  report("assignment-oracle", assignment_oracle);
  report("kalman", kalman);
  report("iou-raster", iou_raster);
  report("feature-invariance", feature_invariance);
  report("classifier-oracle", classifier_oracle);
  report("dataset-shape", dataset_shape);
  report("throughput", throughput);
  report("determinism-golden", determinism_golden);
  report("annotation-ops", annotation_ops);
  report("evaluation-harness", evaluation_harness);
  std::printf("%s: %d failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
