#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "corrtrans/extinction_curve.hpp"
#include "corrtrans/free_flight.hpp"
#include "corrtrans/lab/free_paths.hpp"
#include "corrtrans/model_spec.hpp"
#include "corrtrans/parallel.hpp"
#include "corrtrans/render/image_io.hpp"
#include "corrtrans/render/integrator.hpp"
#include "corrtrans/render/scene_parser.hpp"
#include "corrtrans/rng.hpp"
#include "corrtrans/stats.hpp"
#include "corrtrans/voxel/fit.hpp"
#include "corrtrans/voxel/generate.hpp"
#include "corrtrans/voxel/volume_io.hpp"

namespace corrtrans::cli {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

std::string fmt(double v) { return format_double(v); }

// Resolved parameters, echoed at the top of every output file. Worker counts
// are left out on purpose: they never change results, and files from runs
// with different worker counts must compare equal.
class Header {
public:
  explicit Header(std::string subcommand) : subcommand_(std::move(subcommand)) {}
  void add(const std::string& key, const std::string& value) { fields_.emplace_back(key, value); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }
  void add(const std::string& key, bool value) { add(key, std::string(value ? "true" : "false")); }
  void add(const std::string& key, const char* value) { add(key, std::string(value)); }

  std::vector<std::string> lines() const {
    std::vector<std::string> out{std::string("corrtrans ") + CORRTRANS_VERSION + " " + subcommand_};
    for (const auto& [k, v] : fields_) out.push_back(k + " = " + v);
    return out;
  }
  void write(std::ostream& os) const {
    for (const auto& l : lines()) os << "# " << l << "\n";
  }

private:
  std::string subcommand_;
  std::vector<std::pair<std::string, std::string>> fields_;
};

// --out target: a file, or the caller's stream for "" and "-".
class Output {
public:
  Output(const std::string& path, std::ostream& fallback, bool binary = false) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_.open(path, binary ? std::ios::out | std::ios::binary | std::ios::trunc : std::ios::out | std::ios::trunc);
    if (!file_) throw UsageError("cannot open output file '" + path + "'");
    stream_ = &file_;
  }
  std::ostream& stream() { return *stream_; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed" + (path_.empty() ? std::string() : " for '" + path_ + "'"));
  }

private:
  std::string path_;
  std::ofstream file_;
  std::ostream* stream_ = nullptr;
};

void csv_row(std::ostream& os, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const auto& f : fields) {
    if (!first) os << ',';
    os << f;
    first = false;
  }
  os << '\n';
}

ExtinctionModel model_from_flag(const std::string& spec, const std::string& flag) {
  try {
    return parse_model_spec(spec);
  } catch (const std::exception& e) {
    throw UsageError(flag + ": " + e.what());
  }
}

template <class T>
std::vector<T> parse_list(const std::string& text, const std::string& flag) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    try {
      v = parse_double(item);
    } catch (const std::exception&) {
      throw UsageError(flag + ": invalid number '" + item + "'");
    }
    if constexpr (std::is_integral_v<T>) {
      if (!(v >= 0.0) || v != std::floor(v)) throw UsageError(flag + ": expected a non-negative integer, got '" + item + "'");
    }
    out.push_back(static_cast<T>(v));
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex << v;
  return os.str();
}

// ---------------------------------------------------------------- transmit

struct TransmitOptions {
  std::string model;
  std::string compare;
  double t_min = 0.0;
  double t_max = 10.0;
  std::size_t steps = 101;
  std::string out;
};

int cmd_transmit(const TransmitOptions& o, std::ostream& out) {
  const ExtinctionModel model = model_from_flag(o.model, "--model");
  std::optional<ExtinctionModel> compare;
  if (!o.compare.empty()) compare = model_from_flag(o.compare, "--compare");
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  if (!(o.t_min >= 0.0 && o.t_max > o.t_min && std::isfinite(o.t_max))) {
    throw UsageError("need 0 <= --t-min < --t-max");
  }

  const ExtinctionCurve a = tabulate(model, o.t_min, o.t_max, o.steps);
  std::optional<ExtinctionCurve> b;
  if (compare) b = tabulate(*compare, o.t_min, o.t_max, o.steps);

  Header h("transmit");
  h.add("model", format_model_spec(model));
  if (compare) h.add("compare", format_model_spec(*compare));
  h.add("t_min", o.t_min);
  h.add("t_max", o.t_max);
  h.add("steps", static_cast<std::uint64_t>(o.steps));

  Output sink(o.out, out);
  auto& os = sink.stream();
  h.write(os);
  if (b) {
    csv_row(os, {"t", "T", "p", "mu", "T_compare", "p_compare", "mu_compare"});
  } else {
    csv_row(os, {"t", "T", "p", "mu"});
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (b) {
      csv_row(os, {fmt(a.t[i]), fmt(a.transmittance[i]), fmt(a.extinction_prob[i]), fmt(a.diff_extinction[i]),
                   fmt(b->transmittance[i]), fmt(b->extinction_prob[i]), fmt(b->diff_extinction[i])});
    } else {
      csv_row(os, {fmt(a.t[i]), fmt(a.transmittance[i]), fmt(a.extinction_prob[i]), fmt(a.diff_extinction[i])});
    }
  }
  sink.finish();
  return kOk;
}

// ------------------------------------------------------------- sample-test

struct SampleTestOptions {
  std::string sampler;
  std::string model;
  std::size_t n = 100000;
  std::uint64_t seed = 1;
  double threshold = 0.0;
  std::string out;
};

const GammaConcentrationModel& need_gamma(const ExtinctionModel& m, const std::string& sampler) {
  const auto* g = m.get_if<GammaConcentrationModel>();
  if (!g) throw UsageError("sampler " + sampler + " needs a gamma model");
  return *g;
}

int cmd_sample_test(const SampleTestOptions& o, std::ostream& out, std::ostream& err) {
  static const std::vector<std::pair<std::string, std::string>> kDefaults = {
      {"exponential", "exp:mu=1"},
      {"gamma-proportional", "gamma:alpha=2,beta=1"},
      {"gamma-general", "gamma:alpha=2,beta=1"},
      {"linear", "linear:mu=1"},
      {"gamma-pathlength", "gammapl:k=2,theta=0.5"},
  };
  const auto it = std::find_if(kDefaults.begin(), kDefaults.end(), [&](const auto& d) { return d.first == o.sampler; });
  if (it == kDefaults.end()) throw UsageError("unknown sampler '" + o.sampler + "'");
  if (o.n < 1000) throw UsageError("--n must be at least 1000");
  const ExtinctionModel model = model_from_flag(o.model.empty() ? it->second : o.model, "--model");
  const double threshold = o.threshold > 0.0 ? o.threshold : std::max(0.002, 1.63 / std::sqrt(static_cast<double>(o.n)));

  std::function<double(Rng&, std::uint64_t&)> draw;
  std::function<double(double)> cdf;
  if (o.sampler == "exponential") {
    const auto* e = model.get_if<ExponentialModel>();
    if (!e) throw UsageError("sampler exponential needs an exponential model");
    const double mu = e->mean_extinction;
    draw = [mu](Rng& r, std::uint64_t& p) { ++p; return sample_exponential(r.uniform(), mu).t; };
    cdf = [mu](double t) { return exponential_cdf(t, mu); };
  } else if (o.sampler == "gamma-proportional" || o.sampler == "gamma-general") {
    const auto& g = need_gamma(model, o.sampler);
    const double a = g.alpha();
    const double b = g.beta();
    const double s = g.cross_section;
    if (o.sampler == "gamma-proportional") {
      if (!(a > 1.0)) throw UsageError("gamma-proportional needs alpha > 1");
      draw = [a, b, s](Rng& r, std::uint64_t& p) { ++p; return sample_gamma_proportional(r.uniform(), a, b, s).t; };
      cdf = [a, b, s](double t) { return gamma_proportional_cdf(t, a, b, s); };
    } else {
      draw = [a, b, s](Rng& r, std::uint64_t& p) { ++p; return sample_gamma_general(r.uniform(), a, b, s).t; };
      cdf = [a, b, s](double t) { return gamma_general_cdf(t, a, b, s); };
    }
  } else if (o.sampler == "linear") {
    const auto* l = model.get_if<LinearNegativeModel>();
    if (!l) throw UsageError("sampler linear needs a linear model");
    const double mu = l->mean_extinction;
    draw = [mu](Rng& r, std::uint64_t& p) { ++p; return sample_linear(r.uniform(), mu).t; };
    cdf = [mu](double t) { return linear_cdf(t, mu); };
  } else {
    const auto* g = model.get_if<GammaPathLengthModel>();
    if (!g) throw UsageError("sampler gamma-pathlength needs a gammapl model");
    const double k = g->shape();
    const double theta = g->scale();
    draw = [k, theta](Rng& r, std::uint64_t& p) {
      const GammaVariate v = marsaglia_tsang(r, k);
      p += v.proposals;
      return v.value * theta;
    };
    cdf = [k, theta](double t) { return gamma_pathlength_cdf(t, k, theta); };
  }

  Rng rng = Rng::stream(o.seed, 0);
  std::vector<double> xs(o.n);
  std::uint64_t proposals = 0;
  RunningStats moments;
  for (auto& x : xs) {
    x = draw(rng, proposals);
    moments.add(x);
  }
  std::sort(xs.begin(), xs.end());
  const double ks = ks_statistic_sorted(xs, cdf);
  const bool pass = ks <= threshold;

  Header h("sample-test");
  h.add("sampler", o.sampler);
  h.add("model", format_model_spec(model));
  h.add("n", static_cast<std::uint64_t>(o.n));
  h.add("seed", o.seed);
  h.add("ks_threshold", threshold);

  Output sink(o.out, out);
  auto& os = sink.stream();
  h.write(os);
  csv_row(os, {"sampler", "n", "ks", "ks_threshold", "p_value", "mean", "variance", "min", "max", "acceptance_rate",
               "pass"});
  csv_row(os, {o.sampler, std::to_string(o.n), fmt(ks), fmt(threshold), fmt(ks_pvalue(ks, static_cast<double>(o.n))),
               fmt(moments.mean()), fmt(moments.variance()), fmt(xs.front()), fmt(xs.back()),
               fmt(static_cast<double>(o.n) / static_cast<double>(proposals)), pass ? "true" : "false"});
  sink.finish();
  if (!pass) {
    err << "sample-test: KS distance " << fmt(ks) << " exceeds " << fmt(threshold) << "\n";
    return kValidationFailed;
  }
  return kOk;
}

// --------------------------------------------------------------------- lab

struct LabOptions {
  std::string experiment = "free-paths";
  std::string kind = "uncorrelated";
  double c = 0.0;
  double c12 = 0.0;
  double radius = 1e-4;
  double mean_extinction = 20.0;
  std::size_t clusters = 20;
  std::string origin = "source";
  double angle = lab::kDefaultSourceAngle;
  double switch_distance = 0.2;
  std::size_t realizations = 100;
  std::size_t samples = 1000;
  std::size_t bins = 64;
  double t_max = 0.25;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string out;
};

lab::FieldKind field_kind(const std::string& s) {
  if (s == "uncorrelated") return lab::FieldKind::Uncorrelated;
  if (s == "positive") return lab::FieldKind::PositiveWalk;
  if (s == "negative") return lab::FieldKind::NegativeLattice;
  throw UsageError("unknown --kind '" + s + "' (uncorrelated, positive, negative)");
}

void write_histogram(std::ostream& os, const lab::FreePathHistogram& hist) {
  csv_row(os, {"bin_left", "bin_center", "p", "T", "stderr_p", "T_exponential"});
  for (std::size_t i = 0; i < hist.bins(); ++i) {
    csv_row(os, {fmt(hist.bin_left(i)), fmt(hist.bin_center(i)), fmt(hist.p(i)), fmt(hist.T(i)), fmt(hist.stderr_p(i)),
                 fmt(std::exp(-hist.nominal_mean_extinction * hist.bin_left(i)))});
  }
}

int cmd_lab(const LabOptions& o, std::ostream& out) {
  lab::FieldSpec field;
  field.kind = field_kind(o.kind);
  field.correlation = o.c;
  field.radius = o.radius;
  field.mean_extinction = o.mean_extinction;
  field.clusters = o.clusters;
  try {
    lab::validate(field);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (o.realizations == 0 || o.samples == 0 || o.bins == 0) throw UsageError("realizations, samples and bins must be positive");
  if (!(o.t_max > 0.0)) throw UsageError("--t-max must be positive");
  const unsigned workers = resolve_workers(o.workers);

  Header h("lab");
  h.add("experiment", o.experiment);
  h.add("kind", o.kind);
  h.add("c", o.c);
  h.add("radius", o.radius);
  h.add("mean_extinction", o.mean_extinction);
  if (field.kind == lab::FieldKind::PositiveWalk) h.add("clusters", static_cast<std::uint64_t>(o.clusters));
  h.add("angle", o.angle);
  h.add("realizations", static_cast<std::uint64_t>(o.realizations));
  h.add("samples", static_cast<std::uint64_t>(o.samples));
  h.add("bins", static_cast<std::uint64_t>(o.bins));
  h.add("t_max", o.t_max);
  h.add("seed", o.seed);

  if (o.experiment == "free-paths") {
    lab::FreePathConfig cfg;
    cfg.field = field;
    if (o.origin == "source") {
      cfg.origin = lab::OriginClass::Source;
    } else if (o.origin == "scatterer") {
      cfg.origin = lab::OriginClass::Scatterer;
    } else {
      throw UsageError("unknown --origin '" + o.origin + "' (source, scatterer)");
    }
    cfg.angle = o.angle;
    cfg.realizations = o.realizations;
    cfg.samples = o.samples;
    cfg.bins = o.bins;
    cfg.t_max = o.t_max;
    cfg.seed = o.seed;
    cfg.workers = workers;
    lab::FreePathHistogram hist;
    try {
      hist = lab::estimate_free_paths(cfg);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
    std::vector<double> t;
    std::vector<double> T;
    for (std::size_t i = 0; i < hist.bins(); ++i) {
      t.push_back(hist.bin_left(i));
      T.push_back(hist.T(i));
    }
    const ExponentialFit fit = fit_exponential(t, T);
    h.add("origin", o.origin);
    h.add("nominal_mean_extinction", hist.nominal_mean_extinction);
    h.add("exponential_fit_rate", fit.rate);
    h.add("exponential_fit_r2", fit.r_squared);
    Output sink(o.out, out);
    h.write(sink.stream());
    write_histogram(sink.stream(), hist);
    sink.finish();
    return kOk;
  }
  if (o.experiment == "boundary") {
    lab::BoundaryExperiment cfg;
    cfg.medium1 = field;
    cfg.medium2 = field;
    cfg.c12 = o.c12;
    cfg.switch_distance = o.switch_distance;
    cfg.angle = o.angle;
    cfg.realizations = o.realizations;
    cfg.samples = o.samples;
    cfg.bins = o.bins;
    cfg.t_max = o.t_max;
    cfg.seed = o.seed;
    cfg.workers = workers;
    lab::BoundaryResult res;
    try {
      res = lab::run_boundary_experiment(cfg);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
    h.add("c12", o.c12);
    h.add("switch_distance", o.switch_distance);
    h.add("launched", res.launched);
    h.add("reached_interface", res.reached_interface);
    Output sink(o.out, out);
    h.write(sink.stream());
    write_histogram(sink.stream(), res.post_interface);
    sink.finish();
    return kOk;
  }
  throw UsageError("unknown --experiment '" + o.experiment + "' (free-paths, boundary)");
}

// ------------------------------------------------------------- groundtruth

struct GroundTruthOptions {
  std::string volume;
  std::string dims = "64";
  double mean = 10.0;
  double variance = 10.0;
  double correlation_length = 4.0;
  std::string weights = "1,1,1";
  bool iid = false;
  std::uint64_t seed = 1;
  std::size_t beam_resolution = 0;
  std::string save_volume;
  std::string curves;
  unsigned workers = 0;
  std::string out;
};

int cmd_groundtruth(const GroundTruthOptions& o, std::ostream& out, std::ostream& err) {
  Header h("groundtruth");
  voxel::VoxelVolume vol({1, 1, 1});
  if (!o.volume.empty()) {
    std::ifstream in(o.volume, std::ios::binary);
    if (!in) throw UsageError("cannot open volume file '" + o.volume + "'");
    try {
      vol = voxel::read_volume(in);
    } catch (const voxel::VolumeParseError& e) {
      err << "error: " << o.volume << ": " << e.what() << "\n";
      return kUsageError;
    }
    h.add("volume", o.volume);
  } else {
    auto d = parse_list<std::size_t>(o.dims, "--dims");
    if (d.size() == 1) d = {d[0], d[0], d[0]};
    if (d.size() != 3) throw UsageError("--dims takes n or nx,ny,nz");
    const voxel::Dims dims{d[0], d[1], d[2]};
    try {
      if (o.iid) {
        if (!(o.mean > 0.0 && o.variance > 0.0)) throw UsageError("--iid needs positive mean and variance");
        const GammaParams gp = gamma_params(o.mean, o.variance);
        vol = voxel::gen_iid_gamma_volume(dims, gp.alpha, gp.beta, o.seed);
      } else {
        const auto w = parse_list<double>(o.weights, "--weights");
        if (w.size() != 3) throw UsageError("--weights takes wx,wy,wz");
        voxel::VolumeSpec spec;
        spec.dims = dims;
        spec.mean = o.mean;
        spec.variance = o.variance;
        spec.correlation_length = o.correlation_length;
        spec.axis_weights = {w[0], w[1], w[2]};
        spec.seed = o.seed;
        vol = voxel::gen_correlated_volume(spec);
      }
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
    h.add("dims", std::to_string(dims[0]) + "," + std::to_string(dims[1]) + "," + std::to_string(dims[2]));
    h.add("generator", o.iid ? "iid-gamma" : "smoothed-noise");
    h.add("mean", o.mean);
    h.add("variance", o.variance);
    if (!o.iid) {
      h.add("correlation_length", o.correlation_length);
      h.add("weights", o.weights);
    }
    h.add("seed", o.seed);
  }
  if (!o.save_volume.empty()) {
    std::ofstream f(o.save_volume, std::ios::binary | std::ios::trunc);
    if (!f) throw UsageError("cannot open '" + o.save_volume + "'");
    voxel::write_volume(f, vol);
    if (!f) throw std::runtime_error("write failed for '" + o.save_volume + "'");
  }

  voxel::FitOptions fo;
  fo.beam_resolution = o.beam_resolution;
  fo.workers = resolve_workers(o.workers);
  voxel::ModelFitReport rep;
  try {
    rep = voxel::fit_and_score(vol, fo);
  } catch (const std::domain_error& e) {
    throw UsageError(e.what());
  }
  h.add("beam_resolution", static_cast<std::uint64_t>(o.beam_resolution));
  h.add("sigma", rep.sigma);
  h.add("mean_concentration", rep.mean_concentration);
  h.add("variance_concentration", rep.variance_concentration);

  Output sink(o.out, out);
  auto& os = sink.stream();
  h.write(os);
  csv_row(os, {"axis", "projected_variance", "gamma_rmse", "exponential_rmse"});
  static const char* kAxes[3] = {"x", "y", "z"};
  for (int a = 0; a < 3; ++a) {
    const auto i = static_cast<std::size_t>(a);
    csv_row(os, {kAxes[a], fmt(rep.axis_variance[i]), fmt(rep.gamma_rmse[i]), fmt(rep.exponential_rmse[i])});
  }
  sink.finish();

  if (!o.curves.empty()) {
    Output cs(o.curves, out);
    auto& c = cs.stream();
    h.write(c);
    csv_row(c, {"axis", "t", "T_measured", "T_gamma", "T_exponential"});
    const ExtinctionModel expo(ExponentialModel{rep.mean_concentration * rep.sigma});
    for (int a = 0; a < 3; ++a) {
      const auto& curve = rep.curves[static_cast<std::size_t>(a)];
      const ExtinctionModel g = rep.gamma_model(a);
      for (std::size_t j = 0; j < curve.t.size(); ++j) {
        csv_row(c, {kAxes[a], fmt(curve.t[j]), fmt(curve.transmittance[j]), fmt(g.transmittance(curve.t[j])),
                    fmt(expo.transmittance(curve.t[j]))});
      }
    }
    cs.finish();
  }
  return kOk;
}

// ------------------------------------------------------------------ render

struct RenderCmdOptions {
  std::string scene;
  std::size_t spp = 16;
  std::uint64_t seed = 1;
  unsigned workers = 0;
  std::string out = "render.ppm";
  bool classic = false;
  bool zero_variance = false;
  std::string crop;
};

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int cmd_render(const RenderCmdOptions& o, std::ostream& out, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  auto t0 = clock::now();
  std::ifstream in(o.scene, std::ios::binary);
  if (!in) {
    err << "error: cannot open scene file '" << o.scene << "'\n";
    return kUsageError;
  }
  std::stringstream text;
  text << in.rdbuf();
  render::Scene scene;
  try {
    scene = render::parse_scene(text.str());
  } catch (const render::SceneParseError& e) {
    err << "error: " << o.scene << ": " << e.what() << "\n";
    return kUsageError;
  }
  if (o.zero_variance) scene = render::with_zero_variance(std::move(scene));
  if (o.spp == 0) throw UsageError("--spp must be at least 1");

  render::RenderOptions ro;
  ro.spp = o.spp;
  ro.seed = o.seed;
  ro.workers = resolve_workers(o.workers);
  if (!o.crop.empty()) {
    const auto c = parse_list<std::size_t>(o.crop, "--crop");
    if (c.size() != 4) throw UsageError("--crop takes x,y,width,height");
    ro.crop = render::CropWindow{c[0], c[1], c[2], c[3]};
    if (c[2] == 0 || c[3] == 0 || c[0] + c[2] > scene.camera.width || c[1] + c[3] > scene.camera.height) {
      throw UsageError("--crop window lies outside the image");
    }
  }
  const double parse_s = seconds_since(t0);

  t0 = clock::now();
  render::TraceStats stats;
  const render::CorrelatedTransport correlated;
  const render::ClassicTransport classic;
  const render::TransportPolicy& policy =
      o.classic ? static_cast<const render::TransportPolicy&>(classic) : static_cast<const render::TransportPolicy&>(correlated);
  const render::Image img = render::render(scene, policy, ro, &stats);
  const double render_s = seconds_since(t0);

  Header h("render");
  h.add("scene", o.scene);
  h.add("scene_fnv1a64", hex(fnv1a(text.str())));
  h.add("resolution", std::to_string(scene.camera.width) + "x" + std::to_string(scene.camera.height));
  if (ro.crop) h.add("crop", o.crop);
  h.add("spp", static_cast<std::uint64_t>(o.spp));
  h.add("seed", o.seed);
  h.add("transport", o.classic ? "classic" : "correlated");
  h.add("zero_variance", o.zero_variance);
  h.add("roulette_depth", static_cast<std::uint64_t>(render::kRouletteDepth));

  t0 = clock::now();
  if (ends_with(o.out, ".pfm")) {
    Output sink(o.out, out, true);
    render::write_pfm(sink.stream(), img);
    sink.finish();
    // PFM has no comment syntax; the header goes to a sidecar file.
    Output side(o.out + ".txt", out);
    h.write(side.stream());
    side.finish();
  } else {
    Output sink(o.out, out, true);
    render::write_ppm(sink.stream(), img, h.lines());
    sink.finish();
  }
  const double write_s = seconds_since(t0);

  const Rgb mean = img.mean();
  out << "render: " << img.width << "x" << img.height << ", " << o.spp << " spp, " << ro.workers << " worker(s), "
      << stats.paths << " paths, " << stats.non_finite << " non-finite\n";
  out << "mean radiance: " << fmt(mean[0]) << " " << fmt(mean[1]) << " " << fmt(mean[2]) << "\n";
  out << "timing: parse " << fmt(std::round(parse_s * 1e4) / 1e4) << " s, render " << fmt(std::round(render_s * 1e4) / 1e4)
      << " s, write " << fmt(std::round(write_s * 1e4) / 1e4) << " s\n";
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Transport in spatially correlated media: curves, sampler checks, lab simulations, voxel "
               "ground truth and rendering.",
               "corrtrans"};
  app.set_version_flag("--version", std::string(CORRTRANS_VERSION));
  app.require_subcommand(1);

  TransmitOptions tr;
  auto* s_tr = app.add_subcommand("transmit", "Tabulate T(t), p(t) and mu(t) of a model as CSV");
  s_tr->add_option("--model", tr.model, "Model spec, e.g. gamma:meanC=10,varC=40,sigma=1")->required();
  s_tr->add_option("--compare", tr.compare, "Second model for side-by-side columns");
  s_tr->add_option("--t-min", tr.t_min, "First abscissa")->capture_default_str();
  s_tr->add_option("--t-max", tr.t_max, "Last abscissa")->capture_default_str();
  s_tr->add_option("--steps", tr.steps, "Number of rows")->capture_default_str();
  s_tr->add_option("--out", tr.out, "CSV file (default stdout)");

  SampleTestOptions st;
  auto* s_st = app.add_subcommand("sample-test", "KS and moment diagnostics of a free-path sampler");
  s_st->add_option("--sampler", st.sampler,
                   "exponential | gamma-proportional | gamma-general | linear | gamma-pathlength")
      ->required();
  s_st->add_option("--model", st.model, "Model spec (a per-sampler default otherwise)");
  s_st->add_option("--n", st.n, "Number of draws (>= 1000)")->capture_default_str();
  s_st->add_option("--seed", st.seed, "64-bit seed")->capture_default_str();
  s_st->add_option("--threshold", st.threshold, "KS pass threshold (default max(0.002, 1.63/sqrt(n)))");
  s_st->add_option("--out", st.out, "CSV file (default stdout)");

  LabOptions lb;
  auto* s_lb = app.add_subcommand("lab", "Free-path histograms of procedural 2D particle fields");
  s_lb->add_option("--experiment", lb.experiment, "free-paths | boundary")->capture_default_str();
  s_lb->add_option("--kind", lb.kind, "uncorrelated | positive | negative")->capture_default_str();
  s_lb->add_option("--c", lb.c, "Correlation in (-1, 1) (sign must match --kind)")->capture_default_str();
  s_lb->add_option("--c12", lb.c12, "Cross-correlation at the interface (boundary)")->capture_default_str();
  s_lb->add_option("--radius", lb.radius, "Particle radius")->capture_default_str();
  s_lb->add_option("--mean-extinction", lb.mean_extinction, "Target N*2r")->capture_default_str();
  s_lb->add_option("--clusters", lb.clusters, "Random walks of a positive field")->capture_default_str();
  s_lb->add_option("--origin", lb.origin, "source | scatterer (free-paths)")->capture_default_str();
  s_lb->add_option("--angle", lb.angle, "Source ray angle in radians")->capture_default_str();
  s_lb->add_option("--switch", lb.switch_distance, "Interface distance (boundary)")->capture_default_str();
  s_lb->add_option("--realizations,-R", lb.realizations, "Independent fields")->capture_default_str();
  s_lb->add_option("--samples,-S", lb.samples, "Rays per field")->capture_default_str();
  s_lb->add_option("--bins", lb.bins, "Histogram bins")->capture_default_str();
  s_lb->add_option("--t-max", lb.t_max, "Histogram range")->capture_default_str();
  s_lb->add_option("--seed", lb.seed, "64-bit seed")->capture_default_str();
  s_lb->add_option("--workers", lb.workers, "Threads (0: CORRTRANS_WORKERS, then all cores)");
  s_lb->add_option("--out", lb.out, "CSV file (default stdout)");

  GroundTruthOptions gt;
  auto* s_gt = app.add_subcommand("groundtruth", "Beam transmittance of a voxel volume against the fitted models");
  s_gt->add_option("--volume", gt.volume, "CVOL1 file (otherwise a volume is generated)");
  s_gt->add_option("--dims", gt.dims, "n or nx,ny,nz")->capture_default_str();
  s_gt->add_option("--mean", gt.mean, "Mean concentration")->capture_default_str();
  s_gt->add_option("--variance", gt.variance, "Concentration variance")->capture_default_str();
  s_gt->add_option("--corr-length", gt.correlation_length, "Smoothing width in voxels")->capture_default_str();
  s_gt->add_option("--weights", gt.weights, "Per-axis smoothing weights wx,wy,wz")->capture_default_str();
  s_gt->add_flag("--iid", gt.iid, "Independent gamma voxels instead of smoothed noise");
  s_gt->add_option("--seed", gt.seed, "64-bit seed")->capture_default_str();
  s_gt->add_option("--beam-resolution", gt.beam_resolution, "Rays per face side (0: face size)");
  s_gt->add_option("--save-volume", gt.save_volume, "Write the volume as CVOL1");
  s_gt->add_option("--curves", gt.curves, "CSV of the beam curves and both model curves");
  s_gt->add_option("--workers", gt.workers, "Threads (0: CORRTRANS_WORKERS, then all cores)");
  s_gt->add_option("--out", gt.out, "Report CSV (default stdout)");

  RenderCmdOptions rd;
  auto* s_rd = app.add_subcommand("render", "Path trace a scene file to PPM or PFM");
  s_rd->add_option("scene", rd.scene, "Scene file")->required();
  s_rd->add_option("--spp", rd.spp, "Samples per pixel")->capture_default_str();
  s_rd->add_option("--seed", rd.seed, "64-bit seed")->capture_default_str();
  s_rd->add_option("--workers", rd.workers, "Threads (0: CORRTRANS_WORKERS, then all cores)");
  s_rd->add_option("--out", rd.out, "Image file; .pfm writes linear floats plus a .txt header")->capture_default_str();
  s_rd->add_flag("--classic", rd.classic, "Classic exponential transport with the mean extinction");
  s_rd->add_flag("--zero-variance", rd.zero_variance, "Set every concentration variance to 0");
  s_rd->add_option("--crop", rd.crop, "Render only x,y,width,height");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (s_tr->parsed()) return cmd_transmit(tr, out);
    if (s_st->parsed()) return cmd_sample_test(st, out, err);
    if (s_lb->parsed()) return cmd_lab(lb, out);
    if (s_gt->parsed()) return cmd_groundtruth(gt, out, err);
    if (s_rd->parsed()) return cmd_render(rd, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace corrtrans::cli
