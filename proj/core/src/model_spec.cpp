#include "corrtrans/model_spec.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <vector>

namespace corrtrans {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

[[noreturn]] void fail(std::string_view spec, const std::string& why) {
  throw ModelSpecError("invalid model spec '" + std::string(spec) + "': " + why);
}

using Params = std::map<std::string, double, std::less<>>;

Params parse_params(std::string_view spec, std::string_view body) {
  Params p;
  if (trim(body).empty()) return p;
  for (std::string_view kv : split(body, ',')) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string_view::npos) fail(spec, "expected key=value, got '" + std::string(kv) + "'");
    const std::string key(trim(kv.substr(0, eq)));
    double value = 0.0;
    try {
      value = parse_double(trim(kv.substr(eq + 1)));
    } catch (const std::invalid_argument&) {
      fail(spec, "bad number for '" + key + "'");
    }
    if (!p.emplace(key, value).second) fail(spec, "duplicate key '" + key + "'");
  }
  return p;
}

void expect_keys(std::string_view spec, const Params& p, std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (auto a : allowed) ok = ok || (k == a);
    if (!ok) fail(spec, "unknown key '" + k + "'");
  }
}

double get(std::string_view spec, const Params& p, std::string_view key) {
  const auto it = p.find(key);
  if (it == p.end()) fail(spec, "missing key '" + std::string(key) + "'");
  return it->second;
}

ExtinctionModel parse_single(std::string_view spec) {
  const std::size_t colon = spec.find(':');
  if (colon == std::string_view::npos) fail(spec, "expected <kind>:<parameters>");
  const std::string_view kind = trim(spec.substr(0, colon));
  const Params p = parse_params(spec, spec.substr(colon + 1));

  if (kind == "exp" || kind == "exponential") {
    expect_keys(spec, p, {"mu"});
    return ExponentialModel{get(spec, p, "mu")};
  }
  if (kind == "gamma") {
    const double sigma = p.count("sigma") ? p.at("sigma") : 1.0;
    if (p.count("alpha") || p.count("beta")) {
      expect_keys(spec, p, {"alpha", "beta", "sigma"});
      const double a = get(spec, p, "alpha");
      const double b = get(spec, p, "beta");
      if (!(a > 0.0 && b > 0.0)) throw std::domain_error("gamma: alpha and beta must be positive");
      return GammaConcentrationModel{a / b, a / (b * b), sigma};
    }
    expect_keys(spec, p, {"meanC", "varC", "sigma"});
    return ExtinctionModel::gamma_concentration(get(spec, p, "meanC"), get(spec, p, "varC"), sigma);
  }
  if (kind == "linear") {
    expect_keys(spec, p, {"mu"});
    return LinearNegativeModel{get(spec, p, "mu")};
  }
  if (kind == "gammapl") {
    if (p.count("k") || p.count("theta")) {
      expect_keys(spec, p, {"k", "theta"});
      const double k = get(spec, p, "k");
      const double theta = get(spec, p, "theta");
      return GammaPathLengthModel{k * theta, k * theta * theta};
    }
    expect_keys(spec, p, {"mean", "var"});
    return GammaPathLengthModel{get(spec, p, "mean"), get(spec, p, "var")};
  }
  fail(spec, "unknown model kind '" + std::string(kind) + "'");
}

ExtinctionModel parse_mixture(std::string_view spec, std::string_view body) {
  MixtureModel mix;
  for (std::string_view comp : split(body, ';')) {
    const auto fields = split(comp, '@');
    if (fields.size() < 2) fail(spec, "mixture component needs <weight>@<model>");
    MixtureComponent c;
    try {
      c.weight = parse_double(fields[0]);
    } catch (const std::invalid_argument&) {
      fail(spec, "bad mixture weight '" + std::string(fields[0]) + "'");
    }
    c.model = parse_single(fields[1]);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      const Params extra = parse_params(spec, fields[i]);
      expect_keys(spec, extra, {"albedo", "hg"});
      if (extra.count("albedo")) c.albedo = extra.at("albedo");
      if (extra.count("hg")) c.phase = PhaseDescriptor::henyey_greenstein(extra.at("hg"));
    }
    mix.components.push_back(std::move(c));
  }
  return mix;
}

}  // namespace

double parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw std::invalid_argument("not a number: '" + std::string(s) + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

ExtinctionModel parse_model_spec(std::string_view spec) {
  spec = trim(spec);
  if (spec.substr(0, 4) == "mix:") return parse_mixture(spec, spec.substr(4));
  return parse_single(spec);
}

std::string format_model_spec(const ExtinctionModel& model) {
  if (const auto* e = model.get_if<ExponentialModel>()) return "exp:mu=" + format_double(e->mean_extinction);
  if (const auto* g = model.get_if<GammaConcentrationModel>()) {
    return "gamma:meanC=" + format_double(g->mean_concentration) + ",varC=" +
           format_double(g->variance_concentration) + ",sigma=" + format_double(g->cross_section);
  }
  if (const auto* l = model.get_if<LinearNegativeModel>()) return "linear:mu=" + format_double(l->mean_extinction);
  if (const auto* pl = model.get_if<GammaPathLengthModel>()) {
    return "gammapl:mean=" + format_double(pl->mean_free_path) + ",var=" + format_double(pl->variance_free_path);
  }
  std::string out = "mix:";
  bool first = true;
  for (const auto& c : model.get_if<MixtureModel>()->components) {
    if (!first) out += ';';
    first = false;
    out += format_double(c.weight) + "@" + format_model_spec(c.model) + "@albedo=" + format_double(c.albedo);
    if (c.phase.kind == PhaseDescriptor::Kind::HenyeyGreenstein) out += "@hg=" + format_double(c.phase.g);
  }
  return out;
}

}  // namespace corrtrans
