// mmr: command-line front end for the multiscale transform library.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>

#include "mmr/applications.hpp"
#include "mmr/decimation.hpp"
#include "mmr/io.hpp"

#ifndef MMR_VERSION
#define MMR_VERSION "unknown"
#endif

using namespace mmr;
using io::json;

namespace {

struct RunConfig {
  std::string command;
  std::string manifold = "s2";
  int order = 3;
  double epsilon = 1e-5;
  int levels = 5;
  double threshold = 0.14;
  double sigma = 0.0;
  std::uint64_t seed = 1;
  int samples = 320;
  int leaves = 5;
  double z = 6.0;
  double anomaly_scale = 2.0;
  std::string input;
  std::string output = "-";
  std::string csv;
};

json config_json(const RunConfig& c) {
  return {{"command", c.command},     {"manifold", c.manifold},   {"order", c.order},
          {"epsilon", c.epsilon},     {"levels", c.levels},       {"threshold", c.threshold},
          {"sigma", c.sigma},         {"seed", c.seed},           {"samples", c.samples},
          {"leaves", c.leaves},       {"z", c.z},                 {"anomaly_scale", c.anomaly_scale},
          {"input", c.input},         {"output", c.output},       {"csv", c.csv}};
}

Error invalid(const std::string& msg) { return Error(ErrorCode::InvalidArgument, msg); }

// Keys of a config file (or of the "config" object of a manifest).
void apply_config_file(RunConfig& c, const std::string& path) {
  json j;
  try {
    j = json::parse(io::read_file(path));
  } catch (const json::exception& e) {
    throw invalid("config '" + path + "': " + e.what());
  }
  if (j.contains("config")) j = j.at("config");
  if (!j.is_object()) throw invalid("config '" + path + "' must be a JSON object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "command") {
        if (v.get<std::string>() != c.command) {
          throw invalid("config was written for '" + v.get<std::string>() + "', not '" + c.command + "'");
        }
      } else if (key == "manifold") c.manifold = v.get<std::string>();
      else if (key == "order") c.order = v.get<int>();
      else if (key == "epsilon") c.epsilon = v.get<double>();
      else if (key == "levels") c.levels = v.get<int>();
      else if (key == "threshold") c.threshold = v.get<double>();
      else if (key == "sigma") c.sigma = v.get<double>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "samples") c.samples = v.get<int>();
      else if (key == "leaves") c.leaves = v.get<int>();
      else if (key == "z") c.z = v.get<double>();
      else if (key == "anomaly_scale") c.anomaly_scale = v.get<double>();
      else if (key == "input") c.input = v.get<std::string>();
      else if (key == "output") c.output = v.get<std::string>();
      else if (key == "csv") c.csv = v.get<std::string>();
      else throw invalid("config '" + path + "': unknown key '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw invalid("config '" + path + "': " + e.what());
  }
}

void validate(const RunConfig& c) {
  static const std::set<std::string> manifolds = {"euclidean", "s2", "spd3"};
  if (!manifolds.count(c.manifold)) throw invalid("unknown manifold '" + c.manifold + "'");
  if (c.order < 1 || c.order > 12) throw invalid("order must be in 1..12");
  if (!(c.epsilon > 0.0)) throw invalid("epsilon must be positive");
  if (c.levels < 1 || c.levels > 20) throw invalid("levels must be in 1..20");
  if (!(c.threshold >= 0.0)) throw invalid("threshold must be nonnegative");
  if (!(c.sigma >= 0.0)) throw invalid("sigma must be nonnegative");
  if (c.samples < 4) throw invalid("samples must be at least 4");
  if (c.leaves < 1) throw invalid("leaves must be positive");
  if (!(c.z >= 0.0)) throw invalid("z must be nonnegative");
  if (!(c.anomaly_scale >= 0.0)) throw invalid("anomaly_scale must be nonnegative (0 disables the anomaly)");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

bool ends_with(const std::string& s, std::string_view suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct Outputs {
  std::vector<std::string> files;
  json metrics = json::object();
};

void emit(const std::string& path, const std::string& text, Outputs& out) {
  if (path == "-") {
    std::cout << text;
  } else {
    io::write_file(path, text);
    out.files.push_back(path);
  }
}

std::string norms_csv(const std::vector<std::vector<double>>& norms) {
  std::string s = "# format_version=" + std::to_string(io::kFormatVersion) + "\nlevel,index,norm\n";
  for (std::size_t l = 0; l < norms.size(); ++l) {
    for (std::size_t k = 0; k < norms[l].size(); ++k) {
      s += std::to_string(l + 1) + "," + std::to_string(k) + "," + fmt(norms[l][k]) + "\n";
    }
  }
  return s;
}

struct Masks {
  Mask alpha;
  DecimationMasks dec;
};

Masks masks_for(const RunConfig& c) { return {bspline_mask(c.order), decimation_masks(bspline_mask(c.order), c.epsilon)}; }

json bounds_json(const Masks& m) {
  const BoundConstants b = bound_constants(m.alpha, m.dec.zeta);
  const BoundConstants t = bound_constants(m.alpha, m.dec.truncated, m.dec.eta);
  return {{"normalized", {{"k_alpha", b.k_alpha}, {"k_decimation", b.k_decimation}, {"m", b.m}, {"k_combined", b.k_combined}}},
          {"truncated",
           {{"k_alpha", t.k_alpha},
            {"k_decimation", t.k_decimation},
            {"m", t.m},
            {"k_combined", t.k_combined},
            {"eta", m.dec.eta},
            {"floor_coefficient", t.floor_coefficient}}}};
}

/// Reads a sequence from CSV rows or JSON; euclidean dimension comes from the data.
template <class F>
auto with_input(const RunConfig& c, F&& f) {
  const std::string text = io::read_file(c.input);
  std::optional<std::vector<std::vector<double>>> rows;
  json j;
  if (ends_with(c.input, ".csv")) {
    rows = io::parse_csv(text);
  } else {
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw invalid("input '" + c.input + "': " + e.what());
    }
  }
  auto load = [&](const auto& m) {
    return rows ? io::sequence_from_rows(m, *rows) : io::sequence_from_json(m, j);
  };
  if (c.manifold == "s2") return f(Sphere{}, load(Sphere{}));
  if (c.manifold == "spd3") return f(Spd3{}, load(Spd3{}));
  int dim = 1;
  if (rows && !rows->empty()) dim = static_cast<int>(rows->front().size());
  if (!rows) {
    const json& pts = j.is_object() ? j.at("points") : j;
    if (!pts.empty() && pts[0].is_array()) dim = static_cast<int>(pts[0].size());
  }
  const Euclidean e(dim);
  return f(e, load(e));
}

/// The built-in test curve of each manifold.
template <class F>
auto with_builtin(const RunConfig& c, std::optional<double> anomaly, F&& f) {
  if (c.manifold == "s2") return f(Sphere{}, flower_curve(c.leaves, c.samples));
  if (c.manifold == "spd3") {
    std::optional<SpdAnomaly> a;
    if (anomaly && *anomaly > 0.0) a = SpdAnomaly{*anomaly};
    return f(Spd3{}, spd_curve(c.samples, a));
  }
  ManifoldSequence<Euclidean> s;
  for (double x : sine_samples(c.samples)) s.push_back(Eigen::VectorXd::Constant(1, x));
  return f(Euclidean(1), s);
}

template <class F>
auto with_sequence(const RunConfig& c, std::optional<double> anomaly, F&& f) {
  if (!c.input.empty()) return with_input(c, f);
  return with_builtin(c, anomaly, f);
}

void cmd_solve_decimation(const RunConfig& c, Outputs& out) {
  const Masks m = masks_for(c);
  json j = {{"format_version", io::kFormatVersion}, {"order", c.order}, {"epsilon", c.epsilon}, {"alpha", io::to_json(m.alpha)}};
  j.update(io::to_json(m.dec));
  j["bound_constants"] = bounds_json(m);
  out.metrics["zeta_support"] = m.dec.zeta.nonzeros();
  emit(c.output, io::dump(j), out);
}

void cmd_analyze(const RunConfig& c, Outputs& out) {
  if (c.input.empty()) throw invalid("analyze needs --input");
  const Masks mk = masks_for(c);
  with_input(c, [&](const auto& m, const auto& seq) {
    const auto p = m_analyze(m, mk.alpha, mk.dec.zeta, seq, c.levels);
    json j = io::to_json(p);
    j["alpha"] = io::to_json(mk.alpha);
    j["zeta"] = io::to_json(mk.dec.zeta);
    emit(c.output, io::dump(j), out);
    if (!c.csv.empty()) emit(c.csv, norms_csv(detail_norms(m, p)), out);
    return 0;
  });
}

template <Manifold M>
void synthesize_on(const M& m, const json& j, const Mask& alpha, const RunConfig& c, Outputs& out) {
  const auto p = io::pyramid_from_json(m, j);
  emit(c.output, io::dump(io::sequence_json<M>(m_synthesize(m, alpha, p))), out);
}

void cmd_synthesize(const RunConfig& c, Outputs& out) {
  if (c.input.empty()) throw invalid("synthesize needs --input");
  json j;
  try {
    j = json::parse(io::read_file(c.input));
  } catch (const json::exception& e) {
    throw invalid("input '" + c.input + "': " + e.what());
  }
  const Mask alpha = j.contains("alpha") ? io::mask_from_json(j.at("alpha")) : bspline_mask(c.order);
  const std::string name = j.at("manifold").get<std::string>();
  if (name == "s2") {
    synthesize_on(Sphere{}, j, alpha, c, out);
  } else if (name == "spd3") {
    synthesize_on(Spd3{}, j, alpha, c, out);
  } else if (name == "euclidean") {
    int dim = 1;
    if (!j.at("coarse").empty()) dim = static_cast<int>(j.at("coarse")[0].size());
    synthesize_on(Euclidean(dim), j, alpha, c, out);
  } else {
    throw invalid("unknown manifold '" + name + "' in pyramid");
  }
}

void cmd_denoise(const RunConfig& c, Outputs& out) {
  const Masks mk = masks_for(c);
  with_sequence(c, std::nullopt, [&](const auto& m, const auto& clean) {
    const auto noisy = add_noise(m, clean, {c.sigma, c.seed});
    const auto p = m_analyze(m, mk.alpha, mk.dec.zeta, noisy.points, c.levels);
    const auto thr = threshold_pyramid(m, p, c.threshold);
    const auto est = m_synthesize(m, mk.alpha, thr);
    json j = io::sequence_json<std::decay_t<decltype(m)>>(est);
    emit(c.output, io::dump(j), out);
    if (!c.csv.empty()) emit(c.csv, norms_csv(detail_norms(m, thr)), out);
    out.metrics["rescaled_draws"] = noisy.rescaled;
    out.metrics["mean_error_noisy"] = mean_distance(m, noisy.points, clean);
    out.metrics["mean_error_denoised"] = mean_distance(m, est, clean);
    return 0;
  });
}

void cmd_detect_anomalies(const RunConfig& c, Outputs& out) {
  const Masks mk = masks_for(c);
  with_sequence(c, c.anomaly_scale, [&](const auto& m, const auto& seq) {
    const auto p = m_analyze(m, mk.alpha, mk.dec.zeta, seq, c.levels);
    const auto flags = detect_anomalies(m, p, {c.z, 1e-8});
    std::string s = "# format_version=" + std::to_string(io::kFormatVersion) + "\nlevel,index,norm,position,fine_index\n";
    for (const auto& f : flags) {
      s += std::to_string(f.level) + "," + std::to_string(f.index) + "," + fmt(f.norm) + "," + fmt(f.position) + "," +
           std::to_string(f.fine_index) + "\n";
    }
    emit(c.output, s, out);
    if (!c.csv.empty()) emit(c.csv, norms_csv(detail_norms(m, p)), out);
    out.metrics["flags"] = flags.size();
    return 0;
  });
}

void cmd_decay_report(const RunConfig& c, Outputs& out) {
  const Masks mk = masks_for(c);
  with_sequence(c, std::nullopt, [&](const auto& m, const auto& seq) {
    using M = std::decay_t<decltype(m)>;
    const DecayReport r = p_min_report(m, mk.alpha, mk.dec.zeta, seq, c.levels);
    json j = {{"format_version", io::kFormatVersion},
              {"manifold", std::string(M::name)},
              {"per_level_max", r.per_level_max},
              {"fitted_ratio", r.fitted_ratio},
              {"floor_estimate", r.floor_estimate},
              {"degenerate", r.degenerate},
              {"chain", {{"delta", r.deltas}, {"p_min", r.p_min}}}};
    if (c.input.empty() && c.manifold != "euclidean") {
      // independent samplings at 10·2^j points
      std::vector<int> counts;
      for (int j0 = c.manifold == "s2" ? 1 : 0, n = 0; n < 8; ++n) counts.push_back(10 << (j0 + n));
      std::function<ManifoldSequence<M>(int)> gen = [&](int n) {
        RunConfig g = c;
        g.samples = n;
        return with_builtin(g, std::nullopt, [](const auto&, const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, ManifoldSequence<M>>) {
            return s;
          } else {
            return ManifoldSequence<M>{};
          }
        });
      };
      json table = json::array();
      for (const auto& row : p_min_table(m, mk.dec.zeta, gen, counts)) {
        table.push_back({{"samples", row.samples}, {"delta", row.delta}, {"p_min", row.p_min}});
      }
      j["table"] = table;
    }
    emit(c.output, io::dump(j), out);
    return 0;
  });
}

void write_manifest(const RunConfig& c, const Outputs& out) {
  if (c.output == "-") return;
  const Masks mk = masks_for(c);
  json j = {{"format_version", io::kFormatVersion},
            {"tool", "mmr"},
            {"version", MMR_VERSION},
            {"config", config_json(c)},
            {"bound_constants", bounds_json(mk)},
            {"outputs", out.files},
            {"metrics", out.metrics}};
  io::write_file(c.output + ".manifest.json", io::dump(j));
}

struct Flags {
  RunConfig value;
  std::string config;
  std::vector<std::pair<CLI::Option*, std::function<void(RunConfig&)>>> set;
};

void add_flags(CLI::App* sub, Flags& f) {
  RunConfig& v = f.value;
  sub->add_option("--config", f.config, "JSON config file or a previous run's manifest")->check(CLI::ExistingFile);
  auto bind = [&](CLI::Option* o, auto member) {
    f.set.emplace_back(o, [member, &v](RunConfig& c) { c.*member = v.*member; });
  };
  bind(sub->add_option("--manifold", v.manifold, "euclidean, s2 or spd3"), &RunConfig::manifold);
  bind(sub->add_option("--order", v.order, "B-spline order of the refinement mask"), &RunConfig::order);
  bind(sub->add_option("--epsilon", v.epsilon, "truncation parameter"), &RunConfig::epsilon);
  bind(sub->add_option("--levels", v.levels, "pyramid depth J"), &RunConfig::levels);
  bind(sub->add_option("--threshold", v.threshold, "detail threshold for denoise"), &RunConfig::threshold);
  bind(sub->add_option("--sigma", v.sigma, "tangent noise standard deviation"), &RunConfig::sigma);
  bind(sub->add_option("--seed", v.seed, "random seed"), &RunConfig::seed);
  bind(sub->add_option("--samples", v.samples, "samples of the built-in curve"), &RunConfig::samples);
  bind(sub->add_option("--leaves", v.leaves, "leaves of the flower curve"), &RunConfig::leaves);
  bind(sub->add_option("--z", v.z, "anomaly threshold in MADs above the median"), &RunConfig::z);
  bind(sub->add_option("--anomaly-scale", v.anomaly_scale, "eigenvalue scale of the built-in SPD anomaly, 0 for none"),
       &RunConfig::anomaly_scale);
  bind(sub->add_option("-i,--input", v.input, "input file (.csv or .json)"), &RunConfig::input);
  bind(sub->add_option("-o,--output", v.output, "output file, - for stdout"), &RunConfig::output);
  bind(sub->add_option("--csv", v.csv, "detail norms as CSV"), &RunConfig::csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-interpolating multiscale transforms of manifold-valued sequences"};
  app.set_version_flag("--version", MMR_VERSION);
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"solve-decimation", "even-inverse, truncated and normalized decimation masks"},
      {"analyze", "multiscale pyramid of a sequence"},
      {"synthesize", "sequence from a pyramid"},
      {"denoise", "threshold the details of a (noisy) sequence"},
      {"detect-anomalies", "flag outlying detail coefficients"},
      {"decay-report", "detail decay and P_min of a curve"}};
  std::vector<Flags> flags(commands.size());
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, commands[i].second));
    add_flags(subs.back(), flags[i]);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::size_t which = 0;
  while (!subs[which]->parsed()) ++which;
  const Flags& f = flags[which];

  RunConfig c;
  c.command = commands[which].first;
  try {
    if (!f.config.empty()) apply_config_file(c, f.config);
    for (const auto& [opt, apply] : f.set) {
      if (opt->count() > 0) apply(c);
    }
    validate(c);
    Outputs out;
    if (c.command == "solve-decimation") cmd_solve_decimation(c, out);
    else if (c.command == "analyze") cmd_analyze(c, out);
    else if (c.command == "synthesize") cmd_synthesize(c, out);
    else if (c.command == "denoise") cmd_denoise(c, out);
    else if (c.command == "detect-anomalies") cmd_detect_anomalies(c, out);
    else cmd_decay_report(c, out);
    write_manifest(c, out);
  } catch (const Error& e) {
    std::cerr << "mmr " << c.command << ": " << to_string(e.code()) << ": " << e.what() << "\n";
    return is_numerical(e.code()) ? 2 : 1;
  } catch (const json::exception& e) {
    std::cerr << "mmr " << c.command << ": malformed input: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
