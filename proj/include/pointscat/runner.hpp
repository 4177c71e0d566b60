#pragma once
/** @file runner.hpp
 * @brief Experiment harness: run configuration (JSON), bundled benchmark
 *        presets, the forward -> noise -> inverse pipeline, and artifact
 *        emission (heatmap CSV/PGM, peak list, structured report).
 */

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "pointscat/imaging.hpp"
#include "pointscat/noise.hpp"

namespace pointscat {

using json = nlohmann::json;

inline constexpr std::uint64_t default_noise_seed = 1;

struct SourceSpec {
  Point3 position;
  complexd alpha;
};

struct NoiseConfig {
  double delta = 0.0;
  std::uint64_t seed = default_noise_seed;
};

struct ProjectorConfig {
  ProjectorSource source = ProjectorSource::svd_range;
  RankPolicy policy = RankPolicy::exact(1e-8);
};

struct PeaksConfig {
  std::optional<int> expected;
  double rel_threshold = 0.2;
};

/// @brief Full description of one experiment.
struct RunConfig {
  double wavenumber = 2.0 * std::numbers::pi;
  std::vector<SourceSpec> sources;
  int num_directions = 20;
  Region region{};
  double step = 0.1;
  double plane_z = 0.0;
  NoiseConfig noise{};
  ProjectorConfig projector{};
  PeaksConfig peaks{};
  std::string output_dir;

  void validate() const {
    if (!(std::isfinite(wavenumber) && wavenumber > 0.0))
      throw std::invalid_argument("config: wavenumber must be positive");
    if (sources.empty()) throw std::invalid_argument("config: at least one source required");
    if (num_directions < static_cast<int>(sources.size()))
      throw std::invalid_argument("config: num_directions must be >= number of sources");
    if (!(step > 0.0)) throw std::invalid_argument("config: step must be positive");
    if (!(std::isfinite(noise.delta) && noise.delta >= 0.0))
      throw std::invalid_argument("config: noise delta must be >= 0");
    if (!(peaks.rel_threshold > 0.0 && peaks.rel_threshold <= 1.0))
      throw std::invalid_argument("config: peaks.rel_threshold must lie in (0, 1]");
  }

  ScattererSet scatterers() const {
    std::vector<Point3> pts;
    std::vector<complexd> alphas;
    pts.reserve(sources.size());
    alphas.reserve(sources.size());
    for (const auto& s : sources) {
      pts.push_back(s.position);
      alphas.push_back(s.alpha);
    }
    return ScattererSet(std::move(pts), std::move(alphas));
  }
};

// ---------------------------------------------------------------------------
// JSON bindings. Key names follow the config schema exactly; complex numbers
// are [re, im] pairs, the region is [xmin, xmax, ymin, ymax].
// ---------------------------------------------------------------------------

inline void to_json(json& j, const SourceSpec& s) {
  j = json{{"position", {s.position.x, s.position.y, s.position.z}},
           {"alpha", {s.alpha.real(), s.alpha.imag()}}};
}

inline void from_json(const json& j, SourceSpec& s) {
  const auto& pos = j.at("position");
  if (!pos.is_array() || (pos.size() != 3 && pos.size() != 2))
    throw std::invalid_argument("config: source position must have 2 or 3 coordinates");
  s.position = Point3(pos[0].get<double>(), pos[1].get<double>(),
                      pos.size() == 3 ? pos[2].get<double>() : 0.0);
  const auto& a = j.at("alpha");
  if (!a.is_array() || a.size() != 2)
    throw std::invalid_argument("config: alpha must be a [re, im] pair");
  s.alpha = complexd{a[0].get<double>(), a[1].get<double>()};
}

inline std::string to_string(ProjectorSource s) {
  return s == ProjectorSource::svd_range ? "svd" : "pinv";
}

inline ProjectorSource projector_source_from_string(const std::string& s) {
  if (s == "svd") return ProjectorSource::svd_range;
  if (s == "pinv") return ProjectorSource::pseudo_inverse;
  throw std::invalid_argument("config: projector.source must be \"svd\" or \"pinv\"");
}

inline void to_json(json& j, const ProjectorConfig& p) {
  json params;
  std::string policy;
  switch (p.policy.mode) {
    case RankPolicy::Mode::exact_rank:
      policy = "exact-rank";
      params = json{{"rho_rel", p.policy.rho_rel}};
      break;
    case RankPolicy::Mode::fixed_rank:
      policy = "fixed-rank";
      params = json{{"rank", p.policy.rank}};
      break;
    case RankPolicy::Mode::largest_gap:
      policy = "largest-gap";
      params = json{{"cap", p.policy.cap}};
      break;
  }
  j = json{{"source", to_string(p.source)}, {"policy", policy}, {"params", params}};
}

inline void from_json(const json& j, ProjectorConfig& p) {
  p.source = projector_source_from_string(j.at("source").get<std::string>());
  const auto policy = j.at("policy").get<std::string>();
  const auto& params = j.at("params");
  if (policy == "exact-rank")
    p.policy = RankPolicy::exact(params.at("rho_rel").get<double>());
  else if (policy == "fixed-rank")
    p.policy = RankPolicy::fixed(params.at("rank").get<int>());
  else if (policy == "largest-gap")
    p.policy = RankPolicy::gap(params.at("cap").get<int>());
  else
    throw std::invalid_argument(
        "config: projector.policy must be \"exact-rank\", \"fixed-rank\" or \"largest-gap\"");
}

inline void to_json(json& j, const RunConfig& c) {
  json peaks{{"rel_threshold", c.peaks.rel_threshold}};
  peaks["expected"] = c.peaks.expected ? json(*c.peaks.expected) : json(nullptr);
  j = json{{"wavenumber", c.wavenumber},
           {"sources", c.sources},
           {"num_directions", c.num_directions},
           {"region", {c.region.xmin, c.region.xmax, c.region.ymin, c.region.ymax}},
           {"step", c.step},
           {"plane_z", c.plane_z},
           {"noise", json{{"delta", c.noise.delta}, {"seed", c.noise.seed}}},
           {"projector", c.projector},
           {"peaks", peaks},
           {"output_dir", c.output_dir}};
}

inline void from_json(const json& j, RunConfig& c) {
  c.wavenumber = j.at("wavenumber").get<double>();
  c.sources = j.at("sources").get<std::vector<SourceSpec>>();
  c.num_directions = j.at("num_directions").get<int>();
  const auto& r = j.at("region");
  if (!r.is_array() || r.size() != 4)
    throw std::invalid_argument("config: region must be [xmin, xmax, ymin, ymax]");
  c.region = Region{r[0].get<double>(), r[1].get<double>(), r[2].get<double>(), r[3].get<double>()};
  c.step = j.at("step").get<double>();
  c.plane_z = j.value("plane_z", 0.0);
  c.noise.delta = j.at("noise").at("delta").get<double>();
  c.noise.seed = j.at("noise").value("seed", default_noise_seed);
  c.projector = j.at("projector").get<ProjectorConfig>();
  const auto& pk = j.at("peaks");
  c.peaks.rel_threshold = pk.value("rel_threshold", 0.2);
  c.peaks.expected.reset();
  if (pk.contains("expected") && !pk.at("expected").is_null())
    c.peaks.expected = pk.at("expected").get<int>();
  c.output_dir = j.value("output_dir", std::string{});
  c.validate();
}

// ---------------------------------------------------------------------------
// Run report
// ---------------------------------------------------------------------------

struct RunReport {
  struct Peak {
    Point3 position;
    double indicator = 0.0;
    std::optional<double> matched_error;
  };
  struct Timings {
    double synthesize_ms = 0.0;
    double noise_ms = 0.0;
    double projector_ms = 0.0;
    double scan_ms = 0.0;
    double peaks_ms = 0.0;
    double total_ms = 0.0;
  };

  RunConfig config;
  int rank_used = 0;
  std::vector<double> singular_values_clean;
  std::vector<double> singular_values_noisy;  // empty for noise-free runs
  std::string noise_generator;                // empty for noise-free runs
  std::vector<Peak> peaks;
  std::vector<double> matched_errors;
  double contrast = 0.0;
  Timings timings;
};

inline void to_json(json& j, const RunReport::Peak& p) {
  j = json{{"position", {p.position.x, p.position.y, p.position.z}},
           {"indicator", p.indicator},
           {"matched_error", p.matched_error ? json(*p.matched_error) : json(nullptr)}};
}

inline void from_json(const json& j, RunReport::Peak& p) {
  const auto& pos = j.at("position");
  p.position = Point3(pos[0].get<double>(), pos[1].get<double>(), pos[2].get<double>());
  p.indicator = j.at("indicator").get<double>();
  p.matched_error.reset();
  if (!j.at("matched_error").is_null()) p.matched_error = j.at("matched_error").get<double>();
}

inline void to_json(json& j, const RunReport::Timings& t) {
  j = json{{"synthesize_ms", t.synthesize_ms}, {"noise_ms", t.noise_ms},
           {"projector_ms", t.projector_ms},  {"scan_ms", t.scan_ms},
           {"peaks_ms", t.peaks_ms},          {"total_ms", t.total_ms}};
}

inline void from_json(const json& j, RunReport::Timings& t) {
  t.synthesize_ms = j.at("synthesize_ms").get<double>();
  t.noise_ms = j.at("noise_ms").get<double>();
  t.projector_ms = j.at("projector_ms").get<double>();
  t.scan_ms = j.at("scan_ms").get<double>();
  t.peaks_ms = j.at("peaks_ms").get<double>();
  t.total_ms = j.at("total_ms").get<double>();
}

inline void to_json(json& j, const RunReport& r) {
  j = json{{"config", r.config},
           {"rank_used", r.rank_used},
           {"singular_values", json{{"clean", r.singular_values_clean},
                                    {"noisy", r.singular_values_noisy}}},
           {"noise_generator", r.noise_generator},
           {"peaks", r.peaks},
           {"matched_errors", r.matched_errors},
           {"contrast", r.contrast},
           {"timings_ms", r.timings}};
}

inline void from_json(const json& j, RunReport& r) {
  r.config = j.at("config").get<RunConfig>();
  r.rank_used = j.at("rank_used").get<int>();
  r.singular_values_clean = j.at("singular_values").at("clean").get<std::vector<double>>();
  r.singular_values_noisy = j.at("singular_values").at("noisy").get<std::vector<double>>();
  r.noise_generator = j.value("noise_generator", std::string{});
  r.peaks = j.at("peaks").get<std::vector<RunReport::Peak>>();
  r.matched_errors = j.at("matched_errors").get<std::vector<double>>();
  r.contrast = j.at("contrast").get<double>();
  r.timings = j.at("timings_ms").get<RunReport::Timings>();
}

// ---------------------------------------------------------------------------
// Presets
// ---------------------------------------------------------------------------

namespace detail {

inline std::vector<SourceSpec> make_sources(std::initializer_list<std::pair<double, double>> xy,
                                            std::initializer_list<complexd> alphas) {
  std::vector<SourceSpec> out;
  auto a = alphas.begin();
  for (const auto& p : xy) out.push_back({Point3(p.first, p.second, 0.0), *a++});
  return out;
}

inline const std::vector<SourceSpec>& three_sources() {
  static const auto s = make_sources({{5, 0}, {-5, 0}, {3, 9}},
                                     {{1, 1}, {3, 5}, {-1, 5}});
  return s;
}

}  // namespace detail

/// @brief Bundled benchmark configurations (name -> config + description).
struct PresetEntry {
  RunConfig config;
  std::string description;
};

inline const std::map<std::string, PresetEntry>& preset_table() {
  static const std::map<std::string, PresetEntry> table = [] {
    std::map<std::string, PresetEntry> t;
    const double k2pi = 2.0 * std::numbers::pi;

    auto base = [&](std::vector<SourceSpec> sources, double k, int n, double delta,
                    ProjectorConfig proj, double rel_threshold) {
      RunConfig c;
      c.wavenumber = k;
      c.sources = std::move(sources);
      c.num_directions = n;
      c.noise.delta = delta;
      c.noise.seed = default_noise_seed;
      c.projector = proj;
      c.peaks.expected = static_cast<int>(c.sources.size());
      c.peaks.rel_threshold = rel_threshold;
      return c;
    };
    const ProjectorConfig svd_exact{ProjectorSource::svd_range, RankPolicy::exact(1e-8)};
    const ProjectorConfig pinv_exact{ProjectorSource::pseudo_inverse, RankPolicy::exact(1e-8)};
    auto pinv_gap = [](int n) {
      return ProjectorConfig{ProjectorSource::pseudo_inverse, RankPolicy::gap(n - 1)};
    };

    using detail::make_sources;
    const auto alpha_base6 = {complexd{1, 1}, {3, 5}, {-1, 5}, {0, 1}, {-2, 7}, {6, 3}};
    const auto alpha_set1 = {complexd{0, 1}, {0, 5}, {0, 7}, {0, 4}, {0, 9}, {0, 10}};
    const auto alpha_set2 = {complexd{3, 2}, {5, 3}, {-1, 5}, {-4, 1}, {2, 7}, {-3, 6}};
    const auto alpha_set3 = {complexd{0, 1}, {-3, 5}, {0, 5}, {5, 8}, {0, 7}, {-6, 3}};
    const std::initializer_list<std::pair<double, double>> six_xy = {
        {3, -2}, {5, 3}, {-7, 9}, {4, 8}, {-3, -2}, {7, 8}};

    t["fig1a"] = {base(detail::three_sources(), k2pi, 20, 0.0, svd_exact, 0.2),
                  "three scatterers, noise-free, SVD range projector (exact-rank 1e-8)"};
    t["fig1b"] = {base(detail::three_sources(), k2pi, 20, 0.001, svd_exact, 0.2),
                  "three scatterers, delta=0.001, naive exact-rank SVD (documented failure mode)"};
    t["fig1c"] = {base(detail::three_sources(), k2pi, 20, 0.0, pinv_exact, 0.2),
                  "three scatterers, noise-free, pseudo-inverse projector"};
    t["fig1d"] = {base(detail::three_sources(), k2pi, 20, 0.2, pinv_gap(20), 0.05),
                  "three scatterers, delta=0.2, pseudo-inverse with largest-gap rank"};

    t["sources4"] = {base(make_sources({{3, -2}, {5, 3}, {-7, 9}, {4, 8}},
                                       {complexd{1, 1}, {3, 5}, {-1, 5}, {0, 1}}),
                          k2pi, 20, 0.2, pinv_gap(20), 0.05),
                     "four scatterers, delta=0.2"};
    t["sources5"] = {base(make_sources({{3, -2}, {5, 3}, {-7, 9}, {4, 8}, {-3, -2}},
                                       {complexd{1, 1}, {3, 5}, {-1, 5}, {0, 1}, {-2, 7}}),
                          k2pi, 20, 0.2, pinv_gap(20), 0.05),
                     "five scatterers, delta=0.2"};
    t["sources6"] = {base(make_sources(six_xy, alpha_base6), k2pi, 20, 0.2, pinv_gap(20), 0.05),
                     "six scatterers, delta=0.2"};

    t["dirs30"] = {base(make_sources(six_xy, alpha_base6), k2pi, 30, 0.2, pinv_gap(30), 0.05),
                   "six scatterers, 30 observation directions, delta=0.2"};
    t["dirs40"] = {base(make_sources(six_xy, alpha_base6), k2pi, 40, 0.2, pinv_gap(40), 0.05),
                   "six scatterers, 40 observation directions, delta=0.2"};
    t["dirs50"] = {base(make_sources(six_xy, alpha_base6), k2pi, 50, 0.2, pinv_gap(50), 0.05),
                   "six scatterers, 50 observation directions, delta=0.2"};

    t["k-pi"] = {base(make_sources(six_xy, alpha_base6), std::numbers::pi, 20, 0.2, pinv_gap(20), 0.05),
                 "six scatterers, wavenumber pi, delta=0.2"};
    t["k-3pi"] = {base(make_sources(six_xy, alpha_base6), 3.0 * std::numbers::pi, 20, 0.2,
                       pinv_gap(20), 0.05),
                  "six scatterers, wavenumber 3*pi, delta=0.2"};
    t["k-4pi"] = {base(make_sources(six_xy, alpha_base6), 4.0 * std::numbers::pi, 20, 0.2,
                       pinv_gap(20), 0.05),
                  "six scatterers, wavenumber 4*pi, delta=0.2"};

    t["alpha1"] = {base(make_sources(six_xy, alpha_set1), k2pi, 20, 0.2, pinv_gap(20), 0.05),
                   "six scatterers, purely imaginary coefficient set, delta=0.2"};
    t["alpha2"] = {base(make_sources(six_xy, alpha_set2), k2pi, 20, 0.2, pinv_gap(20), 0.05),
                   "six scatterers, mixed coefficient set B, delta=0.2"};
    t["alpha3"] = {base(make_sources(six_xy, alpha_set3), k2pi, 20, 0.2, pinv_gap(20), 0.05),
                   "six scatterers, mixed coefficient set C, delta=0.2"};

    t["delta05"] = {base(make_sources(six_xy, alpha_set3), k2pi, 20, 0.5, pinv_gap(20), 0.05),
                    "six scatterers, noise sweep delta=0.5 (sweep defined as delta=0.5/1/2; an "
                    "alternate listing gives 0.2, not used)"};
    t["delta1"] = {base(make_sources(six_xy, alpha_set3), k2pi, 20, 1.0, pinv_gap(20), 0.05),
                   "six scatterers, noise sweep delta=1"};
    t["delta2"] = {base(make_sources(six_xy, alpha_set3), k2pi, 20, 2.0, pinv_gap(20), 0.05),
                   "six scatterers, noise sweep delta=2"};
    return t;
  }();
  return table;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [name, entry] : preset_table()) names.push_back(name);
  return names;
}

inline RunConfig preset(const std::string& name) {
  const auto& table = preset_table();
  const auto it = table.find(name);
  if (it == table.end()) {
    std::string msg = "unknown preset '" + name + "'; valid presets:";
    for (const auto& n : preset_names()) msg += " " + n;
    throw std::invalid_argument(msg);
  }
  return it->second.config;
}

// ---------------------------------------------------------------------------
// Artifact emission
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// @brief Delimited text grid, header `x,y,indicator`, one node per line in
///        row-major order, full decimal precision.
inline void write_heatmap_csv(const Heatmap& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x,y,indicator\n";
  for (int iy = 0; iy < h.ny; ++iy)
    for (int ix = 0; ix < h.nx; ++ix)
      out << detail::format_full(h.x_at(ix)) << ',' << detail::format_full(h.y_at(iy)) << ','
          << detail::format_full(h.at(iy, ix)) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

/** @brief Plain 8-bit PGM of log10(indicator), linearly rescaled to 0..255.
 *         A constant map degenerates to level 0. Top raster row is ymax.
 */
inline void write_heatmap_pgm(const Heatmap& h, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (double v : h.values) {
    const double lg = std::log10(v);
    lo = std::min(lo, lg);
    hi = std::max(hi, lg);
  }
  const double span = hi - lo;
  out << "P2\n" << h.nx << ' ' << h.ny << "\n255\n";
  for (int iy = h.ny - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < h.nx; ++ix) {
      int level = 0;
      if (span > 1e-12)
        level = static_cast<int>(std::lround(255.0 * (std::log10(h.at(iy, ix)) - lo) / span));
      out << level << (ix + 1 == h.nx ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

/// @brief Writes heatmap.csv and heatmap.pgm into the given directory.
inline void emit_heatmap(const Heatmap& h, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  write_heatmap_csv(h, dir / "heatmap.csv");
  write_heatmap_pgm(h, dir / "heatmap.pgm");
}

inline void write_peaks_csv(const std::vector<RunReport::Peak>& peaks,
                            const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "x,y,indicator,matched_error\n";
  for (const auto& p : peaks) {
    out << detail::format_full(p.position.x) << ',' << detail::format_full(p.position.y) << ','
        << detail::format_full(p.indicator) << ',';
    if (p.matched_error) out << detail::format_full(*p.matched_error);
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Experiment pipeline
// ---------------------------------------------------------------------------

namespace detail {

inline double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

inline std::vector<double> singular_values_of(const CMatrix& m) {
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& sv = svd.singularValues();
  return {sv.data(), sv.data() + sv.size()};
}

}  // namespace detail

/** @brief End-to-end run: synthesize far-field data, perturb it if requested,
 *         build the configured projector, scan the grid, extract peaks and
 *         score them against the configured source positions. Writes
 *         heatmap.csv, heatmap.pgm, peaks.csv and report.json when
 *         output_dir is set.
 */
inline RunReport run_experiment(const RunConfig& cfg) {
  cfg.validate();
  const auto t_total = std::chrono::steady_clock::now();

  const auto scatterers = cfg.scatterers();
  const WaveConfig wave(cfg.wavenumber);
  const auto dirs = uniform_circle_directions(static_cast<std::size_t>(cfg.num_directions));

  RunReport report;
  report.config = cfg;

  auto t0 = std::chrono::steady_clock::now();
  const auto clean = synthesize_far_field(dirs, scatterers, wave);
  report.timings.synthesize_ms = detail::elapsed_ms(t0);
  report.singular_values_clean = detail::singular_values_of(clean.entries);

  FarFieldMatrix data = clean;
  if (cfg.noise.delta > 0.0) {
    t0 = std::chrono::steady_clock::now();
    data = add_noise(clean, NoiseSpec(cfg.noise.delta, cfg.noise.seed));
    report.timings.noise_ms = detail::elapsed_ms(t0);
    report.singular_values_noisy = detail::singular_values_of(data.entries);
    report.noise_generator = data.meta.generator;
  }

  t0 = std::chrono::steady_clock::now();
  const Projector proj = cfg.projector.source == ProjectorSource::svd_range
                             ? svd_range_projector(data, cfg.projector.policy)
                             : pseudo_inverse_projector(data, cfg.projector.policy);
  report.timings.projector_ms = detail::elapsed_ms(t0);
  report.rank_used = proj.rank_used;

  t0 = std::chrono::steady_clock::now();
  const Heatmap heat = scan_grid(cfg.region, cfg.step, cfg.plane_z, proj, dirs, wave);
  report.timings.scan_ms = detail::elapsed_ms(t0);

  t0 = std::chrono::steady_clock::now();
  const auto peak_points = extract_peaks(heat, cfg.peaks.expected, cfg.peaks.rel_threshold);
  report.timings.peaks_ms = detail::elapsed_ms(t0);

  std::vector<Point3> truth;
  truth.reserve(cfg.sources.size());
  for (const auto& s : cfg.sources) truth.push_back(s.position);

  for (const auto& p : peak_points) {
    const int ix = static_cast<int>(std::lround((p.x - heat.region.xmin) / heat.step));
    const int iy = static_cast<int>(std::lround((p.y - heat.region.ymin) / heat.step));
    report.peaks.push_back({p, heat.at(iy, ix), std::nullopt});
  }
  if (!peak_points.empty()) {
    const auto match = localization_error(peak_points, truth);
    report.matched_errors = match.distances;
    std::size_t next = 0;
    for (std::size_t e = 0; e < peak_points.size(); ++e)
      if (match.truth_index[e] >= 0) report.peaks[e].matched_error = match.distances[next++];
  }
  report.contrast = localization_contrast(heat, truth);
  report.timings.total_ms = detail::elapsed_ms(t_total);

  if (!cfg.output_dir.empty()) {
    const std::filesystem::path dir(cfg.output_dir);
    emit_heatmap(heat, dir);
    write_peaks_csv(report.peaks, dir / "peaks.csv");
    std::ofstream out(dir / "report.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "report.json").string());
    out << json(report).dump(2) << '\n';
  }
  return report;
}

/// @brief Clean (and, when delta > 0, noisy) singular values for a config.
struct SpectrumReport {
  std::vector<double> clean;
  std::vector<double> noisy;
};

inline SpectrumReport spectrum(const RunConfig& cfg) {
  cfg.validate();
  const auto scatterers = cfg.scatterers();
  const WaveConfig wave(cfg.wavenumber);
  const auto dirs = uniform_circle_directions(static_cast<std::size_t>(cfg.num_directions));
  const auto clean = synthesize_far_field(dirs, scatterers, wave);
  SpectrumReport out;
  out.clean = detail::singular_values_of(clean.entries);
  if (cfg.noise.delta > 0.0)
    out.noisy = detail::singular_values_of(
        add_noise(clean, NoiseSpec(cfg.noise.delta, cfg.noise.seed)).entries);
  return out;
}

}  // namespace pointscat
