#include "mfra/runconfig.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfra/version.hpp"

namespace mfra {

namespace {

using Json = nlohmann::ordered_json;

std::vector<double> default_band() {
  std::vector<double> fs;
  for (double f = 25.0; f <= 32.0 + 1e-9; f += 0.5) fs.push_back(f);
  return fs;
}

void reject_unknown_keys(const Json& j, const std::set<std::string>& known,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (known.find(it.key()) == known.end()) {
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

double get_num(const Json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) {
    throw ConfigError(std::string("'") + key + "' must be a number");
  }
  return j[key].get<double>();
}

int get_int(const Json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer()) {
    throw ConfigError(std::string("'") + key + "' must be an integer");
  }
  return j[key].get<int>();
}

}  // namespace

RunConfig default_config() {
  RunConfig cfg;
  cfg.band_f_list_ghz = default_band();
  return cfg;
}

RunConfig config_from_json(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) {
    throw ConfigError("config root must be a JSON object");
  }
  reject_unknown_keys(j,
                      {"folded_geometry", "feed", "mpg", "source", "synthesis",
                       "band", "analysis", "output_dir", "seed"},
                      "config root");

  RunConfig cfg = default_config();
  if (j.contains("folded_geometry")) {
    const Json& g = j["folded_geometry"];
    reject_unknown_keys(g,
                        {"fold_height_h_mm", "aperture_d_mm", "feed_cutout",
                         "lattice", "remove_elements_in_cutout"},
                        "folded_geometry");
    cfg.geometry.fold_height_h_mm =
        get_num(g, "fold_height_h_mm", cfg.geometry.fold_height_h_mm);
    cfg.geometry.aperture_d_mm =
        get_num(g, "aperture_d_mm", cfg.geometry.aperture_d_mm);
    if (g.contains("feed_cutout")) {
      const Json& c = g["feed_cutout"];
      reject_unknown_keys(c, {"width_mm", "length_mm", "rotation_deg"},
                          "feed_cutout");
      cfg.geometry.feed_cutout.width_mm =
          get_num(c, "width_mm", cfg.geometry.feed_cutout.width_mm);
      cfg.geometry.feed_cutout.length_mm =
          get_num(c, "length_mm", cfg.geometry.feed_cutout.length_mm);
      cfg.geometry.feed_cutout.rotation_deg =
          get_num(c, "rotation_deg", cfg.geometry.feed_cutout.rotation_deg);
    }
    if (g.contains("lattice")) {
      const Json& l = g["lattice"];
      reject_unknown_keys(
          l, {"period_mm", "neighbor_spacing_mm", "tile_cols", "tile_rows"},
          "lattice");
      cfg.geometry.lattice.period_mm =
          get_num(l, "period_mm", cfg.geometry.lattice.period_mm);
      cfg.geometry.lattice.neighbor_spacing_mm = get_num(
          l, "neighbor_spacing_mm", cfg.geometry.lattice.neighbor_spacing_mm);
      cfg.geometry.lattice.tile_cols =
          get_int(l, "tile_cols", cfg.geometry.lattice.tile_cols);
      cfg.geometry.lattice.tile_rows =
          get_int(l, "tile_rows", cfg.geometry.lattice.tile_rows);
    }
    if (g.contains("remove_elements_in_cutout")) {
      if (!g["remove_elements_in_cutout"].is_boolean()) {
        throw ConfigError("'remove_elements_in_cutout' must be a boolean");
      }
      cfg.geometry.remove_elements_in_cutout =
          g["remove_elements_in_cutout"].get<bool>();
    }
  }

  if (j.contains("feed")) {
    const Json& f = j["feed"];
    reject_unknown_keys(f, {"q_exponent", "hpbw_deg", "peak_gain_dbi"},
                        "feed");
    if (f.contains("q_exponent") && f.contains("hpbw_deg")) {
      throw ConfigError("give either feed q_exponent or hpbw_deg, not both");
    }
    if (f.contains("hpbw_deg")) {
      cfg.feed.q_exponent = fit_cosq(get_num(f, "hpbw_deg", 40.0));
    } else {
      cfg.feed.q_exponent = get_num(f, "q_exponent", cfg.feed.q_exponent);
    }
    cfg.feed.peak_gain_dbi =
        get_num(f, "peak_gain_dbi", cfg.feed.peak_gain_dbi);
  }

  if (j.contains("mpg")) {
    const Json& m = j["mpg"];
    reject_unknown_keys(m,
                        {"ryy_db", "txx_db", "band_lo_ghz", "band_hi_ghz",
                         "strip_width_mm", "pitch_mm", "panel_mm",
                         "strip_h_mm", "csv"},
                        "mpg");
    cfg.mpg_ryy_db = get_num(m, "ryy_db", cfg.mpg_ryy_db);
    cfg.mpg_txx_db = get_num(m, "txx_db", cfg.mpg_txx_db);
    cfg.mpg_band_lo_ghz = get_num(m, "band_lo_ghz", cfg.mpg_band_lo_ghz);
    cfg.mpg_band_hi_ghz = get_num(m, "band_hi_ghz", cfg.mpg_band_hi_ghz);
    cfg.mpg_strip_width_mm =
        get_num(m, "strip_width_mm", cfg.mpg_strip_width_mm);
    cfg.mpg_pitch_mm = get_num(m, "pitch_mm", cfg.mpg_pitch_mm);
    cfg.mpg_panel_mm = get_num(m, "panel_mm", cfg.mpg_panel_mm);
    cfg.mpg_strip_h_mm = get_num(m, "strip_h_mm", cfg.mpg_strip_h_mm);
    if (m.contains("csv")) cfg.mpg_csv = m["csv"].get<std::string>();
  }

  if (j.contains("source")) {
    const Json& s = j["source"];
    reject_unknown_keys(s,
                        {"type", "csv", "grid_step_mm", "heights_mm",
                         "surrogate"},
                        "source");
    if (s.contains("type")) cfg.source_type = s["type"].get<std::string>();
    if (cfg.source_type != "surrogate" && cfg.source_type != "table" &&
        cfg.source_type != "ideal") {
      throw ConfigError("source type must be surrogate, table or ideal");
    }
    if (s.contains("csv")) cfg.table_csv = s["csv"].get<std::string>();
    cfg.source_grid_step_mm =
        get_num(s, "grid_step_mm", cfg.source_grid_step_mm);
    if (s.contains("heights_mm")) {
      cfg.source_heights_mm = s["heights_mm"].get<std::vector<double>>();
    }
    if (s.contains("surrogate")) {
      const Json& p = s["surrogate"];
      reject_unknown_keys(p,
                          {"resonance_l1_mm", "resonance_l2_mm",
                           "slope1_deg_per_mm", "slope2_deg_per_mm",
                           "height_shift_deg_per_mm", "width_pull_mm_per_mm",
                           "loss_floor", "dispersion_factor",
                           "reference_height_mm", "reference_width_mm",
                           "reference_freq_ghz", "l_min_mm", "l_max_mm"},
                          "surrogate");
      SurrogateParams& sp = cfg.surrogate;
      sp.resonance_l1_mm = get_num(p, "resonance_l1_mm", sp.resonance_l1_mm);
      sp.resonance_l2_mm = get_num(p, "resonance_l2_mm", sp.resonance_l2_mm);
      sp.slope1_deg_per_mm =
          get_num(p, "slope1_deg_per_mm", sp.slope1_deg_per_mm);
      sp.slope2_deg_per_mm =
          get_num(p, "slope2_deg_per_mm", sp.slope2_deg_per_mm);
      sp.height_shift_deg_per_mm =
          get_num(p, "height_shift_deg_per_mm", sp.height_shift_deg_per_mm);
      sp.width_pull_mm_per_mm =
          get_num(p, "width_pull_mm_per_mm", sp.width_pull_mm_per_mm);
      sp.loss_floor = get_num(p, "loss_floor", sp.loss_floor);
      sp.dispersion_factor =
          get_num(p, "dispersion_factor", sp.dispersion_factor);
      sp.reference_height_mm =
          get_num(p, "reference_height_mm", sp.reference_height_mm);
      sp.reference_width_mm =
          get_num(p, "reference_width_mm", sp.reference_width_mm);
      sp.reference_freq_ghz =
          get_num(p, "reference_freq_ghz", sp.reference_freq_ghz);
      sp.l_min_mm = get_num(p, "l_min_mm", sp.l_min_mm);
      sp.l_max_mm = get_num(p, "l_max_mm", sp.l_max_mm);
    }
  }

  if (j.contains("synthesis")) {
    const Json& s = j["synthesis"];
    reject_unknown_keys(s, {"f0_ghz", "min_cross_mag", "phase_offset_deg"},
                        "synthesis");
    cfg.f0_ghz = get_num(s, "f0_ghz", cfg.f0_ghz);
    cfg.min_cross_mag = get_num(s, "min_cross_mag", cfg.min_cross_mag);
    if (s.contains("phase_offset_deg") && !s["phase_offset_deg"].is_null()) {
      cfg.phase_offset_deg = s["phase_offset_deg"].get<double>();
    }
  }

  if (j.contains("band")) {
    const Json& b = j["band"];
    reject_unknown_keys(b, {"f_list_ghz"}, "band");
    if (b.contains("f_list_ghz")) {
      cfg.band_f_list_ghz = b["f_list_ghz"].get<std::vector<double>>();
    }
  }

  if (j.contains("analysis")) {
    const Json& a = j["analysis"];
    reject_unknown_keys(a,
                        {"main_span_deg", "main_step_deg",
                         "quad_theta_step_deg", "quad_phi_step_deg",
                         "cut_phi_deg", "radiation_efficiency"},
                        "analysis");
    MetricsOptions& mo = cfg.metrics_options;
    mo.main_span_deg = get_num(a, "main_span_deg", mo.main_span_deg);
    mo.main_step_deg = get_num(a, "main_step_deg", mo.main_step_deg);
    mo.quad_theta_step_deg =
        get_num(a, "quad_theta_step_deg", mo.quad_theta_step_deg);
    mo.quad_phi_step_deg =
        get_num(a, "quad_phi_step_deg", mo.quad_phi_step_deg);
    if (a.contains("cut_phi_deg")) {
      mo.cut_phi_deg = a["cut_phi_deg"].get<std::vector<double>>();
    }
    cfg.radiation_efficiency =
        get_num(a, "radiation_efficiency", cfg.radiation_efficiency);
  }

  if (j.contains("output_dir")) {
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("seed")) {
    cfg.seed = j["seed"].get<std::uint64_t>();
  }

  if (!(cfg.f0_ghz > 0.0)) throw ConfigError("f0_ghz must be positive");
  if (!(cfg.min_cross_mag > 0.0) || cfg.min_cross_mag > 1.0) {
    throw ConfigError("min_cross_mag must lie in (0, 1]");
  }
  if (!(cfg.radiation_efficiency > 0.0) || cfg.radiation_efficiency > 1.0) {
    throw ConfigError("radiation_efficiency must lie in (0, 1]");
  }
  if (cfg.band_f_list_ghz.size() < 3) {
    throw ConfigError("band f_list_ghz needs at least 3 frequencies");
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json(ss.str());
}

std::string config_to_json(const RunConfig& cfg) {
  Json j;
  j["folded_geometry"] = {
      {"fold_height_h_mm", cfg.geometry.fold_height_h_mm},
      {"aperture_d_mm", cfg.geometry.aperture_d_mm},
      {"feed_cutout",
       {{"width_mm", cfg.geometry.feed_cutout.width_mm},
        {"length_mm", cfg.geometry.feed_cutout.length_mm},
        {"rotation_deg", cfg.geometry.feed_cutout.rotation_deg}}},
      {"lattice",
       {{"period_mm", cfg.geometry.lattice.period_mm},
        {"neighbor_spacing_mm", cfg.geometry.lattice.neighbor_spacing_mm},
        {"tile_cols", cfg.geometry.lattice.tile_cols},
        {"tile_rows", cfg.geometry.lattice.tile_rows}}},
      {"remove_elements_in_cutout", cfg.geometry.remove_elements_in_cutout}};
  j["feed"] = {{"q_exponent", cfg.feed.q_exponent},
               {"peak_gain_dbi", cfg.feed.peak_gain_dbi}};
  j["mpg"] = {{"ryy_db", cfg.mpg_ryy_db},
              {"txx_db", cfg.mpg_txx_db},
              {"band_lo_ghz", cfg.mpg_band_lo_ghz},
              {"band_hi_ghz", cfg.mpg_band_hi_ghz},
              {"strip_width_mm", cfg.mpg_strip_width_mm},
              {"pitch_mm", cfg.mpg_pitch_mm},
              {"panel_mm", cfg.mpg_panel_mm},
              {"strip_h_mm", cfg.mpg_strip_h_mm},
              {"csv", cfg.mpg_csv}};
  j["source"] = {{"type", cfg.source_type},
                 {"csv", cfg.table_csv},
                 {"grid_step_mm", cfg.source_grid_step_mm},
                 {"heights_mm", cfg.source_heights_mm},
                 {"surrogate",
                  {{"resonance_l1_mm", cfg.surrogate.resonance_l1_mm},
                   {"resonance_l2_mm", cfg.surrogate.resonance_l2_mm},
                   {"slope1_deg_per_mm", cfg.surrogate.slope1_deg_per_mm},
                   {"slope2_deg_per_mm", cfg.surrogate.slope2_deg_per_mm},
                   {"height_shift_deg_per_mm",
                    cfg.surrogate.height_shift_deg_per_mm},
                   {"width_pull_mm_per_mm", cfg.surrogate.width_pull_mm_per_mm},
                   {"loss_floor", cfg.surrogate.loss_floor},
                   {"dispersion_factor", cfg.surrogate.dispersion_factor},
                   {"reference_height_mm", cfg.surrogate.reference_height_mm},
                   {"reference_width_mm", cfg.surrogate.reference_width_mm},
                   {"reference_freq_ghz", cfg.surrogate.reference_freq_ghz},
                   {"l_min_mm", cfg.surrogate.l_min_mm},
                   {"l_max_mm", cfg.surrogate.l_max_mm}}}};
  j["synthesis"] = {{"f0_ghz", cfg.f0_ghz},
                    {"min_cross_mag", cfg.min_cross_mag},
                    {"phase_offset_deg", cfg.phase_offset_deg.has_value()
                                             ? Json(*cfg.phase_offset_deg)
                                             : Json(nullptr)}};
  j["band"] = {{"f_list_ghz", cfg.band_f_list_ghz}};
  j["analysis"] = {
      {"main_span_deg", cfg.metrics_options.main_span_deg},
      {"main_step_deg", cfg.metrics_options.main_step_deg},
      {"quad_theta_step_deg", cfg.metrics_options.quad_theta_step_deg},
      {"quad_phi_step_deg", cfg.metrics_options.quad_phi_step_deg},
      {"cut_phi_deg", cfg.metrics_options.cut_phi_deg},
      {"radiation_efficiency", cfg.radiation_efficiency}};
  j["output_dir"] = cfg.output_dir;
  j["seed"] = cfg.seed;
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = config_to_json(cfg);
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

std::unique_ptr<PhaseSource> make_source(const RunConfig& cfg) {
  if (cfg.source_type == "surrogate") {
    return std::make_unique<SurrogateSource>(
        cfg.surrogate, cfg.source_grid_step_mm, cfg.source_heights_mm);
  }
  if (cfg.source_type == "ideal") {
    return std::make_unique<IdealSource>();
  }
  if (cfg.table_csv.empty()) {
    throw ConfigError("source type 'table' needs a csv path");
  }
  std::ifstream in(cfg.table_csv, std::ios::binary);
  if (!in) {
    throw ConfigError("cannot open sweep table '" + cfg.table_csv + "'");
  }
  return std::make_unique<TableSource>(ingest_phase_table(in));
}

MpgModel make_mpg(const RunConfig& cfg) {
  if (!cfg.mpg_csv.empty()) {
    std::ifstream in(cfg.mpg_csv, std::ios::binary);
    if (!in) {
      throw ConfigError("cannot open grid response '" + cfg.mpg_csv + "'");
    }
    return ingest_mpg_csv(in, cfg.mpg_strip_width_mm, cfg.mpg_pitch_mm);
  }
  return MpgModel::flat(cfg.mpg_ryy_db, cfg.mpg_txx_db, cfg.mpg_band_lo_ghz,
                        cfg.mpg_band_hi_ghz, cfg.mpg_strip_width_mm,
                        cfg.mpg_pitch_mm);
}

namespace {

Json metrics_json_body(const PatternMetrics& m) {
  return Json{
      {"freq_ghz", m.freq_ghz},
      {"directivity_dbi", m.directivity_dbi},
      {"realized_gain_dbi", m.realized_gain_dbi},
      {"hpbw_xoz_deg", m.hpbw_xoz_deg},
      {"hpbw_yoz_deg", m.hpbw_yoz_deg},
      {"sll_db", m.sll_db},
      {"xpol_db", m.xpol_db},
      {"peak_theta_xoz_deg", m.peak_theta_xoz_deg},
      {"peak_theta_yoz_deg", m.peak_theta_yoz_deg},
      {"aperture_efficiency", m.aperture_efficiency},
      {"efficiency_decomposition",
       {{"d_uniform_dbi", m.breakdown.d_uniform_dbi},
        {"eta_pattern", m.breakdown.eta_pattern},
        {"eta_spillover", m.breakdown.eta_spillover},
        {"eta_capture", m.breakdown.eta_capture},
        {"eta_mpg_chain", m.breakdown.eta_mpg_chain},
        {"eta_conversion", m.breakdown.eta_conversion},
        {"eta_radiation", m.breakdown.eta_radiation}}}};
}

}  // namespace

std::string metrics_to_json(const PatternMetrics& m,
                            const std::string& config_hash_hex) {
  Json j;
  j["toolkit_version"] = kToolkitVersion;
  j["config_hash"] = config_hash_hex;
  j["metrics"] = metrics_json_body(m);
  return j.dump(2) + "\n";
}

std::string sweep_to_json(const BandSweepResult& sweep,
                          const std::string& config_hash_hex) {
  Json j;
  j["toolkit_version"] = kToolkitVersion;
  j["config_hash"] = config_hash_hex;
  j["peak_gain_dbi"] = sweep.peak_gain_dbi;
  j["peak_freq_ghz"] = sweep.peak_freq_ghz;
  j["bw3db_percent"] = sweep.bw3db_percent;
  j["bw1db_percent"] = sweep.bw1db_percent;
  j["truncated_3db"] = sweep.truncated_3db;
  j["truncated_1db"] = sweep.truncated_1db;
  Json pts = Json::array();
  for (std::size_t i = 0; i < sweep.freq_ghz.size(); ++i) {
    pts.push_back(metrics_json_body(sweep.per_freq[i]));
  }
  j["points"] = std::move(pts);
  return j.dump(2) + "\n";
}

const char* reference_dataset_json() {
  // Published characterization of the prototype the default configuration
  // models. These values are quoted for comparison only, never computed.
  return R"json({
  "dataset_version": 1,
  "source": "published prototype characterization (simulated and measured)",
  "center_freq_ghz": 28.0,
  "aperture_d_mm": 192.0,
  "fold_height_h_mm": 40.0,
  "f_over_d": 0.41,
  "h_over_d": 0.208,
  "peak_realized_gain_dbi_simulated": 31.59,
  "peak_gain_freq_ghz_simulated": 29.0,
  "peak_realized_gain_dbi_measured": 31.1,
  "peak_gain_freq_ghz_measured": 28.2,
  "gain_bw_3db_percent_simulated": 14.38,
  "gain_bw_1db_percent_simulated": 10.67,
  "gain_bw_3db_percent_measured": 11.15,
  "impedance_bw_percent": 20.7,
  "hpbw_deg_min_simulated": 2.6,
  "hpbw_deg_max_simulated": 4.5,
  "sll_db_bound": -20.0,
  "xpol_db_bound": -30.0,
  "aperture_efficiency_percent_simulated": 33.3,
  "aperture_efficiency_percent_measured": 31.1,
  "radiation_efficiency_percent": 91.0,
  "total_efficiency_percent": 78.0,
  "feed_hpbw_xoz_deg": 40.0,
  "feed_hpbw_yoz_deg": 36.0,
  "feed_gain_dbi_min": 13.28,
  "feed_gain_dbi_max": 13.66
}
)json";
}

std::string render_report(const DesignedAperture& design,
                          const std::vector<PatternMetrics>& computed,
                          const std::optional<BandSweepResult>& sweep,
                          const std::string& config_hash_hex) {
  const Json ref = Json::parse(reference_dataset_json());
  std::ostringstream os;
  char line[256];

  os << "mfra design report (toolkit " << kToolkitVersion << ", config "
     << config_hash_hex << ")\n";
  os << std::string(72, '=') << "\n\n";

  const FoldedGeometry& g = design.geometry;
  const double focal = g.virtual_focal_f_mm();
  os << "Geometry\n--------\n";
  std::snprintf(line, sizeof(line), "  H (fold height)      %8.3f mm\n",
                g.fold_height_h_mm);
  os << line;
  std::snprintf(line, sizeof(line), "  D (aperture side)    %8.3f mm\n",
                g.aperture_d_mm);
  os << line;
  std::snprintf(line, sizeof(line), "  F (virtual focus)    %8.3f mm\n",
                focal);
  os << line;
  std::snprintf(line, sizeof(line),
                "  F/D                  %8.4f   (published %.2f)\n",
                focal / g.aperture_d_mm, ref["f_over_d"].get<double>());
  os << line;
  std::snprintf(line, sizeof(line),
                "  H/D                  %8.4f   (published %.3f)\n",
                g.fold_height_h_mm / g.aperture_d_mm,
                ref["h_over_d"].get<double>());
  os << line;
  os << "\n";

  os << "Synthesis at " << design.f0_ghz << " GHz\n---------\n";
  std::snprintf(line, sizeof(line), "  elements             %8zu\n",
                design.elements.size());
  os << line;
  std::snprintf(line, sizeof(line), "  coverage span        %8.1f deg\n",
                design.stats.coverage_span_deg);
  os << line;
  std::snprintf(line, sizeof(line), "  RMS phase error      %8.3f deg\n",
                design.stats.rms_phase_error_deg);
  os << line;
  std::snprintf(line, sizeof(line), "  max |phase error|    %8.3f deg\n",
                design.stats.max_abs_phase_error_deg);
  os << line;
  std::snprintf(line, sizeof(line), "  mean |r_xy|          %8.4f\n",
                design.stats.mean_cross_mag_achieved);
  os << line;
  std::snprintf(line, sizeof(line), "  distinct geometries  %8zu\n",
                design.stats.geometry_histogram.size());
  os << line;
  os << "\n";

  if (!computed.empty()) {
    os << "Computed metrics\n----------------\n";
    os << "   f/GHz    D/dBi    G/dBi  HPBWx/deg  HPBWy/deg   SLL/dB  "
          "Xpol/dB   eta_ap\n";
    for (const auto& m : computed) {
      std::snprintf(line, sizeof(line),
                    "  %6.2f  %7.2f  %7.2f   %8.2f   %8.2f  %7.1f  %7.1f  "
                    "%7.3f\n",
                    m.freq_ghz, m.directivity_dbi, m.realized_gain_dbi,
                    m.hpbw_xoz_deg, m.hpbw_yoz_deg, m.sll_db, m.xpol_db,
                    m.aperture_efficiency);
      os << line;
    }
    const PatternMetrics& m0 = computed.front();
    os << "\nEfficiency decomposition at " << m0.freq_ghz << " GHz\n";
    std::snprintf(line, sizeof(line),
                  "  uniform-aperture directivity  %7.2f dBi\n",
                  m0.breakdown.d_uniform_dbi);
    os << line;
    std::snprintf(line, sizeof(line),
                  "  pattern (taper+phase)         %7.4f  (%+.2f dB)\n",
                  m0.breakdown.eta_pattern,
                  10.0 * std::log10(m0.breakdown.eta_pattern));
    os << line;
    std::snprintf(line, sizeof(line),
                  "  spillover                     %7.4f  (%+.2f dB)\n",
                  m0.breakdown.eta_spillover,
                  10.0 * std::log10(m0.breakdown.eta_spillover));
    os << line;
    std::snprintf(line, sizeof(line),
                  "  polarizer chain (nominal)     %7.4f  (%+.2f dB)\n",
                  m0.breakdown.eta_mpg_chain,
                  10.0 * std::log10(m0.breakdown.eta_mpg_chain));
    os << line;
    std::snprintf(line, sizeof(line),
                  "  element conversion            %7.4f  (%+.2f dB)\n",
                  m0.breakdown.eta_conversion,
                  10.0 * std::log10(m0.breakdown.eta_conversion));
    os << line;
    std::snprintf(line, sizeof(line),
                  "  radiation (user scalar)       %7.4f  (%+.2f dB)\n",
                  m0.breakdown.eta_radiation,
                  10.0 * std::log10(m0.breakdown.eta_radiation));
    os << line;
    os << "\n";
  }

  if (sweep.has_value()) {
    os << "Band sweep\n----------\n";
    std::snprintf(line, sizeof(line),
                  "  peak gain        %7.2f dBi at %.2f GHz (published sim "
                  "%.2f dBi at %.1f GHz)\n",
                  sweep->peak_gain_dbi, sweep->peak_freq_ghz,
                  ref["peak_realized_gain_dbi_simulated"].get<double>(),
                  ref["peak_gain_freq_ghz_simulated"].get<double>());
    os << line;
    std::snprintf(line, sizeof(line),
                  "  3 dB gain BW     %7.2f %%  (published sim %.2f %%)%s\n",
                  sweep->bw3db_percent,
                  ref["gain_bw_3db_percent_simulated"].get<double>(),
                  sweep->truncated_3db ? "  [truncated at sweep edge]" : "");
    os << line;
    std::snprintf(line, sizeof(line),
                  "  1 dB gain BW     %7.2f %%  (published sim %.2f %%)%s\n",
                  sweep->bw1db_percent,
                  ref["gain_bw_1db_percent_simulated"].get<double>(),
                  sweep->truncated_1db ? "  [truncated at sweep edge]" : "");
    os << line;
    os << "\n";
  }

  os << "Published reference bounds: HPBW "
     << ref["hpbw_deg_min_simulated"].get<double>() << "-"
     << ref["hpbw_deg_max_simulated"].get<double>() << " deg, SLL below "
     << ref["sll_db_bound"].get<double>() << " dB, X-pol below "
     << ref["xpol_db_bound"].get<double>() << " dB, aperture efficiency "
     << ref["aperture_efficiency_percent_simulated"].get<double>()
     << " %.\nReference values are quoted from the published prototype "
        "characterization; computed values come from this toolkit's "
        "physical-optics model.\n";
  return os.str();
}

}  // namespace mfra
