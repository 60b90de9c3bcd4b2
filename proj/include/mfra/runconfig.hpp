#ifndef MFRA_RUNCONFIG_HPP
#define MFRA_RUNCONFIG_HPP

#include "mfra/layout.hpp"
#include "mfra/pofield.hpp"
#include "mfra/polarizer.hpp"
#include "mfra/unitcell.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace mfra {

// One JSON document drives every command; all defaults reproduce the
// bundled prototype configuration.
struct RunConfig {
  FoldedGeometry geometry;
  FeedModel feed;

  // Polarizer grid block: flat response unless a CSV is given.
  double mpg_ryy_db = -0.040;
  double mpg_txx_db = -0.18;
  double mpg_band_lo_ghz = 24.0;
  double mpg_band_hi_ghz = 33.0;
  double mpg_strip_width_mm = 0.5;
  double mpg_pitch_mm = 1.0;
  double mpg_panel_mm = 180.0;
  double mpg_strip_h_mm = 0.1;
  std::string mpg_csv;

  // Element source block.
  std::string source_type = "surrogate";  // surrogate | table | ideal
  SurrogateParams surrogate;
  double source_grid_step_mm = 0.05;
  std::vector<double> source_heights_mm = {0.2, 0.4};
  std::string table_csv;

  // Synthesis block.
  double f0_ghz = 28.0;
  double min_cross_mag = 0.9;
  std::optional<double> phase_offset_deg;

  // Band sweep block.
  std::vector<double> band_f_list_ghz;

  // Analysis block.
  MetricsOptions metrics_options;
  double radiation_efficiency = 1.0;

  std::string output_dir = "out";
  std::uint64_t seed = 1;
};

RunConfig default_config();

// Parses a config document; unknown keys are rejected so typos surface.
// Throws ConfigError on any structural or value problem.
RunConfig config_from_json(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical serialization (every field, fixed key order); its FNV-1a hash
// identifies the run in all artifacts.
std::string config_to_json(const RunConfig& cfg);
std::string config_hash(const RunConfig& cfg);

std::unique_ptr<PhaseSource> make_source(const RunConfig& cfg);
MpgModel make_mpg(const RunConfig& cfg);

// JSON artifacts (deterministic key order and float formatting).
std::string metrics_to_json(const PatternMetrics& m,
                            const std::string& config_hash_hex);
std::string sweep_to_json(const BandSweepResult& sweep,
                          const std::string& config_hash_hex);

// Published characterization numbers of the prototype this configuration
// reproduces; shipped for side-by-side comparison in reports and clearly
// separated from computed values.
const char* reference_dataset_json();

// Human-readable run summary: geometry ratios, synthesis statistics,
// computed metrics with their efficiency decomposition, and the published
// reference values next to them.
std::string render_report(const DesignedAperture& design,
                          const std::vector<PatternMetrics>& computed,
                          const std::optional<BandSweepResult>& sweep,
                          const std::string& config_hash_hex);

}  // namespace mfra

#endif
