#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfra/fabricate.hpp"
#include "mfra/layout.hpp"
#include "mfra/pofield.hpp"
#include "mfra/polarizer.hpp"
#include "mfra/runconfig.hpp"
#include "mfra/unitcell.hpp"
#include "mfra/version.hpp"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

struct CliState {
  std::string config_path;
  std::string design_path;
  std::string csv_path;
  std::string out_dir;
  double freq_ghz = 0.0;
  int threads = 1;
  bool force = false;
};

mfra::RunConfig resolve_config(const CliState& st) {
  mfra::RunConfig cfg = st.config_path.empty()
                            ? mfra::default_config()
                            : mfra::load_config(st.config_path);
  if (const char* env = std::getenv("MFRA_OUT")) {
    cfg.output_dir = env;
  }
  if (!st.out_dir.empty()) {
    cfg.output_dir = st.out_dir;
  }
  return cfg;
}

fs::path ensure_out_dir(const mfra::RunConfig& cfg) {
  fs::path dir(cfg.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw std::ios_base::failure("cannot create output directory '" +
                                 cfg.output_dir + "': " + ec.message());
  }
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open '" + path.string() +
                                 "' for writing");
  }
  out << text;
  if (!out) {
    throw std::ios_base::failure("failed writing '" + path.string() + "'");
  }
}

void write_manifest(const fs::path& dir, const std::string& hash,
                    std::vector<std::string> files, const Json& notes) {
  std::sort(files.begin(), files.end());
  Json j;
  j["toolkit_version"] = mfra::kToolkitVersion;
  j["config_hash"] = hash;
  j["files"] = files;
  if (!notes.empty()) j["notes"] = notes;
  write_text(dir / "MANIFEST.json", j.dump(2) + "\n");
}

std::string freq_tag(double f_ghz) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2fGHz", f_ghz);
  return buf;
}

mfra::DesignedAperture obtain_design(const CliState& st,
                                     const mfra::RunConfig& cfg,
                                     const mfra::PhaseSource& source) {
  if (!st.design_path.empty()) {
    return mfra::import_design(st.design_path);
  }
  const auto layout = mfra::generate_lattice(cfg.geometry);
  return mfra::synthesize(layout, source, mfra::Frequency(cfg.f0_ghz),
                          cfg.min_cross_mag, cfg.phase_offset_deg);
}

std::vector<double> cut_theta_grid(const mfra::MetricsOptions& opt) {
  std::vector<double> pos;
  for (double t = opt.main_step_deg; t <= opt.main_span_deg + 1e-12;
       t += opt.main_step_deg) {
    pos.push_back(t);
  }
  for (double t = opt.main_span_deg + opt.quad_theta_step_deg; t < 90.0;
       t += opt.quad_theta_step_deg) {
    pos.push_back(t);
  }
  pos.push_back(90.0);
  std::vector<double> grid;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) grid.push_back(-*it);
  grid.push_back(0.0);
  for (double t : pos) grid.push_back(t);
  return grid;
}

int cmd_ingest(const CliState& st) {
  const mfra::RunConfig cfg = resolve_config(st);
  const std::string hash = mfra::config_hash(cfg);
  std::ifstream in(st.csv_path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open sweep table '" + st.csv_path +
                                 "'");
  }
  const mfra::PhaseTable table = mfra::ingest_phase_table(in);

  const fs::path dir = ensure_out_dir(cfg);
  std::ostringstream normalized;
  mfra::export_phase_table(table, normalized);
  write_text(dir / "table_normalized.csv", normalized.str());

  Json j;
  j["toolkit_version"] = mfra::kToolkitVersion;
  j["config_hash"] = hash;
  j["entries"] = table.size();
  j["frequencies_ghz"] = table.frequencies_ghz();
  write_text(dir / "ingest_report.json", j.dump(2) + "\n");
  write_manifest(dir, hash, {"table_normalized.csv", "ingest_report.json"},
                 Json::object());

  std::cout << "ingested " << table.size() << " entries at "
            << table.frequencies_ghz().size() << " frequencies into "
            << dir.string() << "\n";
  return 0;
}

int cmd_synthesize(const CliState& st) {
  const mfra::RunConfig cfg = resolve_config(st);
  const std::string hash = mfra::config_hash(cfg);
  const auto source = mfra::make_source(cfg);
  const auto layout = mfra::generate_lattice(cfg.geometry);
  const auto design =
      mfra::synthesize(layout, *source, mfra::Frequency(cfg.f0_ghz),
                       cfg.min_cross_mag, cfg.phase_offset_deg);

  const fs::path dir = ensure_out_dir(cfg);
  mfra::export_design(design, (dir / "design.json").string(), hash);
  write_manifest(dir, hash, {"design.json"},
                 Json{{"elements", design.elements.size()},
                      {"removed_by_cutout", layout.removed_by_cutout}});

  std::cout << "synthesized " << design.elements.size() << " elements at "
            << cfg.f0_ghz << " GHz (rms phase error "
            << design.stats.rms_phase_error_deg << " deg) into "
            << (dir / "design.json").string() << "\n";
  return 0;
}

int cmd_analyze(const CliState& st) {
  mfra::RunConfig cfg = resolve_config(st);
  cfg.metrics_options.n_threads = st.threads;
  const std::string hash = mfra::config_hash(cfg);
  const auto source = mfra::make_source(cfg);
  const auto design = obtain_design(st, cfg, *source);
  const double f_ghz = st.freq_ghz > 0.0 ? st.freq_ghz : design.f0_ghz;
  const mfra::Frequency f(f_ghz);

  const mfra::MpgModel mpg = mfra::make_mpg(cfg);
  const auto ap = mfra::illuminate(design, cfg.feed, mpg, *source, f);
  mfra::PowerBudget budget;
  budget.eta_spillover = mfra::spillover_efficiency(cfg.feed, design.geometry);
  budget.eta_radiation = cfg.radiation_efficiency;
  budget.aperture_d_mm = design.geometry.aperture_d_mm;
  const auto m = mfra::metrics(ap, budget, cfg.metrics_options);

  const fs::path dir = ensure_out_dir(cfg);
  const std::string tag = freq_tag(f_ghz);
  write_text(dir / ("metrics_" + tag + ".json"),
             mfra::metrics_to_json(m, hash));

  const auto pattern = mfra::far_field(ap, cut_theta_grid(cfg.metrics_options),
                                       cfg.metrics_options.cut_phi_deg,
                                       st.threads);
  std::ostringstream csv;
  mfra::write_pattern_csv(pattern, csv);
  write_text(dir / ("pattern_" + tag + ".csv"), csv.str());
  write_manifest(dir, hash,
                 {"metrics_" + tag + ".json", "pattern_" + tag + ".csv"},
                 Json::object());

  std::cout << "analyzed at " << f_ghz << " GHz: directivity "
            << m.directivity_dbi << " dBi, realized gain "
            << m.realized_gain_dbi << " dBi, HPBW " << m.hpbw_xoz_deg << "/"
            << m.hpbw_yoz_deg << " deg\n";
  return 0;
}

int cmd_sweep(const CliState& st) {
  mfra::RunConfig cfg = resolve_config(st);
  cfg.metrics_options.n_threads = st.threads;
  const std::string hash = mfra::config_hash(cfg);
  const auto source = mfra::make_source(cfg);
  const auto design = obtain_design(st, cfg, *source);
  const mfra::MpgModel mpg = mfra::make_mpg(cfg);

  mfra::PowerBudget budget;
  budget.eta_spillover = mfra::spillover_efficiency(cfg.feed, design.geometry);
  budget.eta_radiation = cfg.radiation_efficiency;
  budget.aperture_d_mm = design.geometry.aperture_d_mm;

  const auto sweep =
      mfra::band_sweep(design, cfg.feed, mpg, *source, cfg.band_f_list_ghz,
                       budget, cfg.metrics_options);

  const fs::path dir = ensure_out_dir(cfg);
  write_text(dir / "sweep.json", mfra::sweep_to_json(sweep, hash));
  write_manifest(dir, hash, {"sweep.json"}, Json::object());

  std::cout << "swept " << sweep.freq_ghz.size() << " frequencies: peak "
            << sweep.peak_gain_dbi << " dBi at " << sweep.peak_freq_ghz
            << " GHz, 3 dB BW " << sweep.bw3db_percent << " %"
            << (sweep.truncated_3db ? " (truncated)" : "") << "\n";
  return 0;
}

int cmd_export_stl(const CliState& st) {
  const mfra::RunConfig cfg = resolve_config(st);
  const std::string hash = mfra::config_hash(cfg);
  const auto source = mfra::make_source(cfg);
  const auto design = obtain_design(st, cfg, *source);
  const mfra::MpgModel mpg = mfra::make_mpg(cfg);

  const double substrate_h = design.elements.empty()
                                 ? 0.4
                                 : design.elements.front().geometry.substrate_h;

  mfra::AssemblyReport rep;
  const mfra::Mesh rms = mfra::assemble_rms_mesh(
      design, substrate_h, design.geometry.aperture_d_mm,
      mfra::CutoutOverlapPolicy::omit, &rep);
  const mfra::Mesh grid = mfra::mpg_grid_mesh(
      mpg, cfg.mpg_panel_mm, cfg.mpg_panel_mm, substrate_h, cfg.mpg_strip_h_mm);

  const fs::path dir = ensure_out_dir(cfg);
  mfra::export_stl_binary(rms, (dir / "rms.stl").string(), st.force);
  mfra::export_stl_binary(grid, (dir / "mpg.stl").string(), st.force);

  std::ostringstream manifest;
  mfra::write_metallization_manifest(
      manifest, {"rms.stl bottom_face ground_plane silver_spray",
                 "mpg.stl strip_top_faces conductive_ink"});
  write_text(dir / "metallization.txt", manifest.str());

  Json notes;
  notes["rms_elements_meshed"] = rep.elements_meshed;
  notes["rms_elements_omitted_over_feed_opening"] =
      rep.elements_omitted_for_cutout;
  write_manifest(dir, hash, {"rms.stl", "mpg.stl", "metallization.txt"},
                 notes);

  std::cout << "exported rms.stl (" << rms.triangles.size()
            << " triangles) and mpg.stl (" << grid.triangles.size()
            << " triangles) into " << dir.string() << "\n";
  if (rep.elements_omitted_for_cutout > 0) {
    std::cout << "note: " << rep.elements_omitted_for_cutout
              << " elements overlap the feed opening and were left out of "
                 "the printed mesh\n";
  }
  return 0;
}

int cmd_report(const CliState& st) {
  mfra::RunConfig cfg = resolve_config(st);
  cfg.metrics_options.n_threads = st.threads;
  const std::string hash = mfra::config_hash(cfg);
  const auto source = mfra::make_source(cfg);
  const auto design = obtain_design(st, cfg, *source);
  const double f_ghz = st.freq_ghz > 0.0 ? st.freq_ghz : design.f0_ghz;

  const mfra::MpgModel mpg = mfra::make_mpg(cfg);
  const auto ap =
      mfra::illuminate(design, cfg.feed, mpg, *source, mfra::Frequency(f_ghz));
  mfra::PowerBudget budget;
  budget.eta_spillover = mfra::spillover_efficiency(cfg.feed, design.geometry);
  budget.eta_radiation = cfg.radiation_efficiency;
  budget.aperture_d_mm = design.geometry.aperture_d_mm;
  const auto m = mfra::metrics(ap, budget, cfg.metrics_options);

  const std::string report = mfra::render_report(design, {m}, {}, hash);
  const fs::path dir = ensure_out_dir(cfg);
  write_text(dir / "report.txt", report);
  write_text(dir / "reference_dataset.json", mfra::reference_dataset_json());
  write_manifest(dir, hash, {"report.txt", "reference_dataset.json"},
                 Json::object());
  std::cout << report;
  return 0;
}

void print_error(int code, const std::string& kind, const std::string& msg) {
  std::cerr << "error: code=" << code << " kind=" << kind << " msg=\"" << msg
            << "\"\n";
  std::cerr << "The run failed (" << kind << "): " << msg << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mfra: folded-metasurface reflectarray design toolkit"};
  app.set_version_flag("--version", mfra::kToolkitVersion);
  app.require_subcommand(1);

  CliState st;
  app.add_option("--config", st.config_path, "run configuration JSON");
  app.add_option("--out", st.out_dir, "output directory (overrides config)");
  app.add_option("--threads", st.threads, "worker threads for field sums")
      ->check(CLI::PositiveNumber);

  auto* ingest = app.add_subcommand("ingest", "validate a sweep-table CSV");
  ingest->add_option("--csv", st.csv_path, "sweep table CSV")->required();

  auto* synth =
      app.add_subcommand("synthesize", "generate the lattice and assign cells");

  auto* analyze =
      app.add_subcommand("analyze", "far-field metrics at one frequency");
  analyze->add_option("--design", st.design_path, "design JSON to analyze");
  analyze->add_option("--freq", st.freq_ghz, "analysis frequency in GHz");

  auto* sweep = app.add_subcommand("sweep", "gain and metrics over the band");
  sweep->add_option("--design", st.design_path, "design JSON to sweep");

  auto* exp = app.add_subcommand("export-stl", "write printable mesh files");
  exp->add_option("--design", st.design_path, "design JSON to mesh");
  exp->add_flag("--force", st.force, "export even when not watertight");

  auto* report = app.add_subcommand("report", "human-readable run summary");
  report->add_option("--design", st.design_path, "design JSON to report on");
  report->add_option("--freq", st.freq_ghz, "metrics frequency in GHz");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error(2, "config", e.what());
    return 2;
  }

  try {
    if (app.got_subcommand(ingest)) return cmd_ingest(st);
    if (app.got_subcommand(synth)) return cmd_synthesize(st);
    if (app.got_subcommand(analyze)) return cmd_analyze(st);
    if (app.got_subcommand(sweep)) return cmd_sweep(st);
    if (app.got_subcommand(exp)) return cmd_export_stl(st);
    if (app.got_subcommand(report)) return cmd_report(st);
  } catch (const mfra::ConfigError& e) {
    print_error(2, "config", e.what());
    return 2;
  } catch (const mfra::TableIngestError& e) {
    print_error(2, "config", e.what());
    return 2;
  } catch (const mfra::SynthesisError& e) {
    print_error(3, "synthesis", e.what());
    return 3;
  } catch (const mfra::CoverageError& e) {
    print_error(3, "coverage", e.what());
    return 3;
  } catch (const mfra::AssemblyError& e) {
    print_error(3, "assembly", e.what());
    return 3;
  } catch (const std::ios_base::failure& e) {
    print_error(4, "io", e.what());
    return 4;
  } catch (const std::exception& e) {
    print_error(2, "config", e.what());
    return 2;
  }
  return 0;
}
