#include "mfra/layout.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mfra/version.hpp"

namespace mfra {

namespace {

using Json = nlohmann::ordered_json;

constexpr int kDesignSchemaVersion = 1;

std::string geometry_bucket(const CellGeometry& g) {
  std::ostringstream os;
  os << g.lx << '/' << g.ly << '/' << g.hu;
  return os.str();
}

}  // namespace

bool FeedCutout::contains(double x_mm, double y_mm) const {
  const double a = deg2rad(rotation_deg);
  const double c = std::cos(a);
  const double s = std::sin(a);
  // Coordinates of the point in the cutout's own frame.
  const double u = c * x_mm + s * y_mm;
  const double v = -s * x_mm + c * y_mm;
  return std::abs(u) <= width_mm / 2.0 && std::abs(v) <= length_mm / 2.0;
}

double virtual_focus(double fold_height_h_mm) {
  if (!(fold_height_h_mm > 0.0)) {
    throw std::domain_error("fold height must be positive, got " +
                            std::to_string(fold_height_h_mm) + " mm");
  }
  return 2.0 * fold_height_h_mm;
}

double FoldedGeometry::virtual_focal_f_mm() const {
  return virtual_focus(fold_height_h_mm);
}

ApertureLayout generate_lattice(const FoldedGeometry& geom) {
  const LatticeSpec& lat = geom.lattice;
  if (!(lat.period_mm > 0.0) || !(lat.neighbor_spacing_mm > 0.0)) {
    throw ConfigError("lattice pitches must be positive");
  }
  if (lat.tile_cols < 1 || lat.tile_rows < 1) {
    throw ConfigError("tile dimensions must be at least 1x1");
  }
  if (!(geom.aperture_d_mm > 0.0)) {
    throw ConfigError("aperture size must be positive");
  }

  const double half = geom.aperture_d_mm / 2.0;
  // Content extents of one tile: columns spaced P with the stagger added,
  // rows spaced by the neighbour distance.
  const double span_x =
      lat.period_mm * (lat.tile_cols - 1) + lat.neighbor_spacing_mm;
  const double span_y = lat.neighbor_spacing_mm * (lat.tile_rows - 1);
  const double x0 = (half - span_x) / 2.0;
  const double y0 = (half - span_y) / 2.0;
  if (x0 < 0.0 || y0 < 0.0) {
    throw ConfigError("tile of " + std::to_string(lat.tile_cols) + "x" +
                      std::to_string(lat.tile_rows) +
                      " cells does not fit a quadrant of " +
                      std::to_string(half) + " mm");
  }

  ApertureLayout out;
  out.geometry = geom;

  const int sx[4] = {+1, -1, -1, +1};
  const int sy[4] = {+1, +1, -1, -1};
  for (int q = 0; q < 4; ++q) {
    int kept = 0;
    for (int row = 0; row < lat.tile_rows; ++row) {
      const double stagger = (row % 2 == 1) ? lat.neighbor_spacing_mm : 0.0;
      const double y = y0 + lat.neighbor_spacing_mm * row;
      for (int col = 0; col < lat.tile_cols; ++col) {
        const double x = x0 + lat.period_mm * col + stagger;
        LatticeElement e{sx[q] * x, sy[q] * y, q + 1};
        if (geom.remove_elements_in_cutout &&
            geom.feed_cutout.contains(e.x_mm, e.y_mm)) {
          ++out.removed_by_cutout;
          continue;
        }
        out.elements.push_back(e);
        ++kept;
      }
    }
    if (kept == 0) {
      throw ConfigError("feed cutout swallows the entire quadrant-" +
                        std::to_string(q + 1) + " tile");
    }
  }
  return out;
}

double required_phase(double x_mm, double y_mm, Frequency f,
                      const FoldedGeometry& geom, double phase_offset_deg) {
  const double focal = geom.virtual_focal_f_mm();
  const double path =
      std::sqrt(x_mm * x_mm + y_mm * y_mm + focal * focal) - focal;
  return wrap_deg(360.0 / wavelength_mm(f) * path + phase_offset_deg);
}

DesignedAperture synthesize(const ApertureLayout& layout,
                            const PhaseSource& source, Frequency f0,
                            double min_cross_mag,
                            std::optional<double> phase_offset_deg) {
  CoverageInterval cov;
  try {
    cov = source.coverage_interval(f0, min_cross_mag);
  } catch (const CoverageError& e) {
    throw SynthesisError(std::string("phase coverage unavailable: ") +
                             e.what(),
                         e.achievable_span_deg());
  }
  if (cov.span() < 360.0) {
    throw SynthesisError("phase coverage " + std::to_string(cov.span()) +
                             " deg is below the 360 deg needed for synthesis",
                         cov.span());
  }

  const double offset = phase_offset_deg.has_value()
                            ? *phase_offset_deg
                            : wrap_deg((cov.lo_deg + cov.hi_deg) / 2.0);

  DesignedAperture design;
  design.geometry = layout.geometry;
  design.f0_ghz = f0.ghz;
  design.min_cross_mag = min_cross_mag;
  design.phase_offset_deg = offset;
  design.stats.coverage_span_deg = cov.span();

  std::vector<const LatticeElement*> order;
  order.reserve(layout.elements.size());
  for (const auto& e : layout.elements) order.push_back(&e);
  std::sort(order.begin(), order.end(),
            [](const LatticeElement* a, const LatticeElement* b) {
              if (a->y_mm != b->y_mm) return a->y_mm < b->y_mm;
              return a->x_mm < b->x_mm;
            });

  double sum_sq = 0.0;
  double sum_mag = 0.0;
  double min_mag = 2.0;
  for (const auto* le : order) {
    DesignedElement de;
    de.at = *le;
    de.required_phase_deg =
        required_phase(le->x_mm, le->y_mm, f0, layout.geometry, offset);
    const SourceSample pick =
        source.lookup(de.required_phase_deg, f0, min_cross_mag);
    de.geometry = pick.geometry;
    de.achieved_rxy = pick.r_xy;
    de.phase_error_deg =
        wrap_deg_pm180(arg_deg(pick.r_xy) - de.required_phase_deg);
    design.elements.push_back(de);

    sum_sq += de.phase_error_deg * de.phase_error_deg;
    const double mag = std::abs(pick.r_xy);
    sum_mag += mag;
    min_mag = std::min(min_mag, mag);
    design.stats.max_abs_phase_error_deg = std::max(
        design.stats.max_abs_phase_error_deg, std::abs(de.phase_error_deg));
    ++design.stats.geometry_histogram[geometry_bucket(pick.geometry)];
  }
  const double n = static_cast<double>(design.elements.size());
  if (n > 0) {
    design.stats.rms_phase_error_deg = std::sqrt(sum_sq / n);
    design.stats.mean_cross_mag_achieved = sum_mag / n;
    design.stats.min_cross_mag_achieved = min_mag;
  }
  return design;
}

std::string design_to_json(const DesignedAperture& design,
                           const std::string& config_hash) {
  Json j;
  j["schema_version"] = kDesignSchemaVersion;
  j["toolkit_version"] = kToolkitVersion;
  j["config_hash"] = config_hash;
  const FoldedGeometry& g = design.geometry;
  j["folded_geometry"] = {
      {"fold_height_h_mm", g.fold_height_h_mm},
      {"aperture_d_mm", g.aperture_d_mm},
      {"virtual_focal_f_mm", g.virtual_focal_f_mm()},
      {"feed_cutout",
       {{"width_mm", g.feed_cutout.width_mm},
        {"length_mm", g.feed_cutout.length_mm},
        {"rotation_deg", g.feed_cutout.rotation_deg}}},
      {"lattice",
       {{"period_mm", g.lattice.period_mm},
        {"neighbor_spacing_mm", g.lattice.neighbor_spacing_mm},
        {"tile_cols", g.lattice.tile_cols},
        {"tile_rows", g.lattice.tile_rows}}},
      {"remove_elements_in_cutout", g.remove_elements_in_cutout}};
  j["frequency_ghz"] = design.f0_ghz;
  j["min_cross_mag"] = design.min_cross_mag;
  j["phase_offset_deg"] = design.phase_offset_deg;
  j["stats"] = {
      {"rms_phase_error_deg", design.stats.rms_phase_error_deg},
      {"max_abs_phase_error_deg", design.stats.max_abs_phase_error_deg},
      {"min_cross_mag_achieved", design.stats.min_cross_mag_achieved},
      {"mean_cross_mag_achieved", design.stats.mean_cross_mag_achieved},
      {"coverage_span_deg", design.stats.coverage_span_deg},
      {"geometry_histogram", design.stats.geometry_histogram}};

  Json elems = Json::array();
  for (const auto& e : design.elements) {
    elems.push_back({{"x_mm", e.at.x_mm},
                     {"y_mm", e.at.y_mm},
                     {"quadrant", e.at.quadrant},
                     {"geometry",
                      {{"lx", e.geometry.lx},
                       {"ly", e.geometry.ly},
                       {"hu", e.geometry.hu},
                       {"w1", e.geometry.w1},
                       {"w2", e.geometry.w2}}},
                     {"required_phase_deg", e.required_phase_deg},
                     {"achieved_rxy",
                      {{"re", e.achieved_rxy.real()},
                       {"im", e.achieved_rxy.imag()}}},
                     {"phase_error_deg", e.phase_error_deg},
                     {"omitted", e.omitted}});
  }
  j["elements"] = std::move(elems);
  return j.dump(2) + "\n";
}

void export_design(const DesignedAperture& design, const std::string& path,
                   const std::string& config_hash) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::ios_base::failure("cannot open '" + path + "' for writing");
  }
  out << design_to_json(design, config_hash);
  if (!out) {
    throw std::ios_base::failure("failed writing design to '" + path + "'");
  }
}

DesignedAperture design_from_json(const std::string& json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("malformed design file: ") +
                             e.what());
  }
  if (!j.contains("schema_version") ||
      j["schema_version"].get<int>() != kDesignSchemaVersion) {
    const std::string got =
        j.contains("schema_version") ? j["schema_version"].dump() : "absent";
    throw std::runtime_error("design schema version " + got +
                             " not supported (expected " +
                             std::to_string(kDesignSchemaVersion) + ")");
  }

  DesignedAperture d;
  const Json& fg = j.at("folded_geometry");
  d.geometry.fold_height_h_mm = fg.at("fold_height_h_mm").get<double>();
  d.geometry.aperture_d_mm = fg.at("aperture_d_mm").get<double>();
  const Json& fc = fg.at("feed_cutout");
  d.geometry.feed_cutout.width_mm = fc.at("width_mm").get<double>();
  d.geometry.feed_cutout.length_mm = fc.at("length_mm").get<double>();
  d.geometry.feed_cutout.rotation_deg = fc.at("rotation_deg").get<double>();
  const Json& lat = fg.at("lattice");
  d.geometry.lattice.period_mm = lat.at("period_mm").get<double>();
  d.geometry.lattice.neighbor_spacing_mm =
      lat.at("neighbor_spacing_mm").get<double>();
  d.geometry.lattice.tile_cols = lat.at("tile_cols").get<int>();
  d.geometry.lattice.tile_rows = lat.at("tile_rows").get<int>();
  d.geometry.remove_elements_in_cutout =
      fg.at("remove_elements_in_cutout").get<bool>();
  d.f0_ghz = j.at("frequency_ghz").get<double>();
  d.min_cross_mag = j.at("min_cross_mag").get<double>();
  d.phase_offset_deg = j.at("phase_offset_deg").get<double>();
  const Json& st = j.at("stats");
  d.stats.rms_phase_error_deg = st.at("rms_phase_error_deg").get<double>();
  d.stats.max_abs_phase_error_deg =
      st.at("max_abs_phase_error_deg").get<double>();
  d.stats.min_cross_mag_achieved =
      st.at("min_cross_mag_achieved").get<double>();
  d.stats.mean_cross_mag_achieved =
      st.at("mean_cross_mag_achieved").get<double>();
  d.stats.coverage_span_deg = st.at("coverage_span_deg").get<double>();
  for (auto it = st.at("geometry_histogram").begin();
       it != st.at("geometry_histogram").end(); ++it) {
    d.stats.geometry_histogram[it.key()] = it.value().get<int>();
  }

  for (const Json& je : j.at("elements")) {
    DesignedElement e;
    e.at.x_mm = je.at("x_mm").get<double>();
    e.at.y_mm = je.at("y_mm").get<double>();
    e.at.quadrant = je.at("quadrant").get<int>();
    const Json& jg = je.at("geometry");
    e.geometry.lx = jg.at("lx").get<double>();
    e.geometry.ly = jg.at("ly").get<double>();
    e.geometry.hu = jg.at("hu").get<double>();
    e.geometry.w1 = jg.at("w1").get<double>();
    e.geometry.w2 = jg.at("w2").get<double>();
    e.required_phase_deg = je.at("required_phase_deg").get<double>();
    e.achieved_rxy = Complex(je.at("achieved_rxy").at("re").get<double>(),
                             je.at("achieved_rxy").at("im").get<double>());
    e.phase_error_deg = je.at("phase_error_deg").get<double>();
    e.omitted = je.at("omitted").get<bool>();
    d.elements.push_back(e);
  }
  return d;
}

DesignedAperture import_design(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::ios_base::failure("cannot open design file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return design_from_json(ss.str());
}

}  // namespace mfra
