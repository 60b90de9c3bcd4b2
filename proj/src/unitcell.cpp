#include "mfra/unitcell.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

namespace mfra {

namespace {

constexpr double kPassivityTol = 1e-6;

std::string fmt_g17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

using GeomKey = std::tuple<double, double, double, double, double>;

GeomKey geom_key(const CellGeometry& g) {
  return {g.lx, g.ly, g.hu, g.w1, g.w2};
}

}  // namespace

void CellGeometry::validate() const {
  if (!(lx > 0.0) || !(ly > 0.0)) {
    throw std::invalid_argument("cell arm lengths must be positive");
  }
  if (lx > period || ly > period) {
    throw std::invalid_argument("cell arm length exceeds lattice period");
  }
  if (!(hu > 0.0) || !(w1 > 0.0) || !(w2 > 0.0) || !(substrate_h > 0.0)) {
    throw std::invalid_argument("cell heights and widths must be positive");
  }
}

JonesMatrix rms_jones(const EigenReflection& eig) {
  JonesMatrix diag = JonesMatrix::Zero();
  diag(0, 0) = eig.r_u;
  diag(1, 1) = eig.r_v;
  return rotate_basis(diag, 45.0);
}

ConversionRatio conversion_ratio(const EigenReflection& eig) {
  const JonesMatrix j = rms_jones(eig);
  const Complex cross = j(0, 1);  // y-in -> x-out
  const Complex co = j(1, 1);     // y-in -> y-out
  return {std::abs(cross), std::abs(co), wrap_deg(arg_deg(cross))};
}

double surrogate_axis_phase_deg(double arm_mm, double height_mm,
                                double width_mm, Frequency f,
                                const SurrogateParams& p) {
  // Electrical arm length grows with frequency, tempered by the dispersion
  // factor of the stacked-resonance cell.
  const double l_eff =
      arm_mm * (1.0 + p.dispersion_factor * (f.ghz / p.reference_freq_ghz - 1.0));
  const double w_shift = p.width_pull_mm_per_mm * (width_mm - p.reference_width_mm);
  // Height coefficient is stated in deg/mm; divide by the resonance slope to
  // express it as the equivalent arm-length shift of the second resonance.
  const double h_shift_mm =
      (p.height_shift_deg_per_mm / p.slope2_deg_per_mm) *
      (height_mm - p.reference_height_mm);
  const double c1 = p.resonance_l1_mm + w_shift;
  const double c2 = p.resonance_l2_mm + w_shift + h_shift_mm;
  const double k1 = p.slope1_deg_per_mm * kPi / 360.0;
  const double k2 = p.slope2_deg_per_mm * kPi / 360.0;
  return -(360.0 / kPi) *
         (std::atan(k1 * (l_eff - c1)) + std::atan(k2 * (l_eff - c2)));
}

EigenReflection surrogate_eigen(const CellGeometry& g, Frequency f,
                                const SurrogateParams& p) {
  for (double arm : {g.lx, g.ly}) {
    if (arm < p.l_min_mm || arm > p.l_max_mm) {
      throw std::out_of_range("arm length " + std::to_string(arm) +
                              " mm outside surrogate sweep range [" +
                              std::to_string(p.l_min_mm) + ", " +
                              std::to_string(p.l_max_mm) + "]");
    }
  }
  const double mag = 1.0 - p.loss_floor;
  const double phi_u = surrogate_axis_phase_deg(g.lx, g.hu, g.w1, f, p);
  const double phi_v = surrogate_axis_phase_deg(g.ly, g.hu, g.w2, f, p);
  return {from_polar_deg(mag, phi_u), from_polar_deg(mag, phi_v), f};
}

TableIngestError::TableIngestError(const std::string& msg,
                                   std::vector<std::size_t> lines)
    : std::runtime_error(msg), lines_(std::move(lines)) {}

CoverageError::CoverageError(const std::string& msg,
                             double achievable_span_deg)
    : std::runtime_error(msg), span_(achievable_span_deg) {}

PhaseTable::PhaseTable(std::vector<PhaseTableEntry> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw TableIngestError("no entries", {});
  }
}

std::vector<double> PhaseTable::frequencies_ghz() const {
  std::vector<double> fs;
  for (const auto& e : entries_) {
    if (std::find(fs.begin(), fs.end(), e.freq_ghz) == fs.end()) {
      fs.push_back(e.freq_ghz);
    }
  }
  std::sort(fs.begin(), fs.end());
  return fs;
}

std::vector<PhaseTableEntry> PhaseTable::at(Frequency f) const {
  const auto fs = frequencies_ghz();
  const double q = f.ghz;
  const double tol = 1e-9;

  auto exact = [&](double fg) { return std::abs(fg - q) <= tol; };
  if (std::any_of(fs.begin(), fs.end(), exact)) {
    std::vector<PhaseTableEntry> out;
    for (const auto& e : entries_) {
      if (exact(e.freq_ghz)) out.push_back(e);
    }
    return out;
  }

  if (q < fs.front() - tol || q > fs.back() + tol || fs.size() < 2) {
    throw std::out_of_range("frequency " + std::to_string(q) +
                            " GHz outside tabulated band [" +
                            std::to_string(fs.front()) + ", " +
                            std::to_string(fs.back()) + "]");
  }

  auto hi_it = std::upper_bound(fs.begin(), fs.end(), q);
  const double f_hi = *hi_it;
  const double f_lo = *(hi_it - 1);
  const double t = (q - f_lo) / (f_hi - f_lo);

  // Pair entries of the two bracketing frequencies by geometry; interpolate
  // magnitude linearly and phase linearly on the minimally unwrapped arc.
  std::map<GeomKey, const PhaseTableEntry*> lo_map;
  for (const auto& e : entries_) {
    if (e.freq_ghz == f_lo) lo_map[geom_key(e.geometry)] = &e;
  }
  std::vector<PhaseTableEntry> out;
  auto lerp = [&](const Complex& a, const Complex& b) {
    const double mag = (1.0 - t) * std::abs(a) + t * std::abs(b);
    double pa = arg_deg(a);
    const double pb = pa + wrap_deg_pm180(arg_deg(b) - pa);
    return from_polar_deg(mag, (1.0 - t) * pa + t * pb);
  };
  for (const auto& e : entries_) {
    if (e.freq_ghz != f_hi) continue;
    auto it = lo_map.find(geom_key(e.geometry));
    if (it == lo_map.end()) continue;
    PhaseTableEntry r = e;
    r.freq_ghz = q;
    r.r_xy = lerp(it->second->r_xy, e.r_xy);
    r.r_yy = lerp(it->second->r_yy, e.r_yy);
    out.push_back(r);
  }
  if (out.empty()) {
    throw std::out_of_range(
        "no geometry tabulated at both bracketing frequencies around " +
        std::to_string(q) + " GHz");
  }
  return out;
}

PhaseTable ingest_phase_table(std::istream& in) {
  static const char* kHeader[] = {"freq_ghz", "lx_mm",  "ly_mm",  "hu_mm",
                                  "w1_mm",    "w2_mm",  "re_rxy", "im_rxy",
                                  "re_ryy",   "im_ryy"};
  constexpr int kCols = 10;

  auto split = [](const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) {
      const auto b = cur.find_first_not_of(" \t\r");
      const auto e = cur.find_last_not_of(" \t\r");
      fields.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return fields;
  };

  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line)) {
    throw TableIngestError("no entries", {});
  }
  ++line_no;
  const auto header = split(line);
  if (header.size() != kCols) {
    throw TableIngestError("header has " + std::to_string(header.size()) +
                               " columns, expected " + std::to_string(kCols),
                           {line_no});
  }
  for (int i = 0; i < kCols; ++i) {
    if (header[i] != kHeader[i]) {
      throw TableIngestError("unexpected header column '" + header[i] +
                                 "', expected '" + kHeader[i] + "'",
                             {line_no});
    }
  }

  std::vector<PhaseTableEntry> entries;
  std::map<std::pair<double, GeomKey>, std::size_t> seen;
  std::vector<std::size_t> bad_rows;
  std::string first_problem;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() != kCols) {
      bad_rows.push_back(line_no);
      if (first_problem.empty()) {
        first_problem = "row has " + std::to_string(fields.size()) +
                        " columns, expected " + std::to_string(kCols);
      }
      continue;
    }
    double v[kCols];
    bool parse_ok = true;
    for (int i = 0; i < kCols; ++i) {
      try {
        std::size_t pos = 0;
        v[i] = std::stod(fields[i], &pos);
        if (pos != fields[i].size()) parse_ok = false;
      } catch (const std::exception&) {
        parse_ok = false;
      }
    }
    if (!parse_ok) {
      bad_rows.push_back(line_no);
      if (first_problem.empty()) first_problem = "malformed numeric field";
      continue;
    }

    PhaseTableEntry e;
    e.freq_ghz = v[0];
    e.geometry.lx = v[1];
    e.geometry.ly = v[2];
    e.geometry.hu = v[3];
    e.geometry.w1 = v[4];
    e.geometry.w2 = v[5];
    e.r_xy = Complex(v[6], v[7]);
    e.r_yy = Complex(v[8], v[9]);

    if (!(e.freq_ghz > 0.0)) {
      bad_rows.push_back(line_no);
      if (first_problem.empty()) first_problem = "non-positive frequency";
      continue;
    }
    const double power = std::norm(e.r_xy) + std::norm(e.r_yy);
    if (power > 1.0 + kPassivityTol) {
      bad_rows.push_back(line_no);
      if (first_problem.empty()) {
        first_problem = "passivity violation |rxy|^2+|ryy|^2 = " +
                        std::to_string(power);
      }
      continue;
    }
    const auto key = std::make_pair(e.freq_ghz, geom_key(e.geometry));
    auto [it, inserted] = seen.emplace(key, line_no);
    if (!inserted) {
      bad_rows.push_back(line_no);
      if (first_problem.empty()) {
        first_problem = "duplicate (geometry, frequency) key, first at line " +
                        std::to_string(it->second);
      }
      continue;
    }
    entries.push_back(e);
  }

  if (!bad_rows.empty()) {
    std::string msg = first_problem + " (" + std::to_string(bad_rows.size()) +
                      " offending line(s):";
    for (std::size_t r : bad_rows) msg += " " + std::to_string(r);
    msg += ")";
    throw TableIngestError(msg, bad_rows);
  }
  if (entries.empty()) {
    throw TableIngestError("no entries", {});
  }
  return PhaseTable(std::move(entries));
}

void export_phase_table(const PhaseTable& table, std::ostream& out) {
  out << "freq_ghz,lx_mm,ly_mm,hu_mm,w1_mm,w2_mm,re_rxy,im_rxy,re_ryy,im_ryy\n";
  for (const auto& e : table.entries()) {
    out << fmt_g17(e.freq_ghz) << ',' << fmt_g17(e.geometry.lx) << ','
        << fmt_g17(e.geometry.ly) << ',' << fmt_g17(e.geometry.hu) << ','
        << fmt_g17(e.geometry.w1) << ',' << fmt_g17(e.geometry.w2) << ','
        << fmt_g17(e.r_xy.real()) << ',' << fmt_g17(e.r_xy.imag()) << ','
        << fmt_g17(e.r_yy.real()) << ',' << fmt_g17(e.r_yy.imag()) << '\n';
  }
}

JonesMatrix PhaseSource::element_jones(const CellGeometry& g,
                                       const Complex& /*achieved_rxy*/,
                                       Frequency f) const {
  return jones(g, f);
}

SourceSample PhaseSource::lookup(double target_phase_deg, Frequency f,
                                 double min_cross_mag) const {
  const auto all = samples(f);
  const SourceSample* best = nullptr;
  double best_dist = 0.0;
  double max_mag = 0.0;
  for (const auto& s : all) {
    const double mag = std::abs(s.r_xy);
    max_mag = std::max(max_mag, mag);
    if (mag < min_cross_mag) continue;
    const double dist =
        std::abs(wrap_deg_pm180(arg_deg(s.r_xy) - target_phase_deg));
    if (best == nullptr || dist < best_dist ||
        (dist == best_dist &&
         (mag > std::abs(best->r_xy) ||
          (mag == std::abs(best->r_xy) &&
           s.geometry.lx + s.geometry.ly <
               best->geometry.lx + best->geometry.ly)))) {
      best = &s;
      best_dist = dist;
    }
  }
  if (best == nullptr) {
    double span = 0.0;
    try {
      span = coverage_interval(f, min_cross_mag).span();
    } catch (const CoverageError&) {
    }
    throw CoverageError(
        "no geometry reaches |r_xy| >= " + std::to_string(min_cross_mag) +
            " at " + std::to_string(f.ghz) + " GHz (max available " +
            std::to_string(max_mag) + "); achievable span " +
            std::to_string(span) + " deg",
        span);
  }
  return *best;
}

CoverageInterval PhaseSource::coverage_interval(Frequency f,
                                                double min_cross_mag) const {
  const auto all = samples(f);
  std::vector<const SourceSample*> q;
  for (const auto& s : all) {
    if (std::abs(s.r_xy) >= min_cross_mag) q.push_back(&s);
  }
  if (q.size() < 2) {
    throw CoverageError("fewer than 2 samples reach |r_xy| >= " +
                            std::to_string(min_cross_mag) + " at " +
                            std::to_string(f.ghz) + " GHz",
                        0.0);
  }

  std::vector<double> phases;
  phases.reserve(q.size());
  if (q.front()->has_unwrapped) {
    for (const auto* s : q) phases.push_back(s->cross_phase_unwrapped_deg);
  } else {
    // Unwrap along the source's parameter order. A listing whose wrapped
    // phases are already monotone is taken at face value; otherwise each
    // step is lifted by the minimal jump.
    std::vector<double> raw;
    raw.reserve(q.size());
    for (const auto* s : q) raw.push_back(wrap_deg(arg_deg(s->r_xy)));
    bool inc = true, dec = true;
    for (std::size_t i = 1; i < raw.size(); ++i) {
      if (raw[i] < raw[i - 1]) inc = false;
      if (raw[i] > raw[i - 1]) dec = false;
    }
    if (inc || dec) {
      phases = raw;
    } else {
      phases.push_back(raw[0]);
      for (std::size_t i = 1; i < raw.size(); ++i) {
        phases.push_back(phases[i - 1] + wrap_deg_pm180(raw[i] - raw[i - 1]));
      }
    }
  }
  const auto [lo, hi] = std::minmax_element(phases.begin(), phases.end());
  return {*lo, *hi};
}

CellGeometry lookup_geometry(double target_phase_deg, Frequency f,
                             const PhaseSource& source, double min_cross_mag) {
  return source.lookup(target_phase_deg, f, min_cross_mag).geometry;
}

double phase_coverage(const PhaseSource& source, Frequency f,
                      double min_cross_mag) {
  return source.coverage_interval(f, min_cross_mag).span();
}

SurrogateSource::SurrogateSource(SurrogateParams params, double grid_step_mm,
                                 std::vector<double> heights_mm)
    : params_(params), grid_step_(grid_step_mm), heights_(std::move(heights_mm)) {
  if (!(grid_step_ > 0.0)) {
    throw std::invalid_argument("surrogate grid step must be positive");
  }
  if (heights_.empty()) {
    throw std::invalid_argument("surrogate needs at least one element height");
  }
}

std::vector<SourceSample> SurrogateSource::samples(Frequency f) const {
  for (const auto& [fg, cached] : cache_) {
    if (fg == f.ghz) return cached;
  }

  std::vector<double> arms;
  for (double l = params_.l_min_mm; l <= params_.l_max_mm + 1e-12;
       l += grid_step_) {
    arms.push_back(std::min(l, params_.l_max_mm));
  }

  const double mag = 1.0 - params_.loss_floor;
  std::vector<SourceSample> out;
  out.reserve(arms.size() * arms.size() * heights_.size());
  for (double hu : heights_) {
    // Per-height axis phases are reused across the (lx, ly) grid.
    std::vector<double> phases(arms.size());
    for (std::size_t i = 0; i < arms.size(); ++i) {
      phases[i] = surrogate_axis_phase_deg(arms[i], hu,
                                           params_.reference_width_mm, f,
                                           params_);
    }
    for (std::size_t ix = 0; ix < arms.size(); ++ix) {
      for (std::size_t iy = 0; iy < arms.size(); ++iy) {
        const double phi_u = phases[ix];
        const double phi_v = phases[iy];
        SourceSample s;
        s.geometry.lx = arms[ix];
        s.geometry.ly = arms[iy];
        s.geometry.hu = hu;
        s.geometry.w1 = params_.reference_width_mm;
        s.geometry.w2 = params_.reference_width_mm;
        const Complex r_u = from_polar_deg(mag, phi_u);
        const Complex r_v = from_polar_deg(mag, phi_v);
        s.r_xy = (r_u - r_v) / 2.0;
        s.r_yy = (r_u + r_v) / 2.0;
        const double half_delta = (phi_u - phi_v) / 2.0;
        const double sgn = std::sin(deg2rad(half_delta));
        s.cross_phase_unwrapped_deg =
            (phi_u + phi_v) / 2.0 + (sgn >= 0.0 ? 90.0 : -90.0);
        s.has_unwrapped = true;
        out.push_back(s);
      }
    }
  }
  cache_.emplace_back(f.ghz, out);
  return out;
}

JonesMatrix SurrogateSource::jones(const CellGeometry& g, Frequency f) const {
  return rms_jones(surrogate_eigen(g, f, params_));
}

TableSource::TableSource(PhaseTable table) : table_(std::move(table)) {
  if (table_.empty()) {
    throw std::invalid_argument("table source needs a non-empty table");
  }
}

std::vector<SourceSample> TableSource::samples(Frequency f) const {
  std::vector<SourceSample> out;
  for (const auto& e : table_.at(f)) {
    SourceSample s;
    s.geometry = e.geometry;
    s.r_xy = e.r_xy;
    s.r_yy = e.r_yy;
    out.push_back(s);
  }
  return out;
}

JonesMatrix TableSource::jones(const CellGeometry& g, Frequency f) const {
  const auto all = table_.at(f);
  const PhaseTableEntry* best = nullptr;
  double best_d2 = 0.0;
  for (const auto& e : all) {
    const double d2 = (e.geometry.lx - g.lx) * (e.geometry.lx - g.lx) +
                      (e.geometry.ly - g.ly) * (e.geometry.ly - g.ly) +
                      (e.geometry.hu - g.hu) * (e.geometry.hu - g.hu) +
                      (e.geometry.w1 - g.w1) * (e.geometry.w1 - g.w1) +
                      (e.geometry.w2 - g.w2) * (e.geometry.w2 - g.w2);
    if (best == nullptr || d2 < best_d2) {
      best = &e;
      best_d2 = d2;
    }
  }
  // The symmetric-cell operator is fully determined by the tabulated pair:
  // J = [[r_yy, r_xy], [r_xy, r_yy]].
  JonesMatrix j;
  j << best->r_yy, best->r_xy, best->r_xy, best->r_yy;
  return j;
}

std::vector<SourceSample> IdealSource::samples(Frequency) const {
  throw std::logic_error("ideal source has no sample grid");
}

JonesMatrix IdealSource::jones(const CellGeometry&, Frequency) const {
  throw std::logic_error("ideal source carries no geometry model");
}

JonesMatrix IdealSource::element_jones(const CellGeometry&,
                                       const Complex& achieved_rxy,
                                       Frequency) const {
  JonesMatrix j;
  j << 0.0, achieved_rxy, achieved_rxy, 0.0;
  return j;
}

SourceSample IdealSource::lookup(double target_phase_deg, Frequency,
                                 double min_cross_mag) const {
  if (min_cross_mag > 1.0) {
    throw CoverageError("ideal source magnitude is 1.0, below threshold " +
                            std::to_string(min_cross_mag),
                        0.0);
  }
  SourceSample s;
  s.geometry = CellGeometry{};
  s.geometry.lx = 1.0;
  s.geometry.ly = 1.0;
  s.r_xy = from_polar_deg(1.0, target_phase_deg);
  s.r_yy = 0.0;
  s.cross_phase_unwrapped_deg = target_phase_deg;
  s.has_unwrapped = true;
  return s;
}

CoverageInterval IdealSource::coverage_interval(Frequency,
                                                double min_cross_mag) const {
  if (min_cross_mag > 1.0) {
    throw CoverageError("ideal source magnitude is 1.0, below threshold " +
                            std::to_string(min_cross_mag),
                        0.0);
  }
  return {0.0, 360.0};
}

}  // namespace mfra
