#include "mfra/pofield.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace mfra {

namespace {

double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 32) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(data, h) + pairwise_sum(data + h, n - h);
}

void parallel_for(int n_threads, std::size_t n,
                  const std::function<void(std::size_t, std::size_t)>& chunk_fn) {
  if (n_threads <= 1 || n < 2) {
    chunk_fn(0, n);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(n_threads, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t per = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t b = w * per;
    const std::size_t e = std::min(n, b + per);
    if (b >= e) break;
    pool.emplace_back([&chunk_fn, b, e] { chunk_fn(b, e); });
  }
  for (auto& t : pool) t.join();
}

// Evaluates the aperture sum at single angles. Buffers live in a Workspace
// so several threads can evaluate concurrently; the per-element terms are
// reduced by pairwise summation, which keeps results independent of the
// thread count.
class FieldEvaluator {
 public:
  explicit FieldEvaluator(const ApertureField& ap)
      : x_(ap.x_mm),
        y_(ap.y_mm),
        co_re_(ap.co.real()),
        co_im_(ap.co.imag()),
        cx_re_(ap.cx.real()),
        cx_im_(ap.cx.imag()),
        k_(2.0 * kPi / wavelength_mm(Frequency(ap.freq_ghz))),
        scale_(ap.cell_area_mm2 / wavelength_mm(Frequency(ap.freq_ghz))),
        has_cx_(ap.cx.abs2().sum() > 0.0) {}

  struct Workspace {
    Eigen::ArrayXd phase, c, s, t;
  };

  std::size_t size() const { return static_cast<std::size_t>(x_.size()); }

  void eval(double theta_deg, double phi_deg, Workspace& ws, Complex& e_co,
            Complex& e_cx) const {
    const double th = deg2rad(theta_deg);
    const double ph = deg2rad(phi_deg);
    const double st = std::sin(th);
    const double ct = std::cos(th);
    const double ux = k_ * st * std::cos(ph);
    const double uy = k_ * st * std::sin(ph);
    const double factor = scale_ * ct;

    ws.phase = ux * x_ + uy * y_;
    ws.c = ws.phase.cos();
    ws.s = ws.phase.sin();

    const std::size_t n = size();
    ws.t = co_re_ * ws.c - co_im_ * ws.s;
    const double re_co = pairwise_sum(ws.t.data(), n);
    ws.t = co_re_ * ws.s + co_im_ * ws.c;
    const double im_co = pairwise_sum(ws.t.data(), n);
    e_co = factor * Complex(re_co, im_co);

    if (has_cx_) {
      ws.t = cx_re_ * ws.c - cx_im_ * ws.s;
      const double re_cx = pairwise_sum(ws.t.data(), n);
      ws.t = cx_re_ * ws.s + cx_im_ * ws.c;
      const double im_cx = pairwise_sum(ws.t.data(), n);
      e_cx = factor * Complex(re_cx, im_cx);
    } else {
      e_cx = 0.0;
    }
  }

 private:
  Eigen::ArrayXd x_, y_, co_re_, co_im_, cx_re_, cx_im_;
  double k_;
  double scale_;
  bool has_cx_;
};

struct CutSample {
  double theta_deg;
  double u_co;     // |E_co|^2
  double u_total;  // |E_co|^2 + |E_cx|^2
};

}  // namespace

double fit_cosq(double hpbw_deg) {
  if (!(hpbw_deg > 0.0) || !(hpbw_deg < 180.0)) {
    throw std::domain_error("half-power beamwidth must lie in (0, 180) deg");
  }
  const double c = std::cos(deg2rad(hpbw_deg / 2.0));
  return std::log(0.5) / (2.0 * std::log(c));
}

double cosq_directivity_dbi(double q) {
  if (!(q > 0.0)) {
    throw std::domain_error("cos^2q exponent must be positive");
  }
  return 10.0 * std::log10(2.0 * (2.0 * q + 1.0));
}

double spillover_cone(double q, double half_angle_deg) {
  return 1.0 - std::pow(std::cos(deg2rad(half_angle_deg)), 2.0 * q + 1.0);
}

double spillover_efficiency(const FeedModel& feed,
                            const FoldedGeometry& geom) {
  if (!(feed.q_exponent > 0.0)) {
    throw std::domain_error("feed exponent must be positive");
  }
  const double q = feed.q_exponent;
  const double focal = geom.virtual_focal_f_mm();
  const double half = geom.aperture_d_mm / 2.0;
  if (!(half > 0.0)) return 0.0;

  // Solid-angle integral of cos^{2q} over the square aperture seen from the
  // virtual focus: integrand F^{2q+1} / r^{2q+3} per unit aperture area.
  const int n = 1024;
  const double h = half / n;
  const double ex = -(q + 1.5);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = (i + 0.5) * h;
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double y = (j + 0.5) * h;
      row += std::pow(x * x + y * y + focal * focal, ex);
    }
    acc += row;
  }
  const double integral = 4.0 * acc * h * h * std::pow(focal, 2.0 * q + 1.0);
  return (2.0 * q + 1.0) / (2.0 * kPi) * integral;
}

double ApertureField::capture_efficiency() const {
  const double p_in = incident.abs2().sum();
  if (!(p_in > 0.0)) return 0.0;
  return (co.abs2().sum() + cx.abs2().sum()) / p_in;
}

ApertureField illuminate(const DesignedAperture& design, const FeedModel& feed,
                         const MpgModel& mpg, const PhaseSource& source,
                         Frequency f) {
  const double focal = design.geometry.virtual_focal_f_mm();
  const double lambda = wavelength_mm(f);
  const JonesMatrix reflect = mpg_reflect_jones(mpg, f);
  const JonesMatrix transmit = mpg_transmit_jones(mpg, f);

  std::vector<double> xs, ys;
  std::vector<Complex> inc, co, cx;
  for (const auto& e : design.elements) {
    if (e.omitted) continue;
    const double r = std::sqrt(e.at.x_mm * e.at.x_mm + e.at.y_mm * e.at.y_mm +
                               focal * focal);
    const double ct = focal / r;
    const double amp = std::pow(ct, feed.q_exponent) * (focal / r);
    const Complex a = from_polar_deg(amp, -360.0 / lambda * r);

    const JonesMatrix elem =
        source.element_jones(e.geometry, e.achieved_rxy, f);
    const JonesVector out =
        transmit * (elem * (reflect * (feed.polarization * a)));

    xs.push_back(e.at.x_mm);
    ys.push_back(e.at.y_mm);
    inc.push_back(a);
    co.push_back(out(0));
    cx.push_back(out(1));
  }

  ApertureField ap;
  const auto n = static_cast<Eigen::Index>(xs.size());
  ap.x_mm = Eigen::Map<const Eigen::ArrayXd>(xs.data(), n);
  ap.y_mm = Eigen::Map<const Eigen::ArrayXd>(ys.data(), n);
  ap.incident = Eigen::Map<const Eigen::ArrayXcd>(inc.data(), n);
  ap.co = Eigen::Map<const Eigen::ArrayXcd>(co.data(), n);
  ap.cx = Eigen::Map<const Eigen::ArrayXcd>(cx.data(), n);
  ap.cell_area_mm2 =
      design.geometry.lattice.period_mm * design.geometry.lattice.neighbor_spacing_mm;
  ap.freq_ghz = f.ghz;
  ap.nominal_chain_power =
      std::norm(mpg.r_parallel_at(f) * mpg.t_perp_at(f));
  return ap;
}

FarFieldPattern far_field(const ApertureField& ap,
                          const std::vector<double>& theta_deg,
                          const std::vector<double>& phi_deg, int n_threads) {
  if (theta_deg.empty() || phi_deg.empty()) {
    throw std::invalid_argument("far-field grids must be non-empty");
  }
  FieldEvaluator ev(ap);
  FarFieldPattern p;
  p.theta_deg = theta_deg;
  p.phi_deg = phi_deg;
  p.freq_ghz = ap.freq_ghz;
  const auto nt = static_cast<Eigen::Index>(theta_deg.size());
  const auto np = static_cast<Eigen::Index>(phi_deg.size());
  p.e_co.resize(nt, np);
  p.e_cx.resize(nt, np);

  parallel_for(n_threads, static_cast<std::size_t>(nt),
               [&](std::size_t b, std::size_t e) {
                 FieldEvaluator::Workspace ws;
                 for (std::size_t it = b; it < e; ++it) {
                   for (Eigen::Index ip = 0; ip < np; ++ip) {
                     Complex eco, ecx;
                     ev.eval(theta_deg[it], phi_deg[ip], ws, eco, ecx);
                     p.e_co(static_cast<Eigen::Index>(it), ip) = eco;
                     p.e_cx(static_cast<Eigen::Index>(it), ip) = ecx;
                   }
                 }
               });
  return p;
}

void write_pattern_csv(const FarFieldPattern& pattern, std::ostream& out) {
  double peak = 0.0;
  for (Eigen::Index i = 0; i < pattern.e_co.rows(); ++i) {
    for (Eigen::Index j = 0; j < pattern.e_co.cols(); ++j) {
      peak = std::max(peak, std::norm(pattern.e_co(i, j)));
    }
  }
  auto to_db = [&](double power) {
    if (!(power > 0.0) || !(peak > 0.0)) return -300.0;
    return std::max(-300.0, 10.0 * std::log10(power / peak));
  };
  out << "freq_ghz,phi_deg,theta_deg,co_db,cx_db\n";
  char buf[160];
  for (Eigen::Index j = 0; j < pattern.e_co.cols(); ++j) {
    for (Eigen::Index i = 0; i < pattern.e_co.rows(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6g,%.6g,%.6g,%.4f,%.4f\n",
                    pattern.freq_ghz, pattern.phi_deg[j], pattern.theta_deg[i],
                    to_db(std::norm(pattern.e_co(i, j))),
                    to_db(std::norm(pattern.e_cx(i, j))));
      out << buf;
    }
  }
}

void MetricsOptions::validate() const {
  if (!(main_step_deg > 0.0) || main_step_deg > 0.1) {
    throw std::invalid_argument(
        "main-beam resolution must be positive and at most 0.1 deg");
  }
  if (!(main_span_deg > main_step_deg) || main_span_deg > 90.0) {
    throw std::invalid_argument("main-beam span must lie in (step, 90] deg");
  }
  if (!(quad_theta_step_deg > 0.0) || !(quad_phi_step_deg > 0.0)) {
    throw std::invalid_argument("quadrature steps must be positive");
  }
  if (cut_phi_deg.empty()) {
    throw std::invalid_argument("at least one phi cut is required");
  }
}

namespace {

// theta samples of one phi cut: fine inside +-span, coarse out to +-90.
std::vector<double> cut_grid(const MetricsOptions& opt) {
  std::vector<double> neg, pos;
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
  grid.reserve(2 * pos.size() + 1);
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) grid.push_back(-*it);
  grid.push_back(0.0);
  for (double t : pos) grid.push_back(t);
  return grid;
}

double bisect_half_power(const FieldEvaluator& ev,
                         FieldEvaluator::Workspace& ws, double phi,
                         double theta_in, double theta_out, double half_level) {
  auto u_co = [&](double th) {
    Complex eco, ecx;
    ev.eval(th, phi, ws, eco, ecx);
    return std::norm(eco);
  };
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (theta_in + theta_out);
    if (u_co(mid) >= half_level) {
      theta_in = mid;
    } else {
      theta_out = mid;
    }
    if (std::abs(theta_out - theta_in) < 1e-7) break;
  }
  return 0.5 * (theta_in + theta_out);
}

}  // namespace

PatternMetrics metrics(const ApertureField& ap, const PowerBudget& budget,
                       const MetricsOptions& opt) {
  opt.validate();
  const FieldEvaluator ev(ap);
  const double lambda = wavelength_mm(Frequency(ap.freq_ghz));

  // Hemisphere quadrature, midpoint rule on two theta zones. Runs the phi
  // sweep of each theta row in parallel-safe chunks.
  struct ZoneSpec {
    double lo, hi, step;
  };
  const ZoneSpec zones[2] = {
      {0.0, opt.main_span_deg, opt.main_step_deg},
      {opt.main_span_deg, 90.0, opt.quad_theta_step_deg}};

  std::vector<double> theta_mid, theta_w;
  for (const auto& z : zones) {
    const int n = std::max(1, static_cast<int>(std::round((z.hi - z.lo) / z.step)));
    const double h = (z.hi - z.lo) / n;
    for (int i = 0; i < n; ++i) {
      theta_mid.push_back(z.lo + (i + 0.5) * h);
      theta_w.push_back(deg2rad(h));
    }
  }
  const int n_phi =
      std::max(4, static_cast<int>(std::round(360.0 / opt.quad_phi_step_deg)));
  const double phi_h = 360.0 / n_phi;

  std::vector<double> row_power(theta_mid.size(), 0.0);
  std::vector<double> row_max_u(theta_mid.size(), 0.0);
  std::vector<double> row_max_cx(theta_mid.size(), 0.0);
  parallel_for(opt.n_threads, theta_mid.size(),
               [&](std::size_t b, std::size_t e) {
                 FieldEvaluator::Workspace ws;
                 for (std::size_t i = b; i < e; ++i) {
                   const double sin_t = std::sin(deg2rad(theta_mid[i]));
                   double acc = 0.0;
                   double umax = 0.0, cmax = 0.0;
                   for (int j = 0; j < n_phi; ++j) {
                     Complex eco, ecx;
                     ev.eval(theta_mid[i], (j + 0.5) * phi_h, ws, eco, ecx);
                     const double u = std::norm(eco) + std::norm(ecx);
                     acc += u;
                     umax = std::max(umax, u);
                     cmax = std::max(cmax, std::norm(ecx));
                   }
                   row_power[i] = acc * sin_t * theta_w[i] * deg2rad(phi_h);
                   row_max_u[i] = umax;
                   row_max_cx[i] = cmax;
                 }
               });
  const double p_rad = pairwise_sum(row_power.data(), row_power.size());
  if (!(p_rad > 0.0)) {
    throw std::runtime_error("radiated power is zero; nothing to analyse");
  }

  FieldEvaluator::Workspace ws;
  Complex eco0, ecx0;
  ev.eval(0.0, 0.0, ws, eco0, ecx0);
  double u_peak = std::norm(eco0) + std::norm(ecx0);
  double max_cx = std::norm(ecx0);
  for (std::size_t i = 0; i < row_max_u.size(); ++i) {
    u_peak = std::max(u_peak, row_max_u[i]);
    max_cx = std::max(max_cx, row_max_cx[i]);
  }

  PatternMetrics m;
  m.freq_ghz = ap.freq_ghz;
  m.directivity_dbi = 10.0 * std::log10(4.0 * kPi * u_peak / p_rad);

  // Principal cuts: peak location, half-power width, worst sidelobe.
  double u_co_peak = 0.0;
  double worst_sll = -300.0;
  const auto grid = cut_grid(opt);
  for (std::size_t c = 0; c < opt.cut_phi_deg.size(); ++c) {
    const double phi = opt.cut_phi_deg[c];
    std::vector<CutSample> cut(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
      Complex eco, ecx;
      ev.eval(grid[i], phi, ws, eco, ecx);
      cut[i] = {grid[i], std::norm(eco), std::norm(eco) + std::norm(ecx)};
    }
    std::size_t ipk = 0;
    for (std::size_t i = 1; i < cut.size(); ++i) {
      if (cut[i].u_co > cut[ipk].u_co) ipk = i;
    }
    const double peak_theta = cut[ipk].theta_deg;
    const double u_pk = cut[ipk].u_co;
    u_co_peak = std::max(u_co_peak, u_pk);
    if (!(u_pk > 0.0)) {
      throw std::runtime_error("co-polar cut carries no power");
    }

    // March outward to the half-power brackets, then bisect.
    const double half = u_pk / 2.0;
    double edge[2] = {0.0, 0.0};
    bool found[2] = {false, false};
    const int dir[2] = {+1, -1};
    for (int d = 0; d < 2; ++d) {
      std::size_t i = ipk;
      while (true) {
        const std::size_t next = i + dir[d];
        if (next >= cut.size()) break;  // unsigned wrap also stops at 0
        if (cut[next].u_co < half) {
          edge[d] = bisect_half_power(ev, ws, phi, cut[i].theta_deg,
                                      cut[next].theta_deg, half);
          found[d] = true;
          break;
        }
        i = next;
        if (i == 0 || i + 1 == cut.size()) break;
      }
    }
    if (!found[0] || !found[1]) {
      throw std::runtime_error("main beam is not resolved on the phi=" +
                               std::to_string(phi) + " cut");
    }
    const double hpbw = edge[0] - edge[1];
    if (hpbw < 2.0 * opt.main_step_deg) {
      throw std::runtime_error(
          "main beam narrower than twice the grid step on the phi=" +
          std::to_string(phi) + " cut; refine main_step_deg");
    }

    // First local minimum beyond the half-power point bounds the main beam;
    // everything outside is sidelobe territory.
    double side_max = 0.0;
    for (int d = 0; d < 2; ++d) {
      std::size_t null_idx = ipk;
      bool have_null = false;
      for (std::size_t i = ipk; i + 1 < cut.size() && i >= 1;) {
        const std::size_t next = i + dir[d];
        if (next >= cut.size() || next == 0) break;
        const bool past_half = cut[next].u_co < half;
        const std::size_t nn = next + dir[d];
        if (past_half && nn < cut.size() &&
            cut[next].u_co <= cut[i].u_co && cut[next].u_co <= cut[nn].u_co) {
          null_idx = next;
          have_null = true;
          break;
        }
        i = next;
      }
      if (!have_null) continue;
      if (dir[d] > 0) {
        for (std::size_t i = null_idx + 1; i < cut.size(); ++i) {
          side_max = std::max(side_max, cut[i].u_co);
        }
      } else {
        for (std::size_t i = 0; i < null_idx; ++i) {
          side_max = std::max(side_max, cut[i].u_co);
        }
      }
    }
    if (side_max > 0.0) {
      worst_sll = std::max(worst_sll, 10.0 * std::log10(side_max / u_pk));
    }

    if (c == 0) {
      m.hpbw_xoz_deg = hpbw;
      m.peak_theta_xoz_deg = peak_theta;
    } else if (c == 1) {
      m.hpbw_yoz_deg = hpbw;
      m.peak_theta_yoz_deg = peak_theta;
    }
  }
  if (opt.cut_phi_deg.size() == 1) {
    m.hpbw_yoz_deg = m.hpbw_xoz_deg;
    m.peak_theta_yoz_deg = m.peak_theta_xoz_deg;
  }
  m.sll_db = worst_sll;
  m.xpol_db = (max_cx > 0.0 && u_co_peak > 0.0)
                  ? std::max(-300.0, 10.0 * std::log10(max_cx / u_co_peak))
                  : -300.0;

  const double eta_capture = ap.capture_efficiency();
  const double d_lin = 4.0 * kPi * u_peak / p_rad;
  const double g_lin = d_lin * budget.eta_spillover * eta_capture *
                       budget.eta_radiation;
  m.realized_gain_dbi = 10.0 * std::log10(g_lin);
  m.aperture_efficiency =
      g_lin * lambda * lambda /
      (4.0 * kPi * budget.aperture_d_mm * budget.aperture_d_mm);

  EfficiencyBreakdown& bd = m.breakdown;
  const double d_uniform_lin =
      4.0 * kPi * budget.aperture_d_mm * budget.aperture_d_mm /
      (lambda * lambda);
  bd.d_uniform_dbi = 10.0 * std::log10(d_uniform_lin);
  bd.eta_pattern = d_lin / d_uniform_lin;
  bd.eta_spillover = budget.eta_spillover;
  bd.eta_capture = eta_capture;
  bd.eta_mpg_chain = ap.nominal_chain_power;
  bd.eta_conversion =
      ap.nominal_chain_power > 0.0 ? eta_capture / ap.nominal_chain_power : 0.0;
  bd.eta_radiation = budget.eta_radiation;
  return m;
}

double aperture_efficiency_from_gain(double gain_dbi, Frequency f,
                                     double aperture_d_mm) {
  const double lambda = wavelength_mm(f);
  return std::pow(10.0, gain_dbi / 10.0) * lambda * lambda /
         (4.0 * kPi * aperture_d_mm * aperture_d_mm);
}

BandSweepResult band_sweep(const DesignedAperture& design,
                           const FeedModel& feed, const MpgModel& mpg,
                           const PhaseSource& source,
                           const std::vector<double>& f_list_ghz,
                           const PowerBudget& budget,
                           const MetricsOptions& opt) {
  if (f_list_ghz.size() < 3) {
    throw std::invalid_argument("band sweep needs at least 3 frequencies");
  }
  std::vector<double> fs = f_list_ghz;
  std::sort(fs.begin(), fs.end());

  BandSweepResult r;
  r.freq_ghz = fs;
  for (double fg : fs) {
    const Frequency f(fg);
    const ApertureField ap = illuminate(design, feed, mpg, source, f);
    r.per_freq.push_back(metrics(ap, budget, opt));
  }

  std::size_t ipk = 0;
  for (std::size_t i = 1; i < r.per_freq.size(); ++i) {
    if (r.per_freq[i].realized_gain_dbi >
        r.per_freq[ipk].realized_gain_dbi) {
      ipk = i;
    }
  }
  r.peak_gain_dbi = r.per_freq[ipk].realized_gain_dbi;
  r.peak_freq_ghz = fs[ipk];

  auto crossing = [&](double drop_db, bool& truncated) {
    const double level = r.peak_gain_dbi - drop_db;
    double f_lo = fs.front();
    double f_hi = fs.back();
    bool lo_found = false, hi_found = false;
    for (std::size_t i = ipk; i > 0; --i) {
      const double g1 = r.per_freq[i].realized_gain_dbi;
      const double g0 = r.per_freq[i - 1].realized_gain_dbi;
      if (g0 < level && g1 >= level) {
        f_lo = fs[i - 1] + (level - g0) / (g1 - g0) * (fs[i] - fs[i - 1]);
        lo_found = true;
        break;
      }
    }
    for (std::size_t i = ipk; i + 1 < fs.size(); ++i) {
      const double g0 = r.per_freq[i].realized_gain_dbi;
      const double g1 = r.per_freq[i + 1].realized_gain_dbi;
      if (g1 < level && g0 >= level) {
        f_hi = fs[i] + (g0 - level) / (g0 - g1) * (fs[i + 1] - fs[i]);
        hi_found = true;
        break;
      }
    }
    truncated = !lo_found || !hi_found;
    const double centre = (f_lo + f_hi) / 2.0;
    return (f_hi - f_lo) / centre * 100.0;
  };
  r.bw3db_percent = crossing(3.0, r.truncated_3db);
  r.bw1db_percent = crossing(1.0, r.truncated_1db);
  return r;
}

ApertureField uniform_square_field(double side_mm, double spacing_mm,
                                   Frequency f) {
  const int n = std::max(1, static_cast<int>(std::round(side_mm / spacing_mm)));
  ApertureField ap;
  ap.x_mm.resize(n * n);
  ap.y_mm.resize(n * n);
  Eigen::Index k = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j, ++k) {
      ap.x_mm(k) = -side_mm / 2.0 + (i + 0.5) * spacing_mm;
      ap.y_mm(k) = -side_mm / 2.0 + (j + 0.5) * spacing_mm;
    }
  }
  ap.incident = Eigen::ArrayXcd::Ones(n * n);
  ap.co = Eigen::ArrayXcd::Ones(n * n);
  ap.cx = Eigen::ArrayXcd::Zero(n * n);
  ap.cell_area_mm2 = spacing_mm * spacing_mm;
  ap.freq_ghz = f.ghz;
  ap.nominal_chain_power = 1.0;
  return ap;
}

}  // namespace mfra
