#include "mfra/polarizer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>
#include <stdexcept>

namespace mfra {

MpgModel::MpgModel(double strip_width_mm, double pitch_mm,
                   std::vector<MpgFrequencySample> samples)
    : strip_width_(strip_width_mm),
      pitch_(pitch_mm),
      samples_(std::move(samples)) {
  if (!(strip_width_ > 0.0) || !(pitch_ > strip_width_)) {
    throw std::invalid_argument(
        "grid needs 0 < strip_width < pitch, got width " +
        std::to_string(strip_width_) + " pitch " + std::to_string(pitch_));
  }
  if (samples_.empty()) {
    throw std::invalid_argument("grid model needs at least one sample");
  }
  std::sort(samples_.begin(), samples_.end(),
            [](const auto& a, const auto& b) { return a.freq_ghz < b.freq_ghz; });
  for (const auto& s : samples_) {
    if (std::abs(s.r_parallel) > 1.0 + 1e-9 || std::abs(s.t_perp) > 1.0 + 1e-9) {
      throw std::invalid_argument(
          "grid coefficients must have magnitude <= 1 at " +
          std::to_string(s.freq_ghz) + " GHz");
    }
  }
}

MpgModel MpgModel::flat(double ryy_db, double txx_db, double band_lo_ghz,
                        double band_hi_ghz, double strip_width_mm,
                        double pitch_mm) {
  const Complex r = from_polar_deg(std::pow(10.0, ryy_db / 20.0), 180.0);
  const Complex t = from_polar_deg(std::pow(10.0, txx_db / 20.0), 0.0);
  return MpgModel(strip_width_mm, pitch_mm,
                  {{band_lo_ghz, r, t}, {band_hi_ghz, r, t}});
}

MpgModel MpgModel::defaults() { return flat(-0.040, -0.18, 24.0, 33.0); }

double MpgModel::band_lo_ghz() const { return samples_.front().freq_ghz; }
double MpgModel::band_hi_ghz() const { return samples_.back().freq_ghz; }

namespace {

Complex interp_sample(const std::vector<MpgFrequencySample>& samples,
                      double f_ghz, Complex MpgFrequencySample::*member) {
  const double lo = samples.front().freq_ghz;
  const double hi = samples.back().freq_ghz;
  if (f_ghz < lo - 1e-9 || f_ghz > hi + 1e-9) {
    throw std::out_of_range("frequency " + std::to_string(f_ghz) +
                            " GHz outside grid model band [" +
                            std::to_string(lo) + ", " + std::to_string(hi) +
                            "]");
  }
  if (samples.size() == 1) return samples.front().*member;
  auto it = std::lower_bound(
      samples.begin(), samples.end(), f_ghz,
      [](const MpgFrequencySample& s, double f) { return s.freq_ghz < f; });
  if (it == samples.begin()) return (*it).*member;
  if (it == samples.end()) return samples.back().*member;
  const auto& b = *it;
  const auto& a = *(it - 1);
  if (b.freq_ghz == a.freq_ghz) return b.*member;
  const double t = (f_ghz - a.freq_ghz) / (b.freq_ghz - a.freq_ghz);
  const Complex za = a.*member;
  const Complex zb = b.*member;
  const double mag = (1.0 - t) * std::abs(za) + t * std::abs(zb);
  const double pa = arg_deg(za);
  const double pb = pa + wrap_deg_pm180(arg_deg(zb) - pa);
  return from_polar_deg(mag, (1.0 - t) * pa + t * pb);
}

}  // namespace

Complex MpgModel::r_parallel_at(Frequency f) const {
  return interp_sample(samples_, f.ghz, &MpgFrequencySample::r_parallel);
}

Complex MpgModel::t_perp_at(Frequency f) const {
  return interp_sample(samples_, f.ghz, &MpgFrequencySample::t_perp);
}

JonesMatrix mpg_reflect_jones(const MpgModel& m, Frequency f) {
  const Complex r_par = m.r_parallel_at(f);
  const Complex t_perp = m.t_perp_at(f);
  // Lossless complement: whatever x power is not transmitted reflects.
  const double leak_mag = std::sqrt(std::max(0.0, 1.0 - std::norm(t_perp)));
  JonesMatrix j = JonesMatrix::Zero();
  j(0, 0) = from_polar_deg(leak_mag, 180.0);
  j(1, 1) = r_par;
  return j;
}

JonesMatrix mpg_transmit_jones(const MpgModel& m, Frequency f) {
  const Complex r_par = m.r_parallel_at(f);
  const Complex t_perp = m.t_perp_at(f);
  const double leak_mag = std::sqrt(std::max(0.0, 1.0 - std::norm(r_par)));
  JonesMatrix j = JonesMatrix::Zero();
  j(0, 0) = t_perp;
  j(1, 1) = from_polar_deg(leak_mag, 0.0);
  return j;
}

CascadeBudget folded_cascade(const JonesVector& feed_state, const MpgModel& mpg,
                             const JonesMatrix& element_jones, Frequency f) {
  const double p_in = feed_state.squaredNorm();
  if (!(p_in > 0.0)) {
    throw std::invalid_argument("feed state must carry power");
  }

  const JonesVector after_reflect = mpg_reflect_jones(mpg, f) * feed_state;
  const JonesVector after_element = element_jones * after_reflect;
  const JonesVector out = mpg_transmit_jones(mpg, f) * after_element;

  auto stage_loss = [](double p_before, double p_after) {
    if (!(p_after > 0.0)) return 300.0;  // fully absorbed/blocked
    return -10.0 * std::log10(p_after / p_before);
  };

  CascadeBudget b;
  b.co_pol_output = out(0);
  b.cross_leakage = out(1);
  b.co_pol_output_amp = std::abs(out(0));
  b.cross_leakage_amp = std::abs(out(1));
  const double p_reflect = after_reflect.squaredNorm();
  const double p_element = after_element.squaredNorm();
  const double p_out = out.squaredNorm();
  b.stages = {{"mpg_reflect", stage_loss(p_in, p_reflect)},
              {"element", stage_loss(p_reflect, p_element)},
              {"mpg_transmit", stage_loss(p_element, p_out)}};
  b.trapped_power_fraction = std::max(0.0, (p_element - p_out) / p_in);
  b.insertion_loss_db =
      b.co_pol_output_amp > 0.0
          ? -db_amplitude(b.co_pol_output_amp / std::sqrt(p_in))
          : 300.0;
  return b;
}

MpgModel ingest_mpg_csv(std::istream& in, double strip_width_mm,
                        double pitch_mm) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty grid response file");
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> fields;
    std::stringstream ss(s);
    std::string cur;
    while (std::getline(ss, cur, ',')) {
      const auto b = cur.find_first_not_of(" \t\r");
      const auto e = cur.find_last_not_of(" \t\r");
      fields.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
    }
    return fields;
  };
  const auto header = split(line);
  if (header.size() < 3 || header[0] != "freq_ghz" || header[1] != "ryy_db" ||
      header[2] != "txx_db") {
    throw std::runtime_error(
        "grid response header must start freq_ghz,ryy_db,txx_db");
  }
  const bool has_phases = header.size() >= 5;

  std::vector<MpgFrequencySample> samples;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split(line);
    if (fields.size() < 3) {
      throw std::runtime_error("grid response line " +
                               std::to_string(line_no) + " is malformed");
    }
    try {
      const double f = std::stod(fields[0]);
      const double ryy_db = std::stod(fields[1]);
      const double txx_db = std::stod(fields[2]);
      const double rp = has_phases && fields.size() >= 4 && !fields[3].empty()
                            ? std::stod(fields[3])
                            : 180.0;
      const double tp = has_phases && fields.size() >= 5 && !fields[4].empty()
                            ? std::stod(fields[4])
                            : 0.0;
      samples.push_back(
          {f, from_polar_deg(std::pow(10.0, ryy_db / 20.0), rp),
           from_polar_deg(std::pow(10.0, txx_db / 20.0), tp)});
    } catch (const std::exception&) {
      throw std::runtime_error("grid response line " +
                               std::to_string(line_no) + " is malformed");
    }
  }
  return MpgModel(strip_width_mm, pitch_mm, std::move(samples));
}

}  // namespace mfra
