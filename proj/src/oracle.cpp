#include "sstft/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <stdexcept>

#include "sstft/fft.hpp"

namespace sstft {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

Spectrogram digital_stft(const Waveform& waveform, double window, double hop, double f_max) {
  if (!(window > 0.0) || !(hop > 0.0))
    throw std::invalid_argument("digital_stft: window and hop must be > 0");
  const auto win_n = static_cast<std::size_t>(std::llround(window * waveform.sample_rate));
  if (win_n < 2 || win_n > waveform.samples.size())
    throw std::invalid_argument("digital_stft: window longer than the waveform");
  const std::size_t nfft = fft::next_pow2(win_n);
  const double bin_hz = waveform.sample_rate / static_cast<double>(nfft);
  const double top = std::min(f_max, waveform.sample_rate / 2.0);
  const auto n_bins = static_cast<std::size_t>(std::ceil(top / bin_hz));

  std::vector<double> taper(win_n);
  for (std::size_t i = 0; i < win_n; ++i)
    taper[i] = 0.5 - 0.5 * std::cos(kTwoPi * i / win_n);  // raised cosine

  Spectrogram spec;
  spec.freq_bins.resize(n_bins);
  for (std::size_t b = 0; b < n_bins; ++b) spec.freq_bins[b] = b * bin_hz;

  std::vector<std::complex<double>> buf(nfft);
  const auto hop_n = hop * waveform.sample_rate;
  for (std::size_t col = 0;; ++col) {
    const auto begin = static_cast<std::size_t>(std::llround(col * hop_n));
    if (begin + win_n > waveform.samples.size()) break;
    std::fill(buf.begin(), buf.end(), std::complex<double>(0.0));
    for (std::size_t i = 0; i < win_n; ++i) buf[i] = waveform.samples[begin + i] * taper[i];
    fft::forward(buf);
    spec.time_bins.push_back(waveform.start_time + (begin + win_n / 2.0) / waveform.sample_rate);
    for (std::size_t b = 0; b < n_bins; ++b) spec.magnitudes.push_back(std::abs(buf[b]));
  }
  return spec;
}

std::vector<RidgePoint> ridge_extract(const Spectrogram& spec, int max_ridges, double min_rel) {
  if (max_ridges < 1) throw std::invalid_argument("ridge_extract: max_ridges must be >= 1");
  std::vector<RidgePoint> out;
  const std::size_t cols = spec.cols();
  const double df = spec.freq_step();

  for (std::size_t r = 0; r < spec.rows(); ++r) {
    double col_max = 0.0;
    for (std::size_t b = 0; b < cols; ++b) col_max = std::max(col_max, spec.at(r, b));
    if (col_max <= 0.0) continue;
    const double floor = min_rel * col_max;

    std::vector<RidgePoint> candidates;
    for (std::size_t b = 0; b < cols; ++b) {
      const double v = spec.at(r, b);
      if (v < floor) continue;
      const bool rising = b == 0 || v >= spec.at(r, b - 1);
      const bool falling = b + 1 == cols || v > spec.at(r, b + 1);
      if (!(rising && falling)) continue;

      double freq = spec.freq_bins[b];
      double mag = v;
      if (b > 0 && b + 1 < cols) {
        // parabola through the three neighboring bins
        const double ym = spec.at(r, b - 1), y0 = v, yp = spec.at(r, b + 1);
        const double denom = ym - 2.0 * y0 + yp;
        if (std::abs(denom) > 1e-300) {
          double delta = 0.5 * (ym - yp) / denom;
          delta = std::clamp(delta, -0.5, 0.5);
          freq += delta * df;
          mag = y0 - 0.25 * (ym - yp) * delta;
        }
      }
      candidates.push_back({r, freq, mag});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const RidgePoint& a, const RidgePoint& b) { return a.magnitude > b.magnitude; });
    if (candidates.size() > static_cast<std::size_t>(max_ridges))
      candidates.resize(static_cast<std::size_t>(max_ridges));
    std::sort(candidates.begin(), candidates.end(),
              [](const RidgePoint& a, const RidgePoint& b) { return a.freq < b.freq; });
    out.insert(out.end(), candidates.begin(), candidates.end());
  }
  return out;
}

ComparisonReport compare(const Spectrogram& recon, const std::vector<FreqTrack>& truth_tracks,
                         const CompareOptions& options) {
  if (!(options.tolerance > 0.0)) throw std::invalid_argument("compare: tolerance must be > 0");

  const auto peaks = ridge_extract(recon, options.max_ridges, options.min_rel);
  std::vector<std::vector<const RidgePoint*>> by_column(recon.rows());
  for (const auto& p : peaks) by_column[p.column].push_back(&p);

  ComparisonReport report;
  report.columns = recon.rows();

  struct TrackAcc {
    std::size_t points = 0, matched = 0;
    double sq_sum = 0.0;
  };
  std::map<int, TrackAcc> per_track;
  double total_sq = 0.0;

  auto near_boundary = [&](double f) {
    if (options.boundary_guard <= 0.0) return false;
    for (double edge : options.channel_edges) {
      if (std::abs(f - edge) < options.boundary_guard) return true;
    }
    return false;
  };

  std::vector<std::set<const RidgePoint*>> used(recon.rows());
  for (std::size_t r = 0; r < recon.rows(); ++r) {
    const double t = recon.time_bins[r];
    double col_sq = 0.0;
    std::size_t col_matched = 0;
    for (const auto& track : truth_tracks) {
      if (!track.contains(t)) continue;
      const TrackPoint pt = track.eval(t);
      if (pt.amplitude <= 0.0) continue;
      if (pt.freq < 0.0 || pt.freq >= options.band_max) continue;
      if (near_boundary(pt.freq)) continue;

      auto& acc = per_track[track.component_id];
      ++acc.points;
      ++report.truth_points;

      const RidgePoint* nearest = nullptr;
      double best = std::numeric_limits<double>::infinity();
      for (const auto* p : by_column[r]) {
        const double d = std::abs(p->freq - pt.freq);
        if (d < best) { best = d; nearest = p; }
      }
      if (nearest && best <= options.tolerance) {
        ++acc.matched;
        ++report.matched_points;
        ++col_matched;
        acc.sq_sum += best * best;
        total_sq += best * best;
        col_sq += best * best;
        used[r].insert(nearest);
      }
    }
    if (col_matched > 0)
      report.per_window.push_back({r, t, std::sqrt(col_sq / col_matched)});

    for (const auto* p : by_column[r]) {
      if (used[r].count(p)) continue;
      if (options.reference_freq &&
          std::abs(p->freq - *options.reference_freq) <= options.tolerance)
        continue;
      bool explained = false;
      for (const auto& track : truth_tracks) {
        if (!track.contains(t)) continue;
        const TrackPoint pt = track.eval(t);
        if (pt.amplitude <= 0.0) continue;
        if (std::abs(p->freq - pt.freq) <= options.tolerance) { explained = true; break; }
      }
      if (!explained) ++report.false_alarms;
    }
  }

  report.detection_rate =
      report.truth_points ? static_cast<double>(report.matched_points) / report.truth_points : 0.0;
  if (report.matched_points > 0)
    report.rms_error = std::sqrt(total_sq / report.matched_points);
  report.false_alarm_rate =
      report.columns ? static_cast<double>(report.false_alarms) / report.columns : 0.0;
  for (const auto& [id, acc] : per_track) {
    TrackSummary ts;
    ts.component_id = id;
    ts.points = acc.points;
    ts.matched = acc.matched;
    if (acc.matched > 0) ts.rms_error = std::sqrt(acc.sq_sum / acc.matched);
    report.per_track.push_back(ts);
  }
  return report;
}

}  // namespace sstft
