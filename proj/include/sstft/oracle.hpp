#ifndef SSTFT_ORACLE_HPP
#define SSTFT_ORACLE_HPP

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "sstft/siggen.hpp"
#include "sstft/types.hpp"

namespace sstft {

/// Magnitude STFT with a raised-cosine taper. Window and hop are in seconds;
/// the frequency axis is restricted to [0, f_max). Columns are placed every
/// hop starting at the waveform start; a column's time is its window center.
Spectrogram digital_stft(const Waveform& waveform, double window, double hop,
                         double f_max = std::numeric_limits<double>::infinity());

struct RidgePoint {
  std::size_t column = 0;
  double freq = 0.0;       // parabolic-refined, Hz
  double magnitude = 0.0;
};

/// Per column, up to max_ridges local maxima above min_rel of the column
/// maximum, each refined by parabolic interpolation over three bins.
std::vector<RidgePoint> ridge_extract(const Spectrogram& spec, int max_ridges,
                                      double min_rel);

struct TrackSummary {
  int component_id = 0;
  std::size_t points = 0;
  std::size_t matched = 0;
  std::optional<double> rms_error;  // Hz
};

struct WindowError {
  std::size_t column = 0;
  double time = 0.0;
  double rms_error = 0.0;  // Hz, matched points in this column
};

struct ComparisonReport {
  std::size_t columns = 0;
  std::size_t truth_points = 0;
  std::size_t matched_points = 0;
  double detection_rate = 0.0;             // matched / truth
  std::optional<double> rms_error;         // Hz, all matched points
  std::size_t false_alarms = 0;            // peaks far from every track
  double false_alarm_rate = 0.0;           // per column
  std::vector<WindowError> per_window;
  std::vector<TrackSummary> per_track;
};

struct CompareOptions {
  double tolerance = 60e6;  // Hz
  std::optional<double> reference_freq;  // excluded from false alarms
  double boundary_guard = 0.0;           // truth points closer than this to a channel edge are skipped
  std::vector<double> channel_edges;     // Hz, used with boundary_guard
  double band_max = std::numeric_limits<double>::infinity();  // truth points outside [0, band_max) skipped
  int max_ridges = 8;
  double min_rel = 0.05;
};

/// Matches ground-truth track points against reconstruction peaks column by
/// column: a truth point is detected when the nearest peak lies within the
/// tolerance; peaks matching no track (and not the reference) are false
/// alarms.
ComparisonReport compare(const Spectrogram& recon, const std::vector<FreqTrack>& truth_tracks,
                         const CompareOptions& options);

}  // namespace sstft

#endif
