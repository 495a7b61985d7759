#ifndef SSTFT_SIGGEN_HPP
#define SSTFT_SIGGEN_HPP

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sstft/types.hpp"

namespace sstft {

struct ToneSpec {
  double freq = 0.0;
  double amplitude = 1.0;
};

struct LfmSpec {
  double f_start = 0.0;
  double f_stop = 0.0;
  double duration = 0.0;  // s, may be shorter than the SUT duration
  double amplitude = 1.0;
};

/// Sampled frequency profile, piecewise linear between breakpoints.
/// Breakpoint times are offsets from the SUT start; amp_scale multiplies the
/// component amplitude (used by the mixer IF rolloff).
struct NlfmPoint {
  double time = 0.0;
  double freq = 0.0;
  double amp_scale = 1.0;
};

struct NlfmSpec {
  std::vector<NlfmPoint> profile;
  double amplitude = 1.0;
};

struct HopDwell {
  double start = 0.0;     // offset from SUT start, s
  double duration = 0.0;  // s
  double freq = 0.0;      // Hz
};

struct HopSpec {
  std::vector<HopDwell> dwells;  // non-overlapping, sorted by start
  double amplitude = 1.0;
};

struct StepSpec {
  double f_start = 0.0;
  double f_step = 0.0;
  double dwell = 0.0;
  int n_steps = 0;
  double amplitude = 1.0;
};

using ComponentSpec = std::variant<ToneSpec, LfmSpec, NlfmSpec, HopSpec, StepSpec>;

/// Declarative signal-under-test description.
struct SutSpec {
  std::vector<ComponentSpec> components;
  double duration = 0.0;    // s
  double start_time = 0.0;  // s
};

/// Ground-truth instantaneous-frequency track of one component.
/// Hold tracks are right-continuous at breakpoints; linear tracks
/// interpolate frequency and amplitude between breakpoints. The domain is
/// [points.front().time, points.back().time).
struct TrackPoint {
  double time = 0.0;
  double freq = 0.0;
  double amplitude = 0.0;
};

struct FreqTrack {
  enum class Interp { linear, hold };

  int component_id = 0;
  Interp interp = Interp::hold;
  std::vector<TrackPoint> points;

  bool contains(double t) const;
  /// Frequency and amplitude at t; t must lie in the domain.
  TrackPoint eval(double t) const;
  double max_freq() const;
  double min_freq() const;
};

struct TrackSample {
  int component_id = 0;
  double freq = 0.0;
  double amplitude = 0.0;
};

/// Ground-truth tracks for every component (no waveform synthesis).
std::vector<FreqTrack> tracks_of(const SutSpec& spec);

/// Sums all components, each with phase 2*pi*integral(f) continuous within
/// the component. Throws if any instantaneous frequency violates Nyquist.
std::pair<Waveform, std::vector<FreqTrack>> synthesize(const SutSpec& spec, double sample_rate);

struct IfBand {
  double cutoff = 0.0;              // Hz; IF content above this is attenuated
  double rolloff_db_per_ghz = 0.0;  // attenuation slope past the cutoff
};

/// Double-sideband mixer model: each component at f(t) becomes two
/// components at lo_freq + f(t) and lo_freq - f(t). The optional IF band
/// attenuates content whose pre-mix frequency exceeds the cutoff, linearly
/// in dB with frequency. Throws if the lower sideband would cross 0 Hz.
SutSpec upconvert(const SutSpec& spec, double lo_freq, std::optional<IfBand> if_band = std::nullopt);

/// Evaluates every track whose domain contains t.
std::vector<TrackSample> instantaneous_frequency(const std::vector<FreqTrack>& tracks, double t);

/// Parses the SUT JSON document (see README for the schema). A component
/// carrying "lo_freq" is expanded through upconvert().
SutSpec parse_sut(const std::string& json_text);
SutSpec load_sut(const std::string& path);

}  // namespace sstft

#endif
