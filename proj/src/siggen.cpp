#include "sstft/siggen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sstft {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument("sut: " + what); }

}  // namespace

bool FreqTrack::contains(double t) const {
  return !points.empty() && t >= points.front().time && t < points.back().time;
}

TrackPoint FreqTrack::eval(double t) const {
  if (!contains(t)) throw std::out_of_range("track eval outside domain");
  // last breakpoint with time <= t
  auto it = std::upper_bound(points.begin(), points.end(), t,
                             [](double v, const TrackPoint& p) { return v < p.time; });
  const std::size_t j = static_cast<std::size_t>(it - points.begin()) - 1;
  const TrackPoint& a = points[j];
  if (interp == Interp::hold || j + 1 >= points.size()) return {t, a.freq, a.amplitude};
  const TrackPoint& b = points[j + 1];
  const double u = (t - a.time) / (b.time - a.time);
  return {t, a.freq + u * (b.freq - a.freq), a.amplitude + u * (b.amplitude - a.amplitude)};
}

double FreqTrack::max_freq() const {
  double m = 0.0;
  for (const auto& p : points) m = std::max(m, p.freq);
  return m;
}

double FreqTrack::min_freq() const {
  double m = points.empty() ? 0.0 : points.front().freq;
  for (const auto& p : points) m = std::min(m, p.freq);
  return m;
}

namespace {

void check_track(const FreqTrack& t) {
  if (t.points.size() < 2) fail("track needs at least two breakpoints");
  for (std::size_t i = 0; i < t.points.size(); ++i) {
    if (t.points[i].freq < 0.0) fail("track frequency must be >= 0");
    if (i > 0 && !(t.points[i].time > t.points[i - 1].time))
      fail("track times must be strictly increasing");
  }
}

struct TrackBuilder {
  double t0;        // SUT start time
  double duration;  // SUT duration
  std::vector<FreqTrack> tracks;

  void tone(int id, const ToneSpec& c) {
    FreqTrack t{id, FreqTrack::Interp::hold,
                {{t0, c.freq, c.amplitude}, {t0 + duration, c.freq, c.amplitude}}};
    check_track(t);
    tracks.push_back(std::move(t));
  }

  void lfm(int id, const LfmSpec& c) {
    if (!(c.duration > 0.0)) fail("lfm duration must be > 0");
    FreqTrack t{id, FreqTrack::Interp::linear,
                {{t0, c.f_start, c.amplitude}, {t0 + c.duration, c.f_stop, c.amplitude}}};
    check_track(t);
    tracks.push_back(std::move(t));
  }

  void nlfm(int id, const NlfmSpec& c) {
    if (c.profile.size() < 2) fail("nlfm profile needs at least two breakpoints");
    FreqTrack t{id, FreqTrack::Interp::linear, {}};
    t.points.reserve(c.profile.size());
    for (const auto& p : c.profile)
      t.points.push_back({t0 + p.time, p.freq, c.amplitude * p.amp_scale});
    check_track(t);
    tracks.push_back(std::move(t));
  }

  void hop(int id, const HopSpec& c) {
    if (c.dwells.empty()) fail("hop needs at least one dwell");
    auto dwells = c.dwells;
    std::sort(dwells.begin(), dwells.end(),
              [](const HopDwell& a, const HopDwell& b) { return a.start < b.start; });
    FreqTrack t{id, FreqTrack::Interp::hold, {}};
    for (std::size_t i = 0; i < dwells.size(); ++i) {
      const auto& d = dwells[i];
      if (!(d.duration > 0.0)) fail("hop dwell duration must be > 0");
      const double begin = t0 + d.start;
      const double end = begin + d.duration;
      if (i + 1 < dwells.size()) {
        const double next = t0 + dwells[i + 1].start;
        if (end > next + 1e-15) fail("hop dwells overlap");
        t.points.push_back({begin, d.freq, c.amplitude});
        if (next > end) t.points.push_back({end, d.freq, 0.0});  // silent gap
      } else {
        t.points.push_back({begin, d.freq, c.amplitude});
        t.points.push_back({end, d.freq, c.amplitude});  // domain end marker
      }
    }
    check_track(t);
    tracks.push_back(std::move(t));
  }

  void step(int id, const StepSpec& c) {
    if (c.n_steps < 1) fail("step needs n_steps >= 1");
    if (!(c.dwell > 0.0)) fail("step dwell must be > 0");
    FreqTrack t{id, FreqTrack::Interp::hold, {}};
    for (int i = 0; i < c.n_steps; ++i)
      t.points.push_back({t0 + i * c.dwell, c.f_start + i * c.f_step, c.amplitude});
    const double f_last = c.f_start + (c.n_steps - 1) * c.f_step;
    t.points.push_back({t0 + c.n_steps * c.dwell, f_last, c.amplitude});
    check_track(t);
    tracks.push_back(std::move(t));
  }
};

}  // namespace

std::vector<FreqTrack> tracks_of(const SutSpec& spec) {
  if (!(spec.duration > 0.0)) fail("duration must be > 0");
  TrackBuilder b{spec.start_time, spec.duration, {}};
  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const int id = static_cast<int>(i);
    std::visit([&](const auto& c) {
      using T = std::decay_t<decltype(c)>;
      if constexpr (std::is_same_v<T, ToneSpec>) b.tone(id, c);
      else if constexpr (std::is_same_v<T, LfmSpec>) b.lfm(id, c);
      else if constexpr (std::is_same_v<T, NlfmSpec>) b.nlfm(id, c);
      else if constexpr (std::is_same_v<T, HopSpec>) b.hop(id, c);
      else b.step(id, c);
    }, spec.components[i]);
  }
  return b.tracks;
}

std::pair<Waveform, std::vector<FreqTrack>> synthesize(const SutSpec& spec, double sample_rate) {
  if (!(sample_rate > 0.0)) fail("sample_rate must be > 0");
  auto tracks = tracks_of(spec);
  for (const auto& t : tracks) {
    const double fmax = t.max_freq();
    if (!(sample_rate > 2.0 * fmax)) {
      std::ostringstream os;
      os.precision(12);
      os << "component " << t.component_id << " reaches " << fmax * 1e-9
         << " GHz, above Nyquist for " << sample_rate * 1e-9 << " GS/s";
      fail(os.str());
    }
  }

  Waveform wf;
  wf.sample_rate = sample_rate;
  wf.start_time = spec.start_time;
  const auto n = static_cast<std::size_t>(std::llround(spec.duration * sample_rate));
  wf.samples.assign(n, 0.0);

  for (const auto& track : tracks) {
    const auto& p = track.points;
    const double rel0 = p.front().time - wf.start_time;
    const double rel1 = p.back().time - wf.start_time;
    std::size_t i0 = rel0 <= 0.0 ? 0 : static_cast<std::size_t>(std::ceil(rel0 * sample_rate - 1e-9));
    std::size_t i1 = std::min<std::size_t>(n, static_cast<std::size_t>(std::ceil(rel1 * sample_rate - 1e-9)));

    std::size_t seg = 0;
    double phase_base = 0.0;  // phase at p[seg].time, continuous across segments
    const bool linear = track.interp == FreqTrack::Interp::linear;
    for (std::size_t i = i0; i < i1; ++i) {
      const double t = wf.start_time + i / sample_rate;
      while (seg + 2 < p.size() && t >= p[seg + 1].time) {
        const double span = p[seg + 1].time - p[seg].time;
        if (linear) {
          phase_base += kTwoPi * 0.5 * (p[seg].freq + p[seg + 1].freq) * span;
        } else {
          phase_base += kTwoPi * p[seg].freq * span;
        }
        ++seg;
      }
      const double u = t - p[seg].time;
      double phase, amp;
      if (linear) {
        const double span = p[seg + 1].time - p[seg].time;
        const double slope = (p[seg + 1].freq - p[seg].freq) / span;
        phase = phase_base + kTwoPi * (p[seg].freq * u + 0.5 * slope * u * u);
        amp = p[seg].amplitude + (p[seg + 1].amplitude - p[seg].amplitude) * (u / span);
      } else {
        phase = phase_base + kTwoPi * p[seg].freq * u;
        amp = p[seg].amplitude;
      }
      wf.samples[i] += amp * std::cos(phase);
    }
  }
  return {std::move(wf), std::move(tracks)};
}

namespace {

double rolloff_scale(double freq, const std::optional<IfBand>& band) {
  if (!band || freq <= band->cutoff) return 1.0;
  const double atten_db = (freq - band->cutoff) * 1e-9 * band->rolloff_db_per_ghz;
  return std::pow(10.0, -atten_db / 20.0);
}

// Components whose amplitude becomes time-varying under the IF rolloff are
// re-expressed as sampled profiles.
NlfmSpec sampled_sideband(const FreqTrack& track, double t0, double lo, int side,
                          const std::optional<IfBand>& band, double base_amplitude) {
  constexpr int kPoints = 129;
  NlfmSpec out;
  out.amplitude = base_amplitude;
  const double ta = track.points.front().time;
  const double tb = track.points.back().time;
  for (int i = 0; i < kPoints; ++i) {
    const double t = ta + (tb - ta) * i / (kPoints - 1);
    const TrackPoint s = track.eval(std::min(t, std::nextafter(tb, ta)));
    const double scale = rolloff_scale(s.freq, band) * (s.amplitude / base_amplitude);
    out.profile.push_back({t - t0, lo + side * s.freq, scale});
  }
  return out;
}

}  // namespace

SutSpec upconvert(const SutSpec& spec, double lo_freq, std::optional<IfBand> if_band) {
  auto tracks = tracks_of(spec);
  for (const auto& t : tracks) {
    if (!(lo_freq > t.max_freq())) {
      std::ostringstream os;
      os << "component " << t.component_id << " sideband crosses 0 Hz: lo_freq must exceed "
         << t.max_freq() * 1e-9 << " GHz";
      fail(os.str());
    }
  }

  SutSpec out;
  out.duration = spec.duration;
  out.start_time = spec.start_time;

  for (std::size_t i = 0; i < spec.components.size(); ++i) {
    const auto& comp = spec.components[i];
    const auto& track = tracks[i];
    const bool attenuated = if_band && track.max_freq() > if_band->cutoff;

    std::visit([&](const auto& c) {
      using T = std::decay_t<decltype(c)>;
      if constexpr (std::is_same_v<T, ToneSpec>) {
        const double scale = rolloff_scale(c.freq, if_band);
        if (c.freq == 0.0) {
          // both sidebands coincide: cos((lo+0)t) + cos((lo-0)t) = 2 cos(lo t)
          out.components.push_back(ToneSpec{lo_freq, 2.0 * c.amplitude * scale});
        } else {
          out.components.push_back(ToneSpec{lo_freq + c.freq, c.amplitude * scale});
          out.components.push_back(ToneSpec{lo_freq - c.freq, c.amplitude * scale});
        }
      } else if constexpr (std::is_same_v<T, LfmSpec>) {
        if (attenuated) {
          out.components.push_back(sampled_sideband(track, spec.start_time, lo_freq, +1, if_band, c.amplitude));
          out.components.push_back(sampled_sideband(track, spec.start_time, lo_freq, -1, if_band, c.amplitude));
        } else {
          out.components.push_back(LfmSpec{lo_freq + c.f_start, lo_freq + c.f_stop, c.duration, c.amplitude});
          out.components.push_back(LfmSpec{lo_freq - c.f_start, lo_freq - c.f_stop, c.duration, c.amplitude});
        }
      } else if constexpr (std::is_same_v<T, NlfmSpec>) {
        NlfmSpec up = c, down = c;
        for (std::size_t j = 0; j < c.profile.size(); ++j) {
          const double scale = rolloff_scale(c.profile[j].freq, if_band);
          up.profile[j].freq = lo_freq + c.profile[j].freq;
          up.profile[j].amp_scale = c.profile[j].amp_scale * scale;
          down.profile[j].freq = lo_freq - c.profile[j].freq;
          down.profile[j].amp_scale = c.profile[j].amp_scale * scale;
        }
        out.components.push_back(std::move(up));
        out.components.push_back(std::move(down));
      } else if constexpr (std::is_same_v<T, HopSpec>) {
        for (int side : {+1, -1}) {
          if (attenuated) {
            for (const auto& d : c.dwells) {
              HopSpec single{{HopDwell{d.start, d.duration, lo_freq + side * d.freq}},
                             c.amplitude * rolloff_scale(d.freq, if_band)};
              out.components.push_back(std::move(single));
            }
          } else {
            HopSpec h = c;
            for (auto& d : h.dwells) d.freq = lo_freq + side * d.freq;
            out.components.push_back(std::move(h));
          }
        }
      } else {  // StepSpec
        for (int side : {+1, -1}) {
          if (attenuated) {
            for (int j = 0; j < c.n_steps; ++j) {
              const double f = c.f_start + j * c.f_step;
              HopSpec single{{HopDwell{j * c.dwell, c.dwell, lo_freq + side * f}},
                             c.amplitude * rolloff_scale(f, if_band)};
              out.components.push_back(std::move(single));
            }
          } else {
            out.components.push_back(StepSpec{lo_freq + side * c.f_start, side * c.f_step,
                                              c.dwell, c.n_steps, c.amplitude});
          }
        }
      }
    }, comp);
  }
  return out;
}

std::vector<TrackSample> instantaneous_frequency(const std::vector<FreqTrack>& tracks, double t) {
  std::vector<TrackSample> out;
  for (const auto& track : tracks) {
    if (!track.contains(t)) continue;
    const TrackPoint p = track.eval(t);
    out.push_back({track.component_id, p.freq, p.amplitude});
  }
  return out;
}

namespace {

double jnum(const nlohmann::json& j, const char* key, std::optional<double> fallback = std::nullopt) {
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    fail(std::string("missing key \"") + key + "\"");
  }
  if (!j[key].is_number()) fail(std::string("key \"") + key + "\" must be a number");
  return j[key].get<double>();
}

void check_keys(const nlohmann::json& j, const std::set<std::string>& known, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) fail("unknown key \"" + it.key() + "\" in " + where);
  }
}

ComponentSpec parse_component(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type") || !j["type"].is_string())
    fail("component must be an object with a \"type\" string");
  const std::string type = j["type"].get<std::string>();
  static const std::set<std::string> mixer_keys = {"lo_freq", "if_cutoff", "if_rolloff_db_per_ghz"};

  auto with_mixer = [&](std::set<std::string> base) {
    base.insert(mixer_keys.begin(), mixer_keys.end());
    return base;
  };

  if (type == "tone") {
    check_keys(j, with_mixer({"type", "freq", "amplitude"}), "tone");
    return ToneSpec{jnum(j, "freq"), jnum(j, "amplitude", 1.0)};
  }
  if (type == "lfm") {
    check_keys(j, with_mixer({"type", "f_start", "f_stop", "duration", "amplitude"}), "lfm");
    return LfmSpec{jnum(j, "f_start"), jnum(j, "f_stop"), jnum(j, "duration"), jnum(j, "amplitude", 1.0)};
  }
  if (type == "nlfm") {
    check_keys(j, with_mixer({"type", "profile", "amplitude"}), "nlfm");
    if (!j.contains("profile") || !j["profile"].is_array()) fail("nlfm needs a \"profile\" array");
    NlfmSpec c;
    c.amplitude = jnum(j, "amplitude", 1.0);
    for (const auto& row : j["profile"]) {
      if (!row.is_array() || row.size() < 2 || row.size() > 3) fail("nlfm profile rows are [time, freq] or [time, freq, amp_scale]");
      NlfmPoint p{row[0].get<double>(), row[1].get<double>(), 1.0};
      if (row.size() == 3) p.amp_scale = row[2].get<double>();
      c.profile.push_back(p);
    }
    return c;
  }
  if (type == "hop") {
    check_keys(j, with_mixer({"type", "dwells", "amplitude"}), "hop");
    if (!j.contains("dwells") || !j["dwells"].is_array()) fail("hop needs a \"dwells\" array");
    HopSpec c;
    c.amplitude = jnum(j, "amplitude", 1.0);
    for (const auto& d : j["dwells"]) {
      check_keys(d, {"start", "duration", "freq"}, "hop dwell");
      c.dwells.push_back({jnum(d, "start"), jnum(d, "duration"), jnum(d, "freq")});
    }
    return c;
  }
  if (type == "step") {
    check_keys(j, with_mixer({"type", "f_start", "f_step", "dwell", "n_steps", "amplitude"}), "step");
    if (!j.contains("n_steps") || !j["n_steps"].is_number_integer()) fail("step needs integer n_steps");
    return StepSpec{jnum(j, "f_start"), jnum(j, "f_step"), jnum(j, "dwell"),
                    j["n_steps"].get<int>(), jnum(j, "amplitude", 1.0)};
  }
  fail("unknown component type \"" + type + "\"");
}

}  // namespace

SutSpec parse_sut(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");
  check_keys(j, {"duration", "start_time", "components"}, "sut");

  SutSpec spec;
  spec.duration = jnum(j, "duration");
  spec.start_time = jnum(j, "start_time", 0.0);
  if (!j.contains("components") || !j["components"].is_array()) fail("missing \"components\" array");

  for (const auto& cj : j["components"]) {
    ComponentSpec comp = parse_component(cj);
    if (cj.contains("lo_freq")) {
      std::optional<IfBand> band;
      if (cj.contains("if_cutoff")) {
        band = IfBand{jnum(cj, "if_cutoff"), jnum(cj, "if_rolloff_db_per_ghz", 20.0)};
      }
      SutSpec single{{comp}, spec.duration, spec.start_time};
      SutSpec mixed = upconvert(single, jnum(cj, "lo_freq"), band);
      for (auto& m : mixed.components) spec.components.push_back(std::move(m));
    } else {
      spec.components.push_back(std::move(comp));
    }
  }
  tracks_of(spec);  // validate
  return spec;
}

SutSpec load_sut(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sut(buf.str());
}

}  // namespace sstft
