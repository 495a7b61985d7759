#include "sstft/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace sstft {

bool SystemConfig::noise_enabled() const { return std::isfinite(noise_snr_db); }

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("config: " + what);
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) fail(std::string(name) + " must be > 0");
}

}  // namespace

void SystemConfig::validate() const {
  if (n_channels < 1) fail("n_channels must be >= 1");
  require_positive(sweep_bandwidth, "sweep_bandwidth");
  require_positive(sweep_period, "sweep_period");
  require_positive(chirp_rate, "chirp_rate");
  require_positive(brillouin_shift, "brillouin_shift");
  require_positive(gain_fwhm, "gain_fwhm");
  require_positive(pump_base_freq, "pump_base_freq");
  require_positive(subcarrier_min, "subcarrier_min");
  require_positive(subcarrier_step, "subcarrier_step");
  require_positive(reference_freq, "reference_freq");
  require_positive(sample_rate, "sample_rate");
  if (idle_time < 0.0 || !std::isfinite(idle_time)) fail("idle_time must be >= 0");
  if (gain_peak_db < 0.0) fail("gain_peak_db must be >= 0");
  if (phonon_lifetime < 0.0) fail("phonon_lifetime must be >= 0");

  // sweep triple consistency, f_s = k*T
  const double kt = chirp_rate * sweep_period;
  if (std::abs(sweep_bandwidth - kt) > 1e-9 * sweep_bandwidth) {
    std::ostringstream os;
    os << "sweep triple inconsistent: sweep_bandwidth=" << sweep_bandwidth
       << " but chirp_rate*sweep_period=" << kt;
    fail(os.str());
  }

  const double top_subcarrier = subcarrier_min + (n_channels - 1) * subcarrier_step;
  if (!(sample_rate > 2.0 * (top_subcarrier + subcarrier_step / 2.0))) {
    fail("sample_rate violates Nyquist for the highest subcarrier plus demodulation bandwidth");
  }
  if (!(reference_freq > 0.0 && reference_freq < analysis_band())) {
    fail("reference_freq must lie inside (0, N*sweep_bandwidth)");
  }
}

std::string orientation_name(SweepOrientation o) {
  return o == SweepOrientation::ascending ? "ascending" : "descending";
}

SystemConfig parse_config(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("top level must be an object");

  static const std::set<std::string> known = {
      "n_channels",      "sweep_bandwidth", "sweep_period",  "idle_time",
      "chirp_rate",      "brillouin_shift", "gain_fwhm",     "gain_peak_db",
      "phonon_lifetime", "pump_base_freq",  "subcarrier_min", "subcarrier_step",
      "reference_freq",  "sample_rate",     "noise_snr_db",  "sweep_orientation"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.count(it.key())) fail("unknown key \"" + it.key() + "\"");
  }

  SystemConfig c;
  auto number = [&](const char* key, double& out, bool required) {
    if (!j.contains(key)) {
      if (required) fail(std::string("missing required key \"") + key + "\"");
      return;
    }
    if (!j[key].is_number()) fail(std::string("key \"") + key + "\" must be a number");
    out = j[key].get<double>();
  };

  if (!j.contains("n_channels")) fail("missing required key \"n_channels\"");
  if (!j["n_channels"].is_number_integer()) fail("n_channels must be an integer");
  c.n_channels = j["n_channels"].get<int>();

  number("sweep_bandwidth", c.sweep_bandwidth, true);
  number("sweep_period", c.sweep_period, true);
  number("idle_time", c.idle_time, false);
  number("chirp_rate", c.chirp_rate, true);
  number("brillouin_shift", c.brillouin_shift, false);
  number("gain_fwhm", c.gain_fwhm, false);
  number("gain_peak_db", c.gain_peak_db, false);
  number("phonon_lifetime", c.phonon_lifetime, false);
  number("pump_base_freq", c.pump_base_freq, true);
  number("subcarrier_min", c.subcarrier_min, true);
  number("subcarrier_step", c.subcarrier_step, true);
  number("reference_freq", c.reference_freq, true);
  number("sample_rate", c.sample_rate, true);

  if (j.contains("noise_snr_db")) {
    if (j["noise_snr_db"].is_null()) {
      c.noise_snr_db = std::numeric_limits<double>::infinity();  // noise off
    } else if (j["noise_snr_db"].is_number()) {
      c.noise_snr_db = j["noise_snr_db"].get<double>();
    } else {
      fail("noise_snr_db must be a number or null");
    }
  }

  if (j.contains("sweep_orientation")) {
    if (!j["sweep_orientation"].is_string()) fail("sweep_orientation must be a string");
    const std::string s = j["sweep_orientation"].get<std::string>();
    if (s == "ascending") {
      c.sweep_orientation = SweepOrientation::ascending;
    } else if (s == "descending") {
      c.sweep_orientation = SweepOrientation::descending;
    } else {
      fail("sweep_orientation must be \"ascending\" or \"descending\"");
    }
  }

  c.validate();
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace sstft
