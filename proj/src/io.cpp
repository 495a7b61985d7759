#include "sstft/io.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sstft::io {

static_assert(std::endian::native == std::endian::little,
              "waveform format assumes a little-endian host");

namespace {

constexpr char kMagic[8] = {'S', 'S', 'T', 'F', 'T', 'W', 'F', '1'};
constexpr std::uint32_t kVersion = 1;

[[noreturn]] void fail(const std::string& what) { throw std::runtime_error("io: " + what); }

template <typename T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T v;
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) fail("unexpected end of file");
  return v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_waveform(const std::string& path, const Waveform& wf) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint32_t>(out, kVersion);
  put<double>(out, wf.sample_rate);
  put<double>(out, wf.start_time);
  put<std::uint64_t>(out, wf.samples.size());
  for (double s : wf.samples) put<float>(out, static_cast<float>(s));
  if (!out) fail("write failed for " + path);
}

Waveform read_waveform(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    fail(path + " is not an SSTFT-WF1 waveform");
  const auto version = get<std::uint32_t>(in);
  if (version != kVersion) fail("unsupported waveform format version " + std::to_string(version));
  Waveform wf;
  wf.sample_rate = get<double>(in);
  wf.start_time = get<double>(in);
  const auto n = get<std::uint64_t>(in);
  wf.samples.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) wf.samples[i] = get<float>(in);
  return wf;
}

void write_spectrogram_csv(const std::string& path, const Spectrogram& spec) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  const double t0 = spec.time_bins.empty() ? 0.0 : spec.time_bins.front();
  const double f0 = spec.freq_bins.empty() ? 0.0 : spec.freq_bins.front();
  out << "# rows=" << spec.rows() << " cols=" << spec.cols() << " t0_s=" << fmt(t0)
      << " dt_s=" << fmt(spec.time_step()) << " f0_hz=" << fmt(f0)
      << " df_hz=" << fmt(spec.freq_step()) << "\n";
  for (std::size_t r = 0; r < spec.rows(); ++r) {
    for (std::size_t c = 0; c < spec.cols(); ++c) {
      if (c) out << ',';
      out << fmt(spec.at(r, c));
    }
    out << '\n';
  }
  if (!out) fail("write failed for " + path);
}

Spectrogram read_spectrogram_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::string header;
  if (!std::getline(in, header) || header.rfind("# ", 0) != 0)
    fail(path + " is missing the spectrogram header");

  std::map<std::string, double> fields;
  std::istringstream hs(header.substr(2));
  std::string token;
  while (hs >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) fail("malformed header token \"" + token + "\"");
    fields[token.substr(0, eq)] = std::stod(token.substr(eq + 1));
  }
  for (const char* key : {"rows", "cols", "t0_s", "dt_s", "f0_hz", "df_hz"}) {
    if (!fields.count(key)) fail(std::string("header is missing ") + key);
  }

  Spectrogram spec;
  const auto rows = static_cast<std::size_t>(fields["rows"]);
  const auto cols = static_cast<std::size_t>(fields["cols"]);
  spec.time_bins.resize(rows);
  spec.freq_bins.resize(cols);
  for (std::size_t r = 0; r < rows; ++r) spec.time_bins[r] = fields["t0_s"] + r * fields["dt_s"];
  for (std::size_t c = 0; c < cols; ++c) spec.freq_bins[c] = fields["f0_hz"] + c * fields["df_hz"];
  spec.magnitudes.reserve(rows * cols);

  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line)) fail("unexpected end of file in " + path);
    std::istringstream ls(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ls, cell, ',')) {
      spec.magnitudes.push_back(std::stod(cell));
      ++c;
    }
    if (c != cols) fail("row " + std::to_string(r) + " has " + std::to_string(c) + " cells");
  }
  return spec;
}

void write_pulses_csv(const std::string& path, const std::vector<Pulse>& pulses,
                      const FttmCalibration& calib) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  out << "channel,period,tau_s,amplitude,fwhm_s,freq_hz\n";
  for (const auto& p : pulses) {
    out << p.channel << ',' << p.period_index << ',' << fmt(p.tau) << ',' << fmt(p.amplitude)
        << ',' << fmt(p.fwhm) << ',' << fmt(calib.freq_at(p.tau, p.channel)) << '\n';
  }
  if (!out) fail("write failed for " + path);
}

void write_tracks_csv(const std::string& path, const std::vector<FreqTrack>& tracks) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  out << "component_id,time_s,freq_hz,amplitude\n";
  for (const auto& t : tracks) {
    auto row = [&](double time, double freq, double amp) {
      out << t.component_id << ',' << fmt(time) << ',' << fmt(freq) << ',' << fmt(amp) << '\n';
    };
    if (t.interp == FreqTrack::Interp::linear) {
      for (const auto& p : t.points) row(p.time, p.freq, p.amplitude);
    } else {
      // hold segments flattened to linear shoulders 1 ps before each change
      for (std::size_t i = 0; i + 1 < t.points.size(); ++i) {
        row(t.points[i].time, t.points[i].freq, t.points[i].amplitude);
        row(std::max(t.points[i].time, t.points[i + 1].time - 1e-12), t.points[i].freq,
            t.points[i].amplitude);
      }
    }
  }
  if (!out) fail("write failed for " + path);
}

std::vector<FreqTrack> read_tracks_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(path + " is empty");

  std::map<int, FreqTrack> by_id;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 4) fail("malformed track row \"" + line + "\"");
    const int id = std::stoi(cells[0]);
    auto& track = by_id[id];
    track.component_id = id;
    track.interp = FreqTrack::Interp::linear;
    track.points.push_back({std::stod(cells[1]), std::stod(cells[2]), std::stod(cells[3])});
  }

  std::vector<FreqTrack> tracks;
  for (auto& [id, t] : by_id) {
    std::sort(t.points.begin(), t.points.end(),
              [](const TrackPoint& a, const TrackPoint& b) { return a.time < b.time; });
    tracks.push_back(std::move(t));
  }
  return tracks;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail("cannot write " + path);
  out << text;
  if (!out) fail("write failed for " + path);
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace sstft::io
