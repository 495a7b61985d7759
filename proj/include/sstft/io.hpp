#ifndef SSTFT_IO_HPP
#define SSTFT_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "sstft/demux.hpp"
#include "sstft/siggen.hpp"
#include "sstft/types.hpp"

namespace sstft::io {

// Waveform binary "SSTFT-WF1": magic "SSTFTWF1", then little-endian
// u32 format_version=1, f64 sample_rate_hz, f64 start_time_s, u64 n_samples,
// followed by n_samples IEEE-754 binary32 samples.
void write_waveform(const std::string& path, const Waveform& wf);
Waveform read_waveform(const std::string& path);

// Spectrogram CSV: "# rows=R cols=C t0_s=.. dt_s=.. f0_hz=.. df_hz=.."
// header, then one comma-separated row of magnitudes per time bin.
void write_spectrogram_csv(const std::string& path, const Spectrogram& spec);
Spectrogram read_spectrogram_csv(const std::string& path);

// Pulse list CSV: channel,period,tau_s,amplitude,fwhm_s,freq_hz
void write_pulses_csv(const std::string& path, const std::vector<Pulse>& pulses,
                      const FttmCalibration& calib);

// Ground-truth track CSV: component_id,time_s,freq_hz,amplitude
void write_tracks_csv(const std::string& path, const std::vector<FreqTrack>& tracks);
std::vector<FreqTrack> read_tracks_csv(const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// FNV-1a 64 over the byte string, hex-encoded.
std::string fnv1a_hex(const std::string& bytes);

}  // namespace sstft::io

#endif
