#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace cryolink {

enum class SignalUnit { Volts, MilliWatts, MilliAmps };

std::string to_string(SignalUnit unit);

// Uniformly sampled analog signal. `baud_hz` is the symbol rate of the data
// the waveform carries (the actual one, including any ppm offset applied at
// generation), `samples_per_ui` the oversampling ratio. Sample i sits at
// time i / (baud_hz * samples_per_ui) seconds, i.e. i / samples_per_ui in
// units of this waveform's UI.
struct Waveform {
    std::vector<double> samples;
    SignalUnit unit = SignalUnit::Volts;
    double baud_hz = 0.0;
    double samples_per_ui = 0.0;

    double sample_rate_hz() const { return baud_hz * samples_per_ui; }
    double duration_ui() const { return static_cast<double>(samples.size()) / samples_per_ui; }

    // Linear interpolation at a time expressed in this waveform's UI.
    // Throws std::out_of_range outside [0, duration_ui].
    double value_at_ui(double time_ui) const;
};

// First-order low-pass, y[n] = y[n-1] + a*(x[n] - y[n-1]) with
// a = 1 - exp(-2*pi*f3db/fs). State starts at the first input sample, so a
// constant input passes through already settled.
std::vector<double> single_pole_lowpass(const std::vector<double>& x, double f3db_hz, double fs_hz);

// First-order high-pass realized as x - LP(x), with the tracker initialized
// at the block mean: models a DC-compensation loop that has already settled.
std::vector<double> single_pole_highpass(const std::vector<double>& x, double f3db_hz, double fs_hz);

} // namespace cryolink
