#include "cryolink/waveform.hpp"

#include <cmath>
#include <stdexcept>

namespace cryolink {

std::string to_string(SignalUnit unit) {
    switch (unit) {
        case SignalUnit::Volts: return "V";
        case SignalUnit::MilliWatts: return "mW";
        case SignalUnit::MilliAmps: return "mA";
    }
    return "?";
}

double Waveform::value_at_ui(double time_ui) const {
    const double pos = time_ui * samples_per_ui;
    if (samples.empty() || pos < 0.0 || pos > static_cast<double>(samples.size() - 1)) {
        throw std::out_of_range("sample instant outside waveform span: t=" + std::to_string(time_ui) + " UI");
    }
    const auto i = static_cast<size_t>(pos);
    if (i + 1 >= samples.size()) return samples.back();
    const double frac = pos - static_cast<double>(i);
    return samples[i] + frac * (samples[i + 1] - samples[i]);
}

std::vector<double> single_pole_lowpass(const std::vector<double>& x, double f3db_hz, double fs_hz) {
    if (x.empty()) return {};
    const double a = 1.0 - std::exp(-2.0 * M_PI * f3db_hz / fs_hz);
    std::vector<double> y(x.size());
    double state = x.front();
    for (size_t i = 0; i < x.size(); ++i) {
        state += a * (x[i] - state);
        y[i] = state;
    }
    return y;
}

std::vector<double> single_pole_highpass(const std::vector<double>& x, double f3db_hz, double fs_hz) {
    if (x.empty()) return {};
    const double a = 1.0 - std::exp(-2.0 * M_PI * f3db_hz / fs_hz);
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    std::vector<double> y(x.size());
    double tracker = mean;
    for (size_t i = 0; i < x.size(); ++i) {
        tracker += a * (x[i] - tracker);
        y[i] = x[i] - tracker;
    }
    return y;
}

} // namespace cryolink
