#include "qrc/tasks/tasks.hpp"

#include <cmath>

namespace qrc {

std::vector<double> linspace_step(double start, double stop, double step) {
    if (!(step > 0.0) || stop < start) throw InvalidArgument("linspace_step: need step > 0 and stop >= start");
    std::vector<double> out;
    const long n = std::lround(std::floor((stop - start) / step + 1e-9));
    for (long i = 0; i <= n; ++i) out.push_back(start + static_cast<double>(i) * step);
    return out;
}

void TaskCommon::validate() const {
    if (!(omega > 0.0)) throw ConfigError("omega must be positive");
    if (!(dt > 0.0)) throw ConfigError("dt must be positive");
    if (threads < 1) throw ConfigError("threads must be >= 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) throw ConfigError("train_fraction must be in (0, 1)");
    if (sigma_in < 0.0 || jitter_sigma < 0.0) throw ConfigError("noise levels must be >= 0");
    if (realizations < 1) throw ConfigError("realizations must be >= 1");
    try {
        dissipation.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
}

double draw_duration(double mean, double sd, Rng& rng) {
    if (mean < 0.0 || sd < 0.0) throw InvalidArgument("draw_duration: mean and sd must be >= 0");
    if (sd == 0.0) return mean;
    std::normal_distribution<double> g(mean, sd);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        const double t = g(rng);
        if (t >= 0.0) return t;
    }
    throw NumericalError("draw_duration: no non-negative draw");
}

}  // namespace qrc
