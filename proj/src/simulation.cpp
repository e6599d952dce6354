#include <cmath>
#include <numbers>

#include "lyapcert/explorer.hpp"

namespace lyapcert {

NoiseStream::NoiseStream(double sigma, std::uint64_t seed)
    : sigma_(sigma), off_(sigma <= 1e-300), engine_(seed) {}

double NoiseStream::next() {
    if (off_) return 0.0;
    if (have_spare_) {
        have_spare_ = false;
        return sigma_ * spare_;
    }
    auto uniform = [this] { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; };
    const double u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return sigma_ * r * std::cos(t);
}

namespace {

void check_start(double x0) {
    if (!(x0 >= -1.0 && x0 < 1.0)) throw DomainError("simulate: x0 must lie in [-1, 1)");
}

}  // namespace

SimulationResult simulate(const MapParams& p, const NoiseParams& n, double x0, std::uint64_t steps,
                          std::uint64_t seed, bool keep_trajectory) {
    p.validate();
    n.validate();
    check_start(x0);
    if (steps < 1) throw DomainError("simulate: steps must be >= 1");

    SimulationResult res;
    if (keep_trajectory) res.trajectory.reserve(steps + 1);
    NoiseStream noise(n.sigma, seed);
    const double c = std::log(p.alpha * (1.0 + p.beta));
    const double a1 = p.alpha - 1.0;

    // batch means over 100 contiguous batches
    const std::uint64_t batches = steps >= 200 ? 100 : 1;
    const std::uint64_t batch_len = steps / batches;
    std::vector<double> bsum(batches, 0.0);
    std::vector<std::uint64_t> bcnt(batches, 0);
    double total = 0.0, total_sq = 0.0;

    double x = x0;
    for (std::uint64_t i = 0; i < steps; ++i) {
        if (keep_trajectory) res.trajectory.push_back(x);
        if (a1 > 0.0 && x == 0.0) {
            ++res.skipped;
        } else {
            const double v = a1 > 0.0 ? c + a1 * std::log(std::fabs(x)) : c;
            const std::uint64_t b = std::min(i / batch_len, batches - 1);
            bsum[b] += v;
            ++bcnt[b];
            total += v;
            total_sq += v * v;
            ++res.used;
        }
        x = fold_point(map_point(p, x) + noise.next());
    }
    if (keep_trajectory) res.trajectory.push_back(x);

    if (res.used == 0) throw DomainError("simulate: every iterate hit the critical point");
    res.birkhoff = total / static_cast<double>(res.used);
    if (batches > 1) {
        double s = 0.0, s2 = 0.0;
        std::uint64_t nb = 0;
        for (std::uint64_t b = 0; b < batches; ++b) {
            if (bcnt[b] == 0) continue;
            double m = bsum[b] / static_cast<double>(bcnt[b]);
            s += m;
            s2 += m * m;
            ++nb;
        }
        const double mean = s / static_cast<double>(nb);
        const double var = (s2 - static_cast<double>(nb) * mean * mean) / static_cast<double>(nb - 1);
        res.std_error = std::sqrt(std::max(var, 0.0) / static_cast<double>(nb));
    } else {
        const double u = static_cast<double>(res.used);
        const double var = (total_sq - u * res.birkhoff * res.birkhoff) / std::max(u - 1.0, 1.0);
        res.std_error = std::sqrt(std::max(var, 0.0) / u);
    }
    return res;
}

TwoPointResult two_point(const MapParams& p, const NoiseParams& n, double x0, double y0, std::uint64_t steps,
                         std::uint64_t seed) {
    p.validate();
    n.validate();
    check_start(x0);
    check_start(y0);
    TwoPointResult res;
    res.raw.reserve(steps + 1);
    res.circle.reserve(steps + 1);
    NoiseStream noise(n.sigma, seed);
    double x = x0, y = y0;
    for (std::uint64_t i = 0;; ++i) {
        const double d = std::fabs(x - y);
        res.raw.push_back(d);
        res.circle.push_back(std::min(d, 2.0 - d));
        if (i == steps) break;
        const double w = noise.next();
        x = fold_point(map_point(p, x) + w);
        y = fold_point(map_point(p, y) + w);
    }
    return res;
}

}  // namespace lyapcert
