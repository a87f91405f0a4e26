#include "jumphedge/surface.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>

#include "jumphedge/errors.hpp"

namespace jumphedge::pide {

nlohmann::ordered_json SchemeInfo::to_json() const {
    return {{"method", method},
            {"jump_cfl", jump_cfl},
            {"rannacher_half_steps", rannacher_half_steps},
            {"upwinded_rows", upwinded_rows},
            {"extrapolations", extrapolations},
            {"max_overshoot", max_overshoot}};
}

ValueSurface::ValueSurface(sim::TimeGrid tgrid, SpaceGrid xgrid)
    : tg_(tgrid), xg_(xgrid), x_(xgrid.nodes()) {
    const std::size_t n = static_cast<std::size_t>(n_times()) * x_.size();
    values_.assign(n, 0.0);
    deltas_.assign(n, 0.0);
    gammas_.assign(n, 0.0);
}

int ValueSurface::segment_of(double x) const {
    const int n = n_prices();
    int j;
    if (xg_.spacing == Spacing::Uniform) {
        const double h = (xg_.x_max - xg_.x_min) / (n - 1);
        j = static_cast<int>(std::floor((x - xg_.x_min) / h));
    } else {
        const double l0 = std::log(xg_.x_min);
        const double dl = (std::log(xg_.x_max) - l0) / (n - 1);
        j = x > 0.0 ? static_cast<int>(std::floor((std::log(x) - l0) / dl)) : 0;
    }
    j = std::clamp(j, 0, n - 2);
    // guard against floating point edge effects of the closed form
    while (j > 0 && x < x_[j]) --j;
    while (j < n - 2 && x >= x_[j + 1]) ++j;
    return j;
}

void ValueSurface::extract_derivatives() {
    const int nt = n_times(), nx = n_prices();
    for (int k = 0; k < nt; ++k) {
        for (int j = 0; j < nx - 1; ++j)
            deltas_[idx(k, j)] =
                (values_[idx(k, j + 1)] - values_[idx(k, j)]) / (x_[j + 1] - x_[j]);
        deltas_[idx(k, nx - 1)] = deltas_[idx(k, nx - 2)];
        gammas_[idx(k, 0)] = 0.0;
        gammas_[idx(k, nx - 1)] = 0.0;
        for (int j = 1; j < nx - 1; ++j) {
            const double hm = x_[j] - x_[j - 1], hp = x_[j + 1] - x_[j];
            gammas_[idx(k, j)] = 2.0 *
                                 (hm * values_[idx(k, j + 1)] - (hm + hp) * values_[idx(k, j)] +
                                  hp * values_[idx(k, j - 1)]) /
                                 (hm * hp * (hm + hp));
        }
    }
}

void ValueSurface::time_weights(double t, int& k0, double& beta) const {
    const double u = (t - tg_.t0) / tg_.dt();
    k0 = static_cast<int>(std::floor(u));
    k0 = std::clamp(k0, 0, tg_.n_steps - 1);
    beta = std::clamp(u - k0, 0.0, 1.0);
    // Snap exact node hits so that queries at nodes reproduce rows bitwise.
    if (t <= tg_.t0) { k0 = 0; beta = 0.0; }
    if (t >= tg_.t1) { k0 = tg_.n_steps - 1; beta = 1.0; }
    const int near = tg_.index_of_time(t);
    if (near >= 0) {
        if (near == tg_.n_steps) { k0 = tg_.n_steps - 1; beta = 1.0; }
        else { k0 = near; beta = 0.0; }
    }
}

double ValueSurface::row_value(int k, double x) const {
    const int j = segment_of(x);
    const double slope = deltas_[idx(k, j)];
    return values_[idx(k, j)] + slope * (x - x_[j]);
}

double ValueSurface::row_delta(int k, double x) const { return deltas_[idx(k, segment_of(x))]; }

double ValueSurface::row_gamma(int k, double x) const {
    const int j = segment_of(x);
    if (x <= x_.front() || x >= x_.back()) return 0.0;
    const double w = (x - x_[j]) / (x_[j + 1] - x_[j]);
    return (1.0 - w) * gammas_[idx(k, j)] + w * gammas_[idx(k, j + 1)];
}

double ValueSurface::value(double t, double x) const {
    int k;
    double b;
    time_weights(t, k, b);
    if (b == 0.0) return row_value(k, x);
    if (b == 1.0) return row_value(k + 1, x);
    return (1.0 - b) * row_value(k, x) + b * row_value(k + 1, x);
}

double ValueSurface::delta(double t, double x) const {
    int k;
    double b;
    time_weights(t, k, b);
    if (b == 0.0) return row_delta(k, x);
    if (b == 1.0) return row_delta(k + 1, x);
    return (1.0 - b) * row_delta(k, x) + b * row_delta(k + 1, x);
}

double ValueSurface::gamma(double t, double x) const {
    int k;
    double b;
    time_weights(t, k, b);
    if (b == 0.0) return row_gamma(k, x);
    if (b == 1.0) return row_gamma(k + 1, x);
    return (1.0 - b) * row_gamma(k, x) + b * row_gamma(k + 1, x);
}

double ValueSurface::max_abs_value() const {
    double m = 0.0;
    for (const double v : values_) m = std::max(m, std::abs(v));
    return m;
}

void ValueSurface::write_csv(std::ostream& os) const {
    os << "t,x,value,delta,gamma\n";
    char buf[160];
    for (int k = 0; k < n_times(); ++k)
        for (int j = 0; j < n_prices(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n", tg_.node(k),
                          x_[j], values_[idx(k, j)], deltas_[idx(k, j)], gammas_[idx(k, j)]);
            os << buf;
        }
}

namespace {
constexpr char kMagic[8] = {'J', 'H', 'S', 'F', '0', '0', '0', '1'};

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}
template <typename T>
T get(std::istream& is) {
    T v;
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}
}  // namespace

void ValueSurface::write_binary(std::ostream& os) const {
    os.write(kMagic, sizeof(kMagic));
    put(os, tg_.t0);
    put(os, tg_.t1);
    put<std::int32_t>(os, tg_.n_steps);
    put(os, xg_.x_min);
    put(os, xg_.x_max);
    put<std::int32_t>(os, xg_.n_points);
    put<std::int32_t>(os, xg_.spacing == Spacing::Uniform ? 0 : 1);
    const std::uint64_t key_len = cache_key.size();
    put(os, key_len);
    os.write(cache_key.data(), static_cast<std::streamsize>(key_len));
    os.write(reinterpret_cast<const char*>(values_.data()),
             static_cast<std::streamsize>(values_.size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(deltas_.data()),
             static_cast<std::streamsize>(deltas_.size() * sizeof(double)));
    os.write(reinterpret_cast<const char*>(gammas_.data()),
             static_cast<std::streamsize>(gammas_.size() * sizeof(double)));
}

ValueSurface ValueSurface::read_binary(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
        throw ConfigError("surface cache: bad magic");
    sim::TimeGrid tg;
    tg.t0 = get<double>(is);
    tg.t1 = get<double>(is);
    tg.n_steps = get<std::int32_t>(is);
    SpaceGrid xg;
    xg.x_min = get<double>(is);
    xg.x_max = get<double>(is);
    xg.n_points = get<std::int32_t>(is);
    xg.spacing = get<std::int32_t>(is) == 0 ? Spacing::Uniform : Spacing::LogUniform;
    const std::uint64_t key_len = get<std::uint64_t>(is);
    std::string key(key_len, '\0');
    is.read(key.data(), static_cast<std::streamsize>(key_len));
    ValueSurface vs(tg, xg);
    vs.cache_key = key;
    is.read(reinterpret_cast<char*>(vs.values_.data()),
            static_cast<std::streamsize>(vs.values_.size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(vs.deltas_.data()),
            static_cast<std::streamsize>(vs.deltas_.size() * sizeof(double)));
    is.read(reinterpret_cast<char*>(vs.gammas_.data()),
            static_cast<std::streamsize>(vs.gammas_.size() * sizeof(double)));
    if (!is) throw ConfigError("surface cache: truncated file");
    return vs;
}

}  // namespace jumphedge::pide
