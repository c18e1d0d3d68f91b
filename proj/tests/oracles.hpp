// Reference computations that share no code with the library.
#ifndef GG1_TESTS_ORACLES_HPP
#define GG1_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>
#include <cstring>
#include <functional>
#include <numeric>
#include <vector>

namespace oracle {

// Stationary law of the birth-death chain on {0..N} with constant birth rate
// lambda and death rate mu, from detailed balance.
inline std::vector<double> birth_death_stationary(double lambda, double mu, int N) {
    std::vector<long double> w(static_cast<std::size_t>(N) + 1);
    w[0] = 1.0L;
    for (int x = 1; x <= N; ++x) w[x] = w[x - 1] * (static_cast<long double>(lambda) / mu);
    const long double z = std::accumulate(w.begin(), w.end(), 0.0L);
    std::vector<double> p(w.size());
    for (std::size_t x = 0; x < w.size(); ++x) p[x] = static_cast<double>(w[x] / z);
    return p;
}

inline double birth_death_mean(double lambda, double mu, int N) {
    const auto p = birth_death_stationary(lambda, mu, N);
    long double m = 0.0L;
    for (std::size_t x = 0; x < p.size(); ++x) m += static_cast<long double>(x) * p[x];
    return static_cast<double>(m);
}

// Composite Simpson rule with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 20000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

// Pollaczek-Khinchine mean number in system for M/G/1.
inline double mg1_mean_in_system(double lambda, double mean_service, double cv2_service) {
    const double rho = lambda * mean_service;
    return rho + rho * rho * (1.0 + cv2_service) / (2.0 * (1.0 - rho));
}

inline std::uint64_t ulp_distance(double a, double b) {
    std::int64_t ia, ib;
    std::memcpy(&ia, &a, sizeof a);
    std::memcpy(&ib, &b, sizeof b);
    if (ia < 0) ia = std::int64_t(0x8000000000000000ULL) - ia;
    if (ib < 0) ib = std::int64_t(0x8000000000000000ULL) - ib;
    return ia > ib ? std::uint64_t(ia - ib) : std::uint64_t(ib - ia);
}

inline double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_sd(const std::vector<double>& v) {
    const double m = mean_of(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace oracle

#endif  // GG1_TESTS_ORACLES_HPP
