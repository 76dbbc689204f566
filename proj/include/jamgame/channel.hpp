#pragma once

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <random>
#include <string>

namespace jamgame {

// Physical scenario: a stationary AP at the origin, a receiver at x and a
// jammer at y, both confined to the segment [L, M] of a half-line.
// Power and noise fields are in dBm / dBm-per-Hz as named.
struct ScenarioConfig {
    double l = 10.0;                       // closest allowed coordinate [m]
    double m = 50.0;                       // farthest allowed coordinate [m]
    double alpha = 2.0;                    // path-loss exponent
    double p_tx_dbm = 23.0;                // AP transmit power
    double p_j_dbm = 23.0;                 // jammer power
    double noise_density_dbm_hz = -174.0;  // -inf means a noise-free channel
    double bandwidth_hz = 20e6;
    double shadow_var_db = 0.0;            // log-normal shadowing variance (dB^2)

    // Throws std::domain_error when 0 < l < m, alpha >= 1 or
    // shadow_var_db >= 0 is violated.
    void validate() const;

    double p_tx_mw() const;
    double p_j_mw() const;
    // Total noise power nu0 = density * bandwidth, in mW (0 for -inf density).
    double noise_power_mw() const;
    bool effectively_noiseless() const { return noise_power_mw() == 0.0; }

    // key=value serialization ('#' starts a comment line).
    static ScenarioConfig from_kv(const std::map<std::string, std::string>& kv);
    static ScenarioConfig from_file(const std::string& path);
    void write_kv(std::ostream& os) const;
};

struct PositionPair {
    double x = 0.0;  // receiver coordinate [m]
    double y = 0.0;  // jammer coordinate [m]
};

// Distance floor applied inside channel_gain_db: pure path loss diverges at
// zero distance, so gains are evaluated at no less than this separation.
inline constexpr double kMinGainDistanceM = 1.0;

// Normalized zero-sum payoff |x-y|^alpha / x^alpha. This is the receiver's
// reward in all noiseless games; it is exactly 0 at co-location.
double normalized_value(double x, double y, double alpha);

// Log-distance path-loss gain in dB: -(47.86 + 10*alpha*log10(d) + shadow),
// with d clamped below at kMinGainDistanceM. Throws std::domain_error for
// distance <= 0.
double channel_gain_db(double distance, double alpha, double shadow_db);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

// Signal-to-noise-plus-jamming ratio in linear units. The shadow terms are
// realized dB draws for the AP->R and J->R links (0 for deterministic gains).
double snjr(const PositionPair& pair, const ScenarioConfig& cfg,
            double shadow_r_db, double shadow_j_db);

// log2(1 + snjr) with shadowing drawn from N(0, shadow_var_db) per link.
// Deterministic when shadow_var_db == 0.
double spectral_efficiency(const PositionPair& pair, const ScenarioConfig& cfg,
                           std::mt19937_64& rng);

// Deterministic variant (shadowing forced to zero).
double spectral_efficiency_mean(const PositionPair& pair, const ScenarioConfig& cfg);

// Shared plain-text config reader: "key = value" lines, '#' comments.
std::map<std::string, std::string> parse_kv_file(const std::string& path);
std::map<std::string, std::string> parse_kv_text(const std::string& text);

}  // namespace jamgame
