#include "jamgame/channel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace jamgame {

void ScenarioConfig::validate() const {
    if (!(l > 0.0) || !(m > l))
        throw std::domain_error("ScenarioConfig: requires 0 < l < m");
    if (!(alpha >= 1.0))
        throw std::domain_error("ScenarioConfig: requires alpha >= 1");
    if (!(shadow_var_db >= 0.0))
        throw std::domain_error("ScenarioConfig: requires shadow_var_db >= 0");
    if (!(bandwidth_hz > 0.0))
        throw std::domain_error("ScenarioConfig: requires bandwidth_hz > 0");
}

double ScenarioConfig::p_tx_mw() const { return dbm_to_mw(p_tx_dbm); }
double ScenarioConfig::p_j_mw() const { return dbm_to_mw(p_j_dbm); }

double ScenarioConfig::noise_power_mw() const {
    if (std::isinf(noise_density_dbm_hz) && noise_density_dbm_hz < 0.0) return 0.0;
    return dbm_to_mw(noise_density_dbm_hz) * bandwidth_hz;
}

double normalized_value(double x, double y, double alpha) {
    if (!(x > 0.0)) throw std::domain_error("normalized_value: requires x > 0");
    if (x == y) return 0.0;
    return std::pow(std::abs(x - y) / x, alpha);
}

double channel_gain_db(double distance, double alpha, double shadow_db) {
    if (!(distance > 0.0))
        throw std::domain_error("channel_gain_db: requires distance > 0");
    const double d = std::max(distance, kMinGainDistanceM);
    return -(47.86 + 10.0 * alpha * std::log10(d) + shadow_db);
}

double snjr(const PositionPair& pair, const ScenarioConfig& cfg,
            double shadow_r_db, double shadow_j_db) {
    const double g_r = db_to_linear(channel_gain_db(pair.x, cfg.alpha, shadow_r_db));
    const double d_j = std::max(std::abs(pair.x - pair.y), kMinGainDistanceM);
    const double g_j = db_to_linear(channel_gain_db(d_j, cfg.alpha, shadow_j_db));
    return g_r * cfg.p_tx_mw() / (cfg.noise_power_mw() + g_j * cfg.p_j_mw());
}

double spectral_efficiency(const PositionPair& pair, const ScenarioConfig& cfg,
                           std::mt19937_64& rng) {
    double shadow_r = 0.0, shadow_j = 0.0;
    if (cfg.shadow_var_db > 0.0) {
        std::normal_distribution<double> shadow(0.0, std::sqrt(cfg.shadow_var_db));
        shadow_r = shadow(rng);  // independent draws for the two links
        shadow_j = shadow(rng);
    }
    return std::log2(1.0 + snjr(pair, cfg, shadow_r, shadow_j));
}

double spectral_efficiency_mean(const PositionPair& pair, const ScenarioConfig& cfg) {
    return std::log2(1.0 + snjr(pair, cfg, 0.0, 0.0));
}

namespace {

double parse_double(const std::string& key, const std::string& raw) {
    if (raw == "-inf") return -std::numeric_limits<double>::infinity();
    try {
        size_t used = 0;
        double v = std::stod(raw, &used);
        while (used < raw.size() && std::isspace(static_cast<unsigned char>(raw[used]))) ++used;
        if (used != raw.size()) throw std::invalid_argument(raw);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad numeric value for '" + key + "': " + raw);
    }
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::map<std::string, std::string> parse_kv_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config: line " + std::to_string(lineno) +
                                     " is not key=value: " + line);
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw std::runtime_error("config: empty key on line " + std::to_string(lineno));
        kv[key] = val;
    }
    return kv;
}

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kv_text(ss.str());
}

ScenarioConfig ScenarioConfig::from_kv(const std::map<std::string, std::string>& kv) {
    ScenarioConfig cfg;
    auto get = [&](const char* key, double& out) {
        auto it = kv.find(key);
        if (it != kv.end()) out = parse_double(key, it->second);
    };
    get("l", cfg.l);
    get("m", cfg.m);
    get("alpha", cfg.alpha);
    get("p_tx_dbm", cfg.p_tx_dbm);
    get("p_j_dbm", cfg.p_j_dbm);
    get("noise_density_dbm_hz", cfg.noise_density_dbm_hz);
    get("bandwidth_hz", cfg.bandwidth_hz);
    get("shadow_var_db", cfg.shadow_var_db);
    cfg.validate();
    return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    return from_kv(parse_kv_file(path));
}

void ScenarioConfig::write_kv(std::ostream& os) const {
    os << "l = " << l << "\n"
       << "m = " << m << "\n"
       << "alpha = " << alpha << "\n"
       << "p_tx_dbm = " << p_tx_dbm << "\n"
       << "p_j_dbm = " << p_j_dbm << "\n"
       << "noise_density_dbm_hz = " << noise_density_dbm_hz << "\n"
       << "bandwidth_hz = " << bandwidth_hz << "\n"
       << "shadow_var_db = " << shadow_var_db << "\n";
}

}  // namespace jamgame
