#include "magcat/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>

#include <json.hpp>

#include "magcat/errors.hpp"

namespace magcat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct Located {
    std::string value;
    int line;
};

class Reader {
  public:
    explicit Reader(std::map<std::string, Located> entries) : entries_(std::move(entries)) {}

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    [[noreturn]] void fail(const std::string& key, const std::string& what) const {
        auto it = entries_.find(key);
        std::string where = it == entries_.end() ? "" : "line " + std::to_string(it->second.line) + ": ";
        throw ConfigError(where + "key '" + key + "': " + what);
    }

    std::optional<double> number(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const std::string& s = it->second.value;
        double v = 0.0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || !std::isfinite(v)) fail(key, "expected a number, got '" + s + "'");
        return v;
    }

    std::optional<int> integer(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        const std::string& s = it->second.value;
        int v = 0;
        auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size()) fail(key, "expected an integer, got '" + s + "'");
        return v;
    }

    std::optional<std::string> text(const std::string& key) const {
        auto it = entries_.find(key);
        if (it == entries_.end()) return std::nullopt;
        return it->second.value;
    }

    std::optional<bool> boolean(const std::string& key) const {
        auto s = text(key);
        if (!s) return std::nullopt;
        if (*s == "true" || *s == "1") return true;
        if (*s == "false" || *s == "0") return false;
        fail(key, "expected true or false, got '" + *s + "'");
    }

    void read(const std::string& key, double& dst) const {
        if (auto v = number(key)) dst = *v;
    }
    void read(const std::string& key, int& dst) const {
        if (auto v = integer(key)) dst = *v;
    }

    void positive(const std::string& key, double v) const {
        if (!(v > 0.0)) fail(key, "must be positive");
    }
    void non_negative(const std::string& key, double v) const {
        if (!(v >= 0.0)) fail(key, "must be non-negative");
    }

  private:
    std::map<std::string, Located> entries_;
};

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "g0_mhz", "beta", "g_mhz", "kappa_mhz", "gamma_mhz", "omega_m_ghz", "tau_us", "r", "temperature_k", "n_m", "n_c",
        "s_total", "epsilon", "xi", "theta", "window_nodes", "dark_count_model", "parity", "grid_x_min", "grid_x_max",
        "grid_nx", "grid_y_min", "grid_y_max", "grid_ny", "output_dir", "threads", "sweep_r_start", "sweep_r_stop",
        "sweep_r_count", "sweep_gamma_start", "sweep_gamma_stop", "sweep_gamma_count", "lifetime_t_max_us",
        "lifetime_threshold_delta", "lifetime_threshold_I", "lifetime_step_us", "series_t_start_us",
        "series_t_stop_us", "series_t_count", "lab_frame",
    };
    return keys;
}

void read_range(const Reader& rd, const std::string& prefix, const std::string& suffix, SweepRange& range) {
    rd.read(prefix + "_start" + suffix, range.start);
    rd.read(prefix + "_stop" + suffix, range.stop);
    const std::string count_key = prefix + "_count";
    rd.read(count_key, range.count);
    if (range.count < 1) rd.fail(count_key, "range must contain at least one point");
    if (range.count > 1 && !(range.stop > range.start)) rd.fail(prefix + "_stop" + suffix, "must exceed the start value");
}

}  // namespace

RunConfig parse_config(std::istream& in) {
    std::map<std::string, Located> entries;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_keys().count(key)) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "': missing value");
        if (entries.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": key '" + key + "': given twice");
        entries[key] = {value, line_no};
    }
    const Reader rd(std::move(entries));

    RunConfig cfg;
    SystemParams& p = cfg.params;

    rd.read("g0_mhz", p.g0_mhz);
    rd.read("beta", p.beta_amp);
    rd.positive("g0_mhz", p.g0_mhz);
    rd.positive("beta", p.beta_amp);
    if (auto g = rd.number("g_mhz")) {
        rd.positive("g_mhz", *g);
        p.g_mhz = *g;
        if (rd.has("g0_mhz") && rd.has("beta")) {
            if (std::abs(p.g0_mhz * p.beta_amp - *g) > 1e-9 * *g) rd.fail("g_mhz", "inconsistent with g0_mhz * beta");
        } else if (rd.has("beta")) {
            p.g0_mhz = *g / p.beta_amp;
        } else {
            p.beta_amp = *g / p.g0_mhz;
        }
    } else if (rd.has("g0_mhz") || rd.has("beta")) {
        p.g_mhz = p.g0_mhz * p.beta_amp;
    }

    rd.read("kappa_mhz", p.kappa_mhz);
    rd.positive("kappa_mhz", p.kappa_mhz);
    rd.read("gamma_mhz", p.gamma_mhz);
    rd.non_negative("gamma_mhz", p.gamma_mhz);
    rd.read("omega_m_ghz", p.omega_m_ghz);
    rd.positive("omega_m_ghz", p.omega_m_ghz);

    if (rd.has("tau_us") && rd.has("r")) rd.fail("tau_us", "give either tau_us or r, not both");
    if (auto tau = rd.number("tau_us")) {
        rd.non_negative("tau_us", *tau);
        p.tau_us = *tau;
        p.r.reset();
    }
    if (auto r = rd.number("r")) {
        rd.non_negative("r", *r);
        p.r = *r;
    }

    rd.read("temperature_k", p.temperature_k);
    rd.non_negative("temperature_k", p.temperature_k);
    if (auto nm = rd.number("n_m")) {
        p.n_m = *nm;
    } else if (rd.has("temperature_k")) {
        p.n_m = thermal_occupation(p.omega_m_ghz, p.temperature_k);
    }
    rd.non_negative("n_m", p.n_m);
    rd.read("n_c", p.n_c);
    rd.non_negative("n_c", p.n_c);
    rd.read("s_total", p.s_total);
    rd.positive("s_total", p.s_total);

    Imperfections& imp = cfg.imperfections;
    rd.read("epsilon", imp.epsilon);
    rd.non_negative("epsilon", imp.epsilon);
    rd.read("xi", imp.xi);
    if (!(imp.xi > 0.0 && imp.xi <= 1.0)) rd.fail("xi", "must lie in (0, 1]");
    rd.read("theta", imp.theta);
    rd.read("window_nodes", imp.window_nodes);
    if (imp.window_nodes < 3 || imp.window_nodes % 2 == 0) rd.fail("window_nodes", "must be odd and >= 3");
    if (auto model = rd.text("dark_count_model")) {
        if (*model == "per_click")
            imp.dark_counts = DarkCountModel::PerClick;
        else if (*model == "all_or_nothing")
            imp.dark_counts = DarkCountModel::AllOrNothing;
        else
            rd.fail("dark_count_model", "expected per_click or all_or_nothing");
    }
    if (auto parity = rd.text("parity")) {
        try {
            cfg.parity = parse_parity(*parity);
        } catch (const ParameterError& e) {
            rd.fail("parity", e.what());
        }
    }

    rd.read("grid_x_min", cfg.grid.x_min);
    rd.read("grid_x_max", cfg.grid.x_max);
    rd.read("grid_nx", cfg.grid.nx);
    rd.read("grid_y_min", cfg.grid.y_min);
    rd.read("grid_y_max", cfg.grid.y_max);
    rd.read("grid_ny", cfg.grid.ny);
    if (!(cfg.grid.x_max > cfg.grid.x_min)) rd.fail("grid_x_max", "must exceed grid_x_min");
    if (!(cfg.grid.y_max > cfg.grid.y_min)) rd.fail("grid_y_max", "must exceed grid_y_min");
    if (cfg.grid.nx < 5) rd.fail("grid_nx", "must be at least 5");
    if (cfg.grid.ny < 5) rd.fail("grid_ny", "must be at least 5");

    if (auto dir = rd.text("output_dir")) cfg.output_dir = *dir;
    rd.read("threads", cfg.threads);
    if (cfg.threads < 0) rd.fail("threads", "must be >= 0 (0 = all cores)");

    read_range(rd, "sweep_r", "", cfg.sweep_r);
    rd.non_negative("sweep_r_start", cfg.sweep_r.start);
    read_range(rd, "sweep_gamma", "", cfg.sweep_gamma);
    rd.non_negative("sweep_gamma_start", cfg.sweep_gamma.start);
    read_range(rd, "series_t", "_us", cfg.series_t);
    rd.non_negative("series_t_start_us", cfg.series_t.start);

    rd.read("lifetime_t_max_us", cfg.lifetime_t_max_us);
    rd.positive("lifetime_t_max_us", cfg.lifetime_t_max_us);
    rd.read("lifetime_threshold_delta", cfg.lifetime_threshold_delta);
    rd.positive("lifetime_threshold_delta", cfg.lifetime_threshold_delta);
    rd.read("lifetime_threshold_I", cfg.lifetime_threshold_I);
    rd.positive("lifetime_threshold_I", cfg.lifetime_threshold_I);
    rd.read("lifetime_step_us", cfg.lifetime_step_us);
    rd.positive("lifetime_step_us", cfg.lifetime_step_us);
    if (auto lab = rd.boolean("lab_frame")) cfg.lab_frame = *lab;

    try {
        p.validate();
    } catch (const UnstableRegimeError&) {
        throw;
    } catch (const ParameterError& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse_config(in);
}

std::string to_json(const RunConfig& c) {
    const SystemParams& p = c.params;
    const Imperfections& imp = c.imperfections;
    nlohmann::ordered_json j;
    j["g0_mhz"] = p.g0_mhz;
    j["beta"] = p.beta_amp;
    j["g_mhz"] = p.g_mhz;
    j["kappa_mhz"] = p.kappa_mhz;
    j["gamma_mhz"] = p.gamma_mhz;
    j["omega_m_ghz"] = p.omega_m_ghz;
    if (p.tau_us) j["tau_us"] = *p.tau_us;
    if (p.r) j["r"] = *p.r;
    j["temperature_k"] = p.temperature_k;
    j["n_m"] = p.n_m;
    j["n_c"] = p.n_c;
    j["s_total"] = p.s_total;
    j["epsilon"] = imp.epsilon;
    j["xi"] = imp.xi;
    j["theta"] = imp.theta;
    j["window_nodes"] = imp.window_nodes;
    j["dark_count_model"] = imp.dark_counts == DarkCountModel::PerClick ? "per_click" : "all_or_nothing";
    j["parity"] = to_string(c.parity);
    j["grid_x_min"] = c.grid.x_min;
    j["grid_x_max"] = c.grid.x_max;
    j["grid_nx"] = c.grid.nx;
    j["grid_y_min"] = c.grid.y_min;
    j["grid_y_max"] = c.grid.y_max;
    j["grid_ny"] = c.grid.ny;
    j["output_dir"] = c.output_dir.string();
    j["threads"] = c.threads;
    j["sweep_r_start"] = c.sweep_r.start;
    j["sweep_r_stop"] = c.sweep_r.stop;
    j["sweep_r_count"] = c.sweep_r.count;
    j["sweep_gamma_start"] = c.sweep_gamma.start;
    j["sweep_gamma_stop"] = c.sweep_gamma.stop;
    j["sweep_gamma_count"] = c.sweep_gamma.count;
    j["lifetime_t_max_us"] = c.lifetime_t_max_us;
    j["lifetime_threshold_delta"] = c.lifetime_threshold_delta;
    j["lifetime_threshold_I"] = c.lifetime_threshold_I;
    j["lifetime_step_us"] = c.lifetime_step_us;
    j["series_t_start_us"] = c.series_t.start;
    j["series_t_stop_us"] = c.series_t.stop;
    j["series_t_count"] = c.series_t.count;
    j["lab_frame"] = c.lab_frame;
    return j.dump(2);
}

}  // namespace magcat
