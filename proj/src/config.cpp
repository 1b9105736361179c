// config.cpp — `key = value` experiment configuration

#include "jch/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace jch {

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::mott_sweep: return "mott_sweep";
        case ExperimentKind::blockade: return "blockade";
        case ExperimentKind::xy_compare: return "xy_compare";
        case ExperimentKind::decay_check: return "decay_check";
        case ExperimentKind::oracle_check: return "oracle_check";
    }
    throw std::logic_error("unreachable ExperimentKind");
}

ExperimentKind experiment_from_string(const std::string& s) {
    for (const auto k : {ExperimentKind::mott_sweep, ExperimentKind::blockade, ExperimentKind::xy_compare,
                         ExperimentKind::decay_check, ExperimentKind::oracle_check})
        if (to_string(k) == s) return k;
    throw std::invalid_argument("unknown experiment '" + s +
                                "' (expected mott_sweep|blockade|xy_compare|decay_check|oracle_check)");
}

void SweepGrid::validate() const {
    if (!(start > 0.0)) throw std::invalid_argument("sweep: start must be > 0 (log grid)");
    if (!(start < end)) throw std::invalid_argument("sweep: start must be < end");
    if (points < 2) throw std::invalid_argument("sweep: points must be >= 2");
}

std::vector<double> SweepGrid::values() const {
    validate();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(points));
    const double ls = std::log10(start);
    const double le = std::log10(end);
    for (int i = 0; i < points; ++i) {
        if (i == 0) out.push_back(start);
        else if (i == points - 1) out.push_back(end);
        else out.push_back(std::pow(10.0, ls + (le - ls) * i / (points - 1)));
    }
    return out;
}

std::vector<int> ExperimentConfig::chain_sizes() const {
    return sizes.empty() ? std::vector<int>{lattice.num_sites} : sizes;
}

void ExperimentConfig::validate() const {
    lattice.validate();
    params.validate();
    sweep.validate();
    ramp.validate();
    if (trajectories < 1) throw std::invalid_argument("config: trajectories must be >= 1");
    if (dissipative_stride < 1) throw std::invalid_argument("config: dissipative_stride must be >= 1");
    if (!(t_max > 0.0)) throw std::invalid_argument("config: t_max must be > 0");
    if (t_points < 2) throw std::invalid_argument("config: t_points must be >= 2");
    if (!(decay_horizon > 0.0)) throw std::invalid_argument("config: decay_horizon must be > 0");
    if (check_points < 2) throw std::invalid_argument("config: check_points must be >= 2");
    if (!(tolerance > 0.0)) throw std::invalid_argument("config: tolerance must be > 0");
    for (const int n : chain_sizes())
        if (n < 1) throw std::invalid_argument("config: sizes must be >= 1");
    for (const double a : xy_hop_A)
        if (!(a > 0.0)) throw std::invalid_argument("config: xy_hop_A entries must be > 0");

    switch (experiment) {
        case ExperimentKind::blockade:
            if (lattice.num_sites < 3 || lattice.num_sites % 2 == 0)
                throw std::invalid_argument("config: blockade needs an odd num_sites >= 3");
            break;
        case ExperimentKind::xy_compare: {
            if (lattice.num_sites < 2) throw std::invalid_argument("config: xy_compare needs num_sites >= 2");
            if (xy_hop_A.empty()) throw std::invalid_argument("config: xy_hop_A is empty");
            std::set<int> seen;
            for (const int k : up_sites) {
                if (k < 0 || k >= lattice.num_sites)
                    throw std::invalid_argument("config: up_sites entry out of range");
                if (!seen.insert(k).second) throw std::invalid_argument("config: repeated up_sites entry");
            }
            break;
        }
        case ExperimentKind::decay_check:
        case ExperimentKind::oracle_check:
            if (!(params.kappa > 0.0) || !(params.gamma > 0.0))
                throw std::invalid_argument("config: checks need kappa > 0 and gamma > 0");
            break;
        case ExperimentKind::mott_sweep:
            break;
    }
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw std::invalid_argument("config: bad value '" + text + "' for key '" + key + "'");
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true") return true;
    if (text == "false") return false;
    throw std::invalid_argument("config: key '" + key + "' expects true|false, got '" + text + "'");
}

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_number<T>(key, trim(item)));
    return out;
}

using Setter = std::function<void(ExperimentConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"experiment", [](auto& c, auto&, auto& v) { c.experiment = experiment_from_string(v); }},
        {"num_sites", [](auto& c, auto& k, auto& v) { c.lattice.num_sites = parse_number<int>(k, v); }},
        {"sizes", [](auto& c, auto& k, auto& v) { c.sizes = parse_list<int>(k, v); }},
        {"boundary", [](auto& c, auto&, auto& v) { c.lattice.boundary = boundary_from_string(v); }},
        {"photon_cutoff",
         [](auto& c, auto& k, auto& v) {
             if (v == "auto") c.lattice.photon_cutoff.reset();
             else c.lattice.photon_cutoff = parse_number<int>(k, v);
         }},
        {"hop_A", [](auto& c, auto& k, auto& v) { c.params.hop_A = parse_number<double>(k, v); }},
        {"detuning", [](auto& c, auto& k, auto& v) { c.params.detuning = parse_number<double>(k, v); }},
        {"kappa", [](auto& c, auto& k, auto& v) { c.params.kappa = parse_number<double>(k, v); }},
        {"gamma", [](auto& c, auto& k, auto& v) { c.params.gamma = parse_number<double>(k, v); }},
        {"filling", [](auto& c, auto& k, auto& v) { c.params.filling = parse_number<int>(k, v); }},
        {"omega_d", [](auto& c, auto& k, auto& v) { c.params.omega_d = parse_number<double>(k, v); }},
        {"sweep_start", [](auto& c, auto& k, auto& v) { c.sweep.start = parse_number<double>(k, v); }},
        {"sweep_end", [](auto& c, auto& k, auto& v) { c.sweep.end = parse_number<double>(k, v); }},
        {"sweep_points", [](auto& c, auto& k, auto& v) { c.sweep.points = parse_number<int>(k, v); }},
        {"ramp_start", [](auto& c, auto& k, auto& v) { c.ramp.delta_start = parse_number<double>(k, v); }},
        {"ramp_duration", [](auto& c, auto& k, auto& v) { c.ramp.duration = parse_number<double>(k, v); }},
        {"ramp_shape", [](auto& c, auto&, auto& v) { c.ramp.shape = ramp_shape_from_string(v); }},
        {"trajectories", [](auto& c, auto& k, auto& v) { c.trajectories = parse_number<int>(k, v); }},
        {"base_seed", [](auto& c, auto& k, auto& v) { c.base_seed = parse_number<std::uint64_t>(k, v); }},
        {"output_dir", [](auto& c, auto&, auto& v) { c.output_dir = v; }},
        {"dissipative_stride",
         [](auto& c, auto& k, auto& v) { c.dissipative_stride = parse_number<int>(k, v); }},
        {"t_max", [](auto& c, auto& k, auto& v) { c.t_max = parse_number<double>(k, v); }},
        {"t_points", [](auto& c, auto& k, auto& v) { c.t_points = parse_number<int>(k, v); }},
        {"blockade_detuning",
         [](auto& c, auto& k, auto& v) {
             if (v == "auto") c.blockade_detuning.reset();
             else c.blockade_detuning = parse_number<double>(k, v);
         }},
        {"far_detuned", [](auto& c, auto& k, auto& v) { c.far_detuned = parse_bool(k, v); }},
        {"xy_hop_A", [](auto& c, auto& k, auto& v) { c.xy_hop_A = parse_list<double>(k, v); }},
        {"up_sites", [](auto& c, auto& k, auto& v) { c.up_sites = parse_list<int>(k, v); }},
        {"decay_horizon", [](auto& c, auto& k, auto& v) { c.decay_horizon = parse_number<double>(k, v); }},
        {"check_points", [](auto& c, auto& k, auto& v) { c.check_points = parse_number<int>(k, v); }},
        {"tolerance", [](auto& c, auto& k, auto& v) { c.tolerance = parse_number<double>(k, v); }},
    };
    return table;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::set<std::string> seen;
    std::stringstream ss(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(ss, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        const auto it = setters().find(key);
        if (it == setters().end())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": repeated key '" + key + "'");
        if (value.empty())
            throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty value for '" + key + "'");
        it->second(cfg, key, value);
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["experiment"] = to_string(cfg.experiment);
    j["num_sites"] = cfg.lattice.num_sites;
    j["sizes"] = cfg.chain_sizes();
    j["boundary"] = to_string(cfg.lattice.boundary);
    if (cfg.lattice.photon_cutoff) j["photon_cutoff"] = *cfg.lattice.photon_cutoff;
    else j["photon_cutoff"] = "auto";
    j["g"] = cfg.params.g;
    j["hop_A"] = cfg.params.hop_A;
    j["detuning"] = cfg.params.detuning;
    j["kappa"] = cfg.params.kappa;
    j["gamma"] = cfg.params.gamma;
    j["filling"] = cfg.params.filling;
    j["omega_d"] = cfg.params.omega_d;
    j["sweep_start"] = cfg.sweep.start;
    j["sweep_end"] = cfg.sweep.end;
    j["sweep_points"] = cfg.sweep.points;
    j["ramp_start"] = cfg.ramp.delta_start;
    j["ramp_duration"] = cfg.ramp.duration;
    j["ramp_shape"] = to_string(cfg.ramp.shape);
    j["trajectories"] = cfg.trajectories;
    j["base_seed"] = cfg.base_seed;
    j["dissipative_stride"] = cfg.dissipative_stride;
    j["t_max"] = cfg.t_max;
    j["t_points"] = cfg.t_points;
    if (cfg.blockade_detuning) j["blockade_detuning"] = *cfg.blockade_detuning;
    else j["blockade_detuning"] = "auto";
    j["far_detuned"] = cfg.far_detuned;
    j["xy_hop_A"] = cfg.xy_hop_A;
    j["up_sites"] = cfg.up_sites;
    j["decay_horizon"] = cfg.decay_horizon;
    j["check_points"] = cfg.check_points;
    j["tolerance"] = cfg.tolerance;
    return j;
}

}  // namespace jch
