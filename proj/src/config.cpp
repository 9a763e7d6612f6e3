#include "qbounce/config.hpp"

#include <cctype>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "qbounce/errors.hpp"

namespace qbounce {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0;
    std::size_t b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

[[noreturn]] void line_error(int line, const std::string& what) {
    throw ConfigError("config: line " + std::to_string(line) + ": " + what);
}

double parse_real(const std::string& value, int line) {
    const std::string v = trim(value);
    if (v.empty()) line_error(line, "empty value");
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        line_error(line, "malformed real '" + v + "'");
    if (!std::isfinite(x)) line_error(line, "non-finite value '" + v + "'");
    return x;
}

long long parse_integer(const std::string& value, int line) {
    const std::string v = trim(value);
    if (v.empty()) line_error(line, "empty value");
    char* end = nullptr;
    errno = 0;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        line_error(line, "malformed integer '" + v + "'");
    return x;
}

unsigned long long parse_unsigned(const std::string& value, int line) {
    const std::string v = trim(value);
    if (v.empty()) line_error(line, "empty value");
    if (v[0] == '-') line_error(line, "negative value '" + v + "'");
    char* end = nullptr;
    errno = 0;
    const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
    if (end != v.c_str() + v.size() || errno == ERANGE)
        line_error(line, "malformed unsigned integer '" + v + "'");
    return x;
}

std::vector<std::string> split_list(const std::string& value, int line) {
    std::vector<std::string> out;
    const std::string v = trim(value);
    if (v.empty()) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t sep = v.find(';', pos);
        const std::string piece = trim(v.substr(pos, sep - pos));
        if (piece.empty()) line_error(line, "empty list element");
        out.push_back(piece);
        if (sep == std::string::npos) break;
        pos = sep + 1;
    }
    return out;
}

std::vector<double> parse_real_list(const std::string& value, int line) {
    std::vector<double> out;
    for (const std::string& piece : split_list(value, line))
        out.push_back(parse_real(piece, line));
    return out;
}

std::vector<long long> parse_integer_list(const std::string& value, int line) {
    std::vector<long long> out;
    for (const std::string& piece : split_list(value, line))
        out.push_back(parse_integer(piece, line));
    return out;
}

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

using Setter = std::function<void(RunConfig&, const std::string&, int)>;

const std::map<std::string, Setter>& key_table() {
    static const std::map<std::string, Setter> table = {
        {"mass_kg", [](RunConfig& c, const std::string& v, int l) { c.mass_kg = parse_real(v, l); }},
        {"g_m_per_s2", [](RunConfig& c, const std::string& v, int l) { c.g_m_per_s2 = parse_real(v, l); }},
        {"z0_m", [](RunConfig& c, const std::string& v, int l) { c.z0_m = parse_real(v, l); }},
        {"v0_m_per_s", [](RunConfig& c, const std::string& v, int l) { c.v0_m_per_s = parse_real(v, l); }},
        {"sigma_z_m", [](RunConfig& c, const std::string& v, int l) { c.sigma_z_m = parse_real(v, l); }},
        {"v_horizontal_m_per_s", [](RunConfig& c, const std::string& v, int l) { c.v_horizontal_m_per_s = parse_real(v, l); }},
        {"d_mirror_m", [](RunConfig& c, const std::string& v, int l) { c.d_mirror_m = parse_real(v, l); }},
        {"d_detector_m", [](RunConfig& c, const std::string& v, int l) { c.d_detector_m = parse_real(v, l); }},
        {"n_gqs", [](RunConfig& c, const std::string& v, int l) { c.n_gqs = parse_integer(v, l); }},
        {"truncation_tol", [](RunConfig& c, const std::string& v, int l) { c.truncation_tol = parse_real(v, l); }},
        {"truncation_granularity", [](RunConfig& c, const std::string& v, int l) { c.truncation_granularity = parse_integer(v, l); }},
        {"truncation_cap", [](RunConfig& c, const std::string& v, int l) { c.truncation_cap = parse_integer(v, l); }},
        {"delta_z_m", [](RunConfig& c, const std::string& v, int l) { c.delta_z_m = parse_real(v, l); }},
        {"nyquist_safety", [](RunConfig& c, const std::string& v, int l) { c.nyquist_safety = parse_real(v, l); }},
        {"x_max", [](RunConfig& c, const std::string& v, int l) { c.x_max = parse_real(v, l); }},
        {"memory_cap", [](RunConfig& c, const std::string& v, int l) { c.memory_cap = parse_unsigned(v, l); }},
        {"family_count", [](RunConfig& c, const std::string& v, int l) { c.family_count = parse_integer(v, l); }},
        {"family_halfwidth_rel", [](RunConfig& c, const std::string& v, int l) { c.family_halfwidth_rel = parse_real(v, l); }},
        {"n_events", [](RunConfig& c, const std::string& v, int l) { c.n_events = parse_integer(v, l); }},
        {"m_repetitions", [](RunConfig& c, const std::string& v, int l) { c.m_repetitions = parse_integer(v, l); }},
        {"seed", [](RunConfig& c, const std::string& v, int l) { c.seed = parse_unsigned(v, l); }},
        {"sigma_det_m", [](RunConfig& c, const std::string& v, int l) { c.sigma_det_m = parse_real(v, l); }},
        {"delta_g_rel", [](RunConfig& c, const std::string& v, int l) { c.delta_g_rel = parse_real(v, l); }},
        {"reflection_efficiency", [](RunConfig& c, const std::string& v, int l) { c.reflection_efficiency = parse_real(v, l); }},
        {"hist_bins", [](RunConfig& c, const std::string& v, int l) { c.hist_bins = parse_integer(v, l); }},
        {"snapshot_x_m", [](RunConfig& c, const std::string& v, int l) { c.snapshot_x_m = parse_real_list(v, l); }},
        {"fisher_n_list", [](RunConfig& c, const std::string& v, int l) { c.fisher_n_list = parse_integer_list(v, l); }},
        {"scan_param", [](RunConfig& c, const std::string& v, int l) {
             c.scan_param = trim(v);
             if (c.scan_param.empty()) line_error(l, "empty value");
         }},
        {"scan_values", [](RunConfig& c, const std::string& v, int l) { c.scan_values = parse_real_list(v, l); }},
        {"out_dir", [](RunConfig& c, const std::string& v, int l) {
             c.out_dir = trim(v);
             if (c.out_dir.empty()) line_error(l, "empty value");
         }},
    };
    return table;
}

} // namespace

WavePacketParams RunConfig::params() const {
    WavePacketParams p;
    p.m = mass_kg;
    p.g = g_m_per_s2;
    p.z0 = z0_m;
    p.v0 = v0_m_per_s;
    p.sigma_z = sigma_z_m;
    p.V = v_horizontal_m_per_s;
    p.d = d_mirror_m;
    p.D = d_detector_m;
    return p;
}

PipelineOptions RunConfig::options() const {
    PipelineOptions o;
    o.n_gqs = static_cast<int>(n_gqs);
    o.truncation_tol = truncation_tol;
    o.granularity = static_cast<int>(truncation_granularity);
    o.truncation_cap = static_cast<int>(truncation_cap);
    o.delta_z = delta_z_m;
    o.nyquist_safety = nyquist_safety;
    o.x_max = x_max;
    o.memory_cap = static_cast<std::size_t>(memory_cap);
    return o;
}

void RunConfig::validate() const {
    params().validate();
    if (n_gqs < 0 || n_gqs > 10000000)
        throw ConfigError("config: n_gqs must be in [0, 1e7]");
    if (!(truncation_tol > 0.0) || !(truncation_tol < 1.0))
        throw ConfigError("config: truncation_tol must be in (0, 1)");
    if (truncation_granularity < 1)
        throw ConfigError("config: truncation_granularity must be positive");
    if (truncation_cap < 1)
        throw ConfigError("config: truncation_cap must be positive");
    if (!(delta_z_m >= 0.0))
        throw ConfigError("config: delta_z_m must be nonnegative");
    if (!(nyquist_safety > 0.0) || !(nyquist_safety <= 0.5))
        throw ConfigError("config: nyquist_safety must be in (0, 0.5]");
    if (!(x_max > 0.0))
        throw ConfigError("config: x_max must be positive");
    if (memory_cap < 4096ULL)
        throw ConfigError("config: memory_cap must be at least 4096 samples");
    if (family_count < 5 || family_count % 2 == 0)
        throw ConfigError("config: family_count must be odd and at least 5");
    if (!(family_halfwidth_rel > 0.0) || !(family_halfwidth_rel < 1.0))
        throw ConfigError("config: family_halfwidth_rel must be in (0, 1)");
    if (n_events < 1)
        throw ConfigError("config: n_events must be positive");
    if (m_repetitions < 1)
        throw ConfigError("config: m_repetitions must be positive");
    if (!(sigma_det_m >= 0.0))
        throw ConfigError("config: sigma_det_m must be nonnegative");
    if (!(delta_g_rel > 0.0) || !(delta_g_rel < 0.5))
        throw ConfigError("config: delta_g_rel must be in (0, 0.5)");
    if (!(reflection_efficiency > 0.0) || !(reflection_efficiency <= 1.0))
        throw ConfigError("config: reflection_efficiency must be in (0, 1]");
    if (hist_bins < 1)
        throw ConfigError("config: hist_bins must be positive");
    for (double x : snapshot_x_m)
        if (!(x >= 0.0) || !(x <= d_detector_m))
            throw ConfigError("config: snapshot_x_m entries must lie in [0, d_detector_m]");
    if (fisher_n_list.empty())
        throw ConfigError("config: fisher_n_list must not be empty");
    for (long long n : fisher_n_list)
        if (n < 1) throw ConfigError("config: fisher_n_list entries must be positive");
    const std::vector<std::string>& names = scannable_params();
    bool known = false;
    for (const std::string& name : names) known = known || name == scan_param;
    if (!known)
        throw ConfigError("config: scan_param '" + scan_param + "' is not scannable");
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string stripped = trim(raw);
        if (stripped.empty()) continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            line_error(line, "expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = stripped.substr(eq + 1);
        if (key.empty()) line_error(line, "missing key");
        const auto it = key_table().find(key);
        if (it == key_table().end())
            line_error(line, "unknown key '" + key + "'");
        if (!seen.insert(key).second)
            line_error(line, "duplicate key '" + key + "'");
        it->second(cfg, value, line);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    const auto real_list = [](const std::vector<double>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ';';
            s += format_real(xs[i]);
        }
        return s;
    };
    const auto integer_list = [](const std::vector<long long>& xs) {
        std::string s;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (i) s += ';';
            s += std::to_string(xs[i]);
        }
        return s;
    };
    out << "mass_kg = " << format_real(cfg.mass_kg) << '\n';
    out << "g_m_per_s2 = " << format_real(cfg.g_m_per_s2) << '\n';
    out << "z0_m = " << format_real(cfg.z0_m) << '\n';
    out << "v0_m_per_s = " << format_real(cfg.v0_m_per_s) << '\n';
    out << "sigma_z_m = " << format_real(cfg.sigma_z_m) << '\n';
    out << "v_horizontal_m_per_s = " << format_real(cfg.v_horizontal_m_per_s) << '\n';
    out << "d_mirror_m = " << format_real(cfg.d_mirror_m) << '\n';
    out << "d_detector_m = " << format_real(cfg.d_detector_m) << '\n';
    out << "n_gqs = " << cfg.n_gqs << '\n';
    out << "truncation_tol = " << format_real(cfg.truncation_tol) << '\n';
    out << "truncation_granularity = " << cfg.truncation_granularity << '\n';
    out << "truncation_cap = " << cfg.truncation_cap << '\n';
    out << "delta_z_m = " << format_real(cfg.delta_z_m) << '\n';
    out << "nyquist_safety = " << format_real(cfg.nyquist_safety) << '\n';
    out << "x_max = " << format_real(cfg.x_max) << '\n';
    out << "memory_cap = " << cfg.memory_cap << '\n';
    out << "family_count = " << cfg.family_count << '\n';
    out << "family_halfwidth_rel = " << format_real(cfg.family_halfwidth_rel) << '\n';
    out << "n_events = " << cfg.n_events << '\n';
    out << "m_repetitions = " << cfg.m_repetitions << '\n';
    out << "seed = " << cfg.seed << '\n';
    out << "sigma_det_m = " << format_real(cfg.sigma_det_m) << '\n';
    out << "delta_g_rel = " << format_real(cfg.delta_g_rel) << '\n';
    out << "reflection_efficiency = " << format_real(cfg.reflection_efficiency) << '\n';
    out << "hist_bins = " << cfg.hist_bins << '\n';
    out << "snapshot_x_m = " << real_list(cfg.snapshot_x_m) << '\n';
    out << "fisher_n_list = " << integer_list(cfg.fisher_n_list) << '\n';
    out << "scan_param = " << cfg.scan_param << '\n';
    out << "scan_values = " << real_list(cfg.scan_values) << '\n';
    out << "out_dir = " << cfg.out_dir << '\n';
    return out.str();
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string text = serialize_config(cfg);
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

const std::vector<std::string>& scannable_params() {
    static const std::vector<std::string> names = {
        "z0_m", "v0_m_per_s", "sigma_z_m", "g_m_per_s2",
        "d_mirror_m", "d_detector_m",
    };
    return names;
}

RunConfig with_scan_value(const RunConfig& cfg, const std::string& param,
                          double value) {
    RunConfig out = cfg;
    if (param == "z0_m") out.z0_m = value;
    else if (param == "v0_m_per_s") out.v0_m_per_s = value;
    else if (param == "sigma_z_m") out.sigma_z_m = value;
    else if (param == "g_m_per_s2") out.g_m_per_s2 = value;
    else if (param == "d_mirror_m") out.d_mirror_m = value;
    else if (param == "d_detector_m") out.d_detector_m = value;
    else throw ConfigError("config: scan_param '" + param + "' is not scannable");
    out.validate();
    return out;
}

} // namespace qbounce
