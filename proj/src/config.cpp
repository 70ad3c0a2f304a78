#include "egns/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace egns {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> items;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) items.push_back(trim(item));
    return items;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) fail(line, "trailing characters in number '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected a number, got '" + s + "'");
    }
}

int parse_int(const std::string& s, int line) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) fail(line, "trailing characters in integer '" + s + "'");
        return v;
    } catch (const ConfigError&) {
        throw;
    } catch (...) {
        fail(line, "expected an integer, got '" + s + "'");
    }
}

}  // namespace

void ExperimentSpec::validate() const {
    if (mesh_m.empty()) throw ConfigError("config: mesh_m list is empty");
    if (nu.empty()) throw ConfigError("config: nu list is empty");
    for (int m : mesh_m)
        if (m < 1) throw ConfigError("config: mesh_m entries must be >= 1");
    for (double n : nu)
        if (n <= 0.0) throw ConfigError("config: nu entries must be positive");
    if (dt <= 0.0) throw ConfigError("config: dt must be positive");
    if (picard_tol <= 0.0) throw ConfigError("config: picard_tol must be positive");
    if (picard_max_iters < 1) throw ConfigError("config: picard_max_iters must be >= 1");
    if (jobs < 1) throw ConfigError("config: jobs must be >= 1");
    const double ratio = T / dt;
    const long long n = std::llround(ratio);
    if (n < 0 || std::abs(n * dt - T) > 1e-12)
        throw ConfigError("config: T is not an integral multiple of dt");
}

void apply_experiment_defaults(ExperimentSpec& spec) {
    if (spec.mesh_m.empty()) {
        switch (spec.kind) {
            case ExperimentKind::TaylorGreen: spec.mesh_m = {4, 6, 8}; break;
            case ExperimentKind::Conservation: spec.mesh_m = {6}; break;
            case ExperimentKind::OperatorChecks: spec.mesh_m = {2}; break;
            case ExperimentKind::Custom: spec.mesh_m = {6}; break;
        }
    }
    if (spec.nu.empty()) {
        if (spec.kind == ExperimentKind::TaylorGreen)
            spec.nu = {1.0, 1e-8};
        else
            spec.nu = {1e-8};
    }
}

ExperimentSpec parse_config_text(const std::string& text) {
    ExperimentSpec spec;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    bool kind_seen = false;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string stripped = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos) fail(line, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (value.empty()) fail(line, "empty value for key '" + key + "'");

        if (key == "experiment") {
            if (value == "taylor_green")
                spec.kind = ExperimentKind::TaylorGreen;
            else if (value == "conservation")
                spec.kind = ExperimentKind::Conservation;
            else if (value == "operator_checks")
                spec.kind = ExperimentKind::OperatorChecks;
            else if (value == "custom")
                spec.kind = ExperimentKind::Custom;
            else
                fail(line, "unknown experiment '" + value + "'");
            kind_seen = true;
        } else if (key == "mesh_m") {
            spec.mesh_m.clear();
            for (const std::string& item : split_list(value))
                spec.mesh_m.push_back(parse_int(item, line));
        } else if (key == "nu") {
            spec.nu.clear();
            for (const std::string& item : split_list(value))
                spec.nu.push_back(parse_double(item, line));
        } else if (key == "dt") {
            spec.dt = parse_double(value, line);
        } else if (key == "T") {
            spec.T = parse_double(value, line);
        } else if (key == "scheme") {
            if (value == "linearized")
                spec.scheme = Scheme::Linearized;
            else if (value == "nonlinear")
                spec.scheme = Scheme::Nonlinear;
            else
                fail(line, "unknown scheme '" + value + "'");
        } else if (key == "picard_tol") {
            spec.picard_tol = parse_double(value, line);
        } else if (key == "picard_max_iters") {
            spec.picard_max_iters = parse_int(value, line);
        } else if (key == "out_dir") {
            spec.out_dir = value;
        } else if (key == "checkpoint_stride") {
            spec.checkpoint_stride = parse_int(value, line);
        } else if (key == "jobs") {
            spec.jobs = parse_int(value, line);
        } else {
            fail(line, "unknown key '" + key + "'");
        }
    }
    if (!kind_seen) throw ConfigError("config: missing 'experiment' key");
    apply_experiment_defaults(spec);
    spec.validate();
    return spec;
}

ExperimentSpec parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace egns
