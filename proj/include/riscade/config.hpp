// SPDX-License-Identifier: Apache-2.0
//
// riscade  Cascaded RIS channel estimation from few-bit measurements
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef riscade_config_H
#define riscade_config_H

#include "linear_operator.hpp"
#include "quantizer.hpp"
#include "vamp_solver.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace riscade {

struct ConfigError : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// Experiment description: array geometry, training, sweep axes, Monte Carlo
// controls, and solver/prior overrides. Negative override values mean
// "derive from the model" (see resolve_* helpers in the harness).
struct SystemConfig
{
    int n1 = 8, n2 = 8; // BS UPA
    int m1 = 8, m2 = 8; // RIS UPA
    int q1 = 2, q2 = 2; // user UPA
    int p = 128;        // RIS phase configurations
    int t = -1;         // pilot slots; must equal q1*q2 (derived when omitted)
    int l = 4, j = 4;   // path counts per hop
    int users = 1;
    std::vector<int> bits{kInfiniteBits}; // 0 encodes the infinite-resolution ADC
    std::vector<double> snr_db{0.0};
    int trials = 1;
    uint64_t seed = 1;
    TrainingKind training = TrainingKind::random_phases;
    bool on_grid = false;
    bool normalize_gains = false;
    SolverConfig solver;
    int prior_components = 1;
    double prior_sparsity = -1.0; // expected support; default l*j*q
    double prior_moment = -1.0;   // expected total energy; default l*j (1 normalized)
    double ridge = -1.0;          // least-squares ridge; default noise_var

    OperatorDims dims() const
    {
        OperatorDims d;
        d.n1 = n1;
        d.n2 = n2;
        d.m1 = m1;
        d.m2 = m2;
        d.q1 = q1;
        d.q2 = q2;
        d.p = p;
        return d;
    }
};

namespace detail {

inline std::string trim(const std::string &s)
{
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string &s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(trim(item));
    return out;
}

inline long parse_int(const std::string &key, const std::string &value)
{
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(value, &used);
    } catch (const std::exception &) {
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value +
                          "'");
    }
    if (used != value.size())
        throw ConfigError("config: key '" + key + "' expects an integer, got '" + value +
                          "'");
    return v;
}

inline double parse_real(const std::string &key, const std::string &value)
{
    if (value == "inf" || value == "+inf")
        return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception &) {
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    }
    if (used != value.size())
        throw ConfigError("config: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

inline bool parse_bool(const std::string &key, const std::string &value)
{
    if (value == "true" || value == "1")
        return true;
    if (value == "false" || value == "0")
        return false;
    throw ConfigError("config: key '" + key + "' expects true/false, got '" + value + "'");
}

} // namespace detail

inline void validate_config(const SystemConfig &cfg)
{
    const auto positive = [](int v, const char *name) {
        if (v < 1)
            throw ConfigError(std::string("config: '") + name + "' must be >= 1");
    };
    positive(cfg.n1, "n1");
    positive(cfg.n2, "n2");
    positive(cfg.m1, "m1");
    positive(cfg.m2, "m2");
    positive(cfg.q1, "q1");
    positive(cfg.q2, "q2");
    positive(cfg.p, "p");
    positive(cfg.l, "l");
    positive(cfg.j, "j");
    positive(cfg.users, "users");
    positive(cfg.trials, "trials");

    if (cfg.p < cfg.m1 * cfg.m2)
        throw ConfigError("config: p must be >= m1*m2 (training shorter than the RIS)");
    if (cfg.t != cfg.q1 * cfg.q2)
        throw ConfigError("config: t must equal q1*q2 (orthogonal pilot convention)");
    if (cfg.bits.empty())
        throw ConfigError("config: bits list is empty");
    for (int b : cfg.bits)
        if (b != kInfiniteBits && (b < 1 || b > 8))
            throw ConfigError("config: bits entries must be 1..8 or inf");
    if (cfg.snr_db.empty())
        throw ConfigError("config: snr_db list is empty");
    if (cfg.solver.max_iters < 1)
        throw ConfigError("config: max_iters must be >= 1");
    if (!(cfg.solver.damping >= 0.0 && cfg.solver.damping < 1.0))
        throw ConfigError("config: damping must be in [0, 1)");
    if (!(cfg.solver.eps > 0.0 && cfg.solver.eps < 0.5))
        throw ConfigError("config: eps must be in (0, 0.5)");
    if (!(cfg.solver.tol >= 0.0))
        throw ConfigError("config: tol must be >= 0");
    if (cfg.prior_components < 1 || cfg.prior_components > 16)
        throw ConfigError("config: prior_components must be 1..16");
    const double nmq = static_cast<double>(cfg.dims().nmq());
    if (cfg.prior_sparsity >= 0.0 &&
        !(cfg.prior_sparsity > 0.0 && cfg.prior_sparsity < nmq))
        throw ConfigError("config: prior_sparsity must be in (0, n*m*q)");
    if (cfg.prior_moment >= 0.0 && !(cfg.prior_moment > 0.0))
        throw ConfigError("config: prior_moment must be > 0");
}

// key = value lines; '#' starts a comment; lists are comma separated.
// Unknown and duplicate keys are rejected.
inline SystemConfig parse_config(const std::string &text)
{
    SystemConfig cfg;
    bool t_given = false;
    std::set<std::string> seen;

    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = detail::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " is not of the form key = value");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("config: line " + std::to_string(lineno) +
                              " has an empty key or value");
        if (!seen.insert(key).second)
            throw ConfigError("config: duplicate key '" + key + "'");

        if (key == "n1")
            cfg.n1 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "n2")
            cfg.n2 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "m1")
            cfg.m1 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "m2")
            cfg.m2 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "q1")
            cfg.q1 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "q2")
            cfg.q2 = static_cast<int>(detail::parse_int(key, value));
        else if (key == "p")
            cfg.p = static_cast<int>(detail::parse_int(key, value));
        else if (key == "t") {
            cfg.t = static_cast<int>(detail::parse_int(key, value));
            t_given = true;
        } else if (key == "l")
            cfg.l = static_cast<int>(detail::parse_int(key, value));
        else if (key == "j")
            cfg.j = static_cast<int>(detail::parse_int(key, value));
        else if (key == "users")
            cfg.users = static_cast<int>(detail::parse_int(key, value));
        else if (key == "trials")
            cfg.trials = static_cast<int>(detail::parse_int(key, value));
        else if (key == "seed")
            cfg.seed = static_cast<uint64_t>(detail::parse_int(key, value));
        else if (key == "bits") {
            cfg.bits.clear();
            for (const std::string &item : detail::split_list(value))
                cfg.bits.push_back(item == "inf"
                                       ? kInfiniteBits
                                       : static_cast<int>(detail::parse_int(key, item)));
        } else if (key == "snr_db") {
            cfg.snr_db.clear();
            for (const std::string &item : detail::split_list(value))
                cfg.snr_db.push_back(detail::parse_real(key, item));
        } else if (key == "training") {
            if (value == "random")
                cfg.training = TrainingKind::random_phases;
            else if (value == "zadoff_chu")
                cfg.training = TrainingKind::zadoff_chu;
            else
                throw ConfigError("config: training must be random or zadoff_chu");
        } else if (key == "on_grid")
            cfg.on_grid = detail::parse_bool(key, value);
        else if (key == "normalize_gains")
            cfg.normalize_gains = detail::parse_bool(key, value);
        else if (key == "max_iters")
            cfg.solver.max_iters = static_cast<int>(detail::parse_int(key, value));
        else if (key == "damping")
            cfg.solver.damping = detail::parse_real(key, value);
        else if (key == "eps")
            cfg.solver.eps = detail::parse_real(key, value);
        else if (key == "tol")
            cfg.solver.tol = detail::parse_real(key, value);
        else if (key == "prior_components")
            cfg.prior_components = static_cast<int>(detail::parse_int(key, value));
        else if (key == "prior_sparsity")
            cfg.prior_sparsity = detail::parse_real(key, value);
        else if (key == "prior_moment")
            cfg.prior_moment = detail::parse_real(key, value);
        else if (key == "ridge")
            cfg.ridge = detail::parse_real(key, value);
        else
            throw ConfigError("config: unknown key '" + key + "'");
    }

    if (!t_given)
        cfg.t = cfg.q1 * cfg.q2;
    validate_config(cfg);
    return cfg;
}

inline SystemConfig load_config_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace riscade

#endif
