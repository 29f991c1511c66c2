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
//
// Command line driver. Exit codes: 0 success, 1 internal error, 2 config
// error, 3 solver abort (results are still written).

#include <riscade/riscade.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int do_sweep(const std::string &config_path, const std::string &out_path)
{
    const riscade::SystemConfig cfg = riscade::load_config_file(config_path);
    const riscade::SweepResult result = riscade::run_sweep(cfg);
    if (out_path.empty()) {
        riscade::write_csv(std::cout, result);
    } else {
        std::ofstream out(out_path);
        if (!out)
            throw riscade::ConfigError("cannot open output file '" + out_path + "'");
        riscade::write_csv(out, result);
    }
    if (result.any_abort) {
        std::cerr << "estimate: solver aborted in at least one cell\n";
        return 3;
    }
    return 0;
}

int do_trace(const std::string &config_path)
{
    const riscade::SystemConfig cfg = riscade::load_config_file(config_path);
    return riscade::run_trace(cfg, std::cout);
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Cascaded RIS channel estimation from few-bit measurements"};
    app.require_subcommand(1);

    std::string sweep_config, sweep_out, trace_config;

    CLI::App *sweep = app.add_subcommand("sweep", "Monte Carlo NMSE sweep, CSV output");
    sweep->add_option("--config", sweep_config, "experiment config file")->required();
    sweep->add_option("--out", sweep_out, "CSV output path (default: stdout)");

    app.add_subcommand("selftest", "built-in consistency battery");

    CLI::App *trace = app.add_subcommand("trace", "per-iteration solver diagnostics");
    trace->add_option("--config", trace_config, "experiment config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sweep->parsed())
            return do_sweep(sweep_config, sweep_out);
        if (trace->parsed())
            return do_trace(trace_config);
        return riscade::run_selftest(std::cout);
    } catch (const riscade::ConfigError &e) {
        std::cerr << "estimate: " << e.what() << '\n';
        return 2;
    } catch (const std::exception &e) {
        std::cerr << "estimate: internal error: " << e.what() << '\n';
        return 1;
    }
}
