#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cpm/cpm.h"

namespace {

constexpr int exit_internal = 3;

int exit_code(cpm_status s) {
    switch (s) {
        case CPM_OK: return 0;
        case CPM_ORACLE_FAIL: return 1;
        case CPM_CONFIG_ERROR:
        case CPM_ARGUMENT_ERROR:
        case CPM_RUNTIME_ERROR: return 2;
        default: return exit_internal;
    }
}

int fail(cpm_status s) {
    std::cerr << "error: " << cpm_last_error() << '\n';
    return exit_code(s);
}

bool emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return true;
    }
    std::ofstream f(out);
    if (!f) {
        std::cerr << "error: cannot write " << out << '\n';
        return false;
    }
    f << text;
    if (!text.empty() && text.back() != '\n') f << '\n';
    return true;
}

void report_divergence(const char* json) {
    const auto report = nlohmann::json::parse(json);
    const auto& oracle = report.at("oracle");
    std::cerr << "oracle mismatch in " << report.at("workload").get<std::string>();
    if (oracle.contains("first_divergence")) {
        const auto& d = oracle.at("first_divergence");
        std::cerr << ": " << d.at("field").get<std::string>() << '[' << d.at("index") << "] expected "
                  << d.at("expected") << ", got " << d.at("actual");
    }
    std::cerr << '\n';
}

struct Common {
    std::optional<std::int64_t> seed;
    std::string oracle;
    std::string out;
    std::string format = "json";
    bool timing = false;

    cpm_run_options options() const {
        cpm_run_options o = cpm_run_options_default();
        if (seed) o.seed = *seed;
        if (!oracle.empty()) o.oracle = oracle == "on";
        o.timing = timing;
        return o;
    }
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--seed", c.seed, "Seed for every random draw")->check(CLI::NonNegativeNumber);
    cmd->add_option("--oracle", c.oracle, "Check against the serial oracle")->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--out", c.out, "Write the report here instead of stdout");
    cmd->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
    cmd->add_flag("--timing", c.timing, "Record wall_time_ms (reports are then not byte identical)");
}

cpm_config* load_config(const std::string& path, cpm_status& status) {
    cpm_config* cfg = nullptr;
    status = cpm_config_load(path.c_str(), &cfg);
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Content processing memory simulator"};
    app.require_subcommand(1);

    Common run_opts, sweep_opts;
    std::string run_path, sweep_path, param;
    std::vector<std::string> values;
    bool fit = false;
    double length = 0, oxide = 0, copper = 0, budget = 0;

    auto* run = app.add_subcommand("run", "Run one workload");
    run->add_option("config", run_path, "Workload config (key = value or JSON)")->required();
    add_common(run, run_opts);

    auto* sw = app.add_subcommand("sweep", "Run a workload over a list of parameter values");
    sw->add_option("config", sweep_path, "Workload config (key = value or JSON)")->required();
    sw->add_option("--param", param, "Numeric config field to vary")->required();
    sw->add_option("--values", values, "Values, comma separated")->required()->delimiter(',');
    sw->add_flag("--fit", fit, "Fit a log-log exponent of macro cycles");
    add_common(sw, sweep_opts);

    auto* feas = app.add_subcommand("feasibility", "Routing delay estimate");
    feas->add_option("--L", length, "Routing layer size (m)")->required();
    feas->add_option("--D", oxide, "Oxide thickness (m)")->required();
    feas->add_option("--T", copper, "Copper thickness (m)")->required();
    feas->add_option("--budget", budget, "Delay budget (s); adds the largest L that meets it");
    std::string feas_out;
    feas->add_option("--out", feas_out, "Write the result here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) {
        if (run_opts.format != "json") {
            std::cerr << "error: run reports are JSON only\n";
            return 2;
        }
        cpm_status s;
        cpm_config* cfg = load_config(run_path, s);
        if (s != CPM_OK) return fail(s);
        const cpm_run_options o = run_opts.options();
        cpm_report* rep = nullptr;
        s = cpm_run(cfg, &o, &rep);
        cpm_config_free(cfg);
        if (s != CPM_OK && s != CPM_ORACLE_FAIL) return fail(s);
        const bool written = emit(cpm_report_json(rep), run_opts.out);
        if (s == CPM_ORACLE_FAIL) report_divergence(cpm_report_json(rep));
        cpm_report_free(rep);
        if (!written) return exit_internal;
        return exit_code(s);
    }

    if (*sw) {
        cpm_status s;
        cpm_config* cfg = load_config(sweep_path, s);
        if (s != CPM_OK) return fail(s);
        std::vector<const char*> ptrs;
        for (const auto& v : values) ptrs.push_back(v.c_str());
        const cpm_run_options o = sweep_opts.options();
        cpm_sweep* result = nullptr;
        s = cpm_sweep_run(cfg, param.c_str(), ptrs.data(), ptrs.size(), fit, &o, &result);
        cpm_config_free(cfg);
        if (s != CPM_OK && s != CPM_ORACLE_FAIL) return fail(s);
        const bool written =
            emit(sweep_opts.format == "csv" ? cpm_sweep_csv(result) : cpm_sweep_json(result), sweep_opts.out);
        if (s == CPM_ORACLE_FAIL) std::cerr << "oracle mismatch in at least one sweep row\n";
        cpm_sweep_free(result);
        if (!written) return exit_internal;
        return exit_code(s);
    }

    double seconds = 0;
    cpm_status s = cpm_feasibility(length, oxide, copper, &seconds);
    if (s != CPM_OK) return fail(s);
    nlohmann::ordered_json j{{"L", length}, {"D", oxide}, {"T", copper}, {"delay_s", seconds}, {"delay_ns", seconds * 1e9}};
    if (budget != 0) {
        double max_length = 0;
        s = cpm_feasibility_max_length(budget, oxide, copper, &max_length);
        if (s != CPM_OK) return fail(s);
        j["budget_s"] = budget;
        j["max_L"] = max_length;
    }
    return emit(j.dump(2), feas_out) ? 0 : exit_internal;
}
