#include <exception>
#include <string>
#include <vector>

#include "cpm/cpm.h"
#include "cpm/errors.hpp"
#include "cpm/workload.hpp"

struct cpm_config {
    cpm::WorkloadConfig value;
};

struct cpm_report {
    cpm::WorkloadReport value;
    std::string json;
};

struct cpm_sweep {
    cpm::SweepResult value;
    std::string json;
    std::string csv;
};

namespace {

thread_local std::string last_error;

template <class F>
cpm_status guarded(F&& body) {
    try {
        last_error.clear();
        return body();
    } catch (const cpm::ConfigError& e) {
        last_error = e.what();
        return CPM_CONFIG_ERROR;
    } catch (const cpm::ArgumentError& e) {
        last_error = e.what();
        return CPM_ARGUMENT_ERROR;
    } catch (const cpm::Error& e) {
        last_error = e.what();
        return CPM_RUNTIME_ERROR;
    } catch (const std::exception& e) {
        last_error = e.what();
        return CPM_INTERNAL_ERROR;
    } catch (...) {
        last_error = "unknown failure";
        return CPM_INTERNAL_ERROR;
    }
}

cpm_status null_argument(const char* name) {
    last_error = std::string("null argument: ") + name;
    return CPM_ARGUMENT_ERROR;
}

cpm::RunOptions to_options(const cpm_run_options* o) {
    cpm::RunOptions out;
    if (!o) return out;
    if (o->seed >= 0) out.seed = static_cast<std::uint64_t>(o->seed);
    if (o->oracle >= 0) out.oracle = o->oracle != 0;
    out.timing = o->timing != 0;
    return out;
}

}  // namespace

extern "C" {

const char* cpm_last_error(void) { return last_error.c_str(); }

const char* cpm_version(void) { return "1.0.0"; }

cpm_status cpm_config_parse(const char* text, cpm_config** out) {
    if (!text) return null_argument("text");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new cpm_config{cpm::WorkloadConfig::parse(text)};
        return CPM_OK;
    });
}

cpm_status cpm_config_load(const char* path, cpm_config** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = new cpm_config{cpm::WorkloadConfig::load(path)};
        return CPM_OK;
    });
}

cpm_status cpm_config_set(cpm_config* config, const char* key, const char* value) {
    if (!config) return null_argument("config");
    if (!key || !value) return null_argument("key");
    return guarded([&] {
        config->value.set(key, value);
        return CPM_OK;
    });
}

void cpm_config_free(cpm_config* config) { delete config; }

cpm_run_options cpm_run_options_default(void) { return {-1, -1, 0}; }

cpm_status cpm_run(const cpm_config* config, const cpm_run_options* options, cpm_report** out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        auto* r = new cpm_report{cpm::run_workload(config->value, to_options(options)), {}};
        r->json = r->value.to_json();
        *out = r;
        return r->value.oracle_failed() ? CPM_ORACLE_FAIL : CPM_OK;
    });
}

const char* cpm_report_json(const cpm_report* report) { return report ? report->json.c_str() : ""; }
uint64_t cpm_report_macro_cycles(const cpm_report* report) { return report ? report->value.ledger.macro_cycles : 0; }
uint64_t cpm_report_micro_cycles(const cpm_report* report) { return report ? report->value.ledger.micro_cycles : 0; }
uint64_t cpm_report_exclusive_ops(const cpm_report* report) { return report ? report->value.ledger.exclusive_ops : 0; }
int cpm_report_oracle_failed(const cpm_report* report) { return report && report->value.oracle_failed(); }
void cpm_report_free(cpm_report* report) { delete report; }

cpm_status cpm_sweep_run(const cpm_config* config, const char* param, const char* const* values, size_t count,
                         int fit, const cpm_run_options* options, cpm_sweep** out) {
    if (!config) return null_argument("config");
    if (!param) return null_argument("param");
    if (!values && count) return null_argument("values");
    if (!out) return null_argument("out");
    return guarded([&] {
        std::vector<std::string> v(values, values + count);
        auto* s = new cpm_sweep{cpm::sweep(config->value, param, v, fit != 0, to_options(options)), {}, {}};
        s->json = s->value.to_json();
        s->csv = s->value.to_csv();
        *out = s;
        for (const auto& row : s->value.rows)
            if (row.oracle_failed()) return CPM_ORACLE_FAIL;
        return CPM_OK;
    });
}

const char* cpm_sweep_json(const cpm_sweep* sweep) { return sweep ? sweep->json.c_str() : ""; }
const char* cpm_sweep_csv(const cpm_sweep* sweep) { return sweep ? sweep->csv.c_str() : ""; }

cpm_status cpm_sweep_exponent(const cpm_sweep* sweep, double* exponent) {
    if (!sweep) return null_argument("sweep");
    if (!exponent) return null_argument("exponent");
    if (!sweep->value.fit) {
        last_error = "sweep was run without a fit";
        return CPM_ARGUMENT_ERROR;
    }
    *exponent = sweep->value.fit->exponent;
    return CPM_OK;
}

void cpm_sweep_free(cpm_sweep* sweep) { delete sweep; }

cpm_status cpm_feasibility(double length, double oxide, double copper, double* seconds) {
    if (!seconds) return null_argument("seconds");
    return guarded([&] {
        *seconds = cpm::feasibility_delay(length, oxide, copper);
        return CPM_OK;
    });
}

cpm_status cpm_feasibility_max_length(double budget, double oxide, double copper, double* length) {
    if (!length) return null_argument("length");
    return guarded([&] {
        *length = cpm::feasibility_max_length(budget, oxide, copper);
        return CPM_OK;
    });
}

}  // extern "C"
