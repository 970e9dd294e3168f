#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpm/ledger.hpp"

namespace cpm {

// Every random draw in a workload comes from this generator.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next();
    // Uniform in [0, bound); bound 0 means the full 64-bit range.
    std::uint64_t below(std::uint64_t bound);

private:
    std::uint64_t state_;
};

// Declarative workload: a flat set of named fields. Parsing only checks the
// syntax; every field is validated against the memory type and algorithm
// before anything runs, and errors name the offending field.
//
// Text form, one field per line, '#' starts a comment:
//   memory = computable_1d
//   algorithm = sum
//   n = 4096
//   M = 64
// The JSON form is one object with the same keys (numbers, strings, or
// arrays for list fields).
class WorkloadConfig {
public:
    static WorkloadConfig parse(const std::string& text);
    static WorkloadConfig load(const std::string& path);

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const { return fields_.count(key) != 0; }
    const std::string& get(const std::string& key) const;
    const std::map<std::string, std::string>& fields() const { return fields_; }

private:
    std::map<std::string, std::string> fields_;
};

struct Divergence {
    std::string field;  // which result disagrees
    std::size_t index = 0;
    std::string expected;
    std::string actual;
};

struct WorkloadReport {
    std::string workload;  // "<memory>/<algorithm>"
    std::map<std::string, std::string> params;
    // Summary of the result; integer-looking entries are emitted as numbers.
    std::map<std::string, std::string> result;
    std::vector<std::pair<std::string, CycleLedger>> phases;
    std::string result_digest;
    CycleLedger ledger;
    std::string oracle_status;  // "pass", "fail" or "off"
    std::optional<Divergence> first_divergence;
    std::optional<double> wall_time_ms;  // only when timing is requested

    bool oracle_failed() const { return oracle_status == "fail"; }
    std::string to_json(int indent = 2) const;
};

struct RunOptions {
    std::optional<std::uint64_t> seed;   // overrides the config
    std::optional<bool> oracle;          // overrides the config
    bool timing = false;                 // measure wall time (breaks byte identity)
};

WorkloadReport run_workload(const WorkloadConfig& config, const RunOptions& options = {});

struct ExponentFit {
    double exponent = 0;
    double intercept = 0;  // natural log of the prefactor
    std::string x;         // "N" for dimension sweeps, else the parameter
};

struct SweepResult {
    std::string param;
    std::vector<std::string> values;
    std::vector<WorkloadReport> rows;
    std::optional<ExponentFit> fit;
    std::size_t minimum_row = 0;  // row with the fewest macro cycles

    std::string to_json(int indent = 2) const;
    std::string to_csv() const;
};

SweepResult sweep(const WorkloadConfig& base, const std::string& param,
                  const std::vector<std::string>& values, bool fit, const RunOptions& options = {});

// Least squares slope of log(y) against log(x).
ExponentFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y);

// Routing delay 0.6e-18 * L^2 / D / T in seconds, all lengths in meters.
double feasibility_delay(double length, double oxide, double copper);
// Longest routing layer that meets `budget` seconds.
double feasibility_max_length(double budget, double oxide, double copper);

}  // namespace cpm
