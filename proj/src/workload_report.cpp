#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "cpm/errors.hpp"
#include "cpm/workload.hpp"

namespace cpm {

namespace {

using Json = nlohmann::ordered_json;

// Integer-looking text becomes a JSON number, anything else stays a string.
Json value_of(const std::string& s) {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    const bool canonical = !s.empty() && s != "-0" && (s.size() == 1 || (s[0] != '0' && s.rfind("-0", 0) != 0));
    if (ec == std::errc() && p == s.data() + s.size() && canonical) return v;
    return s;
}

Json ledger_json(const CycleLedger& l) {
    return Json{{"macro_cycles", l.macro_cycles}, {"micro_cycles", l.micro_cycles}, {"exclusive_ops", l.exclusive_ops}};
}

Json report_json(const WorkloadReport& r) {
    Json j;
    j["workload"] = r.workload;
    Json params = Json::object();
    for (const auto& [k, v] : r.params) params[k] = value_of(v);
    j["params"] = params;
    Json result = Json::object();
    for (const auto& [k, v] : r.result) result[k] = value_of(v);
    j["result"] = result;
    j["result_digest"] = r.result_digest;
    j["macro_cycles"] = r.ledger.macro_cycles;
    j["micro_cycles"] = r.ledger.micro_cycles;
    j["exclusive_ops"] = r.ledger.exclusive_ops;
    Json phases = Json::object();
    for (const auto& [name, l] : r.phases) phases[name] = ledger_json(l);
    j["phases"] = phases;
    Json oracle{{"status", r.oracle_status}};
    if (r.first_divergence) {
        const auto& d = *r.first_divergence;
        oracle["first_divergence"] = Json{{"field", d.field}, {"index", d.index}, {"expected", value_of(d.expected)},
                                          {"actual", value_of(d.actual)}};
    }
    j["oracle"] = oracle;
    j["wall_time_ms"] = r.wall_time_ms ? Json(*r.wall_time_ms) : Json(nullptr);
    return j;
}

bool is_dimension(const std::string& param) { return param == "n" || param == "side" || param == "nx" || param == "ny"; }

}  // namespace

std::string WorkloadReport::to_json(int indent) const { return report_json(*this).dump(indent); }

SweepResult sweep(const WorkloadConfig& base, const std::string& param, const std::vector<std::string>& values,
                  bool fit, const RunOptions& options) {
    if (values.empty()) throw ArgumentError("sweep needs at least one value");
    if (param.empty()) throw ArgumentError("sweep needs a parameter name");
    std::vector<double> xs, ys;
    SweepResult out;
    out.param = param;
    out.values = values;
    for (const auto& v : values) {
        double x = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ArgumentError("sweep value '" + v + "' for '" + param + "' is not a number");
        WorkloadConfig cfg = base;
        cfg.set(param, v);
        out.rows.push_back(run_workload(cfg, options));
        const auto& row = out.rows.back();
        if (is_dimension(param)) {
            const auto n = row.params.find("N");
            x = n != row.params.end() ? std::stod(n->second) : x;
        }
        xs.push_back(x);
        ys.push_back(static_cast<double>(row.ledger.macro_cycles));
    }
    for (std::size_t i = 1; i < out.rows.size(); ++i)
        if (out.rows[i].ledger.macro_cycles < out.rows[out.minimum_row].ledger.macro_cycles) out.minimum_row = i;
    if (fit) {
        out.fit = fit_power_law(xs, ys);
        out.fit->x = is_dimension(param) ? "N" : param;
    }
    return out;
}

std::string SweepResult::to_json(int indent) const {
    Json j;
    j["param"] = param;
    Json rows = Json::array();
    for (std::size_t i = 0; i < this->rows.size(); ++i) {
        Json row{{"value", value_of(values[i])}};
        row["report"] = report_json(this->rows[i]);
        rows.push_back(row);
    }
    j["rows"] = rows;
    j["minimum"] = Json{{"value", value_of(values[minimum_row])},
                        {"macro_cycles", this->rows[minimum_row].ledger.macro_cycles}};
    if (fit) j["fit"] = Json{{"x", fit->x}, {"exponent", fit->exponent}, {"intercept", fit->intercept}};
    return j.dump(indent);
}

std::string SweepResult::to_csv() const {
    std::ostringstream out;
    out << param << ",N,macro_cycles,micro_cycles,exclusive_ops,oracle,result_digest\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const auto n = r.params.find("N");
        out << values[i] << ',' << (n != r.params.end() ? n->second : "") << ',' << r.ledger.macro_cycles << ','
            << r.ledger.micro_cycles << ',' << r.ledger.exclusive_ops << ',' << r.oracle_status << ','
            << r.result_digest << '\n';
    }
    if (fit) out << "# fit x=" << fit->x << " exponent=" << fit->exponent << " intercept=" << fit->intercept << '\n';
    return out.str();
}

}  // namespace cpm
