#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "cpm/algorithms.hpp"
#include "cpm/comparable.hpp"
#include "cpm/errors.hpp"
#include "cpm/movable.hpp"
#include "cpm/searchable.hpp"
#include "cpm/workload.hpp"

namespace cpm {

namespace {

using Words = std::vector<std::uint64_t>;

// Typed, validated access to the config. Every field read is recorded so
// leftovers can be rejected as unknown before the workload runs.
class Fields {
public:
    explicit Fields(const WorkloadConfig& cfg) : cfg_(cfg) {}

    bool has(const std::string& key) const { return cfg_.has(key); }

    std::string text(const std::string& key, const std::string& fallback) {
        used_.insert(key);
        return cfg_.has(key) ? cfg_.get(key) : fallback;
    }
    std::string text(const std::string& key) {
        used_.insert(key);
        return cfg_.get(key);
    }

    std::uint64_t number(const std::string& key) { return parse_u64(key, text(key)); }
    std::uint64_t number(const std::string& key, std::uint64_t fallback) {
        return cfg_.has(key) ? number(key) : (used_.insert(key), fallback);
    }
    std::int64_t signed_number(const std::string& key) {
        const std::string v = text(key);
        std::int64_t out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size())
            throw ConfigError("field '" + key + "' must be an integer, got '" + v + "'");
        return out;
    }
    std::uint64_t positive(const std::string& key, const std::string& what) {
        const auto v = number(key);
        if (v == 0) throw ConfigError("field '" + key + "': " + what + " must be positive");
        return v;
    }
    Words list(const std::string& key) {
        Words out;
        std::string item;
        std::istringstream in(text(key));
        while (std::getline(in, item, ',')) {
            const auto a = item.find_first_not_of(" \t"), b = item.find_last_not_of(" \t");
            if (a == std::string::npos) throw ConfigError("field '" + key + "' has an empty entry");
            out.push_back(parse_u64(key, item.substr(a, b - a + 1)));
        }
        if (out.empty()) throw ConfigError("field '" + key + "' must not be empty");
        return out;
    }
    bool on_off(const std::string& key, bool fallback) {
        const std::string v = text(key, fallback ? "on" : "off");
        if (v == "on" || v == "true" || v == "1") return true;
        if (v == "off" || v == "false" || v == "0") return false;
        throw ConfigError("field '" + key + "' must be on or off, got '" + v + "'");
    }
    template <class T>
    T choice(const std::string& key, const std::string& fallback, const std::vector<std::pair<std::string, T>>& options) {
        const std::string v = text(key, fallback);
        std::string names;
        for (const auto& [name, value] : options) {
            if (name == v) return value;
            names += (names.empty() ? "" : ", ") + name;
        }
        throw ConfigError("field '" + key + "' must be one of " + names + ", got '" + v + "'");
    }

    void reject_unknown(const std::string& workload) const {
        for (const auto& [key, value] : cfg_.fields())
            if (!used_.count(key)) throw ConfigError("unknown field '" + key + "' for " + workload);
    }

    static std::uint64_t parse_u64(const std::string& key, const std::string& v) {
        std::uint64_t out = 0;
        const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc() || p != v.data() + v.size() || v.empty())
            throw ConfigError("field '" + key + "' must be a non-negative integer, got '" + v + "'");
        return out;
    }

private:
    const WorkloadConfig& cfg_;
    std::set<std::string> used_;
};

std::uint64_t word_limit(std::size_t bits) { return bits >= 64 ? 0 : std::uint64_t{1} << bits; }

Words read_number_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("field 'path': cannot read " + path);
    Words out;
    std::string tok;
    while (in >> tok) {
        std::replace(tok.begin(), tok.end(), ',', ' ');
        std::istringstream parts(tok);
        std::string t;
        while (parts >> t) out.push_back(Fields::parse_u64("path", t));
    }
    return out;
}

// Input values from the configured source: uniform draws below `bound`
// (0 = full range), an inline list, or a file. `count` 0 takes the length
// of the inline or file data.
Words input_data(Fields& f, SplitMix64& rng, std::size_t count, std::uint64_t bound) {
    const std::string source = f.text("data", "uniform");
    Words out;
    if (source == "uniform") {
        if (count == 0) throw ConfigError("missing field 'n'");
        const std::uint64_t max = f.number("max", bound);
        if (bound != 0 && (max == 0 || max > bound))
            throw ConfigError("field 'max' must be in 1.." + std::to_string(bound));
        out.resize(count);
        for (auto& v : out) v = rng.below(max);
        return out;
    }
    if (source == "inline") out = f.list("values");
    else if (source == "file") out = read_number_file(f.text("path"));
    else throw ConfigError("field 'data' must be uniform, inline or file, got '" + source + "'");
    const std::string field = source == "inline" ? "values" : "path";
    if (count != 0 && out.size() != count)
        throw ConfigError("field '" + field + "' holds " + std::to_string(out.size()) + " values, expected " +
                          std::to_string(count));
    if (out.empty()) throw ConfigError("field '" + field + "' holds no values");
    for (auto v : out)
        if (bound != 0 && v >= bound)
            throw ConfigError("field '" + field + "' value " + std::to_string(v) + " exceeds the word");
    return out;
}

std::string join(const std::vector<std::int64_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}
std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

std::string digest(const std::string& payload) {
    std::uint64_t h = 0xCBF29CE484222325ULL;  // FNV-1a
    for (unsigned char c : payload) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

// Collects oracle comparisons and keeps the first disagreement.
class Oracle {
public:
    explicit Oracle(bool enabled) : enabled_(enabled) {}
    bool enabled() const { return enabled_; }

    template <class A, class B>
    void same(const std::string& field, std::size_t index, const A& expected, const B& actual) {
        if (!enabled_ || failed_) return;
        if (static_cast<std::int64_t>(expected) != static_cast<std::int64_t>(actual)) {
            failed_ = true;
            first_ = Divergence{field, index, std::to_string(expected), std::to_string(actual)};
        }
    }
    template <class A, class B>
    void same_list(const std::string& field, const std::vector<A>& expected, const std::vector<B>& actual) {
        const std::size_t n = std::max(expected.size(), actual.size());
        for (std::size_t i = 0; i < n && !failed_ && enabled_; ++i) {
            if (i >= expected.size() || i >= actual.size()) {
                failed_ = true;
                first_ = Divergence{field, i, i < expected.size() ? std::to_string(expected[i]) : "<end>",
                                    i < actual.size() ? std::to_string(actual[i]) : "<end>"};
                return;
            }
            same(field, i, expected[i], actual[i]);
        }
    }

    void apply(WorkloadReport& rep) const {
        rep.oracle_status = !enabled_ ? "off" : failed_ ? "fail" : "pass";
        rep.first_divergence = first_;
    }

private:
    bool enabled_;
    bool failed_ = false;
    std::optional<Divergence> first_;
};

struct Context {
    Fields& f;
    SplitMix64& rng;
    Oracle& oracle;
    WorkloadReport& rep;
    std::string workload;
};

// ---------------------------------------------------------------- computable

struct ComputableSetup {
    Topology topo;
    std::size_t width;
    Words data;
};

ComputableMemory fresh(const ComputableSetup& s) {
    ComputableMemory mem(s.topo, {s.width, 4, 0});
    mem.load(RegRef::nb(), s.data);
    return mem;
}

std::vector<std::size_t> powers_of_two(std::size_t n) {
    std::vector<std::size_t> out;
    for (std::size_t m = 1; m < n; m *= 2) out.push_back(m);
    out.push_back(n);
    return out;
}

// Local-round counts tried for hybrid sort: around sqrt(N) and the pure
// transposition sort.
std::vector<std::size_t> hybrid_rounds(std::size_t n) {
    const std::size_t root = std::size_t{1} << static_cast<int>(std::lround(std::log2(static_cast<double>(n)) / 2));
    std::set<std::size_t> s{std::max<std::size_t>(1, root / 4), std::min(n, root), std::min(n, 4 * root), n};
    return {s.begin(), s.end()};
}

// Section size: a positive number, or "auto" to keep the cheapest run over
// `candidates`.
struct SectionChoice {
    bool automatic = false;
    std::size_t value = 0;
};

SectionChoice section(Fields& f, const std::string& key, const std::string& what = "section size") {
    const std::string v = f.text(key);
    if (v == "auto") return {true, 0};
    return {false, static_cast<std::size_t>(f.positive(key, what))};
}

AlgorithmReport cheapest(const ComputableSetup& s, const std::vector<std::size_t>& candidates,
                         const std::function<AlgorithmReport(ComputableMemory&, std::size_t)>& run) {
    std::optional<AlgorithmReport> best;
    for (auto m : candidates) {
        auto mem = fresh(s);
        auto r = run(mem, m);
        if (!best || r.ledger_delta.macro_cycles < best->ledger_delta.macro_cycles) best = std::move(r);
    }
    return *best;
}

std::int64_t to_signed(std::uint64_t v, std::size_t w) { return sign_extend(v & (word_limit(w) - 1), w); }

std::uint64_t wrap(std::uint64_t v, std::size_t w) { return w >= 64 ? v : v & (word_limit(w) - 1); }

void fill_report(WorkloadReport& rep, const AlgorithmReport& a, std::string payload) {
    rep.ledger = a.ledger_delta;
    rep.phases = a.phases;
    for (const auto& [k, v] : a.params) rep.params[k] = std::to_string(v);
    if (a.scalar) rep.result["value"] = std::to_string(*a.scalar);
    if (a.address) rep.result["address"] = std::to_string(*a.address);
    if (!a.direction.empty()) rep.result["direction"] = a.direction;
    payload += "|values=" + join(a.values);
    std::vector<std::size_t> flags(a.flags.begin(), a.flags.end());
    payload += "|flags=" + join(flags) + "|labels=" + join(a.labels);
    if (a.scalar) payload += "|scalar=" + std::to_string(*a.scalar);
    if (a.address) payload += "|address=" + std::to_string(*a.address);
    payload += "|direction=" + a.direction;
    rep.result_digest = digest(payload);
}

MacroOp::Cmp parse_cmp(Fields& f, const std::string& key, const std::string& fallback) {
    using C = MacroOp::Cmp;
    return f.choice<C>(key, fallback,
                       {{"lt", C::lt}, {"le", C::le}, {"gt", C::gt}, {"ge", C::ge}, {"eq", C::eq}, {"ne", C::ne}});
}

bool holds(MacroOp::Cmp c, std::uint64_t a, std::uint64_t b) {
    switch (c) {
        case MacroOp::Cmp::lt: return a < b;
        case MacroOp::Cmp::le: return a <= b;
        case MacroOp::Cmp::gt: return a > b;
        case MacroOp::Cmp::ge: return a >= b;
        case MacroOp::Cmp::eq: return a == b;
        case MacroOp::Cmp::ne: return a != b;
    }
    return false;
}

// Serial messenger value of a line segment at pixel (x, y); pixels outside
// the image read as zero.
std::int64_t serial_segment(const Words& img, std::size_t nx, std::size_t ny, std::size_t width, long x, long y,
                            int mx, int my) {
    auto at = [&](long px, long py) -> std::int64_t {
        if (px < 0 || py < 0 || px >= static_cast<long>(nx) || py >= static_cast<long>(ny)) return 0;
        return static_cast<std::int64_t>(img[py * nx + px]);
    };
    std::int64_t v = 0;
    if (mx == 0 || my == 0) {
        const bool horizontal = my == 0;
        const int len = std::abs(horizontal ? mx : my), step = (horizontal ? mx : my) > 0 ? 1 : -1;
        for (int k = 0; k <= len; ++k) {
            const long px = horizontal ? x - k * step : x, py = horizontal ? y : y - k * step;
            v += horizontal ? at(px, py - 1) - at(px, py + 1) : at(px - 1, py) - at(px + 1, py);
        }
    } else {
        const auto path = line_segment_path(mx, my);
        for (std::size_t k = 0; k < path.cells.size(); ++k)
            v += path.signs[k] * at(x + path.cells[k].first, y + path.cells[k].second);
    }
    return to_signed(static_cast<std::uint64_t>(v), width);
}

bool segment_valid(std::size_t nx, std::size_t ny, long x, long y, int mx, int my) {
    const long w = static_cast<long>(nx), h = static_cast<long>(ny);
    bool ok = x >= std::max(0L, static_cast<long>(mx)) && x <= std::min(w - 1, w - 1 + mx) &&
              y >= std::max(0L, static_cast<long>(my)) && y <= std::min(h - 1, h - 1 + my);
    if (my == 0) ok = ok && y >= 1 && y <= h - 2;
    if (mx == 0) ok = ok && x >= 1 && x <= w - 2;
    return ok;
}

void run_computable(Context& c, bool two_d) {
    Fields& f = c.f;
    const std::string algo = f.text("algorithm");
    const std::size_t width = f.number("width", 32);
    if (width < 2 || width > 64) throw ConfigError("field 'width' must be 2..64");
    std::size_t nx = 0, ny = 1;
    if (two_d) {
        if (f.has("side")) {
            nx = ny = f.positive("side", "image side");
        } else {
            nx = f.positive("nx", "image width");
            ny = f.positive("ny", "image height");
        }
    } else if (f.has("n") || f.text("data", "uniform") == "uniform") {
        nx = f.positive("n", "array size");
    }
    const std::uint64_t bound = word_limit(width);
    const std::uint64_t default_max = word_limit(std::min<std::size_t>(16, width / 2));
    std::uint64_t max = f.number("max", default_max);
    if (max == 0 || (bound != 0 && max > bound)) throw ConfigError("field 'max' must be in 1.." + std::to_string(bound));

    // Algorithm parameters, all read before anything runs.
    std::function<AlgorithmReport()> execute;
    std::function<void(const AlgorithmReport&)> check;
    ComputableSetup s{Topology{}, width, {}};
    auto data_after = [&] {
        s.data = [&] {
            const std::string source = f.text("data", "uniform");
            if (source == "uniform") {
                Words out(nx * ny);
                for (auto& v : out) v = c.rng.below(max);
                return out;
            }
            return input_data(f, c.rng, nx * ny, bound);
        }();
        if (!two_d && nx == 0) nx = s.data.size();
        s.topo = two_d ? Topology::lattice(nx, ny) : Topology::line(nx);
    };
    data_after();
    const std::size_t n = s.data.size();
    const Words& data = s.data;
    c.rep.params["W"] = std::to_string(width);

    if (algo == "sum" || algo == "global_max" || algo == "global_min") {
        const bool sum = algo == "sum";
        if (sum && two_d) {
            const SectionChoice sx = section(f, "Mx"), sy = section(f, "My");
            execute = [&, sx, sy] {
                if (!sx.automatic && !sy.automatic) {
                    auto mem = fresh(s);
                    return sum_2d(mem, sx.value, sy.value);
                }
                std::optional<AlgorithmReport> best;
                for (auto a : sx.automatic ? powers_of_two(nx) : std::vector<std::size_t>{sx.value})
                    for (auto b : sy.automatic ? powers_of_two(ny) : std::vector<std::size_t>{sy.value}) {
                        auto mem = fresh(s);
                        auto r = sum_2d(mem, a, b);
                        if (!best || r.ledger_delta.macro_cycles < best->ledger_delta.macro_cycles) best = std::move(r);
                    }
                return *best;
            };
        } else {
            if (two_d) throw ConfigError("field 'algorithm': " + algo + " runs on computable_1d");
            const SectionChoice m = section(f, "M");
            const Extremum which = algo == "global_max" ? Extremum::max : Extremum::min;
            auto one = [sum, which](ComputableMemory& mem, std::size_t k) {
                return sum ? sum_1d(mem, k) : global_limit(mem, k, which);
            };
            execute = [&, m, one] {
                if (!m.automatic) {
                    auto mem = fresh(s);
                    return one(mem, m.value);
                }
                return cheapest(s, powers_of_two(n), one);
            };
        }
        check = [&, sum, algo](const AlgorithmReport& r) {
            if (sum) {
                std::uint64_t total = 0;
                for (auto v : data) total += v;
                c.oracle.same("value", 0, static_cast<std::int64_t>(wrap(total, width)), r.scalar.value_or(-1));
                return;
            }
            const auto it = algo == "global_max" ? std::max_element(data.begin(), data.end())
                                                 : std::min_element(data.begin(), data.end());
            c.oracle.same("value", 0, *it, r.scalar.value_or(-1));
            c.oracle.same("address", 0, it - data.begin(), r.address ? static_cast<std::int64_t>(*r.address) : -1);
        };
    } else if (algo == "template_search") {
        std::size_t mx = 0, my = 1;
        Words tmpl;
        if (f.has("template")) {
            tmpl = f.list("template");
            if (two_d) {
                mx = f.positive("Mx", "template width");
                my = f.positive("My", "template height");
                if (tmpl.size() != mx * my)
                    throw ConfigError("field 'template' holds " + std::to_string(tmpl.size()) + " values, expected Mx*My");
            } else {
                mx = tmpl.size();
            }
            for (auto v : tmpl)
                if (bound != 0 && v >= bound) throw ConfigError("field 'template' value exceeds the word");
        } else {
            // Cut from the data so the best placement has SAD 0.
            mx = f.positive(two_d ? "Mx" : "M", "template size");
            if (two_d) my = f.positive("My", "template height");
            if (mx > nx || my > ny) throw ConfigError("template larger than the data");
            const std::size_t x0 = c.rng.below(nx - mx + 1), y0 = c.rng.below(ny - my + 1);
            for (std::size_t ty = 0; ty < my; ++ty)
                for (std::size_t tx = 0; tx < mx; ++tx) tmpl.push_back(data[(y0 + ty) * nx + x0 + tx]);
        }
        if (mx > nx || my > ny) throw ConfigError("template larger than the data");
        execute = [&, tmpl, mx, my] {
            auto mem = fresh(s);
            return two_d ? template_search_2d(mem, tmpl, mx, my) : template_search_1d(mem, tmpl);
        };
        check = [&, tmpl, mx, my](const AlgorithmReport& r) {
            std::optional<std::uint64_t> best;
            std::size_t best_at = 0;
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t x = 0; x < nx; ++x) {
                    const std::size_t i = y * nx + x;
                    const bool ok = x + mx <= nx && y + my <= ny;
                    c.oracle.same("flags", i, ok, r.flags.at(i));
                    if (!ok) continue;
                    std::uint64_t sad = 0;
                    for (std::size_t ty = 0; ty < my; ++ty)
                        for (std::size_t tx = 0; tx < mx; ++tx) {
                            const auto a = data[(y + ty) * nx + x + tx], b = tmpl[ty * mx + tx];
                            sad += a > b ? a - b : b - a;
                        }
                    sad = wrap(sad, width);
                    c.oracle.same("values", i, sad, r.values.at(i));
                    if (!best || sad < *best) best = sad, best_at = i;
                }
            c.oracle.same("value", 0, *best, r.scalar.value_or(-1));
            c.oracle.same("address", 0, best_at, r.address ? static_cast<std::int64_t>(*r.address) : -1);
        };
    } else if (algo == "threshold") {
        const std::uint64_t value = f.number("threshold");
        if (bound != 0 && value >= bound) throw ConfigError("field 'threshold' exceeds the word");
        const MacroOp::Cmp cmp = parse_cmp(f, "cmp", "ge");
        c.rep.params["cmp"] = f.text("cmp", "ge");
        execute = [&, value, cmp] {
            auto mem = fresh(s);
            return threshold(mem, value, cmp);
        };
        check = [&, value, cmp](const AlgorithmReport& r) {
            for (std::size_t i = 0; i < n; ++i) c.oracle.same("flags", i, holds(cmp, data[i], value), r.flags.at(i));
        };
    } else if (algo == "moving_sort" || algo == "hybrid_sort") {
        if (two_d) throw ConfigError("field 'algorithm': sorting runs on computable_1d");
        if (algo == "moving_sort") {
            const Order order = f.choice<Order>("order", "ascending",
                                                {{"ascending", Order::ascending}, {"descending", Order::descending}});
            execute = [&, order] {
                auto mem = fresh(s);
                return global_moving_sort(mem, order);
            };
        } else {
            const std::string v = f.text("M");
            const bool automatic = v == "auto";
            const std::size_t m = automatic ? 0 : f.number("M");
            execute = [&, automatic, m] {
                if (!automatic) {
                    auto mem = fresh(s);
                    return hybrid_sort(mem, m);
                }
                return cheapest(s, hybrid_rounds(n), [](ComputableMemory& mem, std::size_t k) { return hybrid_sort(mem, k); });
            };
        }
        check = [&, algo](const AlgorithmReport& r) {
            Words want = data;
            std::sort(want.begin(), want.end());
            std::size_t up = 0, down = 0;
            for (std::size_t i = 1; i < n; ++i) up += data[i] < data[i - 1], down += data[i - 1] < data[i];
            const bool ascending = algo == "hybrid_sort" ? up <= down : f.text("order", "ascending") == "ascending";
            c.oracle.same("direction", 0, ascending, r.direction == "ascending");
            if (!ascending) std::reverse(want.begin(), want.end());
            std::vector<std::int64_t> got(r.values.begin(), r.values.end());
            c.oracle.same_list("values", want, got);
        };
    } else if (algo == "local_op") {
        const std::string kernel = f.text("kernel", two_d ? "gauss9" : "gauss3");
        std::vector<MacroOp> plan;
        std::vector<std::int64_t> taps;  // row-major, centered
        std::size_t radius = 1;
        if (!two_d && kernel == "gauss3") plan = plan_gauss3(), taps = {1, 2, 1};
        else if (!two_d && kernel == "gauss5") plan = plan_gauss5(), taps = {1, 2, 4, 2, 1}, radius = 2;
        else if (two_d && kernel == "gauss9") plan = plan_gauss9(), taps = {1, 2, 1, 2, 4, 2, 1, 2, 1};
        else throw ConfigError("field 'kernel' must be " + std::string(two_d ? "gauss9" : "gauss3 or gauss5"));
        c.rep.params["kernel"] = kernel;
        const bool exact = edge_exact(plan);
        execute = [&, plan, taps, radius, two_d] {
            auto mem = fresh(s);
            return two_d ? run_local_op(mem, Kernel2D(radius, radius, taps), plan)
                         : run_local_op(mem, Kernel1D(taps), plan);
        };
        check = [&, taps, radius, exact, two_d](const AlgorithmReport& r) {
            const long rad = static_cast<long>(radius), ry = two_d ? rad : 0;
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t x = 0; x < nx; ++x) {
                    // Plans that are not edge exact are checked where the
                    // whole kernel lies inside the data.
                    const bool inside = x >= radius && x + radius < nx && (!two_d || (y >= radius && y + radius < ny));
                    if (!exact && !inside) continue;
                    std::int64_t v = 0;
                    for (long dy = -ry; dy <= ry; ++dy)
                        for (long dx = -rad; dx <= rad; ++dx) {
                            const long px = static_cast<long>(x) + dx, py = static_cast<long>(y) + dy;
                            if (px < 0 || py < 0 || px >= static_cast<long>(nx) || py >= static_cast<long>(ny)) continue;
                            v += taps[(dy + ry) * (2 * rad + 1) + dx + rad] * static_cast<std::int64_t>(data[py * nx + px]);
                        }
                    c.oracle.same("values", y * nx + x, to_signed(static_cast<std::uint64_t>(v), width),
                                  r.values.at(y * nx + x));
                }
        };
    } else if (algo == "line_segment") {
        if (!two_d) throw ConfigError("field 'algorithm': line detection runs on computable_2d");
        const int mx = static_cast<int>(f.signed_number("Mx")), my = static_cast<int>(f.signed_number("My"));
        if (mx == 0 && my == 0) throw ConfigError("field 'Mx': segment area must not be empty");
        if (static_cast<std::size_t>(std::abs(mx)) >= nx || static_cast<std::size_t>(std::abs(my)) >= ny)
            throw ConfigError("field 'Mx': segment area exceeds the image");
        c.rep.params["Mx"] = std::to_string(mx);
        c.rep.params["My"] = std::to_string(my);
        execute = [&, mx, my] {
            auto mem = fresh(s);
            return detect_line_segment(mem, mx, my);
        };
        check = [&, mx, my](const AlgorithmReport& r) {
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t x = 0; x < nx; ++x) {
                    const std::size_t i = y * nx + x;
                    const bool ok = segment_valid(nx, ny, x, y, mx, my);
                    c.oracle.same("flags", i, ok, r.flags.at(i));
                    if (ok) c.oracle.same("values", i, serial_segment(data, nx, ny, width, x, y, mx, my), r.values.at(i));
                }
        };
    } else if (algo == "all_lines") {
        if (!two_d) throw ConfigError("field 'algorithm': line detection runs on computable_2d");
        const std::size_t d = f.positive("D", "radius");
        execute = [&, d] {
            auto mem = fresh(s);
            return detect_all_lines(mem, d);
        };
        check = [&](const AlgorithmReport& r) {
            for (std::size_t y = 0; y < ny; ++y)
                for (std::size_t x = 0; x < nx; ++x) {
                    std::int64_t best = 0;
                    std::size_t label = 0;
                    for (std::size_t k = 0; k < r.slopes.size(); ++k) {
                        const auto [mx, my] = r.slopes[k];
                        if (!segment_valid(nx, ny, x, y, mx, my)) continue;
                        const std::int64_t v = std::llabs(serial_segment(data, nx, ny, width, x, y, mx, my));
                        if (v > best) best = v, label = k;
                    }
                    c.oracle.same("values", y * nx + x, best, r.values.at(y * nx + x));
                    c.oracle.same("labels", y * nx + x, label, r.labels.at(y * nx + x));
                }
        };
    } else {
        throw ConfigError("field 'algorithm': unknown algorithm '" + algo + "' for " + c.workload.substr(0, c.workload.find('/')));
    }

    f.reject_unknown(c.workload);
    const AlgorithmReport r = execute();
    fill_report(c.rep, r, c.workload);
    if (c.oracle.enabled()) check(r);
}

// ---------------------------------------------------------------- searchable

void run_searchable(Context& c) {
    Fields& f = c.f;
    const std::string algo = f.text("algorithm");
    if (algo != "substring") throw ConfigError("field 'algorithm': searchable memory runs substring, got '" + algo + "'");
    std::vector<std::uint8_t> text;
    if (f.has("text")) {
        const std::string t = f.text("text");
        text.assign(t.begin(), t.end());
        if (f.has("n") && f.number("n") != text.size()) throw ConfigError("field 'n' does not match the text length");
        if (text.empty()) throw ConfigError("field 'text' must not be empty");
    } else {
        const std::size_t n = f.has("n") ? f.positive("n", "array size") : 0;
        Words raw;
        if (f.text("data", "uniform") == "uniform") {
            const std::uint64_t alphabet = f.number("alphabet", 4);
            if (alphabet == 0 || alphabet > 256) throw ConfigError("field 'alphabet' must be 1..256");
            if (n == 0) throw ConfigError("missing field 'n'");
            raw.resize(n);
            for (auto& v : raw) v = alphabet <= 26 ? 'a' + c.rng.below(alphabet) : c.rng.below(alphabet);
        } else {
            raw = input_data(f, c.rng, n, 256);
        }
        text.assign(raw.begin(), raw.end());
    }
    const std::size_t n = text.size();
    std::vector<std::uint8_t> pattern;
    if (f.has("pattern")) {
        const std::string p = f.text("pattern");
        pattern.assign(p.begin(), p.end());
        if (pattern.empty()) throw ConfigError("field 'pattern' must not be empty");
    } else {
        const std::size_t m = f.positive("M", "pattern length");
        if (m > n) throw ConfigError("field 'M': pattern longer than the text");
        const std::size_t at = c.rng.below(n - m + 1);
        pattern.assign(text.begin() + at, text.begin() + at + m);
    }
    std::vector<std::uint8_t> masks;
    if (f.has("masks")) {
        for (auto v : f.list("masks")) {
            if (v > 255) throw ConfigError("field 'masks' entries must be bytes");
            masks.push_back(static_cast<std::uint8_t>(v));
        }
        if (masks.size() != pattern.size()) throw ConfigError("field 'masks' must match the pattern length");
    }
    const std::string chain = f.text("chain", "lower");
    if (chain != "lower" && chain != "higher") throw ConfigError("field 'chain' must be lower or higher");
    f.reject_unknown(c.workload);

    SearchableMemory mem(n, chain == "lower" ? ChainFrom::lower_address : ChainFrom::higher_address);
    mem.load(text);
    const auto before = mem.control().ledger();
    const auto res = mem.find_substring(pattern, masks);
    c.rep.ledger = mem.control().ledger() - before;
    c.rep.phases = {{"match", res.match_phase}};
    c.rep.params["N"] = std::to_string(n);
    c.rep.params["M"] = std::to_string(pattern.size());
    c.rep.result["count"] = std::to_string(res.report.count);
    if (!res.report.matched.empty()) c.rep.result["first"] = std::to_string(res.report.matched.front());
    c.rep.result_digest = digest(c.workload + "|matched=" + join(res.report.matched));

    if (!c.oracle.enabled()) return;
    std::vector<std::size_t> want;
    const std::size_t m = pattern.size();
    auto mask = [&](std::size_t k) { return masks.empty() ? 0xFF : masks[k]; };
    for (std::size_t p = 0; p < n; ++p) {
        // Lower chaining reports the last byte of an occurrence, higher
        // chaining its first byte.
        bool ok = chain == "lower" ? p + 1 >= m : p + m <= n;
        for (std::size_t k = 0; ok && k < m; ++k) {
            const std::size_t at = chain == "lower" ? p + 1 - m + k : p + k;
            ok = (text[at] & mask(k)) == (pattern[k] & mask(k));
        }
        if (ok) want.push_back(p);
    }
    c.oracle.same_list("matched", want, res.report.matched);
}

// ---------------------------------------------------------------- comparable

void run_comparable(Context& c) {
    Fields& f = c.f;
    const std::string algo = f.text("algorithm");
    FieldLayout layout;
    layout.field_width = f.number("field_width", 1);
    if (layout.field_width == 0 || layout.field_width > 8) throw ConfigError("field 'field_width' must be 1..8");
    layout.field_offset = f.number("field_offset", 0);
    layout.record_size = f.number("record_size", layout.field_offset + layout.field_width);
    if (layout.field_offset + layout.field_width > layout.record_size)
        throw ConfigError("field 'record_size': the field does not fit in its record");
    const std::uint64_t bound = word_limit(8 * layout.field_width);
    std::size_t records = 0;
    if (f.has("n")) {
        const std::size_t n = f.positive("n", "array size");
        if (n % layout.record_size != 0) throw ConfigError("field 'n' must be a multiple of record_size");
        records = n / layout.record_size;
    }
    const Words values = input_data(f, c.rng, records, bound);
    records = values.size();
    const std::size_t n = records * layout.record_size;

    std::function<void(ComparableMemory&)> execute;
    if (algo == "select") {
        const Predicate p = f.choice<Predicate>("cmp", "eq",
                                                {{"eq", Predicate::eq}, {"ne", Predicate::ne}, {"lt", Predicate::lt},
                                                 {"gt", Predicate::gt}, {"le", Predicate::le}, {"ge", Predicate::ge}});
        const std::uint64_t value = f.number("value");
        if (bound != 0 && value >= bound) throw ConfigError("field 'value' is wider than the field");
        c.rep.params["cmp"] = f.text("cmp", "eq");
        c.rep.params["value"] = std::to_string(value);
        execute = [&, p, value](ComparableMemory& mem) {
            const auto res = mem.select_records(layout, p, value);
            c.rep.result["count"] = std::to_string(res.count);
            c.rep.result_digest = digest(c.workload + "|matched=" + join(res.matched));
            if (!c.oracle.enabled()) return;
            std::vector<std::size_t> want;
            for (std::size_t r = 0; r < records; ++r)
                if (apply(p, values[r], value)) want.push_back(r * layout.record_size + layout.field_offset);
            c.oracle.same_list("matched", want, res.matched);
        };
    } else if (algo == "histogram") {
        const Words limits = f.list("limits");
        for (std::size_t i = 1; i < limits.size(); ++i)
            if (limits[i] <= limits[i - 1]) throw ConfigError("field 'limits' must be strictly increasing");
        c.rep.params["bins"] = std::to_string(limits.size() + 1);
        execute = [&, limits](ComparableMemory& mem) {
            const auto bins = mem.histogram(layout, limits);
            c.rep.result["bins"] = join(bins);
            c.rep.result_digest = digest(c.workload + "|bins=" + join(bins));
            if (!c.oracle.enabled()) return;
            std::vector<std::size_t> want(limits.size() + 1, 0);
            for (auto v : values) ++want[std::upper_bound(limits.begin(), limits.end(), v) - limits.begin()];
            c.oracle.same_list("bins", want, bins);
        };
    } else {
        throw ConfigError("field 'algorithm': comparable memory runs select or histogram, got '" + algo + "'");
    }
    f.reject_unknown(c.workload);

    ComparableMemory mem(n);
    mem.load_field(layout, values);
    c.rep.params["N"] = std::to_string(n);
    c.rep.params["records"] = std::to_string(records);
    c.rep.params["field_width"] = std::to_string(layout.field_width);
    const auto before = mem.control().ledger();
    execute(mem);
    c.rep.ledger = mem.control().ledger() - before;
}

// ---------------------------------------------------------------- movable

void run_movable(Context& c) {
    Fields& f = c.f;
    const std::string algo = f.text("algorithm");
    if (algo != "edit") throw ConfigError("field 'algorithm': movable memory runs edit, got '" + algo + "'");
    const std::size_t n = f.positive("n", "array size");
    const std::size_t objects = f.number("objects", 4);
    const std::size_t ops = f.number("ops", 32);
    const std::uint64_t max = f.number("max", word_limit(32));
    if (max == 0) throw ConfigError("field 'max' must be positive");
    f.reject_unknown(c.workload);
    c.rep.params["N"] = std::to_string(n);
    c.rep.params["objects"] = std::to_string(objects);
    c.rep.params["ops"] = std::to_string(ops);

    using Object = std::pair<std::size_t, std::vector<MovableMemory::Word>>;
    std::vector<Object> shadow;  // table order
    MovableMemory mem(n);
    auto used = [&] {
        std::size_t u = 0;
        for (const auto& o : shadow) u += o.second.size();
        return u;
    };
    auto draw = [&](std::size_t k) {
        std::vector<MovableMemory::Word> v(k);
        for (auto& x : v) x = c.rng.below(max);
        return v;
    };
    auto create = [&](std::size_t len) {
        auto data = draw(len);
        shadow.emplace_back(mem.create(data), data);
    };
    const auto before = mem.control().ledger();
    const std::size_t start_len = std::max<std::size_t>(1, n / (4 * std::max<std::size_t>(1, objects)));
    for (std::size_t i = 0; i < objects && used() + start_len <= n; ++i) create(start_len);
    std::size_t done = 0;
    for (std::size_t step = 0; step < ops; ++step) {
        const std::size_t free = n - used();
        const auto kind = c.rng.below(5);
        if (shadow.empty()) {
            if (free == 0) break;
            create(1 + c.rng.below(std::min<std::size_t>(free, 8)));
        } else if (kind == 0 && free > 0) {
            auto& [id, data] = shadow[c.rng.below(shadow.size())];
            const std::size_t at = c.rng.below(data.size() + 1);
            const auto add = draw(1 + c.rng.below(std::min<std::size_t>(free, 8)));
            mem.insert(id, at, add);
            data.insert(data.begin() + at, add.begin(), add.end());
        } else if (kind == 1 || (kind == 0 && free == 0)) {
            auto& [id, data] = shadow[c.rng.below(shadow.size())];
            if (data.empty()) continue;
            const std::size_t at = c.rng.below(data.size());
            const std::size_t k = 1 + c.rng.below(data.size() - at);
            mem.erase(id, at, k);
            data.erase(data.begin() + at, data.begin() + at + k);
        } else if (kind == 2) {
            const std::size_t from = c.rng.below(shadow.size()), to = c.rng.below(shadow.size());
            mem.move_object(shadow[from].first, to);
            auto o = shadow[from];
            shadow.erase(shadow.begin() + from);
            shadow.insert(shadow.begin() + to, o);
        } else if (kind == 3 && shadow.size() > 1) {
            const std::size_t at = c.rng.below(shadow.size());
            mem.destroy(shadow[at].first);
            shadow.erase(shadow.begin() + at);
        } else {
            if (free == 0) continue;
            create(1 + c.rng.below(std::min<std::size_t>(free, 8)));
        }
        ++done;
    }
    c.rep.ledger = mem.control().ledger() - before;
    c.rep.result["objects"] = std::to_string(mem.table().size());
    c.rep.result["used"] = std::to_string(mem.used());
    c.rep.result["edits"] = std::to_string(done);
    std::string payload = c.workload;
    for (const auto& e : mem.table()) {
        const auto cells = mem.object(e.id);
        std::vector<std::size_t> v(cells.begin(), cells.end());
        payload += "|" + std::to_string(e.id) + ":" + join(v);
    }
    c.rep.result_digest = digest(payload);

    if (!c.oracle.enabled()) return;
    std::vector<std::size_t> want_ids, got_ids;
    for (const auto& o : shadow) want_ids.push_back(o.first);
    for (const auto& e : mem.table()) got_ids.push_back(e.id);
    c.oracle.same_list("table", want_ids, got_ids);
    if (want_ids != got_ids) return;
    for (const auto& [id, data] : shadow) c.oracle.same_list("object " + std::to_string(id), data, mem.object(id));
}

}  // namespace

WorkloadReport run_workload(const WorkloadConfig& config, const RunOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    Fields f(config);
    WorkloadReport rep;
    const std::string memory = f.text("memory");
    const std::string algorithm = f.text("algorithm");
    const std::uint64_t seed = options.seed ? *options.seed : f.number("seed", 1);
    const bool check = options.oracle ? *options.oracle : f.on_off("oracle", true);
    if (options.oracle) f.text("oracle", "");
    if (options.seed) f.text("seed", "");
    rep.workload = memory + "/" + algorithm;
    rep.params["memory"] = memory;
    rep.params["seed"] = std::to_string(seed);

    SplitMix64 rng(seed);
    Oracle oracle(check);
    Context c{f, rng, oracle, rep, rep.workload};
    if (memory == "computable_1d") run_computable(c, false);
    else if (memory == "computable_2d") run_computable(c, true);
    else if (memory == "searchable") run_searchable(c);
    else if (memory == "comparable") run_comparable(c);
    else if (memory == "movable") run_movable(c);
    else throw ConfigError("field 'memory' must be movable, searchable, comparable, computable_1d or computable_2d, got '" +
                           memory + "'");
    oracle.apply(rep);
    if (options.timing)
        rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

}  // namespace cpm
