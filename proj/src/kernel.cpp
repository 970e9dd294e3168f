#include "cpm/kernel.hpp"

#include <algorithm>
#include <sstream>

#include "cpm/errors.hpp"

namespace cpm {

namespace {

std::vector<std::int64_t> trimmed(const std::vector<std::int64_t>& t) {
    std::size_t r = t.size() / 2, cut = 0;
    while (cut < r && t[cut] == 0 && t[t.size() - 1 - cut] == 0) ++cut;
    return {t.begin() + static_cast<std::ptrdiff_t>(cut), t.end() - static_cast<std::ptrdiff_t>(cut)};
}

}  // namespace

Kernel1D::Kernel1D(std::vector<std::int64_t> taps) : taps_(std::move(taps)) {
    if (taps_.size() % 2 == 0) throw ArgumentError("kernel length must be odd");
}

std::int64_t Kernel1D::at(std::ptrdiff_t i) const {
    const auto r = static_cast<std::ptrdiff_t>(radius());
    return (i < -r || i > r) ? 0 : taps_[static_cast<std::size_t>(i + r)];
}

std::string Kernel1D::to_string() const {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < taps_.size(); ++i) os << (i ? " " : "") << taps_[i];
    os << ")";
    return os.str();
}

bool operator==(const Kernel1D& a, const Kernel1D& b) { return trimmed(a.taps_) == trimmed(b.taps_); }

Kernel1D operator+(const Kernel1D& a, const Kernel1D& b) {
    const auto r = static_cast<std::ptrdiff_t>(std::max(a.radius(), b.radius()));
    std::vector<std::int64_t> t;
    for (auto i = -r; i <= r; ++i) t.push_back(a.at(i) + b.at(i));
    return Kernel1D(std::move(t));
}

Kernel1D compose(const Kernel1D& a, const Kernel1D& b) {
    const auto ra = static_cast<std::ptrdiff_t>(a.radius()), rb = static_cast<std::ptrdiff_t>(b.radius());
    std::vector<std::int64_t> t;
    for (auto i = -(ra + rb); i <= ra + rb; ++i) {
        std::int64_t s = 0;
        for (auto k = -ra; k <= ra; ++k) s += a.at(k) * b.at(i - k);
        t.push_back(s);
    }
    return Kernel1D(std::move(t));
}

Kernel2D::Kernel2D(std::size_t rx, std::size_t ry, std::vector<std::int64_t> taps)
    : rx_(rx), ry_(ry), taps_(std::move(taps)) {
    if (taps_.size() != (2 * rx + 1) * (2 * ry + 1)) throw ArgumentError("kernel size does not match its radii");
}

Kernel2D Kernel2D::row(const Kernel1D& k) { return Kernel2D(k.radius(), 0, k.taps()); }
Kernel2D Kernel2D::column(const Kernel1D& k) { return Kernel2D(0, k.radius(), k.taps()); }

std::int64_t Kernel2D::at(std::ptrdiff_t dx, std::ptrdiff_t dy) const {
    const auto rx = static_cast<std::ptrdiff_t>(rx_), ry = static_cast<std::ptrdiff_t>(ry_);
    if (dx < -rx || dx > rx || dy < -ry || dy > ry) return 0;
    return taps_[static_cast<std::size_t>((dy + ry) * (2 * rx + 1) + dx + rx)];
}

std::string Kernel2D::to_string() const {
    std::ostringstream os;
    const std::size_t w = 2 * rx_ + 1;
    for (std::size_t r = 0; r < 2 * ry_ + 1; ++r) {
        os << (r ? " " : "") << "(";
        for (std::size_t c = 0; c < w; ++c) os << (c ? " " : "") << taps_[r * w + c];
        os << ")";
    }
    return os.str();
}

bool operator==(const Kernel2D& a, const Kernel2D& b) {
    const auto rx = static_cast<std::ptrdiff_t>(std::max(a.rx_, b.rx_));
    const auto ry = static_cast<std::ptrdiff_t>(std::max(a.ry_, b.ry_));
    for (auto dy = -ry; dy <= ry; ++dy)
        for (auto dx = -rx; dx <= rx; ++dx)
            if (a.at(dx, dy) != b.at(dx, dy)) return false;
    return true;
}

Kernel2D operator+(const Kernel2D& a, const Kernel2D& b) {
    const std::size_t rx = std::max(a.rx(), b.rx()), ry = std::max(a.ry(), b.ry());
    const auto sx = static_cast<std::ptrdiff_t>(rx), sy = static_cast<std::ptrdiff_t>(ry);
    std::vector<std::int64_t> t;
    for (auto dy = -sy; dy <= sy; ++dy)
        for (auto dx = -sx; dx <= sx; ++dx) t.push_back(a.at(dx, dy) + b.at(dx, dy));
    return Kernel2D(rx, ry, std::move(t));
}

Kernel2D compose(const Kernel2D& a, const Kernel2D& b) {
    const std::size_t rx = a.rx() + b.rx(), ry = a.ry() + b.ry();
    const auto sx = static_cast<std::ptrdiff_t>(rx), sy = static_cast<std::ptrdiff_t>(ry);
    const auto ax = static_cast<std::ptrdiff_t>(a.rx()), ay = static_cast<std::ptrdiff_t>(a.ry());
    std::vector<std::int64_t> t;
    for (auto dy = -sy; dy <= sy; ++dy)
        for (auto dx = -sx; dx <= sx; ++dx) {
            std::int64_t s = 0;
            for (auto ky = -ay; ky <= ay; ++ky)
                for (auto kx = -ax; kx <= ax; ++kx) s += a.at(kx, ky) * b.at(dx - kx, dy - ky);
            t.push_back(s);
        }
    return Kernel2D(rx, ry, std::move(t));
}

namespace {

Kernel2D shift(const Kernel2D& k, Dir d) {
    // Reading the left neighbor moves every weight one step to the left.
    switch (d) {
        case Dir::left: return compose(k, Kernel2D(1, 0, {1, 0, 0}));
        case Dir::right: return compose(k, Kernel2D(1, 0, {0, 0, 1}));
        case Dir::top: return compose(k, Kernel2D(0, 1, {1, 0, 0}));
        case Dir::bottom: return compose(k, Kernel2D(0, 1, {0, 0, 1}));
    }
    return k;
}

Kernel2D negated(const Kernel2D& k) {
    auto t = k.taps();
    for (auto& v : t) v = -v;
    return Kernel2D(k.rx(), k.ry(), std::move(t));
}

}  // namespace

namespace {

// True when k is zero at every tap a read from direction d would need from
// outside the array, so the zero fill stands in for it exactly.
bool fill_is_exact(const Kernel2D& k, Dir d) {
    const auto rx = static_cast<std::ptrdiff_t>(k.rx()), ry = static_cast<std::ptrdiff_t>(k.ry());
    for (std::ptrdiff_t dy = -ry; dy <= ry; ++dy)
        for (std::ptrdiff_t dx = -rx; dx <= rx; ++dx) {
            if (k.at(dx, dy) == 0) continue;
            if ((d == Dir::left && dx > 0) || (d == Dir::right && dx < 0) || (d == Dir::top && dy > 0) ||
                (d == Dir::bottom && dy < 0))
                return false;
        }
    return true;
}

Kernel2D evaluate(const std::vector<MacroOp>& plan, bool& exact) {
    using Code = MacroOp::Code;
    using Kind = RegRef::Kind;
    Kernel2D op, nb(0, 0, {1});
    exact = true;
    auto source = [&](const RegRef& r) {
        if (r.kind == Kind::nb) return nb;
        if (r.kind == Kind::neighbor) {
            exact = exact && fill_is_exact(nb, r.dir);
            return shift(nb, r.dir);
        }
        throw PlanError("plan step reads " + to_string(r) + ", which has no kernel value");
    };
    for (const auto& m : plan) {
        switch (m.code) {
            case Code::copy:
                if (m.dst.kind == Kind::op) op = m.src.kind == Kind::op ? op : source(m.src);
                else if (m.dst.kind == Kind::nb && m.src.kind == Kind::op) nb = op;
                else throw PlanError("plan copies between registers outside the stencil");
                break;
            case Code::read_neighbor: op = source(m.src); break;
            case Code::exchange:
                if (m.src.kind != Kind::nb) throw PlanError("plan exchanges with a non-stencil register");
                std::swap(op, nb);
                break;
            case Code::add: op = op + source(m.src); break;
            case Code::sub: op = op + negated(source(m.src)); break;
            case Code::load_immediate:
                if (m.immediate != 0) throw PlanError("plan loads a nonzero constant");
                op = Kernel2D();
                break;
            default: throw PlanError("plan step " + to_string(m.code) + " is not a stencil step");
        }
    }
    return op;
}

}  // namespace

Kernel2D plan_value(const std::vector<MacroOp>& plan) {
    bool exact = true;
    return evaluate(plan, exact);
}

bool edge_exact(const std::vector<MacroOp>& plan) {
    bool exact = true;
    evaluate(plan, exact);
    return exact;
}

std::vector<MacroOp> plan_gauss3() {
    return {MacroOp::copy(RegRef::op(), RegRef::nb()), MacroOp::add(RegRef::nb()),
            MacroOp::add(RegRef::neighbor(Dir::left)), MacroOp::add(RegRef::neighbor(Dir::right))};
}

std::vector<MacroOp> plan_gauss5() {
    // The exchange parks (1 1 1) in nb and keeps the unit term in op:
    // (1) + (1 1 1) # (1 0 1) + (1 1 1) = (1 2 4 2 1).
    return {MacroOp::copy(RegRef::op(), RegRef::nb()),
            MacroOp::add(RegRef::neighbor(Dir::left)),
            MacroOp::add(RegRef::neighbor(Dir::right)),
            MacroOp::exchange(RegRef::nb()),
            MacroOp::add(RegRef::neighbor(Dir::left)),
            MacroOp::add(RegRef::neighbor(Dir::right)),
            MacroOp::add(RegRef::nb())};
}

std::vector<MacroOp> plan_gauss9() {
    auto p = plan_gauss3();
    p.push_back(MacroOp::copy(RegRef::nb(), RegRef::op()));
    p.push_back(MacroOp::add(RegRef::nb()));
    p.push_back(MacroOp::add(RegRef::neighbor(Dir::top)));
    p.push_back(MacroOp::add(RegRef::neighbor(Dir::bottom)));
    return p;
}

}  // namespace cpm
