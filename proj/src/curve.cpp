#include "censtest/curve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "censtest/error.hpp"

namespace censtest {

std::vector<double> pava_nonincreasing(const std::vector<double>& values) {
    // Pool adjacent violators on the negated sequence (isotonic form). Each
    // block keeps (mean, count); violating neighbors merge right to left.
    std::vector<double> mean;
    std::vector<std::size_t> count;
    for (double v : values) {
        mean.push_back(v);
        count.push_back(1);
        while (mean.size() > 1 && mean[mean.size() - 2] < mean.back()) {
            const double total = mean[mean.size() - 2] * static_cast<double>(count[count.size() - 2]) +
                                 mean.back() * static_cast<double>(count.back());
            const std::size_t c = count[count.size() - 2] + count.back();
            mean.pop_back();
            count.pop_back();
            mean.back() = total / static_cast<double>(c);
            count.back() = c;
        }
    }
    std::vector<double> out;
    out.reserve(values.size());
    for (std::size_t b = 0; b < mean.size(); ++b)
        out.insert(out.end(), count[b], mean[b]);
    return out;
}

SurvivalCurve make_curve(std::vector<double> t, std::vector<double> s) {
    if (t.size() != s.size()) throw Error("curve: t and s lengths differ");
    if (t.empty()) throw Error("curve: empty input");

    std::vector<std::size_t> idx(t.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });

    SurvivalCurve c;
    for (std::size_t k : idx) {
        if (!std::isfinite(t[k]) || t[k] < 0.0) throw Error("curve: times must be nonnegative");
        if (!std::isfinite(s[k]) || s[k] < 0.0 || s[k] > 1.0)
            throw Error("curve: survival values must lie in [0, 1]");
        if (!c.t.empty() && t[k] == c.t.back()) throw Error("curve: duplicate time knot");
        c.t.push_back(t[k]);
        c.s.push_back(s[k]);
    }
    if (c.t.front() != 0.0) {
        c.t.insert(c.t.begin(), 0.0);
        c.s.insert(c.s.begin(), 1.0);
    } else if (c.s.front() != 1.0) {
        throw Error("curve: S(0) must be 1");
    }
    if (c.t.size() < 2) throw Error("curve: need at least two knots");
    c.s = pava_nonincreasing(c.s);
    // The projection can only lower the first value; S(0) = 1 survives it
    // because no value exceeds 1.
    return c;
}

SurvivalCurve load_curve(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw Error(path + ": empty file");

    auto fields = [](const std::string& l) {
        std::vector<std::string> out;
        std::string cur;
        std::stringstream ss(l);
        while (std::getline(ss, cur, ',')) {
            const auto b = cur.find_first_not_of(" \t\r");
            const auto e = cur.find_last_not_of(" \t\r");
            out.push_back(b == std::string::npos ? "" : cur.substr(b, e - b + 1));
        }
        return out;
    };
    const auto header = fields(line);
    std::ptrdiff_t ct = -1, cs = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == "t") ct = static_cast<std::ptrdiff_t>(i);
        if (header[i] == "s") cs = static_cast<std::ptrdiff_t>(i);
    }
    if (ct < 0 || cs < 0) throw Error(path + ": expected columns t,s");

    std::vector<double> t, s;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        const auto f = fields(line);
        if (f.size() == 1 && f[0].empty()) continue;
        if (f.size() != header.size())
            throw Error(path + ": row " + std::to_string(row) + ": wrong field count");
        auto parse = [&](const std::string& v) {
            double x = 0.0;
            const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
            if (ec != std::errc{} || p != v.data() + v.size())
                throw Error(path + ": row " + std::to_string(row) + ": not a number: '" + v + "'");
            return x;
        };
        t.push_back(parse(f[static_cast<std::size_t>(ct)]));
        s.push_back(parse(f[static_cast<std::size_t>(cs)]));
    }
    return make_curve(std::move(t), std::move(s));
}

SurvivalCurve restrict_curve(const SurvivalCurve& c, double tau) {
    if (!(tau > 0.0)) throw Error("curve: truncation time must be positive");
    if (tau >= c.t_max()) return c;
    SurvivalCurve out;
    std::size_t k = 0;
    while (k < c.t.size() && c.t[k] <= tau) {
        out.t.push_back(c.t[k]);
        out.s.push_back(c.s[k]);
        ++k;
    }
    if (out.t.back() < tau) {
        const double t0 = c.t[k - 1], t1 = c.t[k];
        const double w = (tau - t0) / (t1 - t0);
        out.t.push_back(tau);
        out.s.push_back(c.s[k - 1] + w * (c.s[k] - c.s[k - 1]));
    }
    if (out.t.size() < 2) throw Error("curve: truncation leaves a single knot");
    return out;
}

double sample_from_curve(const SurvivalCurve& c, SplitMix64& rng) {
    const double u = rng.uniform();
    const double f_max = 1.0 - c.survivor_mass();
    if (u >= f_max) return c.t_max();
    // Find the segment with F(t_k) <= u < F(t_{k+1}) and invert linearly.
    std::size_t lo = 0, hi = c.t.size() - 1;
    while (lo + 1 < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (1.0 - c.s[mid] <= u) lo = mid;
        else hi = mid;
    }
    // F(t_lo) <= u < F(t_hi) forces f1 > f0, so the division is safe.
    const double f0 = 1.0 - c.s[lo], f1 = 1.0 - c.s[hi];
    return c.t[lo] + (u - f0) / (f1 - f0) * (c.t[hi] - c.t[lo]);
}

}  // namespace censtest
