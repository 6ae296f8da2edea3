#include "mplab/grid.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mplab {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

double to_double(std::string_view s) {
    s = trim(s);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw std::invalid_argument("grid: not a number: '" + std::string(s) + "'");
    }
    return v;
}

std::string shortest(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

GridSpec GridSpec::parse(std::string_view text) {
    GridSpec g;
    bool have_E = false;
    bool have_eta = false;
    while (!text.empty()) {
        auto semi = text.find(';');
        std::string_view part = trim(text.substr(0, semi));
        text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
        if (part.empty()) continue;
        auto eq = part.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("grid: expected key=value in '" + std::string(part) + "'");
        }
        std::string_view key = trim(part.substr(0, eq));
        std::string_view val = trim(part.substr(eq + 1));
        if (key == "E") {
            have_E = true;
            g.E.clear();
            while (!val.empty()) {
                auto comma = val.find(',');
                g.E.push_back(to_double(val.substr(0, comma)));
                val = comma == std::string_view::npos ? std::string_view{} : val.substr(comma + 1);
            }
        } else if (key == "eta") {
            have_eta = true;
            auto colon = val.find(':');
            std::string_view rule = trim(val.substr(0, colon));
            if (rule == "m_sqrt_e_over_n") {
                g.rule = EtaRule::m_sqrt_e_over_n;
                g.value = 1.0;
                continue;
            }
            if (colon == std::string_view::npos) {
                throw std::invalid_argument("grid: eta rule needs a value, e.g. fixed:0.1");
            }
            if (rule == "fixed") {
                g.rule = EtaRule::fixed;
            } else if (rule == "over_n") {
                g.rule = EtaRule::over_n;
            } else {
                throw std::invalid_argument("grid: unknown eta rule '" + std::string(rule) + "'");
            }
            g.value = to_double(val.substr(colon + 1));
            if (g.value == 0.0) throw std::invalid_argument("grid: eta value must be nonzero");
        } else {
            throw std::invalid_argument("grid: unknown key '" + std::string(key) + "'");
        }
    }
    if (!have_E || !have_eta) {
        throw std::invalid_argument("grid: both E=... and eta=... are required");
    }
    return g;
}

std::string GridSpec::to_string() const {
    std::string out = "E=";
    for (std::size_t i = 0; i < E.size(); ++i) {
        if (i) out += ',';
        out += shortest(E[i]);
    }
    out += ";eta=";
    switch (rule) {
        case EtaRule::fixed: out += "fixed:" + shortest(value); break;
        case EtaRule::over_n: out += "over_n:" + shortest(value); break;
        case EtaRule::m_sqrt_e_over_n: out += "m_sqrt_e_over_n"; break;
    }
    return out;
}

std::vector<SpectralPoint> GridSpec::resolve(long N, const DomainParams& domain) const {
    std::vector<SpectralPoint> pts;
    pts.reserve(E.size());
    const double n = static_cast<double>(N);
    for (double e : E) {
        double eta = value;
        if (rule == EtaRule::over_n) eta = value / n;
        if (rule == EtaRule::m_sqrt_e_over_n) eta = pleijel_eta0(e, N, domain.M);
        pts.push_back({e, eta});
    }
    return pts;
}

double pleijel_eta0(double E, long N, double M) {
    const double n = static_cast<double>(N);
    return E > 0.0 ? M * std::sqrt(E) / n : M / n;
}

bool above_threshold(const SpectralPoint& p, long N, double M) {
    return static_cast<double>(N) * p.eta / std::sqrt(std::abs(p.theta())) >= M;
}

}  // namespace mplab
