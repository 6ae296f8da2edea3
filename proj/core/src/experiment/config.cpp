#include "mplab/experiment/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mplab::experiment {

namespace {

using json = nlohmann::json;

const std::vector<std::pair<Kind, const char*>> kind_names = {
    {Kind::identities, "identities"},     {Kind::qf, "qf"},
    {Kind::law_scan, "law-scan"},         {Kind::q_recursion, "q-recursion"},
    {Kind::pleijel, "pleijel"},           {Kind::counting, "counting"},
    {Kind::rigidity, "rigidity"},         {Kind::inequalities, "inequalities"},
    {Kind::mp_eval, "mp-eval"}};

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    while (true) {
        auto pos = s.find(sep);
        auto part = trim(s.substr(0, pos));
        if (!part.empty()) out.push_back(part);
        if (pos == std::string_view::npos) break;
        s = s.substr(pos + 1);
    }
    return out;
}

template <class T>
T number(std::string_view s, int line, std::string_view key) {
    s = trim(s);
    T v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw ConfigError("'" + std::string(key) + "': not a number: '" + std::string(s) + "'", line);
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(v)) throw ConfigError("'" + std::string(key) + "': not finite", line);
    }
    return v;
}

template <class T>
std::vector<T> number_list(std::string_view s, int line, std::string_view key) {
    std::vector<T> out;
    for (auto part : split(s, ',')) out.push_back(number<T>(part, line, key));
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
      line_(line) {}

std::string to_string(Kind kind) {
    for (const auto& [k, name] : kind_names) {
        if (k == kind) return name;
    }
    return "mp-eval";
}

Kind parse_kind(std::string_view text) {
    for (const auto& [k, name] : kind_names) {
        if (text == name) return k;
    }
    throw ConfigError("unknown experiment kind '" + std::string(text) + "'");
}

const std::vector<Kind>& all_kinds() {
    static const std::vector<Kind> kinds = [] {
        std::vector<Kind> v;
        for (const auto& [k, name] : kind_names) v.push_back(k);
        return v;
    }();
    return kinds;
}

void ExperimentConfig::validate() const {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (N.empty()) fail("n: empty list");
    for (long n : N) {
        if (n < 2) fail("n: every size must be at least 2");
    }
    if (replicas < 1) fail("replicas: must be positive");
    if (workers < 1) fail("workers: must be positive");
    try {
        dist.validate();
    } catch (const std::exception& e) {
        fail(std::string("distribution: ") + e.what());
    }
    if (!(domain.c > 0.0) || !(domain.M > 0.0)) fail("domain: c and M must be positive");
    for (double v : K) {
        if (!(v > 0.0)) fail("thresholds: K must be positive");
    }
    const bool uses_grid = kind == Kind::mp_eval || kind == Kind::law_scan ||
                           kind == Kind::identities || kind == Kind::qf ||
                           kind == Kind::q_recursion || kind == Kind::pleijel;
    if (uses_grid && grid.E.empty()) fail("grid: empty E list");
    if (kind == Kind::counting) {
        if (counting_E.empty()) fail("counting: empty E list");
        for (double e : counting_E) {
            if (!(e > 0.0)) fail("counting: E must be positive");
        }
    }
    const bool dense = kind == Kind::identities || kind == Kind::qf || kind == Kind::q_recursion;
    if (dense) {
        for (long n : N) {
            if (n > dense_cap) fail("n: " + std::to_string(n) + " exceeds dense_cap");
            if (k < 1 || l < 1 || k > n || l > n || k == l) fail("indices: need distinct k, l in 1..N");
        }
        for (const auto& p : grid.resolve(N.front(), domain)) {
            if (p.eta == 0.0) fail("grid: eta must be nonzero");
        }
    }
    if (levels < 0 || levels > 4) fail("indices: levels must be in 0..4");
    if (!(left_anchor < 0.0) || !(contour_Q > 0.0)) fail("contour: need left_anchor < 0 < Q");
    if (kind == Kind::inequalities) {
        if (orders.empty()) fail("inequalities: empty order list");
        for (int p : orders) {
            if (p < 2 || p > 8 || p % 2) fail("inequalities: orders must be even, 2..8");
        }
        if (families.empty()) fail("inequalities: empty family list");
        for (const auto& f : families) {
            if (f != "single" && f != "uniform" && f != "random-unit" && f != "resolvent") {
                fail("inequalities: unknown family '" + f + "'");
            }
        }
        if (samples < 1) fail("inequalities: samples must be positive");
    }
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig cfg;
    std::string section;
    int line_no = 0;
    bool grid_E = false;
    bool grid_eta = false;
    std::string grid_E_text;
    std::string grid_eta_text;
    int grid_line = 0;

    std::istringstream in{std::string(text)};
    std::string raw;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
            section = std::string(trim(line.substr(1, line.size() - 2)));
            static const char* known[] = {"experiment", "distribution", "grid",    "domain",
                                          "calibration", "thresholds",  "counting", "indices",
                                          "contour",    "inequalities"};
            bool ok = false;
            for (const char* s : known) ok = ok || section == s;
            if (!ok) throw ConfigError("unknown section [" + section + "]", line_no);
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError("expected key = value", line_no);
        if (section.empty()) throw ConfigError("key outside of a section", line_no);
        std::string key(trim(line.substr(0, eq)));
        std::string_view val = trim(line.substr(eq + 1));
        auto unknown = [&] { throw ConfigError("unknown key '" + key + "' in [" + section + "]", line_no); };

        try {
            if (section == "experiment") {
                if (key == "kind") cfg.kind = parse_kind(val);
                else if (key == "n") cfg.N = number_list<long>(val, line_no, key);
                else if (key == "replicas") cfg.replicas = number<long>(val, line_no, key);
                else if (key == "seed") cfg.seed = number<std::uint64_t>(val, line_no, key);
                else if (key == "out") cfg.out = std::string(val);
                else if (key == "workers") cfg.workers = number<int>(val, line_no, key);
                else if (key == "dense_cap") cfg.dense_cap = number<long>(val, line_no, key);
                else unknown();
            } else if (section == "distribution") {
                if (key == "kind") cfg.dist.kind = ensemble::parse_kind(val);
                else if (key == "tail_index") cfg.dist.tail_index = number<double>(val, line_no, key);
                else if (key == "D") cfg.dist.D = number<double>(val, line_no, key);
                else unknown();
            } else if (section == "grid") {
                grid_line = line_no;
                if (key == "spec") {
                    cfg.grid = GridSpec::parse(val);
                } else if (key == "E") {
                    grid_E = true;
                    grid_E_text = std::string(val);
                } else if (key == "eta") {
                    grid_eta = true;
                    grid_eta_text = std::string(val);
                } else {
                    unknown();
                }
            } else if (section == "domain") {
                if (key == "c") cfg.domain.c = number<double>(val, line_no, key);
                else if (key == "M") cfg.domain.M = number<double>(val, line_no, key);
                else unknown();
            } else if (section == "calibration") {
                cfg.calibration[key] = number<double>(val, line_no, key);
            } else if (section == "thresholds") {
                if (key == "K") cfg.K = number_list<double>(val, line_no, key);
                else unknown();
            } else if (section == "counting") {
                if (key == "E") cfg.counting_E = number_list<double>(val, line_no, key);
                else unknown();
            } else if (section == "indices") {
                if (key == "k") cfg.k = number<int>(val, line_no, key);
                else if (key == "l") cfg.l = number<int>(val, line_no, key);
                else if (key == "levels") cfg.levels = number<int>(val, line_no, key);
                else unknown();
            } else if (section == "contour") {
                if (key == "Q") cfg.contour_Q = number<double>(val, line_no, key);
                else if (key == "left_anchor") cfg.left_anchor = number<double>(val, line_no, key);
                else unknown();
            } else if (section == "inequalities") {
                if (key == "orders") cfg.orders = number_list<int>(val, line_no, key);
                else if (key == "samples") cfg.samples = number<long>(val, line_no, key);
                else if (key == "families") {
                    cfg.families.clear();
                    for (auto f : split(val, ',')) cfg.families.emplace_back(f);
                } else {
                    unknown();
                }
            }
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception& e) {
            throw ConfigError(e.what(), line_no);
        }
    }
    try {
        if (grid_E) cfg.grid.E = GridSpec::parse("E=" + grid_E_text + ";eta=fixed:1").E;
        if (grid_eta) {
            GridSpec g = GridSpec::parse("E=0;eta=" + grid_eta_text);
            cfg.grid.rule = g.rule;
            cfg.grid.value = g.value;
        }
    } catch (const std::exception& e) {
        throw ConfigError(e.what(), grid_line);
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const ExperimentConfig& c) {
    json j;
    j["kind"] = to_string(c.kind);
    j["n"] = c.N;
    j["replicas"] = c.replicas;
    j["distribution"] = {{"kind", ensemble::to_string(c.dist.kind)},
                         {"tail_index", c.dist.tail_index},
                         {"D", c.dist.D}};
    j["seed"] = c.seed;
    j["grid"] = c.grid.to_string();
    j["domain"] = {{"c", c.domain.c}, {"M", c.domain.M}};
    j["calibration"] = c.calibration;
    j["K"] = c.K;
    j["counting_E"] = c.counting_E;
    j["indices"] = {{"k", c.k}, {"l", c.l}, {"levels", c.levels}};
    j["contour"] = {{"Q", c.contour_Q}, {"left_anchor", c.left_anchor}};
    j["inequalities"] = {{"orders", c.orders}, {"families", c.families}, {"samples", c.samples}};
    j["dense_cap"] = c.dense_cap;
    j["out"] = c.out;
    j["workers"] = c.workers;
    return j.dump(2);
}

ExperimentConfig config_from_json(std::string_view text) {
    try {
        json j = json::parse(text);
        if (j.contains("config")) j = j.at("config");
        ExperimentConfig c;
        c.kind = parse_kind(j.at("kind").get<std::string>());
        c.N = j.at("n").get<std::vector<long>>();
        c.replicas = j.at("replicas").get<long>();
        c.dist.kind = ensemble::parse_kind(j.at("distribution").at("kind").get<std::string>());
        c.dist.tail_index = j.at("distribution").at("tail_index").get<double>();
        c.dist.D = j.at("distribution").at("D").get<double>();
        c.seed = j.at("seed").get<std::uint64_t>();
        c.grid = GridSpec::parse(j.at("grid").get<std::string>());
        c.domain.c = j.at("domain").at("c").get<double>();
        c.domain.M = j.at("domain").at("M").get<double>();
        c.calibration = j.at("calibration").get<std::map<std::string, double>>();
        c.K = j.at("K").get<std::vector<double>>();
        c.counting_E = j.at("counting_E").get<std::vector<double>>();
        c.k = j.at("indices").at("k").get<int>();
        c.l = j.at("indices").at("l").get<int>();
        c.levels = j.at("indices").at("levels").get<int>();
        c.contour_Q = j.at("contour").at("Q").get<double>();
        c.left_anchor = j.at("contour").at("left_anchor").get<double>();
        c.orders = j.at("inequalities").at("orders").get<std::vector<int>>();
        c.families = j.at("inequalities").at("families").get<std::vector<std::string>>();
        c.samples = j.at("inequalities").at("samples").get<long>();
        c.dense_cap = j.at("dense_cap").get<long>();
        c.out = j.at("out").get<std::string>();
        c.workers = j.at("workers").get<int>();
        return c;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("json: ") + e.what());
    }
}

}  // namespace mplab::experiment
