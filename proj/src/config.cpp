#include "obrb/config.hpp"

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "obrb/errors.hpp"

namespace obrb {

// from funcspec.cpp
bool parse_spec_term(const std::string &term, std::string &name, double &arg, bool &has_arg);
std::vector<std::string> split_spec_terms(const std::string &text);

namespace {

std::string trim(const std::string &s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// file(path) with a non-numeric payload
bool parse_file_term(const std::string &text, std::string &path) {
    std::string t = trim(text);
    if (t.rfind("file(", 0) != 0 || t.back() != ')')
        return false;
    path = trim(t.substr(5, t.size() - 6));
    return !path.empty();
}

} // namespace

Theta0Spec Theta0Spec::parse(const std::string &text) {
    Theta0Spec spec;
    std::string t = trim(text);
    if (t == "zero" || t.empty())
        return spec;
    if (parse_file_term(t, spec.file))
        return spec;
    for (const std::string &piece : split_spec_terms(t)) {
        std::string name;
        double arg = 0;
        bool has_arg = false;
        if (!parse_spec_term(piece, name, arg, has_arg))
            throw invalid_argument_error("bad theta0 term: '" + trim(piece) + "'");
        Entry e;
        if (name == "constant" && has_arg)
            e = {Term::constant, arg};
        else if (name == "linear_x" && has_arg)
            e = {Term::linear_x, arg};
        else if (name == "linear_y" && has_arg)
            e = {Term::linear_y, arg};
        else if (name == "harmonic_xy" && has_arg)
            e = {Term::harmonic_xy, arg};
        else if (name == "bump" && has_arg)
            e = {Term::bump, arg};
        else if (name == "random" && has_arg)
            e = {Term::random, arg};
        else if (name == "equilibrium" && !has_arg)
            e = {Term::equilibrium, 1.0};
        else
            throw invalid_argument_error("unknown theta0 term '" + trim(piece) + "'");
        spec.entries.push_back(e);
    }
    return spec;
}

std::string Theta0Spec::to_string() const {
    if (!file.empty())
        return "file(" + file + ")";
    if (entries.empty())
        return "zero";
    std::ostringstream os;
    bool first = true;
    for (const Entry &e : entries) {
        if (!first)
            os << " + ";
        first = false;
        switch (e.term) {
        case Term::constant: os << "constant(" << e.coeff << ")"; break;
        case Term::linear_x: os << "linear_x(" << e.coeff << ")"; break;
        case Term::linear_y: os << "linear_y(" << e.coeff << ")"; break;
        case Term::harmonic_xy: os << "harmonic_xy(" << e.coeff << ")"; break;
        case Term::bump: os << "bump(" << e.coeff << ")"; break;
        case Term::random: os << "random(" << e.coeff << ")"; break;
        case Term::equilibrium: os << "equilibrium"; break;
        }
    }
    return os.str();
}

U0Spec U0Spec::parse(const std::string &text) {
    U0Spec spec;
    std::string t = trim(text);
    if (t == "zero" || t.empty()) {
        spec.kind = Kind::zero;
        return spec;
    }
    if (parse_file_term(t, spec.file)) {
        spec.kind = Kind::file;
        return spec;
    }
    std::string name;
    double arg = 0;
    bool has_arg = false;
    if (!parse_spec_term(t, name, arg, has_arg))
        throw invalid_argument_error("bad u0 spec: '" + t + "'");
    if (name == "random_divfree" && has_arg) {
        spec.kind = Kind::random_divfree;
        spec.amplitude = arg;
    } else if (name == "eigenmode") {
        spec.kind = Kind::eigenmode;
        spec.amplitude = has_arg ? arg : 1.0;
    } else {
        throw invalid_argument_error("unknown u0 spec '" + t + "'");
    }
    return spec;
}

std::string U0Spec::to_string() const {
    std::ostringstream os;
    switch (kind) {
    case Kind::zero: return "zero";
    case Kind::file: return "file(" + file + ")";
    case Kind::random_divfree: os << "random_divfree(" << amplitude << ")"; break;
    case Kind::eigenmode: os << "eigenmode(" << amplitude << ")"; break;
    }
    return os.str();
}

namespace {

struct KeyValue {
    std::string value;
    int line = 0;
};

using Section = std::map<std::string, KeyValue>;

[[noreturn]] void fail(int line, const std::string &msg) {
    throw config_error("config line " + std::to_string(line) + ": " + msg);
}

double as_double(const Section &s, const std::string &key) {
    const KeyValue &kv = s.at(key);
    try {
        std::size_t used = 0;
        double v = std::stod(kv.value, &used);
        if (used != kv.value.size())
            fail(kv.line, "expected a number for '" + key + "', got '" + kv.value + "'");
        return v;
    } catch (const config_error &) {
        throw;
    } catch (const std::exception &) {
        fail(kv.line, "expected a number for '" + key + "', got '" + kv.value + "'");
    }
}

long long as_int(const Section &s, const std::string &key) {
    const KeyValue &kv = s.at(key);
    try {
        std::size_t used = 0;
        long long v = std::stoll(kv.value, &used);
        if (used != kv.value.size())
            fail(kv.line, "expected an integer for '" + key + "', got '" + kv.value + "'");
        return v;
    } catch (const config_error &) {
        throw;
    } catch (const std::exception &) {
        fail(kv.line, "expected an integer for '" + key + "', got '" + kv.value + "'");
    }
}

const std::set<std::string> kSections = {"grid", "physics", "numerics", "run", "initial"};

const std::map<std::string, std::set<std::string>> kKeys = {
    {"grid", {"nx", "ny", "lx", "ly"}},
    {"physics", {"mu", "kappa", "alpha", "gamma", "g_spec", "thetaB_spec"}},
    {"numerics", {"dt_cfl", "dt_max", "lin_tol", "bc_coupling", "advection"}},
    {"run", {"t_end", "output_every", "checkpoint_every", "seed", "out_dir"}},
    {"initial", {"theta0", "u0"}},
};

} // namespace

RunConfig parse_config(const std::string &text) {
    std::map<std::string, Section> sections;
    std::istringstream is(text);
    std::string raw;
    std::string current;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                fail(line_no, "malformed section header '" + line + "'");
            current = trim(line.substr(1, line.size() - 2));
            if (!kSections.count(current))
                fail(line_no, "unknown section [" + current + "]");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            fail(line_no, "expected 'key = value', got '" + line + "'");
        if (current.empty())
            fail(line_no, "key outside any [section]");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!kKeys.at(current).count(key))
            fail(line_no, "unknown key '" + key + "' in section [" + current + "]");
        if (sections[current].count(key))
            fail(line_no, "duplicate key '" + key + "' in section [" + current + "]");
        if (value.empty())
            fail(line_no, "empty value for '" + key + "'");
        sections[current][key] = {value, line_no};
    }

    auto require = [&](const std::string &sec, const std::string &key) -> const KeyValue & {
        auto sit = sections.find(sec);
        if (sit == sections.end() || !sit->second.count(key))
            throw config_error("config: missing required key '" + key + "' in section [" + sec +
                               "]");
        return sit->second.at(key);
    };

    RunConfig cfg;
    require("grid", "nx");
    require("grid", "ny");
    require("grid", "lx");
    require("grid", "ly");
    const Section &grid = sections.at("grid");
    cfg.nx = static_cast<int>(as_int(grid, "nx"));
    cfg.ny = static_cast<int>(as_int(grid, "ny"));
    cfg.lx = as_double(grid, "lx");
    cfg.ly = as_double(grid, "ly");
    if (cfg.nx < 4 || cfg.ny < 4)
        fail(grid.at("nx").line, "grid counts must be >= 4");
    if (!(cfg.lx > 0) || !(cfg.ly > 0))
        fail(grid.at("lx").line, "domain lengths must be positive");

    require("physics", "mu");
    require("physics", "kappa");
    const Section &phys = sections.at("physics");
    cfg.params.mu = as_double(phys, "mu");
    cfg.params.kappa = as_double(phys, "kappa");
    const bool has_alpha = phys.count("alpha") > 0;
    const bool has_gamma = phys.count("gamma") > 0;
    if (has_alpha && has_gamma)
        fail(phys.at("gamma").line, "give exactly one of alpha or gamma, not both");
    if (!has_alpha && !has_gamma)
        throw config_error("config: missing required key 'alpha' (or 'gamma') in [physics]");
    if (has_alpha) {
        const double a = as_double(phys, "alpha");
        if (!(a > 0.0 && a < 1.0))
            fail(phys.at("alpha").line, "alpha = " + phys.at("alpha").value +
                                            " violates hypothesis (UU): 0 < alpha < 1 required");
        cfg.params.alpha = a;
    } else {
        const double gm = as_double(phys, "gamma");
        try {
            cfg.params.alpha = alpha_from_gamma(gm);
        } catch (const invalid_argument_error &e) {
            fail(phys.at("gamma").line, e.what());
        }
    }
    {
        const KeyValue &kv = require("physics", "g_spec");
        try {
            cfg.params.g_spec = FuncSpec::parse(kv.value);
            if (!cfg.params.g_spec.zero_mean())
                fail(kv.line, "g_spec must have zero mean (no constant term)");
        } catch (const config_error &) {
            throw;
        } catch (const std::exception &e) {
            fail(kv.line, e.what());
        }
    }
    {
        const KeyValue &kv = require("physics", "thetaB_spec");
        try {
            cfg.params.thetaB_spec = FuncSpec::parse(kv.value);
        } catch (const std::exception &e) {
            fail(kv.line, e.what());
        }
    }

    if (sections.count("numerics")) {
        const Section &num = sections.at("numerics");
        if (num.count("dt_cfl"))
            cfg.params.dt_cfl = as_double(num, "dt_cfl");
        if (num.count("dt_max"))
            cfg.params.dt_max = as_double(num, "dt_max");
        if (num.count("lin_tol"))
            cfg.params.lin_tol = as_double(num, "lin_tol");
        if (num.count("bc_coupling")) {
            const KeyValue &kv = num.at("bc_coupling");
            if (kv.value == "implicit")
                cfg.params.bc_coupling = BcCoupling::implicit;
            else if (kv.value == "lagged")
                cfg.params.bc_coupling = BcCoupling::lagged;
            else
                fail(kv.line, "bc_coupling must be 'implicit' or 'lagged'");
        }
        if (num.count("advection")) {
            const KeyValue &kv = num.at("advection");
            if (kv.value == "upwind")
                cfg.params.advection = AdvectionScheme::upwind;
            else if (kv.value == "limited")
                cfg.params.advection = AdvectionScheme::limited;
            else
                fail(kv.line, "advection must be 'upwind' or 'limited'");
        }
    }

    {
        const KeyValue &kv = require("run", "t_end");
        cfg.t_end = as_double(sections.at("run"), "t_end");
        if (!(cfg.t_end > 0))
            fail(kv.line, "t_end must be positive");
    }
    const Section &runsec = sections.at("run");
    if (runsec.count("output_every")) {
        cfg.output_every = as_double(runsec, "output_every");
        if (!(cfg.output_every > 0))
            fail(runsec.at("output_every").line, "output_every must be positive");
    }
    if (runsec.count("checkpoint_every")) {
        cfg.checkpoint_every = as_double(runsec, "checkpoint_every");
        if (cfg.checkpoint_every < 0)
            fail(runsec.at("checkpoint_every").line, "checkpoint_every must be >= 0");
    }
    if (runsec.count("seed"))
        cfg.params.seed = static_cast<std::uint64_t>(as_int(runsec, "seed"));
    if (runsec.count("out_dir"))
        cfg.out_dir = runsec.at("out_dir").value;

    if (sections.count("initial")) {
        const Section &init = sections.at("initial");
        if (init.count("theta0")) {
            const KeyValue &kv = init.at("theta0");
            try {
                cfg.theta0 = Theta0Spec::parse(kv.value);
            } catch (const std::exception &e) {
                fail(kv.line, e.what());
            }
        }
        if (init.count("u0")) {
            const KeyValue &kv = init.at("u0");
            try {
                cfg.u0 = U0Spec::parse(kv.value);
            } catch (const std::exception &e) {
                fail(kv.line, e.what());
            }
        }
    }

    try {
        cfg.params.validate();
    } catch (const std::exception &e) {
        throw config_error(std::string("config: ") + e.what());
    }
    return cfg;
}

RunConfig load_config(const std::string &path) {
    std::ifstream is(path);
    if (!is)
        throw config_error("cannot open config file " + path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config(buf.str());
}

} // namespace obrb
