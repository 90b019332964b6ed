#include "sawtrap/app/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "sawtrap/errors.hpp"

namespace sawtrap::app {

namespace {

const std::pair<Command, const char*> command_names[] = {
    {Command::scales, "scales"},   {Command::stability, "stability"},     {Command::trajectory, "trajectory"},
    {Command::qme, "qme"},         {Command::hubbard, "hubbard"},         {Command::feasibility, "feasibility"},
    {Command::case_study, "case-study"}, {Command::plot, "plot"},
};

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ValidationError(path + ": " + msg); }

// Field reader over one JSON object; `done()` rejects keys nobody asked for.
class Obj {
public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) fail(path_.empty() ? "config" : path_, "expected an object");
    }

    const json* find(const std::string& key) {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    std::string at(const std::string& key) const { return join(path_, key); }

    void num(const std::string& key, double& out) {
        if (const json* v = find(key)) out = as_num(*v, at(key));
    }
    void opt_num(const std::string& key, std::optional<double>& out) {
        if (const json* v = find(key)) out = v->is_null() ? std::nullopt : std::optional<double>(as_num(*v, at(key)));
    }
    void integer(const std::string& key, int& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_integer()) fail(at(key), "expected an integer");
            out = v->get<int>();
        }
    }
    void u64(const std::string& key, std::uint64_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
                fail(at(key), "expected a non-negative integer");
            out = v->get<std::uint64_t>();
        }
    }
    void str(const std::string& key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) fail(at(key), "expected a string");
            out = v->get<std::string>();
        }
    }
    void boolean(const std::string& key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) fail(at(key), "expected true or false");
            out = v->get<bool>();
        }
    }
    void numbers(const std::string& key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) fail(at(key), "expected an array of numbers");
            out.clear();
            for (std::size_t i = 0; i < v->size(); ++i) out.push_back(as_num((*v)[i], at(key) + "[" + std::to_string(i) + "]"));
        }
    }
    template <class F>
    void object(const std::string& key, F&& f) {
        if (const json* v = find(key)) {
            Obj sub(*v, at(key));
            f(sub);
            sub.done();
        }
    }

    void done() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) fail(at(it.key()), "unknown field");
    }

    static double as_num(const json& v, const std::string& path) {
        if (!v.is_number()) fail(path, "expected a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) fail(path, "must be finite");
        return x;
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json grid_to_json(const GridSpec& g) {
    if (g.start || g.stop || g.count) return {{"start", opt(g.start)}, {"stop", opt(g.stop)}, {"count", g.count ? json(*g.count) : json(nullptr)}};
    return {{"values", g.values}};
}

void read_grid(Obj& o, const std::string& key, GridSpec& g) {
    o.object(key, [&](Obj& s) {
        GridSpec out;
        s.numbers("values", out.values);
        s.opt_num("start", out.start);
        s.opt_num("stop", out.stop);
        if (const json* v = s.find("count")) {
            if (!v->is_null()) {
                if (!v->is_number_integer()) fail(s.at("count"), "expected an integer");
                out.count = v->get<int>();
            }
        }
        g = out;
    });
}

}  // namespace

std::string to_string(Command c) {
    for (const auto& [k, name] : command_names)
        if (k == c) return name;
    return "?";
}

Command parse_command(const std::string& name) {
    for (const auto& [k, n] : command_names)
        if (name == n) return k;
    throw ValidationError("command: unknown command '" + name + "'");
}

std::vector<double> GridSpec::resolve(const std::string& path) const {
    const bool lin = start || stop || count;
    if (lin && !values.empty()) fail(path, "give either values or start/stop/count, not both");
    std::vector<double> out;
    if (lin) {
        if (!start || !stop || !count) fail(path, "start, stop and count are all required");
        if (*count < 1) fail(path + ".count", "must be >= 1");
        if (*count == 1) {
            if (*start != *stop) fail(path, "count 1 needs start == stop");
            out.push_back(*start);
        } else {
            for (int i = 0; i < *count; ++i) out.push_back(*start + (*stop - *start) * i / (*count - 1));
            out.back() = *stop;
        }
    } else {
        out = values;
    }
    if (out.empty()) fail(path, "grid is empty");
    for (std::size_t i = 1; i < out.size(); ++i)
        if (!(out[i] > out[i - 1])) fail(path, "grid must be strictly increasing");
    return out;
}

RunConfig config_from_json(const json& j) {
    RunConfig c;
    Obj root(j, "");
    std::string cmd = to_string(c.command);
    root.str("command", cmd);
    c.command = parse_command(cmd);
    root.str("catalog", c.catalog);
    root.integer("order", c.order);
    if (c.order != 2 && c.order != 4) fail("order", "must be 2 or 4");
    root.u64("seed", c.seed);

    root.object("material", [&](Obj& o) {
        o.str("preset", c.material.preset);
        o.opt_num("sound_speed", c.material.sound_speed);
        o.opt_num("mass_m0", c.material.mass_m0);
        o.opt_num("eps_r", c.material.eps_r);
        o.opt_num("sound_energy", c.material.sound_energy);
    });
    root.object("drive", [&](Obj& o) {
        o.num("frequency_ghz", c.drive.frequency_ghz);
        o.num("q", c.drive.stability_q);
        o.num("dc_a", c.drive.dc_a);
        if (const json* h = o.find("harmonics")) {
            if (!h->is_array()) fail(o.at("harmonics"), "expected [[multiplier, weight], ...]");
            c.drive.harmonics.clear();
            for (std::size_t i = 0; i < h->size(); ++i) {
                const auto& e = (*h)[i];
                const std::string p = o.at("harmonics") + "[" + std::to_string(i) + "]";
                if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer()) fail(p, "expected [integer multiplier, weight]");
                c.drive.harmonics.push_back({e[0].get<int>(), Obj::as_num(e[1], p + "[1]")});
            }
        }
    });
    root.object("bath", [&](Obj& o) {
        o.num("gamma_over_omega0", c.bath.gamma_over_omega0);
        o.opt_num("zeta", c.bath.zeta);
        o.num("kT_over_hbar_omega0", c.bath.kT_over_hbar_omega0);
        o.opt_num("temperature_K", c.bath.temperature_K);
    });
    root.object("stability", [&](Obj& o) {
        read_grid(o, "q", c.stability.q);
        read_grid(o, "theta", c.stability.theta);
        o.num("tau_max", c.stability.tau_max);
        o.integer("samples_per_cell", c.stability.samples_per_cell);
        o.str("criterion", c.stability.criterion);
        o.opt_num("mfp_limit", c.stability.mfp_limit);
        o.num("probe_displacement", c.stability.probe_displacement);
        o.boolean("parallel", c.stability.parallel);
    });
    root.object("trajectory", [&](Obj& o) {
        o.num("x0", c.trajectory.x0);
        o.num("v0", c.trajectory.v0);
        o.num("tau_max", c.trajectory.tau_max);
        o.num("stride", c.trajectory.stride);
    });
    root.object("qme", [&](Obj& o) {
        o.num("x_scaled", c.qme.x_scaled);
        o.num("p_scaled", c.qme.p_scaled);
        o.num("nbar", c.qme.nbar);
        o.num("secular_periods", c.qme.secular_periods);
        o.integer("samples_per_period", c.qme.samples_per_period);
        o.boolean("fock", c.qme.fock);
        o.integer("fock_n_max", c.qme.fock_n_max);
    });
    root.object("hubbard", [&](Obj& o) { o.opt_num("d_screen", c.hubbard.d_screen); });
    root.object("feasibility", [&](Obj& o) {
        auto& f = c.feasibility;
        o.num("T2_star", f.T2_star);
        o.num("eps_ad", f.eps_ad);
        o.num("Q", f.Q);
        o.num("V0_phonon", f.V0_phonon);
        o.num("P_cool", f.P_cool);
        o.num("threshold", f.threshold);
        o.num("v_idt_max", f.v_idt_max);
        o.num("spin_min", f.spin_min);
    });
    root.object("case_study", [&](Obj& o) {
        auto& s = c.case_study;
        o.num("E_S", s.E_S);
        o.num("frequency_ghz", s.frequency_ghz);
        o.num("sound_speed", s.sound_speed);
        o.num("eps_r", s.eps_r);
        o.numbers("q_values", s.q_values);
        o.numbers("d_values", s.d_values);
    });
    root.object("plot", [&](Obj& o) {
        o.str("dataset", c.plot.dataset);
        o.str("kind", c.plot.kind);
        o.str("overlay", c.plot.overlay);
        o.str("output", c.plot.output);
    });
    root.object("output", [&](Obj& o) {
        o.str("dir", c.output.dir);
        o.str("prefix", c.output.prefix);
    });
    root.done();
    return c;
}

json config_to_json(const RunConfig& c) {
    json harmonics = json::array();
    for (const auto& h : c.drive.harmonics) harmonics.push_back({h.multiplier, h.weight});
    const auto& f = c.feasibility;
    const auto& s = c.case_study;
    return {
        {"command", to_string(c.command)},
        {"catalog", c.catalog},
        {"order", c.order},
        {"seed", c.seed},
        {"material",
         {{"preset", c.material.preset},
          {"sound_speed", opt(c.material.sound_speed)},
          {"mass_m0", opt(c.material.mass_m0)},
          {"eps_r", opt(c.material.eps_r)},
          {"sound_energy", opt(c.material.sound_energy)}}},
        {"drive",
         {{"frequency_ghz", c.drive.frequency_ghz},
          {"q", c.drive.stability_q},
          {"dc_a", c.drive.dc_a},
          {"harmonics", harmonics}}},
        {"bath",
         {{"gamma_over_omega0", c.bath.gamma_over_omega0},
          {"zeta", opt(c.bath.zeta)},
          {"kT_over_hbar_omega0", c.bath.kT_over_hbar_omega0},
          {"temperature_K", opt(c.bath.temperature_K)}}},
        {"stability",
         {{"q", grid_to_json(c.stability.q)},
          {"theta", grid_to_json(c.stability.theta)},
          {"tau_max", c.stability.tau_max},
          {"samples_per_cell", c.stability.samples_per_cell},
          {"criterion", c.stability.criterion},
          {"mfp_limit", opt(c.stability.mfp_limit)},
          {"probe_displacement", c.stability.probe_displacement},
          {"parallel", c.stability.parallel}}},
        {"trajectory",
         {{"x0", c.trajectory.x0}, {"v0", c.trajectory.v0}, {"tau_max", c.trajectory.tau_max}, {"stride", c.trajectory.stride}}},
        {"qme",
         {{"x_scaled", c.qme.x_scaled},
          {"p_scaled", c.qme.p_scaled},
          {"nbar", c.qme.nbar},
          {"secular_periods", c.qme.secular_periods},
          {"samples_per_period", c.qme.samples_per_period},
          {"fock", c.qme.fock},
          {"fock_n_max", c.qme.fock_n_max}}},
        {"hubbard", {{"d_screen", opt(c.hubbard.d_screen)}}},
        {"feasibility",
         {{"T2_star", f.T2_star},
          {"eps_ad", f.eps_ad},
          {"Q", f.Q},
          {"V0_phonon", f.V0_phonon},
          {"P_cool", f.P_cool},
          {"threshold", f.threshold},
          {"v_idt_max", f.v_idt_max},
          {"spin_min", f.spin_min}}},
        {"case_study",
         {{"E_S", s.E_S},
          {"frequency_ghz", s.frequency_ghz},
          {"sound_speed", s.sound_speed},
          {"eps_r", s.eps_r},
          {"q_values", s.q_values},
          {"d_values", s.d_values}}},
        {"plot", {{"dataset", c.plot.dataset}, {"kind", c.plot.kind}, {"overlay", c.plot.overlay}, {"output", c.plot.output}}},
        {"output", {{"dir", c.output.dir}, {"prefix", c.output.prefix}}},
    };
}

void apply_override(json& doc, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--set: expected path=value, got '" + assignment + "'");
    const std::string path = assignment.substr(0, eq);
    const std::string text = assignment.substr(eq + 1);
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::stringstream ss(path);
    std::string key, walked;
    std::vector<std::string> keys;
    while (std::getline(ss, key, '.')) keys.push_back(key);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i].empty()) throw ValidationError("--set: empty component in '" + path + "'");
        walked = join(walked, keys[i]);
        if (!node->is_object()) throw ValidationError(walked + ": cannot descend into a non-object");
        if (i + 1 == keys.size()) {
            (*node)[keys[i]] = value;
        } else {
            if (!node->contains(keys[i])) (*node)[keys[i]] = json::object();
            node = &(*node)[keys[i]];
        }
    }
}

RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides, Command command) {
    RunConfig base;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ValidationError("config: cannot open '" + path + "'");
        json file = json::parse(in, nullptr, false);
        if (file.is_discarded()) throw ValidationError("config: '" + path + "' is not valid JSON");
        if (!file.is_object()) throw ValidationError("config: top level must be an object");
        file["command"] = to_string(command);
        base = config_from_json(file);
    }
    json doc = config_to_json(base);
    for (const auto& o : overrides) apply_override(doc, o);
    doc["command"] = to_string(command);  // the subcommand wins
    return config_from_json(doc);
}

std::uint64_t config_hash(const RunConfig& c) {
    const std::string s = config_to_json(c).dump();
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace sawtrap::app
