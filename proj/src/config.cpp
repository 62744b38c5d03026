#include "rotenberg/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rotenberg/csv.hpp"
#include "rotenberg/densities.hpp"

namespace rotenberg {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

const json* member(const json& obj, const char* key) {
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        fail(path, "expected a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        fail(path, "must be finite");
    }
    return x;
}

std::uint64_t unsigned_int(const json& j, const std::string& path) {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<long long>() >= 0)) {
        fail(path, "expected a nonnegative integer");
    }
    return j.get<std::uint64_t>();
}

std::string string(const json& j, const std::string& path) {
    if (!j.is_string()) {
        fail(path, "expected a string");
    }
    return j.get<std::string>();
}

const json& object(const json& root, const char* key, const std::string& path) {
    const json* j = member(root, key);
    if (!j) {
        fail(path, "missing");
    }
    if (!j->is_object()) {
        fail(path, "expected an object");
    }
    return *j;
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
        fail(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

InitialSpec parse_initial(const json& j, const std::string& path, const std::filesystem::path& base) {
    if (!j.is_object()) {
        fail(path, "expected an object");
    }
    InitialSpec s;
    if (const json* t = member(j, "type")) {
        s.type = string(*t, path + ".type");
    }
    if (s.type == "uniform" || s.type == "linear-x") {
        return s;
    }
    if (s.type == "bump") {
        const json* c = member(j, "center");
        if (!c || !c->is_array() || c->size() != 2) {
            fail(path + ".center", "expected [x, v]");
        }
        s.center_x = number((*c)[0], path + ".center[0]");
        s.center_v = number((*c)[1], path + ".center[1]");
        if (const json* w = member(j, "width")) {
            s.width = number(*w, path + ".width");
        }
        if (!(s.width > 0.0)) {
            fail(path + ".width", "must be positive");
        }
        return s;
    }
    if (s.type == "csv") {
        const json* p = member(j, "path");
        if (!p) {
            fail(path + ".path", "missing");
        }
        s.path = resolve(base, string(*p, path + ".path"));
        if (!std::filesystem::exists(s.path)) {
            fail(path + ".path", "file not found: " + s.path.string());
        }
        return s;
    }
    if (s.type == "random") {
        if (const json* seed = member(j, "seed")) {
            s.seed = unsigned_int(*seed, path + ".seed");
        }
        if (const json* shape = member(j, "shape")) {
            s.shape = string(*shape, path + ".shape");
            if (s.shape != "smooth" && s.shape != "step") {
                fail(path + ".shape", "expected 'smooth' or 'step'");
            }
        }
        return s;
    }
    fail(path + ".type", "unknown initial density '" + s.type + "'");
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text, const std::filesystem::path& base_dir) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object()) {
        fail("config", "expected a JSON object");
    }
    ExperimentConfig c;
    c.canonical = root.dump();

    const json& params = object(root, "params", "params");
    for (const char* key : {"a", "b", "p", "q"}) {
        if (!member(params, key)) {
            fail(std::string("params.") + key, "missing");
        }
    }
    c.params.a = number(params["a"], "params.a");
    c.params.b = number(params["b"], "params.b");
    c.params.p = number(params["p"], "params.p");
    c.params.q = number(params["q"], "params.q");
    c.params.validate();

    const json& velocity = object(root, "velocity", "velocity");
    const std::string vtype = member(velocity, "type") ? string(velocity["type"], "velocity.type") : "continuous";
    if (vtype == "continuous") {
        c.continuous = true;
        if (const json* n = member(velocity, "n")) {
            c.nv = unsigned_int(*n, "velocity.n");
        }
        if (c.nv == 0) {
            fail("velocity.n", "must be positive");
        }
    } else if (vtype == "discrete") {
        c.continuous = false;
        const json* nodes = member(velocity, "nodes");
        const json* masses = member(velocity, "masses");
        if (!nodes) {
            fail("velocity.nodes", "missing");
        }
        if (!masses) {
            fail("velocity.masses", "missing");
        }
        c.nodes = numbers(*nodes, "velocity.nodes");
        c.masses = numbers(*masses, "velocity.masses");
    } else {
        fail("velocity.type", "expected 'continuous' or 'discrete'");
    }

    const json& kernel = object(root, "kernel", "kernel");
    if (const json* name = member(kernel, "builtin")) {
        const auto kind = builtin_kernel_from_string(string(*name, "kernel.builtin"));
        if (!kind) {
            fail("kernel.builtin", "unknown kernel '" + name->get<std::string>() + "'");
        }
        c.builtin = kind;
    } else if (const json* csv = member(kernel, "csv")) {
        c.kernel_csv = resolve(base_dir, string(*csv, "kernel.csv"));
        if (!std::filesystem::exists(c.kernel_csv)) {
            fail("kernel.csv", "file not found: " + c.kernel_csv.string());
        }
    } else {
        fail("kernel", "expected 'builtin' or 'csv'");
    }

    if (const json* grid = member(root, "grid")) {
        if (const json* nx = member(*grid, "nx")) {
            c.nx = unsigned_int(*nx, "grid.nx");
        }
    }
    if (c.nx == 0) {
        fail("grid.nx", "must be positive");
    }

    if (const json* init = member(root, "initial")) {
        c.initials.push_back(parse_initial(*init, "initial", base_dir));
    }
    if (const json* inits = member(root, "initials")) {
        if (!inits->is_array()) {
            fail("initials", "expected an array");
        }
        for (std::size_t i = 0; i < inits->size(); ++i) {
            c.initials.push_back(parse_initial((*inits)[i], "initials[" + std::to_string(i) + "]", base_dir));
        }
    }
    if (c.initials.empty()) {
        c.initials.emplace_back();
    }

    if (const json* times = member(root, "times")) {
        c.times = numbers(*times, "times");
    } else {
        c.times = {0.0};
    }
    for (std::size_t i = 0; i < c.times.size(); ++i) {
        if (c.times[i] < 0.0) {
            fail("times[" + std::to_string(i) + "]", "must be nonnegative");
        }
        if (i > 0 && c.times[i] < c.times[i - 1]) {
            fail("times[" + std::to_string(i) + "]", "times must be ascending");
        }
    }
    if (c.times.empty()) {
        fail("times", "must not be empty");
    }

    if (const json* opts = member(root, "options")) {
        if (!opts->is_object()) {
            fail("options", "expected an object");
        }
        if (const json* x = member(*opts, "omega")) c.options.omega = number(*x, "options.omega");
        if (const json* x = member(*opts, "j_max")) c.options.j_max = unsigned_int(*x, "options.j_max");
        if (const json* x = member(*opts, "t_max")) c.options.t_max = number(*x, "options.t_max");
        if (const json* x = member(*opts, "vepsilon_n")) {
            c.options.vepsilon_n = static_cast<int>(unsigned_int(*x, "options.vepsilon_n"));
        }
        if (const json* x = member(*opts, "starts")) c.options.starts = unsigned_int(*x, "options.starts");
    }

    if (const json* tol = member(root, "tolerances")) {
        if (!tol->is_object()) {
            fail("tolerances", "expected an object");
        }
        auto& t = c.tolerances;
        if (const json* x = member(*tol, "kernel")) t.kernel = number(*x, "tolerances.kernel");
        if (const json* x = member(*tol, "power")) t.power = number(*x, "tolerances.power");
        if (const json* x = member(*tol, "max_iter")) t.max_iter = unsigned_int(*x, "tolerances.max_iter");
        if (const json* x = member(*tol, "agreement")) t.agreement = number(*x, "tolerances.agreement");
        if (const json* x = member(*tol, "norm")) t.norm = number(*x, "tolerances.norm");
        if (const json* x = member(*tol, "extension")) t.extension = number(*x, "tolerances.extension");
        if (const json* x = member(*tol, "invariance")) t.invariance = number(*x, "tolerances.invariance");
        if (const json* x = member(*tol, "partial_integrality")) {
            t.partial_integrality = number(*x, "tolerances.partial_integrality");
        }
    }

    if (const json* out = member(root, "output_dir")) {
        c.output_dir = resolve(base_dir, string(*out, "output_dir"));
    } else {
        c.output_dir = base_dir / "out";
    }
    if (const json* seed = member(root, "seed")) {
        c.seed = unsigned_int(*seed, "seed");
    }
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("config: cannot open " + path.string());
    }
    std::stringstream buf;
    buf << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty()) {
        base = ".";
    }
    return parse_config(buf.str(), base);
}

Model ExperimentConfig::build_model() const {
    VelocitySpace vs = continuous ? VelocitySpace::uniform(params.a, params.b, nv)
                                  : VelocitySpace::discrete(params.a, params.b, nodes, masses);
    Kernel k = builtin ? Kernel::builtin(*builtin, params.a, params.b) : Kernel::load_csv(kernel_csv);
    return Model(params, std::move(vs), std::move(k));
}

DensityField ExperimentConfig::build_initial(const InitialSpec& spec, const Model& model) const {
    const auto vs = model.velocities_ptr();
    if (spec.type == "uniform") return uniform_density(nx, vs);
    if (spec.type == "linear-x") return linear_x_density(nx, vs);
    if (spec.type == "bump") return bump_density(nx, vs, spec.center_x, spec.center_v, spec.width);
    if (spec.type == "csv") return load_density_csv(spec.path, nx, vs);
    if (spec.type == "random") {
        const std::uint64_t s = spec.seed.value_or(seed);
        return spec.shape == "step" ? random_step_density(nx, vs, s) : random_smooth_density(nx, vs, s);
    }
    throw ValidationError("initial.type: unknown initial density '" + spec.type + "'");
}

std::uint64_t ExperimentConfig::hash() const {
    return fnv1a64(canonical + "|seed=" + std::to_string(seed));
}

std::string ExperimentConfig::stamp() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
    return std::string("config_hash=") + buf + " seed=" + std::to_string(seed);
}

}  // namespace rotenberg
