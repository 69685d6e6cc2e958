#include "cbmspares/serialization.hpp"

#include <fstream>
#include <sstream>

namespace cbmspares {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw FormatError((where.empty() ? std::string("/") : where) + ": " + what);
}

const json& field(const json& j, const std::string& where, const char* key) {
    if (!j.is_object()) fail(where, "expected an object");
    const auto it = j.find(key);
    if (it == j.end()) fail(where, std::string("missing field \"") + key + "\"");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::int64_t integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<std::int64_t>();
}

double number_field(const json& j, const std::string& where, const char* key) {
    return number(field(j, where, key), where + "/" + key);
}

int int_field(const json& j, const std::string& where, const char* key) {
    return static_cast<int>(integer(field(j, where, key), where + "/" + key));
}

const json& array_field(const json& j, const std::string& where, const char* key) {
    const json& a = field(j, where, key);
    if (!a.is_array()) fail(where + "/" + key, "expected an array");
    return a;
}

std::vector<double> doubles(const json& a, const std::string& where) {
    if (!a.is_array()) fail(where, "expected an array");
    std::vector<double> out;
    for (std::size_t k = 0; k < a.size(); ++k) out.push_back(number(a[k], where + "/" + std::to_string(k)));
    return out;
}

std::vector<int> ints(const json& a, const std::string& where) {
    if (!a.is_array()) fail(where, "expected an array");
    std::vector<int> out;
    for (std::size_t k = 0; k < a.size(); ++k)
        out.push_back(static_cast<int>(integer(a[k], where + "/" + std::to_string(k))));
    return out;
}

std::vector<Point> points(const json& a, const std::string& where) {
    std::vector<Point> out;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const std::string at = where + "/" + std::to_string(k);
        out.push_back({number_field(a[k], at, "x"), number_field(a[k], at, "y")});
    }
    return out;
}

json points_json(const std::vector<Point>& ps) {
    json a = json::array();
    for (const Point& p : ps) a.push_back({{"x", p.x}, {"y", p.y}});
    return a;
}

/// Runs a validator and re-throws its complaint as a FormatError at `where`.
template <class Fn>
void checked(const std::string& where, Fn&& fn) {
    try {
        fn();
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

}  // namespace

json instance_to_json(const NetworkInstance& inst) {
    return {{"seed", inst.seed},
            {"I", inst.I},
            {"J", inst.J},
            {"t_star", inst.t_star},
            {"square_side", inst.square_side},
            {"warehouses", points_json(inst.warehouses)},
            {"machines", points_json(inst.machines)},
            {"R", inst.R}};
}

NetworkInstance instance_from_json(const json& j) {
    NetworkInstance inst;
    if (j.contains("seed")) {
        const json& s = j["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0))
            fail("/seed", "expected a nonnegative integer");
        inst.seed = s.get<std::uint64_t>();
    }
    inst.I = int_field(j, "", "I");
    inst.J = int_field(j, "", "J");
    if (j.contains("t_star")) inst.t_star = number_field(j, "", "t_star");
    if (j.contains("square_side")) inst.square_side = number_field(j, "", "square_side");
    if (j.contains("warehouses")) inst.warehouses = points(array_field(j, "", "warehouses"), "/warehouses");
    if (j.contains("machines")) inst.machines = points(array_field(j, "", "machines"), "/machines");
    const json& R = array_field(j, "", "R");
    for (std::size_t i = 0; i < R.size(); ++i) inst.R.push_back(doubles(R[i], "/R/" + std::to_string(i)));
    checked("", [&] { inst.validate_shape(); });
    return inst;
}

json params_to_json(const ModelParams& p) {
    const CostParams& c = p.costs;
    return {{"instance", instance_to_json(p.instance)},
            {"N", p.degradation.N},
            {"mu", p.degradation.mu},
            {"alpha", p.degradation.alpha},
            {"K", p.K},
            {"gamma", p.gamma},
            {"lambda", p.lambda},
            {"costs",
             {{"c_e", c.c_e},
              {"c_cs", c.c_cs},
              {"c_ps", c.c_ps},
              {"c_rs", c.c_rs},
              {"c_r", c.c_r},
              {"c_cl", c.c_cl},
              {"c_cp", c.c_cp}}}};
}

ModelParams params_from_json(const json& j) {
    ModelParams p;
    const json& inst = field(j, "", "instance");
    try {
        p.instance = instance_from_json(inst);
    } catch (const FormatError& e) {
        throw FormatError(std::string("/instance") + e.what());
    }
    p.degradation.N = int_field(j, "", "N");
    p.degradation.mu = doubles(field(j, "", "mu"), "/mu");
    p.degradation.alpha = doubles(field(j, "", "alpha"), "/alpha");
    p.K = int_field(j, "", "K");
    p.gamma = number_field(j, "", "gamma");
    p.lambda = number_field(j, "", "lambda");
    const json& c = field(j, "", "costs");
    p.costs.c_e = number_field(c, "/costs", "c_e");
    p.costs.c_cs = number_field(c, "/costs", "c_cs");
    p.costs.c_ps = number_field(c, "/costs", "c_ps");
    p.costs.c_rs = number_field(c, "/costs", "c_rs");
    p.costs.c_r = number_field(c, "/costs", "c_r");
    p.costs.c_cl = number_field(c, "/costs", "c_cl");
    p.costs.c_cp = number_field(c, "/costs", "c_cp");
    checked("", [&] { p.validate(); });
    return p;
}

json action_to_json(const Action& a) { return json::array({a.x, a.y, a.z}); }

json solution_to_json(const PolicySolution& sol, const ModelParams& params, const StateSpace& space,
                      std::optional<double> delta_pct) {
    json states = json::array();
    for (std::size_t s = 0; s < space.size(); ++s) {
        const SystemState x = space.state_of(s);
        states.push_back({{"index", s},
                          {"F", x.F},
                          {"P", x.P},
                          {"C", x.C},
                          {"j", x.j},
                          {"action", action_to_json(sol.policy[s])},
                          {"V", sol.V[s]},
                          {"pi", sol.pi[s]}});
    }
    json out = {{"policy_class", std::string(to_string(sol.cls))},
                {"params", params_to_json(params)},
                {"upsilon", sol.upsilon},
                {"delta_pct", delta_pct ? json(*delta_pct) : json(nullptr)},
                {"iterations", sol.iterations},
                {"converged", sol.converged},
                {"bellman_residual", sol.bellman_residual},
                {"stationary_method", std::string(to_string(sol.stationary_method))},
                {"stationary_residual", sol.stationary_residual},
                {"n_states", space.size()},
                {"states", std::move(states)}};
    return out;
}

LoadedSolution solution_from_json(const json& j) {
    LoadedSolution out;
    const json& cls = field(j, "", "policy_class");
    if (!cls.is_string()) fail("/policy_class", "expected a string");
    try {
        out.cls = parse_policy_class(cls.get<std::string>());
    } catch (const std::invalid_argument& e) {
        fail("/policy_class", e.what());
    }
    try {
        out.params = params_from_json(field(j, "", "params"));
    } catch (const FormatError& e) {
        throw FormatError(std::string("/params") + e.what());
    }
    out.upsilon = number_field(j, "", "upsilon");

    const StateSpace space(out.params);
    const json& states = array_field(j, "", "states");
    if (states.size() != space.size())
        fail("/states", "expected " + std::to_string(space.size()) + " states, found " + std::to_string(states.size()));
    for (std::size_t s = 0; s < states.size(); ++s) {
        const std::string at = "/states/" + std::to_string(s);
        SystemState x{ints(field(states[s], at, "F"), at + "/F"), ints(field(states[s], at, "P"), at + "/P"),
                      ints(field(states[s], at, "C"), at + "/C"), int_field(states[s], at, "j")};
        if (!(space.find(x) == std::optional<std::size_t>(s))) fail(at, "state does not match the enumeration order");
        const std::vector<int> a = ints(field(states[s], at, "action"), at + "/action");
        if (a.size() != 3) fail(at + "/action", "expected three integers");
        out.policy.push_back({a[0], a[1], a[2]});
        out.V.push_back(number_field(states[s], at, "V"));
    }
    return out;
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    std::stringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        // e.what() already carries "at line L, column C"
        throw FormatError(path.string() + ": " + e.what());
    }
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

}  // namespace cbmspares
