#include "cbmspares/model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace cbmspares {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw std::invalid_argument(msg);
}

std::string join(const std::vector<int>& v) {
    std::ostringstream out;
    out << '(';
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k) out << ',';
        out << v[k];
    }
    out << ')';
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameter types
// ---------------------------------------------------------------------------

DegradationModel DegradationModel::uniform(int phases, double rate) {
    DegradationModel d;
    d.N = phases;
    d.mu.assign(static_cast<std::size_t>(phases) + 1, rate);
    d.alpha.assign(static_cast<std::size_t>(phases) + 1, 0.0);
    if (phases >= 1) d.alpha[1] = 1.0;
    return d;
}

void DegradationModel::validate() const {
    require(N >= 1, "degradation: N must be >= 1");
    require(mu.size() == static_cast<std::size_t>(N) + 1, "degradation: mu must have N+1 entries");
    require(alpha.size() == static_cast<std::size_t>(N) + 1, "degradation: alpha must have N+1 entries");
    for (std::size_t n = 0; n < mu.size(); ++n)
        require(std::isfinite(mu[n]) && mu[n] > 0.0, "degradation: mu[" + std::to_string(n) + "] must be > 0");
    require(alpha[0] == 0.0, "degradation: alpha[0] is unused and must be 0");
    require(alpha[1] == 1.0, "degradation: alpha[1] must equal 1");
    for (int n = 2; n <= N; ++n) {
        const double a = alpha[static_cast<std::size_t>(n)];
        require(a >= 0.0 && a < 1.0, "degradation: alpha[" + std::to_string(n) + "] must lie in [0,1)");
    }
}

double DegradationModel::max_rate() const { return *std::max_element(mu.begin(), mu.end()); }

void NetworkInstance::validate_shape() const {
    require(I >= 1, "instance: I must be >= 1");
    require(J >= 1, "instance: J must be >= 1");
    require(R.size() == static_cast<std::size_t>(I), "instance: R must have I rows");
    for (std::size_t i = 0; i < R.size(); ++i) {
        require(R[i].size() == static_cast<std::size_t>(J),
                "instance: R row " + std::to_string(i) + " must have J entries");
        for (std::size_t m = 0; m < R[i].size(); ++m)
            require(std::isfinite(R[i][m]) && R[i][m] >= 0.0,
                    "instance: R[" + std::to_string(i) + "][" + std::to_string(m) + "] must be finite and >= 0");
    }
    require(std::isfinite(t_star) && t_star > 0.0, "instance: t_star must be > 0");
    if (has_coordinates()) {
        require(warehouses.size() == static_cast<std::size_t>(I), "instance: expected I warehouse coordinates");
        require(machines.size() == static_cast<std::size_t>(J), "instance: expected J machine coordinates");
        for (std::size_t i = 0; i < warehouses.size(); ++i)
            for (std::size_t m = 0; m < machines.size(); ++m) {
                const double d = std::hypot(warehouses[i].x - machines[m].x, warehouses[i].y - machines[m].y);
                require(std::abs(d - R[i][m]) <= 1e-9 * std::max(1.0, d),
                        "instance: R[" + std::to_string(i) + "][" + std::to_string(m) +
                            "] disagrees with the coordinates");
            }
    }
}

void NetworkInstance::validate() const {
    validate_shape();
    for (int m = 0; m < J; ++m) {
        bool covered = false;
        for (int i = 0; i < I; ++i) covered = covered || R[i][m] <= t_star;
        require(covered, "instance: machine " + std::to_string(m + 1) + " has no warehouse within t_star");
    }
    for (int i = 0; i < I; ++i) {
        bool covers = false;
        for (int m = 0; m < J; ++m) covers = covers || R[i][m] <= t_star;
        require(covers, "instance: warehouse " + std::to_string(i + 1) + " has no machine within t_star");
    }
}

CostParams CostParams::setting(int which) {
    CostParams c;
    switch (which) {
        case 1:
            c = {.c_e = 10, .c_cs = 1, .c_ps = 0.2, .c_rs = 0.2, .c_r = 0, .c_cl = 1, .c_cp = 0.05};
            break;
        case 2:
            c = {.c_e = 100, .c_cs = 10, .c_ps = 0.2, .c_rs = 0.2, .c_r = 0, .c_cl = 1, .c_cp = 0.1};
            break;
        case 3:
            c = {.c_e = 10, .c_cs = 0, .c_ps = 0, .c_rs = 0, .c_r = 0, .c_cl = 1, .c_cp = 0};
            break;
        default:
            throw std::invalid_argument("cost setting must be 1, 2 or 3, got " + std::to_string(which));
    }
    return c;
}

void CostParams::validate() const {
    const double all[] = {c_e, c_cs, c_ps, c_rs, c_r, c_cl, c_cp};
    for (double v : all) require(std::isfinite(v) && v >= 0.0, "costs: every component must be finite and >= 0");
}

double CostParams::max_component() const {
    return std::max({c_e, c_cs, c_ps, c_rs, c_r, c_cl, c_cp});
}

void ModelParams::validate() const {
    instance.validate_shape();
    degradation.validate();
    costs.validate();
    require(K >= 0, "params: K must be >= 0");
    require(std::isfinite(gamma) && gamma > 0.0, "params: gamma must be > 0");
    require(lambda > 0.0 && lambda < 1.0, "params: lambda must lie in (0,1)");
}

// ---------------------------------------------------------------------------
// State and action helpers
// ---------------------------------------------------------------------------

int SystemState::aggregate_level() const {
    return std::accumulate(F.begin(), F.end(), 0) + std::accumulate(P.begin(), P.end(), 0);
}

std::string to_string(const SystemState& s) {
    return "F=" + join(s.F) + " P=" + join(s.P) + " C=" + join(s.C) + " j=" + std::to_string(s.j);
}

std::string to_string(const Action& a) {
    return "(" + std::to_string(a.x) + "," + std::to_string(a.y) + "," + std::to_string(a.z) + ")";
}

std::string_view to_string(PolicyClass cls) {
    switch (cls) {
        case PolicyClass::CF: return "CF";
        case PolicyClass::OC: return "OC";
        case PolicyClass::OCR: return "OCR";
        case PolicyClass::OCP: return "OCP";
        case PolicyClass::OCPR: return "OCPR";
    }
    return "?";
}

PolicyClass parse_policy_class(std::string_view name) {
    std::string upper(name);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    for (PolicyClass cls : kAllPolicyClasses)
        if (to_string(cls) == upper) return cls;
    throw std::invalid_argument("unknown policy class '" + std::string(name) + "' (expected cf, oc, ocr, ocp, ocpr)");
}

Epoch classify_epoch(const SystemState& state, int N) {
    if (state.j == 0) return Epoch::Replenishment;
    const int c = state.condition(state.j);
    if (c == 0) return Epoch::Failure;
    if (c == N) return Epoch::RepairCompletion;
    return Epoch::Degradation;
}

std::vector<int> stocked_warehouses(const SystemState& state) {
    std::vector<int> w;
    for (std::size_t i = 0; i < state.F.size(); ++i)
        if (state.F[i] > 0) w.push_back(static_cast<int>(i) + 1);
    return w;
}

std::vector<Action> type1_actions(const SystemState& state, int N) {
    if (state.j == 0) throw std::invalid_argument("type-1 actions are undefined at a replenishment epoch");
    if (state.condition(state.j) >= N)
        throw std::invalid_argument("type-1 actions are undefined when the machine is in perfect condition");

    const auto w = stocked_warehouses(state);
    std::vector<Action> out;
    out.push_back({kCentral, kNone, kNone});
    for (int x : w) {
        out.push_back({x, kNone, kNone});
        for (int y : w)
            if (y != x) out.push_back({x, y, x});
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Action> type2_actions(const SystemState& state) {
    const int I = static_cast<int>(state.F.size());
    std::vector<Action> out{kDoNothing};
    for (int y : stocked_warehouses(state))
        for (int z = 1; z <= I; ++z)
            if (z != y) out.push_back({kNone, y, z});
    std::sort(out.begin(), out.end());
    return out;
}

Action closest_first_action(const SystemState& state, const NetworkInstance& instance) {
    Action best{kCentral, kNone, kNone};
    double best_time = 0.0;
    for (int i : stocked_warehouses(state)) {
        const double t = instance.response_time(i, state.j);
        if (best.x == kCentral || t < best_time) {
            best.x = i;
            best_time = t;
        }
    }
    return best;
}

std::vector<Action> admissible_actions(const SystemState& state, PolicyClass cls, const ModelParams& params) {
    const Epoch epoch = classify_epoch(state, params.N());
    if (epoch == Epoch::Replenishment) return {kDoNothing};

    auto without_relocation = [](std::vector<Action> actions) {
        std::erase_if(actions, [](const Action& a) { return a.relocates(); });
        return actions;
    };
    auto merged = [](std::vector<Action> a, const std::vector<Action>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        a.erase(std::unique(a.begin(), a.end()), a.end());
        return a;
    };

    switch (cls) {
        case PolicyClass::CF:
            if (epoch == Epoch::Failure) return {closest_first_action(state, params.instance)};
            return {kDoNothing};
        case PolicyClass::OC:
            if (epoch == Epoch::Failure) return without_relocation(type1_actions(state, params.N()));
            return {kDoNothing};
        case PolicyClass::OCR:
            if (epoch == Epoch::Failure) return type1_actions(state, params.N());
            return type2_actions(state);
        case PolicyClass::OCP:
            if (epoch == Epoch::Failure) return without_relocation(type1_actions(state, params.N()));
            if (epoch == Epoch::Degradation)
                return merged(without_relocation(type1_actions(state, params.N())), {kDoNothing});
            return {kDoNothing};
        case PolicyClass::OCPR:
            if (epoch == Epoch::Failure) return type1_actions(state, params.N());
            if (epoch == Epoch::Degradation) return merged(type1_actions(state, params.N()), type2_actions(state));
            return type2_actions(state);
    }
    throw std::logic_error("admissible_actions: unknown policy class");
}

SystemState post_action_state(const SystemState& state, const Action& a, int N) {
    SystemState next = state;
    auto bump = [](std::vector<int>& v, int warehouse, int delta) {
        if (warehouse >= 1) v[static_cast<std::size_t>(warehouse - 1)] += delta;
    };

    if (a.y == kNone) bump(next.F, a.x, -1);
    bump(next.F, a.y, -1);
    if (a.x == kNone) bump(next.F, a.z, +1);
    bump(next.P, a.x, +1);

    for (int f : next.F)
        if (f < 0) throw std::logic_error("action " + to_string(a) + " is inadmissible in " + to_string(state));

    if (a.x >= kCentral && state.j >= 1 && state.condition(state.j) > 0)
        next.C[static_cast<std::size_t>(state.j - 1)] = N;
    return next;
}

double immediate_cost(const SystemState& state, const Action& a, const ModelParams& params) {
    const CostParams& c = params.costs;
    const double relocation = a.y > 0 ? c.c_rs : 0.0;
    if (a.x == kCentral) return c.c_e;
    if (a.x == kNone) return relocation;

    if (state.condition(state.j) == 0) {
        const double r = params.instance.response_time(a.x, state.j);
        const double t_star = params.instance.t_star;
        const double late = r > t_star ? c.c_cl + c.c_cp * (r - t_star) : 0.0;
        return c.c_cs + c.c_r + late + relocation;
    }
    return c.c_ps + c.c_r + relocation;
}

}  // namespace cbmspares
