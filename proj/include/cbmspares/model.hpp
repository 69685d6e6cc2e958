#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cbmspares {

/// Sentinel used in an Action for "no dispatch" / "no relocation".
inline constexpr int kNone = -1;
/// Warehouse index of the central warehouse (ample capacity, no response-time row).
inline constexpr int kCentral = 0;

/**
 * Cox-type degradation law of a single-component machine.
 *
 * Condition N is perfect, condition 0 is failed. A machine in condition n >= 1
 * stays there for an exponential time with rate mu[n], then fails with
 * probability alpha[n] or degrades to n-1 otherwise. mu[0] is the rate of the
 * corrective downtime (travel plus repair) after a failure.
 */
struct DegradationModel {
    int N = 1;
    std::vector<double> mu;     // size N+1
    std::vector<double> alpha;  // size N+1, alpha[0] unused and kept at 0

    /// mu_n = rate for every n, alpha_1 = 1 and alpha_n = 0 for n >= 2.
    static DegradationModel uniform(int phases, double rate = 1.0);

    /// Throws std::invalid_argument when the law is malformed.
    void validate() const;

    double max_rate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const Point&, const Point&) = default;
};

/**
 * Geometry of a service network: I local warehouses and J machines.
 *
 * R is stored 0-based (R[i-1][j-1] is the response time from local warehouse i
 * to machine j). The central warehouse (index 0) has no row.
 */
struct NetworkInstance {
    int I = 0;
    int J = 0;
    std::vector<std::vector<double>> R;
    std::vector<Point> warehouses;  // empty when R was given directly
    std::vector<Point> machines;
    double t_star = 10.0;
    double square_side = 33.0;
    std::uint64_t seed = 0;

    /// Response time with 1-based warehouse and machine indices.
    double response_time(int warehouse, int machine) const {
        return R[static_cast<std::size_t>(warehouse - 1)][static_cast<std::size_t>(machine - 1)];
    }

    bool has_coordinates() const { return !warehouses.empty(); }

    /// Shape, sign and coverage checks; coordinates (if any) must reproduce R.
    void validate() const;

    /// Same as validate() without the t* coverage requirement.
    void validate_shape() const;
};

struct CostParams {
    double c_e = 0.0;   // dispatch from the central warehouse
    double c_cs = 0.0;  // corrective setup
    double c_ps = 0.0;  // preventive setup
    double c_rs = 0.0;  // relocation setup
    double c_r = 0.0;   // replenishment setup
    double c_cl = 0.0;  // late-response fixed penalty
    double c_cp = 0.0;  // late-response penalty per time unit over t*

    /// The three cost settings used in the experiments (1, 2 or 3).
    static CostParams setting(int which);

    void validate() const;
    double max_component() const;
};

struct ModelParams {
    NetworkInstance instance;
    DegradationModel degradation;
    int K = 0;
    double gamma = 1.0;
    double lambda = 0.95;
    CostParams costs;

    int I() const { return instance.I; }
    int J() const { return instance.J; }
    int N() const { return degradation.N; }

    void validate() const;
};

/**
 * Decision-epoch state (F, P, C, j).
 *
 * F[i-1], P[i-1] belong to local warehouse i; C[m-1] is the condition of
 * machine m; j is the machine whose event triggered the epoch, 0 for a
 * replenishment arrival.
 */
struct SystemState {
    std::vector<int> F;
    std::vector<int> P;
    std::vector<int> C;
    int j = 0;

    int stock(int warehouse) const { return F[static_cast<std::size_t>(warehouse - 1)]; }
    int pipeline(int warehouse) const { return P[static_cast<std::size_t>(warehouse - 1)]; }
    int condition(int machine) const { return C[static_cast<std::size_t>(machine - 1)]; }

    int aggregate_level() const;

    friend bool operator==(const SystemState&, const SystemState&) = default;
    friend auto operator<=>(const SystemState&, const SystemState&) = default;
};

std::string to_string(const SystemState& s);

/// Action (x, y, z): dispatch origin, relocation origin, relocation destination.
struct Action {
    int x = kNone;
    int y = kNone;
    int z = kNone;

    bool dispatches() const { return x != kNone; }
    bool relocates() const { return y != kNone; }

    friend bool operator==(const Action&, const Action&) = default;
    friend auto operator<=>(const Action&, const Action&) = default;
};

inline constexpr Action kDoNothing{kNone, kNone, kNone};

std::string to_string(const Action& a);

enum class PolicyClass { CF, OC, OCR, OCP, OCPR };

inline constexpr PolicyClass kAllPolicyClasses[] = {PolicyClass::CF, PolicyClass::OC, PolicyClass::OCR,
                                                    PolicyClass::OCP, PolicyClass::OCPR};

std::string_view to_string(PolicyClass cls);
/// Case-insensitive; throws std::invalid_argument on an unknown name.
PolicyClass parse_policy_class(std::string_view name);

/// What kind of event opened a decision epoch.
enum class Epoch {
    Replenishment,     // j = 0
    Failure,           // C[j] = 0
    Degradation,       // 0 < C[j] < N
    RepairCompletion,  // C[j] = N
};

Epoch classify_epoch(const SystemState& state, int N);

/// W(X): local warehouses (1-based) holding at least one part.
std::vector<int> stocked_warehouses(const SystemState& state);

/// Dispatch (with optional relocation into the dispatching warehouse).
/// Throws std::invalid_argument if j = 0 or C[j] = N.
std::vector<Action> type1_actions(const SystemState& state, int N);

/// Pure relocations between local warehouses, plus do-nothing.
std::vector<Action> type2_actions(const SystemState& state);

/// Closest stocked warehouse for machine state.j, lowest index on ties; central if none.
Action closest_first_action(const SystemState& state, const NetworkInstance& instance);

/// Admissible actions for a policy class, sorted lexicographically. Never empty.
std::vector<Action> admissible_actions(const SystemState& state, PolicyClass cls, const ModelParams& params);

/// State right after the action is carried out (j unchanged).
/// Throws std::logic_error if the action would drive a stock level negative.
SystemState post_action_state(const SystemState& state, const Action& a, int N);

double immediate_cost(const SystemState& state, const Action& a, const ModelParams& params);

}  // namespace cbmspares
