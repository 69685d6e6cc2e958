#include "cbmspares/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

#include "cbmspares/random.hpp"
#include "cbmspares/state_space.hpp"
#include "cbmspares/transitions.hpp"

namespace cbmspares {

namespace {

class Check {
public:
    explicit Check(std::string name) { r_.name = std::move(name); }

    void expect(bool ok, const std::string& what) {
        ++r_.checked;
        if (ok) return;
        ++r_.failures;
        r_.passed = false;
        if (r_.first_failure.empty()) r_.first_failure = what;
    }

    CheckResult result() const { return r_; }

private:
    CheckResult r_;
};

std::string where(std::size_t s, const Action& a) { return "state " + std::to_string(s) + " action " + to_string(a); }

bool subset(const std::vector<Action>& a, const std::vector<Action>& b) {
    return std::all_of(a.begin(), a.end(), [&](const Action& x) { return std::find(b.begin(), b.end(), x) != b.end(); });
}

int level(const SystemState& x) {
    return std::accumulate(x.F.begin(), x.F.end(), 0) + std::accumulate(x.P.begin(), x.P.end(), 0);
}

}  // namespace

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

nlohmann::json ValidationReport::to_json() const {
    nlohmann::json cs = nlohmann::json::array();
    for (const CheckResult& c : checks)
        cs.push_back({{"name", c.name},
                      {"passed", c.passed},
                      {"checked", c.checked},
                      {"failures", c.failures},
                      {"first_failure", c.first_failure}});
    return {{"passed", passed()}, {"states", states}, {"pairs", pairs}, {"checks", cs}};
}

ValidationReport validate_model(const ModelParams& params, const ValidationOptions& options) {
    const auto t0 = std::chrono::steady_clock::now();
    params.validate();
    const StateSpace space(params);
    const double tau = uniformization_constant(params);
    const double tol = options.tolerance;

    Check totals("row_totals_equal_tau");
    Check dummy("dummy_rates_nonnegative");
    Check conservation("stock_conserved");
    Check rows("successor_rows_valid");
    Check nesting("action_sets_nested");
    Check literal("generic_matches_literal");

    std::vector<std::pair<std::size_t, Action>> pairs;
    for (std::size_t s = 0; s < space.size(); ++s) {
        const SystemState x = space.state_of(s);
        const auto cf = admissible_actions(x, PolicyClass::CF, params);
        const auto oc = admissible_actions(x, PolicyClass::OC, params);
        const auto ocr = admissible_actions(x, PolicyClass::OCR, params);
        const auto ocp = admissible_actions(x, PolicyClass::OCP, params);
        const auto ocpr = admissible_actions(x, PolicyClass::OCPR, params);
        nesting.expect(cf.size() == 1 && subset(cf, oc) && subset(oc, ocr) && subset(ocr, ocpr) && subset(oc, ocp) &&
                           subset(ocp, ocpr),
                       "state " + std::to_string(s));

        for (const Action& a : ocpr) {
            pairs.emplace_back(s, a);
            const SystemState post = post_action_state(x, a, params.N());
            conservation.expect(level(post) == params.K, where(s, a) + " post-action level");

            double event_total = 0.0;
            for (const Event& e : event_rates(post, params)) event_total += e.rate;
            const double raw_dummy = tau - event_total;
            dummy.expect(raw_dummy >= -tol * tau, where(s, a) + " dummy rate " + std::to_string(raw_dummy));

            const TransitionRow row = transition_row(space, s, a, params);
            totals.expect(std::abs(event_total + row.dummy_rate - tau) <= tol * tau, where(s, a));

            double sum = 0.0;
            bool ok = true;
            for (const auto& e : row.entries) {
                ok = ok && e.target < space.size() && e.probability > 0.0 && e.probability <= 1.0 + tol;
                if (e.target < space.size()) {
                    conservation.expect(level(space.state_of(e.target)) == params.K, where(s, a) + " successor");
                }
                sum += e.probability;
            }
            rows.expect(ok && std::abs(sum - 1.0) <= 1e-12, where(s, a) + " row sum " + std::to_string(sum));
        }
    }

    // generic rows against the literal formulas
    std::vector<std::size_t> picked(pairs.size());
    std::iota(picked.begin(), picked.end(), std::size_t{0});
    if (pairs.size() > options.literal_samples) {
        std::mt19937_64 gen(stream_seed(options.seed, 0x11));
        for (std::size_t k = 0; k < options.literal_samples; ++k) {
            const auto r = k + static_cast<std::size_t>(uniform01(gen) * static_cast<double>(pairs.size() - k));
            std::swap(picked[k], picked[std::min(r, pairs.size() - 1)]);
        }
        picked.resize(options.literal_samples);
    }
    for (std::size_t idx : picked) {
        const auto& [s, a] = pairs[idx];
        std::map<std::size_t, double> expected;
        bool ok = true;
        try {
            for (const LiteralTransition& t : literal_transitions(space.state_of(s), a, params)) {
                // closed-form dummy rates can round to a few ulps either side of zero
                if (std::abs(t.rate) <= tol * tau) continue;
                const auto target = space.find(t.target);
                ok = ok && target.has_value() && t.rate > 0.0;
                if (target) expected[*target] += t.rate / tau;
            }
        } catch (const std::exception&) {
            ok = false;
        }
        const TransitionRow row = transition_row(space, s, a, params);
        ok = ok && row.entries.size() == expected.size();
        for (const auto& e : row.entries) {
            const auto it = expected.find(e.target);
            ok = ok && it != expected.end() && std::abs(it->second - e.probability) <= 1e-12;
        }
        literal.expect(ok, where(s, a));
    }

    ValidationReport report;
    report.states = space.size();
    report.pairs = pairs.size();
    report.checks = {totals.result(),  dummy.result(),   conservation.result(),
                     rows.result(),    nesting.result(), literal.result()};
    report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

}  // namespace cbmspares
