#include "cbmspares/transitions.hpp"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <stdexcept>

namespace cbmspares {

double uniformization_constant(const ModelParams& params) {
    return params.gamma * params.K + params.J() * params.degradation.max_rate();
}

std::vector<Event> event_rates(const SystemState& post, const ModelParams& params) {
    const auto& d = params.degradation;
    std::vector<Event> events;
    for (std::size_t k = 0; k < post.P.size(); ++k)
        if (post.P[k] > 0)
            events.push_back({EventKind::Replenishment, static_cast<int>(k) + 1, post.P[k] * params.gamma});

    for (std::size_t l = 0; l < post.C.size(); ++l) {
        const auto c = static_cast<std::size_t>(post.C[l]);
        const int machine = static_cast<int>(l) + 1;
        if (c == 0) {
            events.push_back({EventKind::Repair, machine, d.mu[0]});
            continue;
        }
        if (d.alpha[c] > 0.0) events.push_back({EventKind::Failure, machine, d.alpha[c] * d.mu[c]});
        if (c > 1 && d.alpha[c] < 1.0) events.push_back({EventKind::Degradation, machine, (1.0 - d.alpha[c]) * d.mu[c]});
    }
    return events;
}

SystemState apply_event(const SystemState& post, const Event& event, int N) {
    SystemState next = post;
    const auto k = static_cast<std::size_t>(event.index - 1);
    switch (event.kind) {
        case EventKind::Replenishment:
            ++next.F[k];
            --next.P[k];
            next.j = 0;
            return next;
        case EventKind::Failure:
            next.C[k] = 0;
            break;
        case EventKind::Degradation:
            --next.C[k];
            break;
        case EventKind::Repair:
            next.C[k] = N;
            break;
    }
    next.j = event.index;
    return next;
}

TransitionRow transition_row(const StateSpace& space, std::size_t source, const Action& action,
                             const ModelParams& params) {
    const double tau = uniformization_constant(params);
    const SystemState post = post_action_state(space.state_of(source), action, params.N());

    TransitionRow row{.source = source, .action = action, .entries = {}, .dummy_rate = tau};
    for (const Event& e : event_rates(post, params)) {
        row.entries.push_back({space.index_of(apply_event(post, e, params.N())), e.rate / tau});
        row.dummy_rate -= e.rate;
    }
    // a few ulps either side of zero is cancellation in tau minus the event total
    if (row.dummy_rate < -1e-12 * tau)
        throw std::logic_error("total event rate exceeds tau in state " + std::to_string(source));
    if (row.dummy_rate <= 1e-12 * tau) row.dummy_rate = 0.0;
    if (row.dummy_rate > 0.0) {
        SystemState idle = post;
        idle.j = 0;
        row.entries.push_back({space.index_of(idle), row.dummy_rate / tau});
    }

    std::sort(row.entries.begin(), row.entries.end(),
              [](const TransitionEntry& a, const TransitionEntry& b) { return a.target < b.target; });
    std::vector<TransitionEntry> merged;
    for (const auto& e : row.entries) {
        if (!merged.empty() && merged.back().target == e.target)
            merged.back().probability += e.probability;
        else
            merged.push_back(e);
    }
    row.entries = std::move(merged);
    return row;
}

TransitionModel::TransitionModel(ModelParams params)
    : params_(std::move(params)), space_(params_), tau_(uniformization_constant(params_)) {}

const TransitionRow& TransitionModel::row(std::size_t source, const Action& action) const {
    const auto key = std::make_pair(source, action);
    {
        std::shared_lock lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    TransitionRow fresh = transition_row(space_, source, action, params_);
    std::unique_lock lock(mutex_);
    return cache_.try_emplace(key, std::move(fresh)).first->second;
}

std::size_t TransitionModel::cached_rows() const {
    std::shared_lock lock(mutex_);
    return cache_.size();
}

void write_transition_dump(std::ostream& out, const TransitionModel& model, PolicyClass cls) {
    char prob[32];
    for (std::size_t s = 0; s < model.space().size(); ++s) {
        const SystemState state = model.space().state_of(s);
        for (const Action& a : admissible_actions(state, cls, model.params())) {
            for (const auto& e : model.row(s, a).entries) {
                std::snprintf(prob, sizeof prob, "%.17g", e.probability);
                out << s << ' ' << a.x << ' ' << a.y << ' ' << a.z << ' ' << e.target << ' ' << prob << '\n';
            }
        }
    }
}

}  // namespace cbmspares
