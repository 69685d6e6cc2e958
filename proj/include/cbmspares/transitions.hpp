#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "cbmspares/model.hpp"
#include "cbmspares/state_space.hpp"

namespace cbmspares {

/// tau = gamma K + J max_n mu_n; dominates the total event rate of every state.
double uniformization_constant(const ModelParams& params);

enum class EventKind { Replenishment, Failure, Degradation, Repair };

struct Event {
    EventKind kind;
    int index;  // warehouse (replenishment) or machine, 1-based
    double rate;
};

/// Events that can fire from a post-action state, with their rates. Zero-rate
/// events are omitted.
std::vector<Event> event_rates(const SystemState& post, const ModelParams& params);

/// The decision-epoch state reached when `event` fires from `post`.
SystemState apply_event(const SystemState& post, const Event& event, int N);

struct TransitionEntry {
    std::size_t target;
    double probability;

    friend bool operator==(const TransitionEntry&, const TransitionEntry&) = default;
};

/// One row p(. | state, action) of the uniformized chain, sorted by target.
struct TransitionRow {
    std::size_t source = 0;
    Action action;
    std::vector<TransitionEntry> entries;
    /// tau minus the total event rate; lands on the post-action state with j = 0.
    double dummy_rate = 0.0;
};

TransitionRow transition_row(const StateSpace& space, std::size_t source, const Action& action,
                             const ModelParams& params);

/**
 * Lazily built, cached transition rows for one parameter set.
 *
 * Safe for concurrent use: rows are computed outside the lock and inserted
 * idempotently.
 */
class TransitionModel {
public:
    explicit TransitionModel(ModelParams params);

    const ModelParams& params() const { return params_; }
    const StateSpace& space() const { return space_; }
    double tau() const { return tau_; }

    const TransitionRow& row(std::size_t source, const Action& action) const;
    std::size_t cached_rows() const;

private:
    ModelParams params_;
    StateSpace space_;
    double tau_;
    mutable std::shared_mutex mutex_;
    mutable std::map<std::pair<std::size_t, Action>, TransitionRow> cache_;
};

/// Debug listing, one line per entry: "src action_x action_y action_z dst probability".
void write_transition_dump(std::ostream& out, const TransitionModel& model, PolicyClass cls);

}  // namespace cbmspares
