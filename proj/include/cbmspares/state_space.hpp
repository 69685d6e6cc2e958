#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cbmspares/model.hpp"

namespace cbmspares {

inline constexpr std::uint64_t kDefaultMaxStates = 10'000'000;

/// Thrown when an instance is too large to enumerate for exact solution.
class StateSpaceTooLarge : public std::length_error {
public:
    using std::length_error::length_error;
};

/**
 * Dense indexing of every (F, P, C, j) with sum(F + P) = K.
 *
 * Ordering is lexicographic over the tuple (F, P, C, j). States are not stored:
 * the (F, P) compositions of K are tabulated once and the remaining
 * coordinates are decoded in mixed radix, so state_of/index_of are cheap and
 * memory stays proportional to the number of compositions.
 */
class StateSpace {
public:
    explicit StateSpace(const ModelParams& params, std::uint64_t max_states = kDefaultMaxStates);

    /// Closed-form |S| = C(K+2I-1, 2I-1) (N+1)^J (J+1); saturates at UINT64_MAX.
    static std::uint64_t count(int I, int J, int K, int N);

    std::size_t size() const { return size_; }
    int I() const { return I_; }
    int J() const { return J_; }
    int K() const { return K_; }
    int N() const { return N_; }

    SystemState state_of(std::size_t index) const;
    std::size_t index_of(const SystemState& state) const;
    std::optional<std::size_t> find(const SystemState& state) const;

    /// Canonical start state: machines perfect, parts on hand split evenly
    /// (remainder to the lowest indices), nothing in the pipeline, j = 0.
    SystemState canonical_state() const;

private:
    int I_, J_, K_, N_;
    std::size_t conditions_ = 0;  // (N+1)^J
    std::size_t size_ = 0;
    std::vector<std::vector<int>> compositions_;  // concatenated (F, P)
    std::map<std::vector<int>, std::size_t> composition_rank_;
};

}  // namespace cbmspares
